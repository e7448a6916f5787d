#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ghmdenoise/bench.hpp"
#include "ghmdenoise/errors.hpp"
#include "test_support.hpp"

using namespace ghmdenoise;
using ghmdenoise::testing::TempDir;

namespace {

BenchPlan small_plan() {
  BenchPlan plan;
  plan.images = {"phantom:64"};
  plan.sigmas = {20};
  plan.seeds = {1};
  plan.denoise.m = 8;
  plan.denoise.s_size = 4;
  return plan;
}

// Minimal RFC 4180 reader for one line without embedded newlines.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST(Bench, EngineNames) {
  EXPECT_EQ(to_string(BenchEngine::noisy_only), "noisy-only");
  EXPECT_EQ(parse_bench_engine("ga"), BenchEngine::ga);
  EXPECT_THROW(parse_bench_engine("noisy"), ValidationError);
}

TEST(Bench, NoisyOnlyMidGrayMatchesNoiseLevel) {
  TempDir dir("bench");
  save_pgm(GrayImage(512, 512, 128), dir / "gray.pgm");
  BenchPlan plan;
  plan.images = {(dir / "gray.pgm").string()};
  plan.sigmas = {10};
  plan.engines = {BenchEngine::noisy_only};
  plan.seeds = {1, 2};
  const BenchReport r = run_bench(plan);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.psnr_noisy, 28.13, 0.3);
    EXPECT_FALSE(row.psnr_denoised.has_value());
    EXPECT_EQ(row.distance_evals, 0u);
  }
}

TEST(Bench, RowOrderAndCount) {
  BenchPlan plan = small_plan();
  plan.sigmas = {10, 30};
  plan.seeds = {4, 5};
  plan.engines = {BenchEngine::noisy_only, BenchEngine::exhaustive};
  const BenchReport r = run_bench(plan);
  ASSERT_EQ(r.rows.size(), 8u);
  EXPECT_EQ(r.rows[0].sigma, 10.0);
  EXPECT_EQ(r.rows[0].seed, 4u);
  EXPECT_EQ(r.rows[0].engine, BenchEngine::noisy_only);
  EXPECT_EQ(r.rows[1].engine, BenchEngine::exhaustive);
  EXPECT_EQ(r.rows[2].seed, 5u);
  EXPECT_EQ(r.rows[4].sigma, 30.0);
  // Engines in one cell share the noisy image.
  EXPECT_EQ(r.rows[0].psnr_noisy, r.rows[1].psnr_noisy);
  EXPECT_EQ(r.rows[1].distance_evals, 225u * 225u);
}

TEST(Bench, BothEnginesImproveAndAgree) {
  BenchPlan plan = small_plan();
  plan.images = {"phantom:128"};
  plan.denoise = DenoiseConfig{};
  const BenchReport r = run_bench(plan);
  ASSERT_EQ(r.rows.size(), 3u);
  const double noisy = r.rows[0].psnr_noisy;
  const double ex = *r.rows[1].psnr_denoised;
  const double ga = *r.rows[2].psnr_denoised;
  EXPECT_GT(ex, noisy);
  EXPECT_GT(ga, noisy);
  EXPECT_LE(std::abs(ex - ga), 1.0);
}

TEST(Bench, MonotoneInSigma) {
  BenchPlan plan = small_plan();
  plan.sigmas = {10, 20, 30, 40, 50};
  plan.engines = {BenchEngine::noisy_only, BenchEngine::exhaustive};
  const BenchReport r = run_bench(plan);
  ASSERT_EQ(r.rows.size(), 10u);
  for (std::size_t i = 2; i < r.rows.size(); i += 2) {
    EXPECT_LT(r.rows[i].psnr_noisy, r.rows[i - 2].psnr_noisy);
    EXPECT_LT(*r.rows[i + 1].psnr_denoised, *r.rows[i - 1].psnr_denoised);
  }
}

TEST(Bench, CsvIsReproducible) {
  const BenchPlan plan = small_plan();
  std::ostringstream a, b;
  write_csv(run_bench(plan), a);
  write_csv(run_bench(plan), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find(",0.0\n"), std::string::npos);
}

TEST(Bench, CsvHeaderOnlyWhenEmpty) {
  std::ostringstream out;
  write_csv(BenchReport{}, out);
  EXPECT_EQ(out.str(), "image,sigma,engine,seed,psnr_noisy,psnr_denoised,distance_evals,wall_ms\n");
}

TEST(Bench, CsvQuotingRoundTrips) {
  BenchReport r;
  BenchRow row;
  row.image = "scans/a,\"b\".pgm";
  row.sigma = 12.5;
  row.engine = BenchEngine::ga;
  row.seed = 9;
  row.psnr_noisy = 26.123456;
  row.psnr_denoised = 30.5;
  row.distance_evals = 42;
  row.wall_ms = 1.25;
  r.rows.push_back(row);
  std::ostringstream out;
  write_csv(r, out);
  std::istringstream in(out.str());
  std::string header, line, extra;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_FALSE(std::getline(in, extra));
  const auto cells = split_csv(line);
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0], row.image);
  EXPECT_EQ(cells[1], "12.5");
  EXPECT_EQ(cells[2], "ga");
  EXPECT_EQ(cells[3], "9");
  EXPECT_EQ(cells[4], "26.1235");
  EXPECT_EQ(cells[5], "30.5000");
  EXPECT_EQ(cells[6], "42");
  EXPECT_EQ(cells[7], "1.2");
}

TEST(Bench, EmitCsvWritesFile) {
  TempDir dir("bench");
  BenchReport r;
  emit_csv(r, dir / "out.csv");
  EXPECT_EQ(ghmdenoise::testing::read_file(dir / "out.csv").substr(0, 6), "image,");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.csv.partial"));
  EXPECT_THROW(emit_csv(r, dir / "missing" / "out.csv"), IoError);
}

TEST(Bench, ImageEntries) {
  EXPECT_EQ(load_bench_image("phantom:32").width(), 32u);
  EXPECT_THROW(load_bench_image("phantom:abc"), ValidationError);
  EXPECT_THROW(load_bench_image("phantom:0"), ValidationError);
  EXPECT_THROW(load_bench_image("/nonexistent/x.pgm"), IoError);
}

TEST(Bench, NoiseSeedsDifferPerCell) {
  EXPECT_NE(cell_noise_seed(1, 10, "a"), cell_noise_seed(1, 20, "a"));
  EXPECT_NE(cell_noise_seed(1, 10, "a"), cell_noise_seed(2, 10, "a"));
  EXPECT_NE(cell_noise_seed(1, 10, "a"), cell_noise_seed(1, 10, "b"));
  EXPECT_EQ(cell_noise_seed(1, 10, "a"), cell_noise_seed(1, 10, "a"));
}

TEST(Bench, PlanValidation) {
  BenchPlan plan;
  plan.sigmas.clear();
  EXPECT_THROW(run_bench(plan), ValidationError);
  plan = BenchPlan{};
  plan.sigmas = {-5};
  EXPECT_THROW(run_bench(plan), ValidationError);
}

TEST(Bench, TableHasOneLinePerCell) {
  BenchPlan plan = small_plan();
  plan.seeds = {1, 2};
  std::ostringstream out;
  render_table(run_bench(plan), out);
  EXPECT_NE(out.str().find("noisy-only"), std::string::npos);
  EXPECT_NE(out.str().find("exhaustive"), std::string::npos);
}
