#include "ghmdenoise/bench.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/rng.hpp"

namespace ghmdenoise {

std::string_view to_string(BenchEngine e) {
  switch (e) {
    case BenchEngine::noisy_only: return "noisy-only";
    case BenchEngine::exhaustive: return "exhaustive";
    case BenchEngine::ga: return "ga";
  }
  return "?";
}

BenchEngine parse_bench_engine(std::string_view name) {
  if (name == "noisy-only") return BenchEngine::noisy_only;
  if (name == "exhaustive") return BenchEngine::exhaustive;
  if (name == "ga") return BenchEngine::ga;
  throw ValidationError("unknown bench engine '" + std::string(name) + "'");
}

void BenchPlan::validate() const {
  if (images.empty()) throw ValidationError("bench plan has no images");
  if (sigmas.empty()) throw ValidationError("bench plan has no sigma levels");
  for (double s : sigmas)
    if (!(s >= 0.0)) throw ValidationError("sigma levels must be >= 0");
  if (engines.empty()) throw ValidationError("bench plan has no engines");
  if (seeds.empty()) throw ValidationError("bench plan has no seeds");
  denoise.validate();
}

GrayImage load_bench_image(const std::string& entry) {
  constexpr std::string_view kPhantom = "phantom:";
  if (entry.starts_with(kPhantom)) {
    const std::string size = entry.substr(kPhantom.size());
    std::size_t used = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(size, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != size.size() || n == 0) throw ValidationError("bad phantom size in '" + entry + "'");
    return make_phantom(n);
  }
  return load_pgm(entry);
}

std::uint64_t cell_noise_seed(std::uint64_t seed, double sigma, const std::string& image) {
  std::uint64_t name_hash = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : image) {
    name_hash ^= c;
    name_hash *= 0x100000001B3ULL;
  }
  return mix_seed(mix_seed(seed, std::bit_cast<std::uint64_t>(sigma)), name_hash);
}

BenchReport run_bench(const BenchPlan& plan) {
  plan.validate();
  BenchReport report;
  for (const auto& entry : plan.images) {
    const GrayImage clean = load_bench_image(entry);
    build_grid(clean, plan.denoise.m, plan.denoise.s_size);
    for (double sigma : plan.sigmas) {
      for (std::uint64_t seed : plan.seeds) {
        const GrayImage noisy = add_awgn(clean, {sigma, cell_noise_seed(seed, sigma, entry)});
        const double psnr_noisy = psnr(clean, noisy);
        for (BenchEngine engine : plan.engines) {
          BenchRow row;
          row.image = entry;
          row.sigma = sigma;
          row.engine = engine;
          row.seed = seed;
          row.psnr_noisy = psnr_noisy;
          if (engine != BenchEngine::noisy_only) {
            DenoiseConfig cfg = plan.denoise;
            cfg.engine = engine == BenchEngine::ga ? Engine::ga : Engine::exhaustive;
            cfg.sigma = sigma;
            cfg.seed = seed;
            const DenoiseResult out = denoise_image(noisy, cfg);
            row.psnr_denoised = psnr(clean, out.image);
            row.distance_evals = out.stats.distance_evals;
            if (plan.record_timing) row.wall_ms = out.stats.wall_ms;
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(const char* spec, double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_csv(const BenchReport& report, std::ostream& out) {
  out << "image,sigma,engine,seed,psnr_noisy,psnr_denoised,distance_evals,wall_ms\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.image) << ',' << fmt("%g", r.sigma) << ',' << to_string(r.engine) << ','
        << r.seed << ',' << fmt("%.4f", r.psnr_noisy) << ','
        << (r.psnr_denoised ? fmt("%.4f", *r.psnr_denoised) : std::string()) << ','
        << r.distance_evals << ',' << fmt("%.1f", r.wall_ms) << '\n';
  }
}

void emit_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    write_csv(report, out);
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void render_table(const BenchReport& report, std::ostream& out) {
  struct Cell {
    double noisy = 0.0;
    double denoised = 0.0;
    double evals = 0.0;
    std::size_t count = 0;
    bool has_denoised = false;
  };
  // Keyed by first appearance so the table follows plan order.
  std::vector<std::tuple<std::string, double, BenchEngine>> keys;
  std::map<std::tuple<std::string, double, int>, Cell> cells;
  for (const auto& r : report.rows) {
    const auto key = std::make_tuple(r.image, r.sigma, static_cast<int>(r.engine));
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) keys.emplace_back(r.image, r.sigma, r.engine);
    Cell& c = it->second;
    c.noisy += r.psnr_noisy;
    if (r.psnr_denoised) {
      c.denoised += *r.psnr_denoised;
      c.has_denoised = true;
    }
    c.evals += static_cast<double>(r.distance_evals);
    ++c.count;
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %7s %-11s %6s %11s %14s %15s\n", "image", "sigma", "engine",
                "seeds", "psnr_noisy", "psnr_denoised", "mean_evals");
  out << line;
  for (const auto& [image, sigma, engine] : keys) {
    const Cell& c = cells.at(std::make_tuple(image, sigma, static_cast<int>(engine)));
    const double n = static_cast<double>(c.count);
    const std::string denoised = c.has_denoised ? fmt("%.2f", c.denoised / n) : "-";
    std::snprintf(line, sizeof line, "%-16s %7g %-11s %6zu %11.2f %14s %15.0f\n", image.c_str(), sigma,
                  std::string(to_string(engine)).c_str(), c.count, c.noisy / n, denoised.c_str(),
                  c.evals / n);
    out << line;
  }
}

}  // namespace ghmdenoise
