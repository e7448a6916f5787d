#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/image.hpp"
#include "test_support.hpp"

using namespace ghmdenoise;
using ghmdenoise::testing::TempDir;

namespace {

GrayImage decode(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_pgm(in);
}

}  // namespace

TEST(Pgm, DecodesBinary) {
  const std::string bytes = std::string("P5 2 2 255\n") + std::string("\x00\xff\x11\x2a", 4);
  const GrayImage img = decode(bytes);
  ASSERT_EQ(img.width(), 2u);
  ASSERT_EQ(img.height(), 2u);
  EXPECT_EQ(img.at(0, 0), 0);
  EXPECT_EQ(img.at(1, 0), 255);
  EXPECT_EQ(img.at(0, 1), 17);
  EXPECT_EQ(img.at(1, 1), 42);
}

TEST(Pgm, AsciiMatchesBinary) {
  const GrayImage ascii = decode("P2\n# a comment\n2 2\n# another\n255\n0 255\n17 42\n");
  const GrayImage binary = decode(std::string("P5 2 2 255\n") + std::string("\x00\xff\x11\x2a", 4));
  EXPECT_EQ(ascii, binary);
}

TEST(Pgm, RejectsUnsupportedMagic) {
  try {
    decode("P6 2 2 255\n............");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported magic"), std::string::npos);
  }
}

TEST(Pgm, RejectsOtherMaxval) {
  try {
    decode("P2 1 1 65535\n0\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("maxval"), std::string::npos);
  }
}

TEST(Pgm, RejectsTruncatedPayload) {
  for (const std::string bytes : {std::string("P5 2 2 255\n\x01\x02", 13), std::string("P2 2 2 255\n1 2 3")}) {
    try {
      decode(bytes);
      FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
    }
  }
}

TEST(Pgm, MissingFileIsIoError) {
  TempDir dir("pgm");
  EXPECT_THROW(load_pgm(dir / "absent.pgm"), IoError);
  try {
    load_pgm(dir / "absent.pgm");
  } catch (const FormatError&) {
    FAIL() << "missing file must not be reported as a format problem";
  } catch (const IoError&) {
  }
}

TEST(Pgm, AsciiOutputStartsWithP2) {
  TempDir dir("pgm");
  save_pgm(GrayImage(2, 2, 7), dir / "a.pgm", false);
  EXPECT_EQ(ghmdenoise::testing::read_file(dir / "a.pgm").substr(0, 2), "P2");
}

TEST(Pgm, SinglePixelPayload) {
  std::ostringstream out;
  write_pgm(GrayImage(1, 1, 0), out, true);
  const std::string bytes = out.str();
  EXPECT_EQ(bytes, std::string("P5\n1 1\n255\n") + std::string(1, '\0'));
}

TEST(Pgm, RoundTripIsExactForRandomImages) {
  TempDir dir("pgm");
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (int trial = 0; trial < 40; ++trial) {
    const GrayImage img = ghmdenoise::testing::random_image(dim(gen), dim(gen), gen);
    for (bool binary : {true, false}) {
      const auto path = dir / ("img" + std::to_string(trial) + (binary ? ".pgm" : ".ascii.pgm"));
      save_pgm(img, path, binary);
      EXPECT_EQ(load_pgm(path), img);
    }
  }
  // No temporary siblings are left behind.
  for (const auto& entry : std::filesystem::directory_iterator(dir.path()))
    EXPECT_EQ(entry.path().extension(), ".pgm");
}

TEST(Pgm, SaveToMissingDirectoryFails) {
  TempDir dir("pgm");
  EXPECT_THROW(save_pgm(GrayImage(2, 2), dir / "no" / "such" / "x.pgm"), IoError);
}

TEST(Awgn, ZeroSigmaIsIdentity) {
  const GrayImage img = make_phantom(32);
  EXPECT_EQ(add_awgn(img, {0.0, 99}), img);
}

TEST(Awgn, Sigma10OnMidGrayMatchesTableNoisyColumn) {
  const GrayImage gray(512, 512, 128);
  EXPECT_NEAR(psnr(gray, add_awgn(gray, {10.0, 1})), 28.13, 0.3);
}

TEST(Awgn, Sigma20SampleStdWithinChiSquareBound) {
  const GrayImage gray(512, 512, 128);
  const GrayImage noisy = add_awgn(gray, {20.0, 2});
  double sum = 0.0, sum2 = 0.0;
  const auto a = gray.pixels();
  const auto b = noisy.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(b[i]) - static_cast<double>(a[i]);
    sum += d;
    sum2 += d * d;
  }
  const double n = static_cast<double>(a.size());
  const double sd = std::sqrt((sum2 - sum * sum / n) / (n - 1.0));
  EXPECT_GE(sd, 19.4);
  EXPECT_LE(sd, 20.6);
}

TEST(Awgn, DeterministicInSeed) {
  const GrayImage img = make_phantom(64);
  EXPECT_EQ(add_awgn(img, {15.0, 5}), add_awgn(img, {15.0, 5}));
  EXPECT_NE(add_awgn(img, {15.0, 5}), add_awgn(img, {15.0, 6}));
}

TEST(Awgn, HugeSigmaStillClamps) {
  const GrayImage img(64, 64, 128);
  const GrayImage noisy = add_awgn(img, {1e6, 3});
  std::size_t zeros = 0, full = 0;
  for (auto p : noisy.pixels()) {
    zeros += p == 0;
    full += p == 255;
  }
  EXPECT_EQ(zeros + full, noisy.size());
}

TEST(Awgn, NegativeSigmaRejected) {
  EXPECT_THROW(add_awgn(GrayImage(2, 2), {-1.0, 0}), ValidationError);
}

TEST(Psnr, IdenticalImagesAreInfinite) {
  const GrayImage img = make_phantom(16);
  EXPECT_EQ(psnr(img, img), kInfinitePsnr);
}

TEST(Psnr, UnitErrorEverywhere) {
  GrayImage a(8, 8, 100);
  GrayImage b(8, 8, 101);
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(65025.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 48.1308, 1e-4);
}

TEST(Psnr, SymmetricExactly) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 20; ++i) {
    const GrayImage a = ghmdenoise::testing::random_image(17, 9, gen);
    const GrayImage b = ghmdenoise::testing::random_image(17, 9, gen);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
  }
}

TEST(Psnr, DimensionMismatchThrows) {
  EXPECT_THROW(psnr(GrayImage(2, 3), GrayImage(3, 2)), ValidationError);
}

TEST(Psnr, Sigma20OnNaturalPhantom) {
  const GrayImage clean = make_phantom(512);
  EXPECT_NEAR(psnr(clean, add_awgn(clean, {20.0, 8})), 22.1, 0.4);
}
