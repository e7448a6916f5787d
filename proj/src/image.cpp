#include "ghmdenoise/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "ghmdenoise/errors.hpp"
#include "ghmdenoise/rng.hpp"

namespace ghmdenoise {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw ValidationError("pixel buffer size " + std::to_string(pixels_.size()) +
                          " does not match " + std::to_string(width_) + "x" +
                          std::to_string(height_));
  }
}

namespace {

// Skips whitespace and '#' comments up to the next header token.
void skip_header_space(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == std::char_traits<char>::eof()) return;
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_value(std::istream& in, const char* what) {
  skip_header_space(in);
  long long value = -1;
  if (!(in >> value) || value < 0) {
    throw FormatError(std::string("truncated or malformed PGM header: missing ") + what);
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2)) throw FormatError("truncated PGM: missing magic number");
  if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    throw FormatError(std::string("unsupported magic '") + magic[0] + magic[1] +
                      "' (expected P2 or P5)");
  }
  const bool binary = magic[1] == '5';

  const std::size_t width = read_header_value(in, "width");
  const std::size_t height = read_header_value(in, "height");
  const std::size_t maxval = read_header_value(in, "maxval");
  if (maxval != 255) {
    throw FormatError("unsupported maxval " + std::to_string(maxval) + " (expected 255)");
  }
  if (width == 0 || height == 0) throw FormatError("PGM has zero width or height");

  std::vector<std::uint8_t> pixels(width * height);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    in.get();
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != pixels.size()) {
      throw FormatError("truncated payload: expected " + std::to_string(pixels.size()) +
                        " bytes, got " + std::to_string(in.gcount()));
    }
  } else {
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      skip_header_space(in);
      long long v = -1;
      if (!(in >> v)) {
        throw FormatError("truncated payload: expected " + std::to_string(pixels.size()) +
                          " samples, got " + std::to_string(i));
      }
      if (v < 0 || v > 255) throw FormatError("sample " + std::to_string(v) + " out of range");
      pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(width, height, std::move(pixels));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_pgm(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_pgm(const GrayImage& img, std::ostream& out, bool binary) {
  out << (binary ? "P5" : "P2") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.size()));
    return;
  }
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      if (x > 0) out << ' ';
      out << static_cast<int>(img.at(x, y));
    }
    out << '\n';
  }
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path, bool binary) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    write_pgm(img, out, binary);
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

GrayImage add_awgn(const GrayImage& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  if (spec.sigma == 0.0) return img;
  Rng rng(spec.seed);
  GrayImage out = img;
  for (auto& p : out.pixels()) {
    const double noisy = std::round(static_cast<double>(p) + spec.sigma * rng.gaussian());
    p = static_cast<std::uint8_t>(std::clamp(noisy, 0.0, 255.0));
  }
  return out;
}

double mse(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ValidationError("image dimensions differ: " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
  }
  if (a.empty()) throw ValidationError("cannot compare empty images");
  std::uint64_t sum = 0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = static_cast<int>(pa[i]) - static_cast<int>(pb[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(pa.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
  const double err = mse(a, b);
  if (err == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

}  // namespace ghmdenoise
