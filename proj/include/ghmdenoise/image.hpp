#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace ghmdenoise {

/// 8-bit grayscale image, row-major. Pixel (x, y) is column x of row y.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Decodes a P2 or P5 PGM with maxval 255. Header comments (#) are skipped.
/// Throws IoError if the file cannot be opened, FormatError on bad content.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage read_pgm(std::istream& in);

/// Writes P5 (binary) or P2 (ASCII). The file is written to a temporary
/// sibling and renamed into place, so a failed write leaves no partial file.
void save_pgm(const GrayImage& img, const std::filesystem::path& path, bool binary = true);
void write_pgm(const GrayImage& img, std::ostream& out, bool binary = true);

/// Adds N(0, sigma^2) to every pixel, rounds half away from zero and clamps to
/// [0, 255]. One gaussian() draw per pixel in row-major order from Rng(seed).
GrayImage add_awgn(const GrayImage& img, const NoiseSpec& spec);

double mse(const GrayImage& a, const GrayImage& b);

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE); kInfinitePsnr for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

/// CT-like test phantom: nested ellipses with soft (supersampled) edges.
/// Intensities stay inside [50, 200] so moderate noise rarely clips.
GrayImage make_phantom(std::size_t size);

}  // namespace ghmdenoise
