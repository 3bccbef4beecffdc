#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace phasemax {

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  [[nodiscard]] std::size_t size() const { return pixels.size(); }
};

/// Reads a binary PGM (P5) with maxval <= 255. Throws std::runtime_error on bad input.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Raw little-endian 64-bit floats, row-major, no header.
void write_raw_f64(const std::filesystem::path& path, const Eigen::VectorXd& values);
Eigen::VectorXd read_raw_f64(const std::filesystem::path& path);

/// Smooth diagonal ramp from 16 to 240, never all zero.
GrayImage synthetic_gradient(int width, int height);

/// Rounds and clamps to [0, 255].
GrayImage to_gray_image(const Eigen::VectorXd& values, int width, int height);

}  // namespace phasemax
