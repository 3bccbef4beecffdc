#include "phasemax/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace phasemax {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty())
        return token;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

int parse_positive(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value <= 0)
      throw std::invalid_argument(what);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("PGM: bad ") + what + " '" + token + "'");
  }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open image " + path.string());
  if (next_token(in) != "P5")
    throw std::runtime_error("PGM: " + path.string() + " is not a binary (P5) graymap");
  GrayImage img;
  img.width = parse_positive(next_token(in), "width");
  img.height = parse_positive(next_token(in), "height");
  const int maxval = parse_positive(next_token(in), "maxval");
  if (maxval > 255)
    throw std::runtime_error("PGM: only 8-bit images are supported");
  // next_token consumed exactly one whitespace byte after maxval.
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw std::runtime_error("PGM: truncated pixel data in " + path.string());
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height))
    throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write image " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

void write_raw_f64(const std::filesystem::path& path, const Eigen::VectorXd& values) {
  static_assert(std::endian::native == std::endian::little, "raw sidecar assumes little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out)
    throw std::runtime_error("failed writing " + path.string());
}

Eigen::VectorXd read_raw_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % sizeof(double) != 0)
    throw std::runtime_error("raw sidecar size is not a multiple of 8 bytes");
  Eigen::VectorXd values(static_cast<Eigen::Index>(bytes / sizeof(double)));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes));
  return values;
}

GrayImage synthetic_gradient(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("synthetic_gradient: dimensions must be positive");
  GrayImage img{width, height, {}};
  img.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  const double span = std::max(1, width + height - 2);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double ramp = (r + c) / span;
      img.pixels[static_cast<std::size_t>(r) * width + c] =
          static_cast<std::uint8_t>(std::lround(16.0 + 224.0 * ramp));
    }
  }
  return img;
}

GrayImage to_gray_image(const Eigen::VectorXd& values, int width, int height) {
  if (values.size() != static_cast<Eigen::Index>(width) * height)
    throw std::invalid_argument("to_gray_image: value count does not match dimensions");
  GrayImage img{width, height, {}};
  img.pixels.resize(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = std::clamp(std::round(values[i]), 0.0, 255.0);
    img.pixels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  return img;
}

}  // namespace phasemax
