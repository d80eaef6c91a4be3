#include "lowrank/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>

#include "lowrank/errors.hpp"

namespace lowrank {
namespace {

class HeaderReader {
 public:
  HeaderReader(const std::vector<std::uint8_t>& bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

  std::size_t offset() const { return pos_; }

  long read_int(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) throw ParseError(std::string("pgm ") + field + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("pgm header: expected ") + field, start);
    return value;
  }

  // A single whitespace byte separates maxval from the raster.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("pgm header: expected whitespace before raster", pos_);
    }
    ++pos_;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
};

}  // namespace

Matrix decode_pgm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw ParseError("not a binary pgm (magic P5)", 0);
  HeaderReader header(bytes, 2);
  const long width = header.read_int("width");
  const long height = header.read_int("height");
  const std::size_t maxval_at = header.offset();
  const long maxval = header.read_int("maxval");
  if (width < 1 || height < 1) throw ParseError("pgm dimensions must be positive", maxval_at);
  if (maxval != 255) throw UnsupportedFormat("pgm maxval " + std::to_string(maxval) + " (only 255 is supported)");
  header.end_header();

  const std::size_t start = header.offset();
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - start < count) {
    throw ParseError("pgm raster truncated: " + std::to_string(bytes.size() - start) + " of " +
                         std::to_string(count) + " bytes",
                     bytes.size());
  }
  Matrix image(height, width);
  for (long i = 0; i < height; ++i) {
    for (long j = 0; j < width; ++j) {
      image(i, j) = bytes[start + static_cast<std::size_t>(i * width + j)];
    }
  }
  return image;
}

Matrix load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(bytes);
}

std::vector<std::uint8_t> encode_pgm(const Matrix& image) {
  if (image.size() == 0) throw InvalidInput("cannot encode an empty image");
  const std::string header =
      "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + static_cast<std::size_t>(image.size()));
  for (Index i = 0; i < image.rows(); ++i) {
    for (Index j = 0; j < image.cols(); ++j) {
      const double v = image(i, j);
      const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 255.0);
      bytes.push_back(static_cast<std::uint8_t>(std::lround(clamped)));
    }
  }
  return bytes;
}

void save_pgm(const Matrix& image, const std::string& path) {
  const auto bytes = encode_pgm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Matrix synthetic_image(std::uint64_t seed, Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw InvalidInput("image dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  // Texture: separable waves with amplitudes falling off as 1/f, like natural image spectra.
  struct Wave {
    double fi, fj, phase_i, phase_j, amplitude;
  };
  std::vector<Wave> waves(96);
  for (auto& w : waves) {
    w.fi = 1.0 + 23.0 * unit(rng);
    w.fj = 1.0 + 23.0 * unit(rng);
    w.phase_i = two_pi * unit(rng);
    w.phase_j = two_pi * unit(rng);
    w.amplitude = 120.0 * (0.5 + unit(rng)) / (w.fi + w.fj);
  }

  Matrix image(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const double y = static_cast<double>(i) / rows;
    for (Index j = 0; j < cols; ++j) {
      const double x = static_cast<double>(j) / cols;
      double v = 90.0 + 50.0 * x + 30.0 * y + 25.0 * std::sin(two_pi * 1.3 * x) * std::cos(two_pi * 0.8 * y);
      for (const auto& w : waves) {
        v += w.amplitude * std::sin(two_pi * w.fi * y + w.phase_i) * std::cos(two_pi * w.fj * x + w.phase_j);
      }
      image(i, j) = std::round(std::clamp(v, 0.0, 255.0));
    }
  }
  return image;
}

}  // namespace lowrank
