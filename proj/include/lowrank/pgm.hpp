#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

/// Binary (P5) 8-bit PGM with maxval 255. Entries of the result lie in [0, 255].
/// Throws ParseError (with the byte offset) on a malformed file and UnsupportedFormat for maxval != 255.
Matrix load_pgm(const std::string& path);
Matrix decode_pgm(const std::vector<std::uint8_t>& bytes);

/// Clamps to [0, 255] and rounds to the nearest integer.
void save_pgm(const Matrix& image, const std::string& path);
std::vector<std::uint8_t> encode_pgm(const Matrix& image);

/// Deterministic 256 x 256 test image: smooth gradients plus seeded 1/f wave texture, integer-valued in [0, 255].
Matrix synthetic_image(std::uint64_t seed, Index rows = 256, Index cols = 256);

}  // namespace lowrank
