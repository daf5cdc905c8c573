#pragma once

#include <string>

#include "spirec/core.hpp"

namespace spirec {

// Clamps to [0,1], quantizes to 16 bits, writes binary PGM (P5, maxval 65535,
// big-endian samples).
void export_image(const Matrix& grid, const std::string& path);

// Reads a binary PGM (P5, maxval 255 or 65535); values scaled to [0,1].
Matrix import_image(const std::string& path);

}  // namespace spirec
