#include "spirec/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace spirec {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
long next_header_int(std::istream& in, const std::string& path) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch))
    throw std::runtime_error("malformed PGM header in " + path);
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    ch = in.get();
  }
  if (ch != EOF && !std::isspace(ch))
    throw std::runtime_error("malformed PGM header in " + path);
  return value;
}

}  // namespace

void export_image(const Matrix& grid, const std::string& path) {
  if (!all_finite(grid)) throw std::invalid_argument("export_image: non-finite values");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_image: cannot open " + path);
  out << "P5\n" << grid.cols() << " " << grid.rows() << "\n65535\n";
  std::vector<unsigned char> bytes;
  bytes.reserve(static_cast<std::size_t>(grid.size()) * 2);
  for (Index r = 0; r < grid.rows(); ++r)
    for (Index c = 0; c < grid.cols(); ++c) {
      const double v = std::clamp(grid(r, c), 0.0, 1.0);
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      bytes.push_back(static_cast<unsigned char>(q >> 8));
      bytes.push_back(static_cast<unsigned char>(q & 0xff));
    }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("export_image: write failed for " + path);
}

Matrix import_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("import_image: cannot open " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5')
    throw std::runtime_error("import_image: not a P5 PGM: " + path);
  const long cols = next_header_int(in, path);
  const long rows = next_header_int(in, path);
  const long maxval = next_header_int(in, path);
  if (cols <= 0 || rows <= 0)
    throw std::runtime_error("import_image: bad dimensions in " + path);
  if (maxval != 255 && maxval != 65535)
    throw std::runtime_error("import_image: unsupported maxval in " + path);

  const std::size_t bytes_per_sample = (maxval == 255) ? 1 : 2;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<unsigned char> buf(count * bytes_per_sample);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw std::runtime_error("import_image: truncated pixel data in " + path);

  Matrix grid(rows, cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  std::size_t i = 0;
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      unsigned v = buf[i++];
      if (bytes_per_sample == 2) v = (v << 8) | buf[i++];
      grid(r, c) = static_cast<double>(v) * scale;
    }
  return grid;
}

}  // namespace spirec
