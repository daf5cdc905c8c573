#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "spirec/image_io.hpp"
#include "test_util.hpp"

using namespace spirec;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("round trip stays within one quantization step") {
  Rng rng(601);
  Matrix grid(20, 24);
  for (Index r = 0; r < 20; ++r)
    for (Index c = 0; c < 24; ++c) grid(r, c) = rng.uniform();
  const std::string path = temp_path("io_round_trip.pgm");
  export_image(grid, path);
  const Matrix back = import_image(path);
  REQUIRE(back.rows() == 20);
  REQUIRE(back.cols() == 24);
  CHECK((back - grid).cwiseAbs().maxCoeff() <= 1.0 / 65535.0);
  std::remove(path.c_str());
}

TEST_CASE("constant gray maps to the middle code") {
  const std::string path = temp_path("io_gray.pgm");
  export_image(Matrix::Constant(16, 16, 0.5), path);
  std::ifstream in(path, std::ios::binary);
  std::string header;
  in >> header;
  REQUIRE(header == "P5");
  int cols, rows, maxval;
  in >> cols >> rows >> maxval;
  CHECK(cols == 16);
  CHECK(rows == 16);
  CHECK(maxval == 65535);
  in.get();  // single whitespace after maxval
  const int hi = in.get(), lo = in.get();
  const int sample = hi * 256 + lo;
  CHECK(std::abs(sample - 32768) <= 1);
  std::remove(path.c_str());
}

TEST_CASE("out-of-range values clamp to the code range") {
  const std::string path = temp_path("io_clamp.pgm");
  Matrix grid = Matrix::Constant(16, 16, 1.7);
  grid(0, 1) = -2.0;
  export_image(grid, path);
  const Matrix back = import_image(path);
  CHECK(back(0, 0) == 1.0);
  CHECK(back(0, 1) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("eight-bit files scale to the unit range") {
  const std::string path = temp_path("io_8bit.pgm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment line\n2 2\n255\n";
    const unsigned char px[4] = {0, 255, 128, 64};
    out.write(reinterpret_cast<const char*>(px), 4);
  }
  const Matrix back = import_image(path);
  CHECK(back(0, 0) == 0.0);
  CHECK(back(0, 1) == 1.0);
  CHECK(back(1, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  CHECK(back(1, 1) == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("malformed input is rejected") {
  const std::string truncated = temp_path("io_trunc.pgm");
  {
    std::ofstream out(truncated, std::ios::binary);
    out << "P5\n4 4\n255\n";
    out.put('\x7f');  // 1 of 16 samples
  }
  CHECK_THROWS_WITH_AS(import_image(truncated), doctest::Contains("truncated"),
                       std::runtime_error);
  std::remove(truncated.c_str());

  const std::string wrong_magic = temp_path("io_magic.pgm");
  {
    std::ofstream out(wrong_magic, std::ios::binary);
    out << "P6\n2 2\n255\n";
    out << "xxxxxxxxxxxx";
  }
  CHECK_THROWS_AS(import_image(wrong_magic), std::runtime_error);
  std::remove(wrong_magic.c_str());

  const std::string bad_maxval = temp_path("io_maxval.pgm");
  {
    std::ofstream out(bad_maxval, std::ios::binary);
    out << "P5\n2 2\n1023\n";
    out << "xxxxxxxx";
  }
  CHECK_THROWS_WITH_AS(import_image(bad_maxval), doctest::Contains("maxval"), std::runtime_error);
  std::remove(bad_maxval.c_str());

  CHECK_THROWS_AS(import_image(temp_path("io_missing_file.pgm")), std::runtime_error);
}

TEST_CASE("non-finite grids are rejected on export") {
  Matrix grid = Matrix::Zero(4, 4);
  grid(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(export_image(grid, temp_path("io_nan.pgm")), std::invalid_argument);
}
