#include "spirec/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spirec/rng.hpp"

namespace spirec {

std::string phantom_kind_name(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::SmoothBumps: return "smooth-bumps";
    case PhantomKind::PiecewiseConstant: return "piecewise-constant";
    case PhantomKind::Checker: return "checker";
  }
  throw std::invalid_argument("phantom_kind_name: unknown kind");
}

PhantomKind phantom_kind_from_name(const std::string& name) {
  if (name == "smooth-bumps") return PhantomKind::SmoothBumps;
  if (name == "piecewise-constant") return PhantomKind::PiecewiseConstant;
  if (name == "checker") return PhantomKind::Checker;
  throw std::invalid_argument("unknown phantom kind: " + name);
}

namespace {

Matrix checker(Index size) {
  const Index block = std::max<Index>(1, size / 8);
  Matrix grid(size, size);
  for (Index r = 0; r < size; ++r)
    for (Index c = 0; c < size; ++c)
      grid(r, c) = (((r / block) + (c / block)) % 2 == 0) ? 0.2 : 0.8;
  return grid;
}

Matrix smooth_bumps(Index size, std::uint64_t seed) {
  Rng rng(seed);
  const int bumps = 4 + static_cast<int>(rng.uniform_index(4));  // 4..7
  Matrix grid = Matrix::Zero(size, size);
  const double s = static_cast<double>(size);
  for (int b = 0; b < bumps; ++b) {
    const double cr = rng.uniform() * s;
    const double cc = rng.uniform() * s;
    const double width = s * (0.08 + 0.17 * rng.uniform());
    const double amp = 0.4 + 0.6 * rng.uniform();
    for (Index r = 0; r < size; ++r)
      for (Index c = 0; c < size; ++c) {
        const double dr = (r - cr) / width, dc = (c - cc) / width;
        grid(r, c) += amp * std::exp(-0.5 * (dr * dr + dc * dc));
      }
  }
  const double lo = grid.minCoeff(), hi = grid.maxCoeff();
  if (hi > lo)
    grid = ((grid.array() - lo) / (hi - lo)).matrix();
  else
    grid.setConstant(0.5);
  return grid;
}

Matrix piecewise_constant(Index size, std::uint64_t seed) {
  Rng rng(seed);
  const double base = 0.1 + 0.2 * rng.uniform();
  Matrix grid = Matrix::Constant(size, size, base);
  const int rects = 3 + static_cast<int>(rng.uniform_index(5));  // 3..7
  for (int k = 0; k < rects; ++k) {
    const Index h = 2 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(size / 2)));
    const Index w = 2 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(size / 2)));
    const Index r0 = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(size - h)));
    const Index c0 = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(size - w)));
    const double value = 0.05 + 0.9 * rng.uniform();
    grid.block(r0, c0, h, w).setConstant(value);
  }
  return grid;
}

}  // namespace

Matrix generate_phantom(PhantomKind kind, Index size, std::uint64_t seed) {
  if (size < 16) throw std::invalid_argument("generate_phantom: size must be >= 16");
  switch (kind) {
    case PhantomKind::Checker: return checker(size);
    case PhantomKind::SmoothBumps: return smooth_bumps(size, seed);
    case PhantomKind::PiecewiseConstant: return piecewise_constant(size, seed);
  }
  throw std::invalid_argument("generate_phantom: unknown kind");
}

}  // namespace spirec
