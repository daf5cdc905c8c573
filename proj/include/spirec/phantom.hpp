#pragma once

#include <string>

#include "spirec/core.hpp"

namespace spirec {

enum class PhantomKind { SmoothBumps, PiecewiseConstant, Checker };

std::string phantom_kind_name(PhantomKind kind);
PhantomKind phantom_kind_from_name(const std::string& name);

// Deterministic synthetic test image in [0,1]; size >= 16.
Matrix generate_phantom(PhantomKind kind, Index size, std::uint64_t seed);

}  // namespace spirec
