#pragma once

#include "spirec/sensing.hpp"

#include <string>

namespace spirec {

/// Binary sensor container, versioned by a magic header:
///   bytes 0-7   magic "SPISENSR"
///   u32         format version (currently 1)
///   u32         kind (0 orthonormal-random, 1 scrambled-hadamard, 2 explicit)
///   u64         seed
///   u32, u32    sqrt_m, sqrt_n
///   u8          1 when explicit U, V payloads follow
///   payload     U then V, row-major IEEE-754 doubles
/// Integers and doubles are little-endian. Explicit-kind sensors always
/// carry payloads; generated kinds may omit them and are rebuilt from
/// (kind, seed, dims) on load.
void save_sensor(const SeparableSensor& sensor, const std::string& path,
                 bool include_matrices = false);

SeparableSensor load_sensor(const std::string& path);

std::string sensor_kind_name(SensorKind kind);
SensorKind sensor_kind_from_name(const std::string& name);

}  // namespace spirec
