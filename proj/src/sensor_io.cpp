#include "spirec/sensor_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace spirec {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'I', 'S', 'E', 'N', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error(std::string("load_sensor: truncated file while reading ") + what);
  return value;
}

void write_matrix(std::ostream& os, const Matrix& A) {
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) write_pod(os, A(i, j));
}

Matrix read_matrix(std::istream& is, Index rows, Index cols, const char* what) {
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = read_pod<double>(is, what);
  return A;
}

}  // namespace

std::string sensor_kind_name(SensorKind kind) {
  switch (kind) {
    case SensorKind::OrthonormalRandom: return "orthonormal-random";
    case SensorKind::ScrambledHadamard: return "scrambled-hadamard";
    case SensorKind::Explicit: return "explicit";
  }
  throw std::logic_error("sensor_kind_name: unknown kind");
}

SensorKind sensor_kind_from_name(const std::string& name) {
  if (name == "orthonormal-random") return SensorKind::OrthonormalRandom;
  if (name == "scrambled-hadamard") return SensorKind::ScrambledHadamard;
  if (name == "explicit") return SensorKind::Explicit;
  throw std::invalid_argument("unknown sensor kind: " + name);
}

void save_sensor(const SeparableSensor& sensor, const std::string& path, bool include_matrices) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_sensor: cannot open " + path);

  const bool explicit_payload = include_matrices || sensor.kind() == SensorKind::Explicit;
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, kVersion);
  write_pod(os, static_cast<std::uint32_t>(sensor.kind()));
  write_pod(os, sensor.seed());
  write_pod(os, static_cast<std::uint32_t>(sensor.sqrt_m()));
  write_pod(os, static_cast<std::uint32_t>(sensor.sqrt_n()));
  write_pod(os, static_cast<std::uint8_t>(explicit_payload ? 1 : 0));
  if (explicit_payload) {
    write_matrix(os, sensor.U());
    write_matrix(os, sensor.V());
  }
  if (!os) throw std::runtime_error("save_sensor: write failed for " + path);
}

SeparableSensor load_sensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_sensor: cannot open " + path);

  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_sensor: not a sensor container (bad magic)");

  const auto version = read_pod<std::uint32_t>(is, "version");
  if (version != kVersion)
    throw std::runtime_error("load_sensor: unsupported container version " + std::to_string(version));

  const auto kind_raw = read_pod<std::uint32_t>(is, "kind");
  if (kind_raw > 2) throw std::runtime_error("load_sensor: invalid sensor kind field");
  const auto kind = static_cast<SensorKind>(kind_raw);
  const auto seed = read_pod<std::uint64_t>(is, "seed");
  const auto sqrt_m = static_cast<Index>(read_pod<std::uint32_t>(is, "sqrt_m"));
  const auto sqrt_n = static_cast<Index>(read_pod<std::uint32_t>(is, "sqrt_n"));
  const auto has_matrices = read_pod<std::uint8_t>(is, "payload flag");

  if (has_matrices) {
    Matrix U = read_matrix(is, sqrt_m, sqrt_n, "U payload");
    Matrix V = read_matrix(is, sqrt_m, sqrt_n, "V payload");
    return SeparableSensor(std::move(U), std::move(V), kind, seed);
  }
  if (kind == SensorKind::Explicit)
    throw std::runtime_error("load_sensor: explicit sensor container is missing its matrices");
  return build_separable_sensor(sqrt_m, sqrt_n, kind, seed);
}

}  // namespace spirec
