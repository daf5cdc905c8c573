#include "spirec/config.hpp"

#include "spirec/sensor_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spirec {

std::string method_name(Method method) {
  switch (method) {
    case Method::Pinv: return "pinv";
    case Method::DdimGap: return "ddim-gap";
    case Method::DdimHqs: return "ddim-hqs";
    case Method::DdimFused: return "ddim-fused";
    case Method::PnpHqs: return "pnp-hqs";
    case Method::PnpGap: return "pnp-gap";
  }
  throw std::invalid_argument("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "pinv") return Method::Pinv;
  if (name == "ddim-gap") return Method::DdimGap;
  if (name == "ddim-hqs") return Method::DdimHqs;
  if (name == "ddim-fused") return Method::DdimFused;
  if (name == "pnp-hqs") return Method::PnpHqs;
  if (name == "pnp-gap") return Method::PnpGap;
  throw std::invalid_argument("unknown method: " + name);
}

std::string prior_kind_name(PriorKind kind) {
  switch (kind) {
    case PriorKind::Smoothing: return "smoothing";
    case PriorKind::Gaussian: return "gaussian";
  }
  throw std::invalid_argument("prior_kind_name: unknown kind");
}

PriorKind prior_kind_from_name(const std::string& name) {
  if (name == "smoothing") return PriorKind::Smoothing;
  if (name == "gaussian") return PriorKind::Gaussian;
  throw std::invalid_argument("unknown prior: " + name);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a number: " + value);
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not an integer: " + value);
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (image_file.empty()) {
    if (phantom_size < 16) throw std::invalid_argument("phantom_size must be >= 16");
    if (phantom_count < 1) throw std::invalid_argument("phantom_count must be >= 1");
  }
  if (cr_list.empty()) throw std::invalid_argument("cr_list must be non-empty");
  for (double cr : cr_list)
    if (!(cr > 0.0 && cr <= 1.0))
      throw std::invalid_argument("every cr must lie in (0, 1]");
  if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
  if (seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
  for (Method m : methods)
    if ((m == Method::PnpHqs || m == Method::PnpGap) && prior != PriorKind::Smoothing)
      throw std::invalid_argument("pnp methods require the smoothing prior");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (zeta < 0.0 || zeta > 1.0) throw std::invalid_argument("zeta must lie in [0, 1]");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (delta_constant < 0.0 || delta_constant > 1.0)
    throw std::invalid_argument("delta_constant must lie in [0, 1]");
  if (!(smoothing_sigma_cap > 0.0))
    throw std::invalid_argument("smoothing_sigma_cap must be positive");
  if (!(gaussian_variance > 0.0))
    throw std::invalid_argument("gaussian_variance must be positive");
  if (pnp_iterations < 1) throw std::invalid_argument("pnp_iterations must be >= 1");
  if (!(pnp_gamma > 0.0)) throw std::invalid_argument("pnp_gamma must be positive");
  if (!(pnp_sigma_max >= pnp_sigma_min && pnp_sigma_min >= 0.0))
    throw std::invalid_argument("pnp sigma range must satisfy max >= min >= 0");
  if (output_dir.empty()) throw std::invalid_argument("output_dir must be non-empty");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");

    if (key == "image_file") {
      cfg.image_file = value;
    } else if (key == "phantom_kind") {
      cfg.phantom_kind = phantom_kind_from_name(value);
    } else if (key == "phantom_size") {
      cfg.phantom_size = parse_int(key, value);
    } else if (key == "phantom_count") {
      cfg.phantom_count = static_cast<int>(parse_int(key, value));
    } else if (key == "phantom_seed") {
      cfg.phantom_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "cr_list") {
      cfg.cr_list.clear();
      for (const auto& item : split_list(value)) cfg.cr_list.push_back(parse_double(key, item));
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& item : split_list(value)) cfg.methods.push_back(method_from_name(item));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& item : split_list(value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(key, item)));
    } else if (key == "prior") {
      cfg.prior = prior_kind_from_name(value);
    } else if (key == "smoothing_sigma_cap") {
      cfg.smoothing_sigma_cap = parse_double(key, value);
    } else if (key == "gaussian_mean") {
      cfg.gaussian_mean = parse_double(key, value);
    } else if (key == "gaussian_variance") {
      cfg.gaussian_variance = parse_double(key, value);
    } else if (key == "T") {
      cfg.T = static_cast<int>(parse_int(key, value));
    } else if (key == "zeta") {
      cfg.zeta = parse_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "delta_schedule") {
      if (value == "ramp") cfg.delta_schedule = DeltaSchedule::Ramp;
      else if (value == "constant") cfg.delta_schedule = DeltaSchedule::Constant;
      else throw std::invalid_argument("delta_schedule must be 'ramp' or 'constant'");
    } else if (key == "delta_constant") {
      cfg.delta_constant = parse_double(key, value);
    } else if (key == "pnp_iterations") {
      cfg.pnp_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "pnp_gamma") {
      cfg.pnp_gamma = parse_double(key, value);
    } else if (key == "pnp_sigma_max") {
      cfg.pnp_sigma_max = parse_double(key, value);
    } else if (key == "pnp_sigma_min") {
      cfg.pnp_sigma_min = parse_double(key, value);
    } else if (key == "sensor_kind") {
      cfg.sensor_kind = sensor_kind_from_name(value);
    } else if (key == "sensor_seed") {
      cfg.sensor_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["image_file"] = cfg.image_file;
  kv["phantom_kind"] = phantom_kind_name(cfg.phantom_kind);
  kv["phantom_size"] = std::to_string(cfg.phantom_size);
  kv["phantom_count"] = std::to_string(cfg.phantom_count);
  kv["phantom_seed"] = std::to_string(cfg.phantom_seed);
  {
    std::string s;
    for (double cr : cfg.cr_list) s += (s.empty() ? "" : ",") + format_double(cr);
    kv["cr_list"] = s;
  }
  {
    std::string s;
    for (Method m : cfg.methods) s += (s.empty() ? "" : ",") + method_name(m);
    kv["methods"] = s;
  }
  {
    std::string s;
    for (auto seed : cfg.seeds) s += (s.empty() ? "" : ",") + std::to_string(seed);
    kv["seeds"] = s;
  }
  kv["prior"] = prior_kind_name(cfg.prior);
  kv["smoothing_sigma_cap"] = format_double(cfg.smoothing_sigma_cap);
  kv["gaussian_mean"] = format_double(cfg.gaussian_mean);
  kv["gaussian_variance"] = format_double(cfg.gaussian_variance);
  kv["T"] = std::to_string(cfg.T);
  kv["zeta"] = format_double(cfg.zeta);
  kv["lambda"] = format_double(cfg.lambda);
  kv["delta_schedule"] = (cfg.delta_schedule == DeltaSchedule::Ramp) ? "ramp" : "constant";
  kv["delta_constant"] = format_double(cfg.delta_constant);
  kv["pnp_iterations"] = std::to_string(cfg.pnp_iterations);
  kv["pnp_gamma"] = format_double(cfg.pnp_gamma);
  kv["pnp_sigma_max"] = format_double(cfg.pnp_sigma_max);
  kv["pnp_sigma_min"] = format_double(cfg.pnp_sigma_min);
  kv["sensor_kind"] = sensor_kind_name(cfg.sensor_kind);
  kv["sensor_seed"] = std::to_string(cfg.sensor_seed);
  kv["output_dir"] = cfg.output_dir;

  std::string out;
  for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_config_text(cfg));
}

}  // namespace spirec
