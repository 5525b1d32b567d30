#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pairspec/error.hpp"
#include "pairspec/harness.hpp"

namespace pairspec {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

std::string_view kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Real: return "real";
    case EnsembleKind::ComplexIndependent: return "complex_independent";
    case EnsembleKind::ComplexGeneral: return "complex_general";
  }
  return "unknown";
}

EnsembleKind kind_from(const std::string& name) {
  if (name == "real") return EnsembleKind::Real;
  if (name == "complex_independent") return EnsembleKind::ComplexIndependent;
  if (name == "complex_general") return EnsembleKind::ComplexGeneral;
  config_error("unknown ensemble kind '" + name + "'");
}

std::string_view product_name(ProductKind kind) {
  return kind == ProductKind::ConjTranspose ? "conj_transpose" : "pseudo_inverse";
}

ProductKind product_from(const std::string& name) {
  if (name == "conj_transpose") return ProductKind::ConjTranspose;
  if (name == "pseudo_inverse") return ProductKind::PseudoInverse;
  config_error("unknown product '" + name + "'");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Accepts 0.5, [0.5, 0.1] or {"re": 0.5, "im": 0.1}.
cplx complex_from(const json& j, const char* field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  config_error(std::string("field '") + field + "' must be a number, [re, im] or {re, im}");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      config_error(std::string("field '") + key + "': " + e.what());
    }
  }
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  validate_params(config.params);
  if (config.trials < 1) config_error("trials must be at least 1");
  if (config.dims.empty()) config_error("at least one dims entry is required");
  for (const auto& d : config.dims) {
    if (d.n < 1 || d.p < 1) config_error("dims entries must be positive");
  }
  if (!(config.margin >= 0.0)) config_error("margin must be nonnegative");
  if (!(config.coverage_threshold >= 0.0 && config.coverage_threshold <= 1.0)) {
    config_error("coverage_threshold must lie in [0, 1]");
  }
  if (!(config.wa_tol > 0.0) || !(config.penrose_tol > 0.0)) {
    config_error("tolerances must be positive");
  }
  if (!(config.zero_tol.value > 0.0)) config_error("zero_tol value must be positive");
  if (config.sweep.n < 1) config_error("sweep.n must be positive");
  for (const double a : config.sweep.alphas) {
    if (!(a > 0.0)) config_error("sweep alphas must be positive");
  }
  if (config.density) {
    const auto& d = *config.density;
    if (d.nx < 1 || d.ny < 1) config_error("density bins must be positive");
    if (!(d.upper.real() > d.lower.real()) || !(d.upper.imag() > d.lower.imag())) {
      config_error("density window is degenerate");
    }
  }
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["params"] = {
      {"sigma_x", c.params.sigma_x}, {"sigma_y", c.params.sigma_y},
      {"tau", complex_to_json(c.params.tau)}, {"kind", kind_name(c.params.kind)},
      {"split", c.params.split}};
  j["dims"] = json::array();
  for (const auto& d : c.dims) j["dims"].push_back(json::array({d.n, d.p}));
  j["product"] = product_name(c.product);
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["margin"] = c.margin;
  j["coverage_threshold"] = c.coverage_threshold;
  j["wa_tol"] = c.wa_tol;
  j["penrose_tol"] = c.penrose_tol;
  j["equivalence_draws"] = c.equivalence_draws;
  j["rotation_angle"] = c.rotation_angle;
  j["zero_tol"] = {
      {"mode", c.zero_tol.mode == ZeroTolPolicy::Mode::RelativeMedian ? "relative_median"
                                                                       : "absolute"},
      {"value", c.zero_tol.value}};
  j["checks"] = json::array();
  for (const auto id : c.checks) j["checks"].push_back(to_string(id));
  json taus = json::array();
  for (const auto& t : c.sweep.taus) taus.push_back(complex_to_json(t));
  j["sweep"] = {{"tau", taus}, {"alpha", c.sweep.alphas}, {"n", c.sweep.n}};
  if (c.density) {
    j["density"] = {{"lower", complex_to_json(c.density->lower)},
                    {"upper", complex_to_json(c.density->upper)},
                    {"bins", json::array({c.density->nx, c.density->ny})}};
  }
  j["output"] = {{"dir", c.output.dir.generic_string()},
                 {"samples_csv", c.output.samples_csv},
                 {"boundary_prefix", c.output.boundary_prefix},
                 {"density_csv", c.output.density_csv},
                 {"report_json", c.output.report_json}};
  j["threads"] = c.threads;
  j["strict"] = c.strict;
  return j.dump(2);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("configuration must be a JSON object");

  ExperimentConfig c;
  if (auto it = j.find("params"); it != j.end()) {
    const json& p = *it;
    read(p, "sigma_x", c.params.sigma_x);
    read(p, "sigma_y", c.params.sigma_y);
    if (p.contains("tau")) c.params.tau = complex_from(p["tau"], "params.tau");
    if (p.contains("kind")) c.params.kind = kind_from(p["kind"].get<std::string>());
    read(p, "split", c.params.split);
  }
  if (auto it = j.find("dims"); it != j.end()) {
    if (!it->is_array()) config_error("dims must be an array of [n, p] pairs");
    c.dims.clear();
    for (const auto& d : *it) {
      if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() ||
          !d[1].is_number_integer()) {
        config_error("dims entries must be [n, p] integer pairs");
      }
      c.dims.push_back({d[0].get<Eigen::Index>(), d[1].get<Eigen::Index>()});
    }
  }
  if (j.contains("product")) c.product = product_from(j["product"].get<std::string>());
  if (auto it = j.find("trials"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 0) {
      config_error("trials must be a nonnegative integer");
    }
    c.trials = it->get<std::size_t>();
  }
  read(j, "base_seed", c.base_seed);
  read(j, "margin", c.margin);
  read(j, "coverage_threshold", c.coverage_threshold);
  read(j, "wa_tol", c.wa_tol);
  read(j, "penrose_tol", c.penrose_tol);
  read(j, "equivalence_draws", c.equivalence_draws);
  read(j, "rotation_angle", c.rotation_angle);
  if (auto it = j.find("zero_tol"); it != j.end()) {
    if (it->is_number()) {
      c.zero_tol = {ZeroTolPolicy::Mode::Absolute, it->get<double>()};
    } else {
      const auto mode = it->value("mode", std::string("relative_median"));
      if (mode == "relative_median") {
        c.zero_tol.mode = ZeroTolPolicy::Mode::RelativeMedian;
      } else if (mode == "absolute") {
        c.zero_tol.mode = ZeroTolPolicy::Mode::Absolute;
      } else {
        config_error("unknown zero_tol mode '" + mode + "'");
      }
      read(*it, "value", c.zero_tol.value);
    }
  }
  if (auto it = j.find("checks"); it != j.end()) {
    c.checks.clear();
    for (const auto& name : *it) {
      const auto id = check_from_string(name.get<std::string>());
      if (!id) config_error("unknown check '" + name.get<std::string>() + "'");
      if (std::find(c.checks.begin(), c.checks.end(), *id) == c.checks.end()) {
        c.checks.push_back(*id);
      }
    }
  }
  if (auto it = j.find("sweep"); it != j.end()) {
    if (auto t = it->find("tau"); t != it->end()) {
      c.sweep.taus.clear();
      for (const auto& v : *t) c.sweep.taus.push_back(complex_from(v, "sweep.tau"));
    }
    read(*it, "alpha", c.sweep.alphas);
    read(*it, "n", c.sweep.n);
  }
  if (auto it = j.find("density"); it != j.end() && !it->is_null()) {
    DensitySpec d;
    if (it->contains("lower")) d.lower = complex_from((*it)["lower"], "density.lower");
    if (it->contains("upper")) d.upper = complex_from((*it)["upper"], "density.upper");
    if (auto b = it->find("bins"); b != it->end()) {
      if (!b->is_array() || b->size() != 2) config_error("density.bins must be [nx, ny]");
      d.nx = (*b)[0].get<std::size_t>();
      d.ny = (*b)[1].get<std::size_t>();
    }
    c.density = d;
  }
  if (auto it = j.find("output"); it != j.end()) {
    std::string dir = c.output.dir.generic_string();
    read(*it, "dir", dir);
    c.output.dir = dir;
    read(*it, "samples_csv", c.output.samples_csv);
    read(*it, "boundary_prefix", c.output.boundary_prefix);
    read(*it, "density_csv", c.output.density_csv);
    read(*it, "report_json", c.output.report_json);
  }
  read(j, "threads", c.threads);
  read(j, "strict", c.strict);

  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pairspec
