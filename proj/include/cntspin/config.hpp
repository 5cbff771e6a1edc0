#pragma once

// YAML experiment configs. Every dimensional key carries its unit either in the
// key name (temperature_K, length_nm, ...) or, for frequencies, as a mapping
// {MHz: <value>, two_pi: <bool>}. two_pi: true means 2 pi x value x 1e6 rad/s;
// two_pi: false means value x 1e6 rad/s. The flag is mandatory. See
// docs/config.md for the full schema.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "cntspin/beam_dot.hpp"
#include "cntspin/constants.hpp"
#include "cntspin/errors.hpp"
#include "cntspin/experiments.hpp"

namespace cntspin {

using ExperimentConfig = std::variant<TransferSpec, SweepSpec, CouplingCurveSpec>;

namespace config_detail {

inline int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

inline void require_map(const YAML::Node& n, const std::string& key) {
  if (!n.IsMap()) throw ConfigError(key, line_of(n), "expected a mapping");
}

inline void reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, line_of(kv.first), "unknown key");
    }
  }
}

inline YAML::Node required(const YAML::Node& map, const std::string& key) {
  const YAML::Node n = map[key];
  if (!n) throw ConfigError(key, line_of(map), "missing required key");
  return n;
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, line_of(n), "cannot parse value '" + n.Scalar() + "'");
  }
}

inline double finite(const YAML::Node& n, const std::string& key) {
  const double v = scalar<double>(n, key);
  if (!std::isfinite(v)) throw ConfigError(key, line_of(n), "value must be finite");
  return v;
}

inline double nonnegative(const YAML::Node& n, const std::string& key) {
  const double v = finite(n, key);
  if (v < 0.0) throw ConfigError(key, line_of(n), "value must be >= 0");
  return v;
}

inline double positive(const YAML::Node& n, const std::string& key) {
  const double v = finite(n, key);
  if (!(v > 0.0)) throw ConfigError(key, line_of(n), "value must be > 0");
  return v;
}

inline bool two_pi_flag(const YAML::Node& map, const std::string& key) {
  const YAML::Node flag = map["two_pi"];
  if (!flag) throw ConfigError(key + ".two_pi", line_of(map), "frequency needs an explicit two_pi flag");
  return scalar<bool>(flag, key + ".two_pi");
}

inline double mhz_to_angular(double mhz, bool two_pi) { return (two_pi ? constants::two_pi : 1.0) * mhz * 1e6; }

/// {MHz: v, two_pi: b} -> rad/s; negative values rejected.
inline double frequency(const YAML::Node& n, const std::string& key) {
  require_map(n, key);
  reject_unknown(n, {"MHz", "two_pi"}, key);
  const bool tp = two_pi_flag(n, key);
  return mhz_to_angular(nonnegative(required(n, "MHz"), key + ".MHz"), tp);
}

inline TransferSpec parse_transfer(const YAML::Node& m, const std::string& where) {
  require_map(m, where);
  std::set<std::string> allowed{"omega_r", "g", "gamma_r", "gamma_s", "temperature_K",
                                "fock_levels", "dt_s", "model", "record_stride"};
  if (where.empty()) allowed.insert("experiment");
  reject_unknown(m, allowed, where);
  auto key = [&](const std::string& k) { return where.empty() ? k : where + "." + k; };
  auto req = [&](const std::string& k) {
    const YAML::Node n = m[k];
    if (!n) throw ConfigError(key(k), line_of(m), "missing required key");
    return n;
  };

  TransferSpec s;
  s.omega_r = frequency(req("omega_r"), key("omega_r"));
  if (!(s.omega_r > 0.0)) throw ConfigError(key("omega_r"), line_of(m["omega_r"]), "omega_r must be > 0");
  s.g = frequency(req("g"), key("g"));
  if (!(s.g > 0.0)) throw ConfigError(key("g"), line_of(m["g"]), "g must be > 0 for a transfer run");
  s.gamma_r = frequency(req("gamma_r"), key("gamma_r"));
  s.gamma_s = frequency(req("gamma_s"), key("gamma_s"));
  s.temperature = nonnegative(req("temperature_K"), key("temperature_K"));
  if (const YAML::Node n = m["fock_levels"]) {
    s.fock_levels = scalar<int>(n, key("fock_levels"));
    if (s.fock_levels < 2) throw ConfigError(key("fock_levels"), line_of(n), "fock_levels must be >= 2");
  }
  if (const YAML::Node n = m["dt_s"]) s.dt = positive(n, key("dt_s"));
  if (const YAML::Node n = m["model"]) {
    const auto v = scalar<std::string>(n, key("model"));
    if (v == "jc") s.model = ModelKind::jc;
    else if (v == "full") s.model = ModelKind::full;
    else throw ConfigError(key("model"), line_of(n), "model must be 'jc' or 'full'");
  }
  if (const YAML::Node n = m["record_stride"]) {
    s.record_stride = scalar<int>(n, key("record_stride"));
    if (*s.record_stride < 1) throw ConfigError(key("record_stride"), line_of(n), "record_stride must be >= 1");
  }
  return s;
}

inline SweepParameter parse_sweep_parameter(const YAML::Node& n) {
  const auto v = scalar<std::string>(n, "parameter");
  if (v == "gamma_s") return SweepParameter::gamma_s;
  if (v == "gamma_r") return SweepParameter::gamma_r;
  if (v == "temperature") return SweepParameter::temperature;
  throw ConfigError("parameter", line_of(n), "parameter must be gamma_s, gamma_r or temperature");
}

inline std::vector<double> number_list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw ConfigError(key, line_of(n), "expected a list");
  std::vector<double> out;
  for (const YAML::Node& item : n) out.push_back(nonnegative(item, key));
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) throw ConfigError(key, line_of(n), "values must be strictly increasing");
  }
  if (out.empty()) throw ConfigError(key, line_of(n), "values must be nonempty");
  return out;
}

inline SweepSpec parse_sweep(const YAML::Node& m) {
  reject_unknown(m, {"experiment", "parameter", "base", "values", "caption_holds"}, "");
  SweepSpec s;
  s.parameter = parse_sweep_parameter(required(m, "parameter"));
  s.base = parse_transfer(required(m, "base"), "base");
  bool holds = true;
  if (const YAML::Node n = m["caption_holds"]) holds = scalar<bool>(n, "caption_holds");
  if (holds) s.base = apply_caption_holds(s.base, s.parameter);

  if (const YAML::Node v = m["values"]) {
    require_map(v, "values");
    if (s.parameter == SweepParameter::temperature) {
      reject_unknown(v, {"K"}, "values");
      s.values = number_list(required(v, "K"), "values.K");
    } else {
      reject_unknown(v, {"MHz", "two_pi"}, "values");
      const bool tp = two_pi_flag(v, "values");
      s.values = number_list(required(v, "MHz"), "values.MHz");
      for (double& x : s.values) x = mhz_to_angular(x, tp);
    }
  } else {
    s.values = default_sweep_values(s.parameter);
  }
  return s;
}

inline CouplingCurveSpec parse_coupling(const YAML::Node& m) {
  reject_unknown(m, {"experiment", "length_nm", "u0_pm", "beta0", "delta_so_ueV", "delta_kkp_ueV", "mu_orb_muB",
                     "alpha_per_l", "m_star_kg", "omega0", "center_over_l", "from_over_l", "to_over_l", "points"},
                 "");
  const double l = positive(required(m, "length_nm"), "length_nm") * 1e-9;
  const double u0 = nonnegative(required(m, "u0_pm"), "u0_pm") * 1e-12;
  double beta0 = constants::first_mode_root;
  if (const YAML::Node n = m["beta0"]) beta0 = positive(n, "beta0");
  const double so = positive(required(m, "delta_so_ueV"), "delta_so_ueV") * 1e-6;
  double kkp = 0.0;
  if (const YAML::Node n = m["delta_kkp_ueV"]) kkp = nonnegative(n, "delta_kkp_ueV") * 1e-6;
  double mu_orb = constants::bohr_magneton;
  if (const YAML::Node n = m["mu_orb_muB"]) mu_orb = finite(n, "mu_orb_muB") * constants::bohr_magneton;

  double center = 0.5 * l;
  if (const YAML::Node n = m["center_over_l"]) {
    const double x = finite(n, "center_over_l");
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("center_over_l", line_of(n), "center must lie in (0, 1)");
    center = x * l;
  }

  const YAML::Node alpha_n = m["alpha_per_l"];
  const YAML::Node mass_n = m["m_star_kg"];
  const YAML::Node omega_n = m["omega0"];
  if (static_cast<bool>(mass_n) != static_cast<bool>(omega_n)) {
    throw ConfigError(mass_n ? "omega0" : "m_star_kg", line_of(m), "m_star_kg and omega0 must be given together");
  }
  if (!alpha_n && !mass_n) throw ConfigError("alpha_per_l", line_of(m), "need alpha_per_l or (m_star_kg, omega0)");

  auto build_dot = [&]() {
    try {
      if (alpha_n && mass_n) {
        const double omega0 = frequency(omega_n, "omega0");
        return DotProfile::from_all(center, positive(alpha_n, "alpha_per_l") / l, positive(mass_n, "m_star_kg"), omega0);
      }
      if (alpha_n) return DotProfile::from_alpha(center, positive(alpha_n, "alpha_per_l") / l);
      return DotProfile::from_oscillator(center, positive(mass_n, "m_star_kg"), frequency(omega_n, "omega0"));
    } catch (const DomainError& e) {
      throw ConfigError(alpha_n ? "alpha_per_l" : "omega0", line_of(alpha_n ? alpha_n : omega_n), e.what());
    }
  };

  CouplingCurveSpec spec{CouplingParams(so, kkp, mu_orb, BeamMode(l, u0, beta0), build_dot())};
  if (const YAML::Node n = m["from_over_l"]) spec.from_over_l = finite(n, "from_over_l");
  if (const YAML::Node n = m["to_over_l"]) spec.to_over_l = finite(n, "to_over_l");
  if (const YAML::Node n = m["points"]) spec.points = scalar<int>(n, "points");
  if (!(spec.from_over_l >= 0.0 && spec.to_over_l <= 1.0 && spec.from_over_l < spec.to_over_l)) {
    throw ConfigError("from_over_l", line_of(m), "center range must satisfy 0 <= from_over_l < to_over_l <= 1");
  }
  if (spec.points < 2) throw ConfigError("points", line_of(m["points"]), "points must be >= 2");
  return spec;
}

}  // namespace config_detail

/// Parses a config document held in memory.
inline ExperimentConfig parse_config(const std::string& text) {
  using namespace config_detail;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError("", 1, "config must be a mapping");
  const auto kind = scalar<std::string>(required(root, "experiment"), "experiment");
  if (kind == "transfer") return parse_transfer(root, "");
  if (kind == "sweep") return parse_sweep(root);
  if (kind == "coupling") return parse_coupling(root);
  throw ConfigError("experiment", line_of(root["experiment"]), "experiment must be transfer, sweep or coupling");
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cntspin
