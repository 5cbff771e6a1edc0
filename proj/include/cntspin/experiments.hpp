#pragma once

// The three reproducible experiments: coupling-vs-center curve, spin -> phonon
// state transfer, and transfer-error sweeps over a dissipation parameter.
//
// This is the only layer that converts between the coupling model's plain
// frequency (MHz) and the simulator's angular frequencies (rad/s).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cntspin/beam_dot.hpp"
#include "cntspin/constants.hpp"
#include "cntspin/errors.hpp"
#include "cntspin/lindblad.hpp"
#include "cntspin/operators.hpp"

namespace cntspin {

/// 2 pi x f[MHz] -> rad/s.
inline double angular_from_MHz(double mhz) { return constants::two_pi * mhz * 1e6; }
/// rad/s -> f[MHz] (i.e. the value in units of 2 pi x MHz).
inline double MHz_from_angular(double omega) { return omega / (constants::two_pi * 1e6); }

enum class ModelKind { jc, full };

inline const char* to_string(ModelKind m) { return m == ModelKind::jc ? "jc" : "full"; }

struct TransferSpec {
  double omega_r = 0.0;  // rad/s
  double g = 0.0;
  double gamma_r = 0.0;
  double gamma_s = 0.0;
  double temperature = 0.0;  // K
  int fock_levels = 10;
  std::optional<double> dt;  // s
  ModelKind model = ModelKind::jc;
  std::optional<int> record_stride;

  /// (omega_r, g, gamma_r, gamma_s) = 2 pi x (500, 0.9, 0.01, 0.01) MHz, T = 10 mK.
  static TransferSpec paper() {
    TransferSpec s;
    s.omega_r = angular_from_MHz(500.0);
    s.g = angular_from_MHz(0.9);
    s.gamma_r = angular_from_MHz(0.01);
    s.gamma_s = angular_from_MHz(0.01);
    s.temperature = 0.01;
    return s;
  }

  void validate() const {
    if (!(omega_r > 0.0)) throw DomainError("TransferSpec: omega_r must be > 0");
    if (!(g > 0.0)) throw DomainError("TransferSpec: g must be > 0 for a transfer run");
    if (!(gamma_r >= 0.0)) throw DomainError("TransferSpec: gamma_r must be >= 0");
    if (!(gamma_s >= 0.0)) throw DomainError("TransferSpec: gamma_s must be >= 0");
    if (!(temperature >= 0.0)) throw DomainError("TransferSpec: temperature must be >= 0");
    if (fock_levels < 2) throw DomainError("TransferSpec: fock_levels must be >= 2");
    if (dt && !(*dt > 0.0)) throw DomainError("TransferSpec: dt must be > 0");
    if (record_stride && *record_stride < 1) throw DomainError("TransferSpec: record_stride must be >= 1");
  }

  double t_end() const { return constants::pi / (2.0 * g); }

  /// 1/(200 g) in the interaction picture, 1/(100 omega_r) in the lab frame.
  double default_dt() const { return model == ModelKind::jc ? 1.0 / (200.0 * g) : 1.0 / (100.0 * omega_r); }

  ModelParams model_params() const {
    ModelParams p;
    p.omega_r = omega_r;
    p.omega_s = omega_r;  // resonance
    p.g = g;
    p.gamma_r = gamma_r;
    p.gamma_s = gamma_s;
    p.temperature = temperature;
    return p;
  }
};

struct TransferResult {
  std::vector<double> t;  // s
  std::vector<double> p10;
  std::vector<double> p01;
  std::vector<Complex> coherence;  // <01|rho|10>
  double fidelity = 0.0;
  double t_end = 0.0;
  double dt_used = 0.0;
  std::size_t steps = 0;
  OperatorMatrix final_state;
  double max_trace_drift = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<std::string> warnings;
};

/// Evolves |1>_spin |0>_phonon for t = pi/(2g) and scores it against |0>|1>.
inline TransferResult run_state_transfer(const TransferSpec& spec) {
  spec.validate();
  const HilbertSpec space(spec.fock_levels);
  const ModelParams params = spec.model_params();
  const LindbladModel model = spec.model == ModelKind::jc ? LindbladModel::jaynes_cummings(space, params)
                                                          : LindbladModel::lab_frame(space, params);

  IntegrationSpec integration;
  integration.t_end = spec.t_end();
  integration.dt = std::min(spec.dt.value_or(spec.default_dt()), integration.t_end);
  const auto nominal_steps = static_cast<int>(std::ceil(integration.t_end / integration.dt));
  integration.record_stride = spec.record_stride.value_or(std::max(1, nominal_steps / 2000));
  integration.allow_coarse_step = spec.dt.has_value();

  const Trajectory traj = evolve(model, DensityMatrix::basis_state(space, 1, 0), integration);

  TransferResult out;
  const int i10 = space.index(1, 0);
  const int i01 = space.index(0, 1);
  out.t = traj.times;
  out.p10.reserve(traj.states.size());
  out.p01.reserve(traj.states.size());
  out.coherence.reserve(traj.states.size());
  for (const DensityMatrix& rho : traj.states) {
    out.p10.push_back(rho(i10, i10).real());
    out.p01.push_back(rho(i01, i01).real());
    out.coherence.push_back(rho(i01, i10));
  }
  out.fidelity = fidelity(DensityMatrix::basis_state(space, 0, 1), traj.final_state());
  out.t_end = integration.t_end;
  out.dt_used = traj.dt_used;
  out.steps = traj.steps;
  out.final_state = traj.final_state().matrix();
  out.max_trace_drift = traj.max_trace_drift;
  out.max_hermiticity_residual = traj.max_hermiticity_residual;
  out.min_eigenvalue = traj.min_eigenvalue;
  out.warnings = traj.warnings;
  return out;
}

enum class SweepParameter { gamma_s, gamma_r, temperature };

inline const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::gamma_s: return "gamma_s";
    case SweepParameter::gamma_r: return "gamma_r";
    case SweepParameter::temperature: return "temperature";
  }
  return "?";
}

struct SweepSpec {
  TransferSpec base;
  SweepParameter parameter = SweepParameter::gamma_s;
  std::vector<double> values;  // rad/s for rates, K for temperature

  void validate() const {
    base.validate();
    if (values.empty()) throw DomainError("SweepSpec: values must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0.0)) throw DomainError("SweepSpec: values must be nonnegative");
      if (i > 0 && !(values[i] > values[i - 1])) throw DomainError("SweepSpec: values must be strictly increasing");
    }
  }
};

/// gamma_s, gamma_r: 2 pi x [0, 0.05] MHz; T: [0, 100] mK; 11 points each.
inline std::vector<double> default_sweep_values(SweepParameter p) {
  const double top = p == SweepParameter::temperature ? 0.1 : angular_from_MHz(0.05);
  std::vector<double> v(11);
  for (int i = 0; i < 11; ++i) v[i] = top * i / 10.0;
  return v;
}

/// Fixes the non-swept dissipation as in the error-vs-parameter figures:
/// gamma_s sweep holds gamma_r = 0; gamma_r sweep holds gamma_s = 0;
/// temperature sweep holds gamma_s = 0, gamma_r = 2 pi x 0.001 MHz.
inline TransferSpec apply_caption_holds(TransferSpec base, SweepParameter p) {
  switch (p) {
    case SweepParameter::gamma_s: base.gamma_r = 0.0; break;
    case SweepParameter::gamma_r: base.gamma_s = 0.0; break;
    case SweepParameter::temperature:
      base.gamma_s = 0.0;
      base.gamma_r = angular_from_MHz(0.001);
      break;
  }
  return base;
}

inline SweepSpec figure_sweep(SweepParameter p, const TransferSpec& base = TransferSpec::paper()) {
  return SweepSpec{apply_caption_holds(base, p), p, default_sweep_values(p)};
}

inline TransferSpec sweep_point_spec(const SweepSpec& sweep, double value) {
  TransferSpec s = sweep.base;
  switch (sweep.parameter) {
    case SweepParameter::gamma_s: s.gamma_s = value; break;
    case SweepParameter::gamma_r: s.gamma_r = value; break;
    case SweepParameter::temperature: s.temperature = value; break;
  }
  return s;
}

struct SweepPoint {
  double value = 0.0;
  double error = 0.0;  // 1 - F; NaN on failure
  std::optional<std::string> failure;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::gamma_s;
  std::vector<SweepPoint> points;
  double dt_used = 0.0;
  std::size_t steps = 0;
};

/// One transfer run per value. Points run concurrently; results keep input order.
inline SweepResult run_error_sweep(const SweepSpec& sweep) {
  sweep.validate();
  std::vector<std::future<TransferResult>> runs;
  runs.reserve(sweep.values.size());
  for (double v : sweep.values) {
    runs.push_back(std::async(std::launch::async, [spec = sweep_point_spec(sweep, v)] { return run_state_transfer(spec); }));
  }
  SweepResult out;
  out.parameter = sweep.parameter;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SweepPoint point;
    point.value = sweep.values[i];
    try {
      const TransferResult r = runs[i].get();
      point.error = 1.0 - r.fidelity;
      out.dt_used = r.dt_used;
      out.steps = r.steps;
    } catch (const std::exception& e) {
      point.error = std::nan("");
      point.failure = e.what();
    }
    out.points.push_back(std::move(point));
  }
  return out;
}

struct CouplingCurveSpec {
  CouplingParams params;
  double from_over_l = 0.0;
  double to_over_l = 1.0;
  int points = 401;

  void validate() const {
    if (!(from_over_l >= 0.0 && to_over_l <= 1.0 && from_over_l < to_over_l)) {
      throw DomainError("CouplingCurveSpec: center range must satisfy 0 <= from < to <= 1 (units of l)");
    }
    if (points < 2) throw DomainError("CouplingCurveSpec: points must be >= 2");
  }
};

struct CouplingCurve {
  std::vector<double> zc_over_l;
  std::vector<double> g_MHz;
  double max_abs_g_MHz = 0.0;
  double argmax_over_l = 0.0;
  std::vector<std::string> warnings;
};

/// g/h in MHz on an even grid of effective dot centers.
inline CouplingCurve run_coupling_curve(const CouplingCurveSpec& spec) {
  spec.validate();
  CouplingCurve out;
  if (auto w = tail_clipping_warning(spec.params.beam, spec.params.dot)) out.warnings.push_back(*w);
  const double l = spec.params.beam.length();
  out.zc_over_l.reserve(spec.points);
  out.g_MHz.reserve(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    const double x = spec.from_over_l + (spec.to_over_l - spec.from_over_l) * i / (spec.points - 1);
    const double g = coupling_strength(spec.params, x * l);
    out.zc_over_l.push_back(x);
    out.g_MHz.push_back(g);
    if (std::abs(g) > out.max_abs_g_MHz) {
      out.max_abs_g_MHz = std::abs(g);
      out.argmax_over_l = x;
    }
  }
  return out;
}

}  // namespace cntspin
