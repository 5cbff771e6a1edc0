#pragma once

// Markovian master equation for the spin-phonon system
//
//   d rho/dt = -i [H, rho] + sum_k rate_k D[o_k] rho,
//   D[o] rho = o rho o^dag - 1/2 {o^dag o, rho}        (hbar = 1)
//
// with a fixed-step classical RK4 integrator and Uhlmann fidelity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cntspin/constants.hpp"
#include "cntspin/errors.hpp"
#include "cntspin/operators.hpp"

namespace cntspin {

/// Smallest eigenvalue of the Hermitian part of m.
inline double min_eigenvalue(const OperatorMatrix& m) {
  const OperatorMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

class DensityMatrix {
 public:
  static constexpr double hermiticity_tol = 1e-10;
  static constexpr double trace_tol = 1e-8;
  static constexpr double positivity_tol = 1e-8;

  /// Validates Hermiticity, unit trace and positivity.
  static DensityMatrix checked(OperatorMatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("DensityMatrix: matrix must be square");
    if (!m.allFinite()) throw DomainError("DensityMatrix: non-finite entries");
    if (hermiticity_residual(m) >= hermiticity_tol) throw DomainError("DensityMatrix: not Hermitian");
    if (std::abs(m.trace() - Complex(1.0)) > trace_tol) throw DomainError("DensityMatrix: trace != 1");
    if (min_eigenvalue(m) < -positivity_tol) throw DomainError("DensityMatrix: not positive semidefinite");
    return DensityMatrix(std::move(m));
  }

  /// |psi><psi| for a normalized psi.
  static DensityMatrix pure(const Eigen::VectorXcd& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > trace_tol) throw DomainError("DensityMatrix::pure: |psi| != 1");
    return DensityMatrix(psi * psi.adjoint());
  }

  static DensityMatrix basis_state(const HilbertSpec& spec, int spin, int phonon) {
    return DensityMatrix(basis_projector(spec, spin, phonon));
  }

  const OperatorMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  friend struct detail_density_access;
  explicit DensityMatrix(OperatorMatrix m) : m_(std::move(m)) {}
  OperatorMatrix m_;
};

// States produced by the integrator are checked against the integrator's own
// (looser) tolerances, so they bypass DensityMatrix::checked.
struct detail_density_access {
  static DensityMatrix wrap(OperatorMatrix m) { return DensityMatrix(std::move(m)); }
};

struct Channel {
  OperatorMatrix op;
  double rate;  // rad/s
  std::string label;
};

/// Physical parameters; angular frequencies in rad/s, temperature in K.
struct ModelParams {
  double omega_r = 0.0;
  double omega_s = 0.0;
  double g = 0.0;
  double gamma_r = 0.0;
  double gamma_s = 0.0;
  double temperature = 0.0;
  double gamma_phi = 0.0;  // optional pure dephasing, D[sigma3]
};

/// Bose-Einstein occupation 1/(exp(hbar omega_r / k_B T) - 1); exactly 0 at T = 0.
inline double thermal_occupation(double omega_r, double temperature) {
  if (!(omega_r > 0.0)) throw DomainError("thermal_occupation: omega_r must be > 0");
  if (!(temperature >= 0.0)) throw DomainError("thermal_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(constants::hbar * omega_r / (constants::boltzmann * temperature));
}

class LindbladModel {
 public:
  /// Generic model. When no dominant frequency is given it is estimated as the
  /// largest of max|H_ij| and the channel rates.
  LindbladModel(OperatorMatrix hamiltonian, std::vector<Channel> channels,
                std::optional<double> dominant_frequency = std::nullopt)
      : h_(std::move(hamiltonian)), channels_(std::move(channels)) {
    if (h_.rows() != h_.cols()) throw DomainError("LindbladModel: Hamiltonian must be square");
    double dominant = h_.size() ? h_.cwiseAbs().maxCoeff() : 0.0;
    for (const Channel& c : channels_) {
      if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
        throw DomainError("LindbladModel: rate of channel '" + c.label + "' must be >= 0");
      }
      if (c.op.rows() != h_.rows() || c.op.cols() != h_.cols()) {
        throw DomainError("LindbladModel: channel '" + c.label + "' dimension mismatch");
      }
      dominant = std::max(dominant, c.rate);
    }
    dominant_ = dominant_frequency.value_or(dominant);

    h_eff_ = h_;
    for (const Channel& c : channels_) {
      if (c.rate > 0.0) h_eff_ -= Complex(0.0, 0.5 * c.rate) * (c.op.adjoint() * c.op);
    }
  }

  /// Interaction-picture resonant JC model with channels
  /// (a, (n_B+1) gamma_r), (a^dag, n_B gamma_r), (sigma-, gamma_s) and optional (sigma3, gamma_phi).
  static LindbladModel jaynes_cummings(const HilbertSpec& spec, const ModelParams& p) {
    const double dominant = std::max({std::abs(p.g), p.gamma_r, p.gamma_s, p.gamma_phi});
    return LindbladModel(hamiltonian_jc(spec, p.g), bath_channels(spec, p), dominant);
  }

  /// Lab-frame model on the full Hamiltonian.
  static LindbladModel lab_frame(const HilbertSpec& spec, const ModelParams& p) {
    const double dominant = std::max({std::abs(p.g), p.omega_r, p.omega_s, p.gamma_r, p.gamma_s, p.gamma_phi});
    return LindbladModel(hamiltonian_full(spec, p.omega_s, p.g, p.omega_r), bath_channels(spec, p), dominant);
  }

  static std::vector<Channel> bath_channels(const HilbertSpec& spec, const ModelParams& p) {
    if (!(p.gamma_r >= 0.0 && p.gamma_s >= 0.0 && p.gamma_phi >= 0.0)) {
      throw DomainError("LindbladModel: rates must be >= 0");
    }
    const double n_b = p.gamma_r > 0.0 && p.temperature > 0.0 ? thermal_occupation(p.omega_r, p.temperature) : 0.0;
    const OperatorMatrix a = annihilation(spec);
    const SpinOperators s = spin_ops(spec);
    std::vector<Channel> out{
        {a, (n_b + 1.0) * p.gamma_r, "a"},
        {a.adjoint(), n_b * p.gamma_r, "a_dag"},
        {s.sigma_minus, p.gamma_s, "sigma_minus"},
    };
    if (p.gamma_phi > 0.0) out.push_back({s.sigma3, p.gamma_phi, "sigma3"});
    return out;
  }

  const OperatorMatrix& hamiltonian() const noexcept { return h_; }
  const std::vector<Channel>& channels() const noexcept { return channels_; }
  Eigen::Index dim() const noexcept { return h_.rows(); }
  double dominant_frequency() const noexcept { return dominant_; }

  /// -i (H_eff rho - rho H_eff^dag) + sum rate o rho o^dag, H_eff = H - i/2 sum rate o^dag o.
  void rhs(const OperatorMatrix& rho, OperatorMatrix& out) const {
    out.noalias() = Complex(0.0, -1.0) * (h_eff_ * rho);
    out.noalias() += Complex(0.0, 1.0) * (rho * h_eff_.adjoint());
    for (const Channel& c : channels_) {
      if (c.rate > 0.0) out.noalias() += c.rate * (c.op * rho * c.op.adjoint());
    }
  }

 private:
  OperatorMatrix h_;
  OperatorMatrix h_eff_;
  std::vector<Channel> channels_;
  double dominant_ = 0.0;
};

/// o rho o^dag - 1/2 {o^dag o, rho}. Works on any square matrix, not only states.
inline OperatorMatrix dissipator(const OperatorMatrix& o, const OperatorMatrix& rho) {
  if (o.rows() != o.cols() || rho.rows() != rho.cols() || o.rows() != rho.rows()) {
    throw DomainError("dissipator: dimension mismatch");
  }
  const OperatorMatrix od = o.adjoint();
  const OperatorMatrix n = od * o;
  return o * rho * od - 0.5 * (n * rho + rho * n);
}

inline OperatorMatrix dissipator(const OperatorMatrix& o, const DensityMatrix& rho) {
  return dissipator(o, rho.matrix());
}

inline OperatorMatrix master_rhs(const LindbladModel& model, const OperatorMatrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim()) throw DomainError("master_rhs: dimension mismatch");
  OperatorMatrix out(rho.rows(), rho.cols());
  model.rhs(rho, out);
  return out;
}

inline OperatorMatrix master_rhs(const LindbladModel& model, const DensityMatrix& rho) {
  return master_rhs(model, rho.matrix());
}

struct IntegrationSpec {
  double t_end = 0.0;  // s
  double dt = 0.0;     // s, nominal; rounded down so that t_end is hit exactly
  int record_stride = 1;
  bool allow_coarse_step = false;  // downgrades the step-size bound to a warning
};

struct IntegrationTolerances {
  double trace = 1e-6;
  double hermiticity = 1e-8;
  double min_eigenvalue = -1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double dt_used = 0.0;
  std::size_t steps = 0;
  double max_trace_drift = 0.0;
  double max_hermiticity_residual = 0.0;  // before symmetrization
  double min_eigenvalue = 0.0;            // over recorded states
  std::vector<std::string> warnings;

  const DensityMatrix& final_state() const { return states.back(); }
};

/// Fixed-step RK4 integration. States are symmetrized after every step; trace is
/// left untouched and monitored.
inline Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, const IntegrationSpec& spec,
                         const IntegrationTolerances& tol = {}) {
  if (rho0.dim() != model.dim()) throw DomainError("evolve: initial state dimension mismatch");
  if (!(spec.t_end > 0.0) || !std::isfinite(spec.t_end)) throw DomainError("evolve: t_end must be > 0");
  if (!(spec.dt > 0.0) || spec.dt > spec.t_end) throw DomainError("evolve: need 0 < dt <= t_end");
  if (spec.record_stride < 1) throw DomainError("evolve: record_stride must be >= 1");

  Trajectory out;
  const double omega = model.dominant_frequency();
  if (omega > 0.0 && spec.dt > 1.0 / (50.0 * omega)) {
    std::ostringstream msg;
    msg << "dt = " << spec.dt << " s exceeds 1/(50 * " << omega << " rad/s)";
    if (!spec.allow_coarse_step) throw DomainError("evolve: " + msg.str());
    out.warnings.push_back(msg.str());
  }

  const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt * (1.0 - 1e-12)));
  const double h = spec.t_end / static_cast<double>(steps);
  out.dt_used = h;
  out.steps = steps;

  const Eigen::Index d = model.dim();
  OperatorMatrix rho = rho0.matrix();
  OperatorMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

  auto record = [&](std::size_t step) {
    const double lowest = cntspin::min_eigenvalue(rho);
    out.min_eigenvalue = out.times.empty() ? lowest : std::min(out.min_eigenvalue, lowest);
    if (lowest < tol.min_eigenvalue) {
      std::ostringstream msg;
      msg << "evolve: min eigenvalue " << lowest << " below " << tol.min_eigenvalue;
      throw IntegrationError(msg.str(), step);
    }
    out.times.push_back(static_cast<double>(step) * h);
    out.states.push_back(detail_density_access::wrap(rho));
  };

  out.max_trace_drift = std::abs(rho.trace() - Complex(1.0));
  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    model.rhs(rho, k1);
    stage = rho + 0.5 * h * k1;
    model.rhs(stage, k2);
    stage = rho + 0.5 * h * k2;
    model.rhs(stage, k3);
    stage = rho + h * k3;
    model.rhs(stage, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double herm = hermiticity_residual(rho);
    out.max_hermiticity_residual = std::max(out.max_hermiticity_residual, herm);
    if (!(herm < tol.hermiticity)) {
      throw IntegrationError("evolve: Hermiticity residual " + std::to_string(herm) + " over tolerance", step);
    }
    stage = 0.5 * (rho + rho.adjoint());
    rho = stage;

    const double drift = std::abs(rho.trace() - Complex(1.0));
    out.max_trace_drift = std::max(out.max_trace_drift, drift);
    if (!(drift < tol.trace)) {
      throw IntegrationError("evolve: trace drift " + std::to_string(drift) + " over tolerance", step);
    }
    if (step % static_cast<std::size_t>(spec.record_stride) == 0 || step == steps) record(step);
  }
  return out;
}

namespace detail {

inline constexpr double eigen_clip = 1e-10;

/// Eigendecomposition of a Hermitian PSD matrix with tiny negatives clipped to 0.
inline Eigen::SelfAdjointEigenSolver<OperatorMatrix> psd_eigen(const OperatorMatrix& m, const char* who) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError(std::string(who) + ": eigendecomposition failed");
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -eigen_clip) {
    throw NumericalError(std::string(who) + ": eigenvalue " + std::to_string(lowest) + " below clip threshold",
                         lowest);
  }
  return es;
}

/// Square roots of PSD eigenvalues; values under the numerical rank threshold
/// d * eps * max are roundoff and are taken as exact zeros.
inline Eigen::VectorXd psd_roots(const Eigen::VectorXd& eigenvalues) {
  const double floor = eigenvalues.size() * std::numeric_limits<double>::epsilon() *
                       std::max(eigenvalues.cwiseAbs().maxCoeff(), 0.0);
  return eigenvalues.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
}

}  // namespace detail

/// Uhlmann fidelity Tr sqrt( sqrt(rho) target sqrt(rho) ), in [0, 1].
inline double fidelity(const DensityMatrix& target, const DensityMatrix& rho) {
  if (target.dim() != rho.dim()) throw DomainError("fidelity: dimension mismatch");
  const auto es = detail::psd_eigen(rho.matrix(), "fidelity");
  const Eigen::VectorXd roots = detail::psd_roots(es.eigenvalues());
  const OperatorMatrix sqrt_rho = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  const OperatorMatrix inner = sqrt_rho * target.matrix() * sqrt_rho;
  const auto inner_es = detail::psd_eigen(inner, "fidelity");
  const double f = detail::psd_roots(inner_es.eigenvalues()).sum();
  return std::clamp(f, 0.0, 1.0);
}

/// Reduced spin state (2x2).
inline DensityMatrix partial_trace_phonon(const HilbertSpec& spec, const DensityMatrix& rho) {
  if (rho.dim() != spec.dim()) throw DomainError("partial_trace_phonon: dimension mismatch");
  OperatorMatrix out = OperatorMatrix::Zero(2, 2);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int n = 0; n < spec.fock_levels(); ++n) out(s, t) += rho(spec.index(s, n), spec.index(t, n));
  return detail_density_access::wrap(std::move(out));
}

/// Reduced phonon state (fock_levels x fock_levels).
inline DensityMatrix partial_trace_spin(const HilbertSpec& spec, const DensityMatrix& rho) {
  if (rho.dim() != spec.dim()) throw DomainError("partial_trace_spin: dimension mismatch");
  const int nf = spec.fock_levels();
  OperatorMatrix out = OperatorMatrix::Zero(nf, nf);
  for (int s = 0; s < 2; ++s)
    for (int n = 0; n < nf; ++n)
      for (int m = 0; m < nf; ++m) out(n, m) += rho(spec.index(s, n), spec.index(s, m));
  return detail_density_access::wrap(std::move(out));
}

}  // namespace cntspin
