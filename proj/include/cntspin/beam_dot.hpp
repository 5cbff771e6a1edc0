#pragma once

// Classical layer of the spin-phonon coupling model: fundamental flexural mode of
// a doubly clamped nanotube, Gaussian density of a parabolic lateral dot, the
// field-induced dot shift, the deflection-induced coupling g and the sweet-spot
// axial field.
//
// Units are SI throughout except where a name says otherwise (coupling in MHz as
// plain frequency g/h, spin-orbit energies in eV).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cntspin/constants.hpp"
#include "cntspin/errors.hpp"

namespace cntspin {

class BeamMode {
 public:
  BeamMode(double length, double u0, double beta0 = constants::first_mode_root)
      : length_(length), u0_(u0), beta0_(beta0) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("BeamMode: length must be > 0");
    if (!(u0 >= 0.0) || !std::isfinite(u0)) throw DomainError("BeamMode: u0 must be >= 0");
    if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw DomainError("BeamMode: beta0 must be > 0");
    // The coefficient is singular only at beta0 = 0, excluded above.
    coefficient_ = (std::cos(beta0) - std::cosh(beta0)) / (std::sin(beta0) - std::sinh(beta0));
  }

  double length() const noexcept { return length_; }
  double u0() const noexcept { return u0_; }
  double beta0() const noexcept { return beta0_; }
  double wavenumber() const noexcept { return beta0_ / length_; }
  /// C in f(z) = cosh kz - cos kz + C (sin kz - sinh kz).
  double mode_coefficient() const noexcept { return coefficient_; }

 private:
  double length_;
  double u0_;
  double beta0_;
  double coefficient_;
};

/// Ground-state density of a parabolic dot. Built either from the inverse width
/// alpha directly or from (m*, omega0) with alpha^2 = m* omega0 / hbar.
class DotProfile {
 public:
  static DotProfile from_alpha(double center, double alpha) {
    check_common(center, alpha);
    return DotProfile(center, alpha, std::nullopt, std::nullopt);
  }

  static DotProfile from_oscillator(double center, double m_star, double omega0) {
    check_oscillator(m_star, omega0);
    const double alpha = std::sqrt(m_star * omega0 / constants::hbar);
    check_common(center, alpha);
    return DotProfile(center, alpha, m_star, omega0);
  }

  /// Both descriptions given: they must agree to 1e-6 relative.
  static DotProfile from_all(double center, double alpha, double m_star, double omega0) {
    check_common(center, alpha);
    check_oscillator(m_star, omega0);
    const double implied = m_star * omega0 / constants::hbar;
    if (std::abs(alpha * alpha - implied) > 1e-6 * implied) {
      throw DomainError("DotProfile: alpha^2 inconsistent with m_star*omega0/hbar");
    }
    return DotProfile(center, alpha, m_star, omega0);
  }

  double center() const noexcept { return center_; }
  double alpha() const noexcept { return alpha_; }
  bool has_oscillator() const noexcept { return m_star_.has_value(); }
  std::optional<double> m_star() const noexcept { return m_star_; }
  std::optional<double> omega0() const noexcept { return omega0_; }

  DotProfile with_center(double center) const {
    check_common(center, alpha_);
    return DotProfile(center, alpha_, m_star_, omega0_);
  }

 private:
  DotProfile(double center, double alpha, std::optional<double> m_star, std::optional<double> omega0)
      : center_(center), alpha_(alpha), m_star_(m_star), omega0_(omega0) {}

  static void check_common(double center, double alpha) {
    if (!std::isfinite(center)) throw DomainError("DotProfile: center must be finite");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("DotProfile: alpha must be > 0");
  }
  static void check_oscillator(double m_star, double omega0) {
    if (!(m_star > 0.0)) throw DomainError("DotProfile: m_star must be > 0");
    if (!(omega0 > 0.0)) throw DomainError("DotProfile: omega0 must be > 0");
  }

  double center_;
  double alpha_;
  std::optional<double> m_star_;
  std::optional<double> omega0_;
};

struct CouplingParams {
  double delta_so;   // eV
  double delta_kkp;  // eV
  double mu_orb;     // J/T
  BeamMode beam;
  DotProfile dot;

  CouplingParams(double delta_so_eV, double delta_kkp_eV, double mu_orb_JT, BeamMode beam_mode,
                 DotProfile dot_profile)
      : delta_so(delta_so_eV), delta_kkp(delta_kkp_eV), mu_orb(mu_orb_JT), beam(beam_mode),
        dot(dot_profile) {
    if (!(delta_so > 0.0)) throw DomainError("CouplingParams: delta_so must be > 0");
    if (!(delta_kkp >= 0.0)) throw DomainError("CouplingParams: delta_kkp must be >= 0");
    if (!(dot.center() > 0.0 && dot.center() < beam.length())) {
      throw DomainError("CouplingParams: dot center must lie strictly inside (0, l)");
    }
  }
};

namespace detail {

inline double mode_shape_unchecked(double z, const BeamMode& beam) {
  const double kz = beam.wavenumber() * z;
  return std::cosh(kz) - std::cos(kz) + beam.mode_coefficient() * (std::sin(kz) - std::sinh(kz));
}

inline double mode_slope_unchecked(double z, const BeamMode& beam) {
  const double k = beam.wavenumber();
  const double kz = k * z;
  return k * (std::sinh(kz) + std::sin(kz) + beam.mode_coefficient() * (std::cos(kz) - std::cosh(kz)));
}

inline void check_on_beam(double z, const BeamMode& beam, const char* who) {
  if (!(z >= 0.0 && z <= beam.length())) {
    std::ostringstream msg;
    msg << who << ": z = " << z << " outside [0, " << beam.length() << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace detail

/// Dimensionless first flexural mode f(z).
inline double mode_shape(double z, const BeamMode& beam) {
  detail::check_on_beam(z, beam, "mode_shape");
  return detail::mode_shape_unchecked(z, beam);
}

/// df/dz in 1/m.
inline double mode_slope(double z, const BeamMode& beam) {
  detail::check_on_beam(z, beam, "mode_slope");
  return detail::mode_slope_unchecked(z, beam);
}

/// n(z) = alpha/sqrt(pi) exp(-alpha^2 (z - effective_center)^2), in 1/m.
inline double density_profile(double z, const DotProfile& dot, double effective_center) {
  const double u = dot.alpha() * (z - effective_center);
  return dot.alpha() / std::sqrt(constants::pi) * std::exp(-u * u);
}

struct ShiftedCenter {
  double center;
  std::optional<std::string> warning;
};

/// z'_c = z_c + e E_z / (m* omega0^2). Needs (m*, omega0) on the dot.
inline ShiftedCenter shifted_center(const BeamMode& beam, const DotProfile& dot, double field_Ez) {
  if (!dot.has_oscillator()) {
    throw DomainError("shifted_center: dot profile needs m_star and omega0 for a field shift");
  }
  const double stiffness = *dot.m_star() * *dot.omega0() * *dot.omega0();
  ShiftedCenter out{dot.center() + constants::elementary_charge * field_Ez / stiffness, std::nullopt};
  if (out.center < 0.0 || out.center > beam.length()) {
    std::ostringstream msg;
    msg << "shifted dot center " << out.center << " m lies outside the nanotube [0, " << beam.length()
        << "]; density tail is clipped by the integration range";
    out.warning = msg.str();
  }
  return out;
}

/// Warns when the Gaussian is broad enough that clipping it to [0, l] matters.
inline std::optional<std::string> tail_clipping_warning(const BeamMode& beam, const DotProfile& dot) {
  if (dot.alpha() * beam.length() < 20.0) {
    return "alpha*l < 20: clipping the dot density to [0, l] is no longer negligible";
  }
  return std::nullopt;
}

namespace detail {

inline constexpr double slope_rel_tol = 1e-8;

/// Integrates fn over [0, l] with a 31-point Gauss-Kronrod rule on fixed panels.
/// Panels are at most 1/alpha wide within 10/alpha of the peak, so narrow
/// densities are never stepped over, and at most l/16 wide elsewhere.
template <class F>
double integrate_on_beam(F&& fn, const BeamMode& beam, const DotProfile& dot, double effective_center,
                         const char* who) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double l = beam.length();
  const double w = 10.0 / dot.alpha();
  std::array<double, 5> cuts{0.0, effective_center - w, effective_center, effective_center + w, l};
  for (double& c : cuts) c = std::clamp(c, 0.0, l);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    const bool near_peak = i == 1 || i == 2;
    const double width = near_peak ? std::min(1.0 / dot.alpha(), l / 16) : l / 16;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    for (int j = 0; j < panels; ++j) {
      const double lo = a + (b - a) * j / panels;
      const double hi = j + 1 == panels ? b : a + (b - a) * (j + 1) / panels;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      // Integrate on [-1, 1] and rescale: some Boost versions leave the error
      // estimate in unscaled units for other intervals.
      double panel_error = 0.0;
      double panel_l1 = 0.0;
      total += half * Quadrature::integrate([&](double x) { return fn(mid + half * x); }, -1.0, 1.0, 0, 0.0,
                                            &panel_error, &panel_l1);
      error += half * panel_error;
      l1 += half * panel_l1;
    }
  }
  if (!(error <= slope_rel_tol * l1 + 1e-300)) {
    std::ostringstream msg;
    msg << who << ": quadrature did not converge (error " << error << ", L1 " << l1 << ")";
    throw NumericalError(msg.str(), total);
  }
  return total;
}

}  // namespace detail

/// <f'> = integral over [0, l] of f'(z) n(z), in 1/m.
inline double avg_slope(const BeamMode& beam, const DotProfile& dot, double effective_center) {
  return detail::integrate_on_beam(
      [&](double z) { return detail::mode_slope_unchecked(z, beam) * density_profile(z, dot, effective_center); },
      beam, dot, effective_center, "avg_slope");
}

/// Coupling energy g = Delta_so <f'> u0 / (2 sqrt 2), in eV. Signed.
inline double coupling_energy_eV(const CouplingParams& p, double effective_center) {
  return p.delta_so * avg_slope(p.beam, p.dot, effective_center) * p.beam.u0() / (2.0 * std::sqrt(2.0));
}

/// Coupling as plain frequency g/h, in MHz. Signed.
inline double coupling_strength(const CouplingParams& p, double effective_center) {
  return coupling_energy_eV(p, effective_center) / constants::planck_eV * 1e-6;
}

/// Axial sweet-spot field B*, in tesla.
///
/// The radicand is evaluated as printed, in reduced units: energies in ueV and
/// the orbital moment in units of mu_B (so mu_orb / mu_B^2 becomes mu_orb / mu_B).
inline double sweet_spot_field(const CouplingParams& p) {
  const double so_ueV = p.delta_so * 1e6;
  const double kkp_ueV = p.delta_kkp * 1e6;
  const double mu_orb_reduced = p.mu_orb / constants::bohr_magneton;
  double radicand = 1.0;
  if (kkp_ueV != 0.0) {
    const double denom = so_ueV * (mu_orb_reduced - 1.0);
    if (denom == 0.0) {
      throw DomainError("sweet_spot_field: mu_orb = mu_B with nonzero delta_kkp makes the radicand singular");
    }
    radicand = 1.0 - 4.0 * kkp_ueV * kkp_ueV / denom;
  }
  if (radicand < 0.0) {
    std::ostringstream msg;
    msg << "sweet_spot_field: negative radicand " << radicand << " for delta_so = " << so_ueV
        << " ueV, delta_kkp = " << kkp_ueV << " ueV, mu_orb = " << mu_orb_reduced << " mu_B";
    throw DomainError(msg.str());
  }
  const double so_J = p.delta_so * constants::elementary_charge;
  return so_J / (2.0 * constants::bohr_magneton) * std::sqrt(radicand);
}

}  // namespace cntspin
