#pragma once

// Operators on the truncated spin (x) phonon space. Spin is the slow index:
// basis index = s * fock_levels + n, s in {0, 1}, n in [0, fock_levels).

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "cntspin/errors.hpp"

namespace cntspin {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;

class HilbertSpec {
 public:
  explicit HilbertSpec(int fock_levels) : fock_levels_(fock_levels) {
    if (fock_levels < 2) throw DomainError("HilbertSpec: fock_levels must be >= 2");
  }

  int fock_levels() const noexcept { return fock_levels_; }
  int dim() const noexcept { return 2 * fock_levels_; }
  int index(int spin, int phonon) const noexcept { return spin * fock_levels_ + phonon; }

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

 private:
  int fock_levels_;
};

/// Kronecker product of arbitrary factors.
inline OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// spin_factor (x) phonon_factor, checked against the space.
inline OperatorMatrix tensor(const HilbertSpec& spec, const OperatorMatrix& spin_factor,
                             const OperatorMatrix& phonon_factor) {
  if (spin_factor.rows() != 2 || spin_factor.cols() != 2) {
    throw DomainError("tensor: spin factor must be 2x2");
  }
  const int n = spec.fock_levels();
  if (phonon_factor.rows() != n || phonon_factor.cols() != n) {
    throw DomainError("tensor: phonon factor must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  return kron(spin_factor, phonon_factor);
}

inline OperatorMatrix identity(const HilbertSpec& spec) { return OperatorMatrix::Identity(spec.dim(), spec.dim()); }

/// Truncated phonon lowering operator on the phonon factor alone.
inline OperatorMatrix phonon_annihilation(int fock_levels) {
  OperatorMatrix a = OperatorMatrix::Zero(fock_levels, fock_levels);
  for (int n = 1; n < fock_levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// I_2 (x) a.
inline OperatorMatrix annihilation(const HilbertSpec& spec) {
  return tensor(spec, OperatorMatrix::Identity(2, 2), phonon_annihilation(spec.fock_levels()));
}

struct SpinOperators {
  OperatorMatrix sigma1;
  OperatorMatrix sigma3;
  OperatorMatrix sigma_plus;   // |1><0|
  OperatorMatrix sigma_minus;  // |0><1|
};

inline SpinOperators spin_ops(const HilbertSpec& spec) {
  OperatorMatrix plus = OperatorMatrix::Zero(2, 2);
  plus(1, 0) = 1.0;
  OperatorMatrix minus = plus.adjoint();
  OperatorMatrix s3 = OperatorMatrix::Zero(2, 2);
  s3(0, 0) = -1.0;
  s3(1, 1) = 1.0;
  const OperatorMatrix id = OperatorMatrix::Identity(spec.fock_levels(), spec.fock_levels());
  return SpinOperators{
      tensor(spec, plus + minus, id),
      tensor(spec, s3, id),
      tensor(spec, plus, id),
      tensor(spec, minus, id),
  };
}

/// Lab-frame Hamiltonian (hbar = 1, angular frequencies):
/// H = omega_s/2 sigma3 + g (a + a^dag) sigma1 + omega_r a^dag a.
inline OperatorMatrix hamiltonian_full(const HilbertSpec& spec, double omega_s, double g, double omega_r) {
  const OperatorMatrix a = annihilation(spec);
  const OperatorMatrix ad = a.adjoint();
  const SpinOperators s = spin_ops(spec);
  return 0.5 * omega_s * s.sigma3 + g * (a + ad) * s.sigma1 + omega_r * ad * a;
}

/// Resonant Jaynes-Cummings interaction H_in = g (a sigma+ + a^dag sigma-).
inline OperatorMatrix hamiltonian_jc(const HilbertSpec& spec, double g) {
  const OperatorMatrix a = annihilation(spec);
  const SpinOperators s = spin_ops(spec);
  return g * (a * s.sigma_plus + a.adjoint() * s.sigma_minus);
}

/// |spin, phonon><spin, phonon|.
inline OperatorMatrix basis_projector(const HilbertSpec& spec, int spin, int phonon) {
  OperatorMatrix p = OperatorMatrix::Zero(spec.dim(), spec.dim());
  const int i = spec.index(spin, phonon);
  p(i, i) = 1.0;
  return p;
}

inline Eigen::VectorXcd basis_ket(const HilbertSpec& spec, int spin, int phonon) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.dim());
  v(spec.index(spin, phonon)) = 1.0;
  return v;
}

/// max |A - A^dag|.
inline double hermiticity_residual(const OperatorMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace cntspin
