#pragma once

#include <cstddef>
#include <vector>

#include "nhgwp/types.hpp"

namespace nhgwp {

/// One term c * prod_j x_j^{powers[j]} of a multivariate polynomial.
struct Monomial {
  std::vector<int> powers;
  double coeff = 0.0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Value, gradient and half Hessian of a potential at a (complex) point.
///
/// The quadratic form used by the wavepacket equations is
///   V(x) ~ V(q) + grad . (x - q) + (x - q) . half_hessian . (x - q)
/// with no factor 1/2 in front of the last term, so `half_hessian` really is
/// the Hessian divided by two. Feeding the full Hessian in its place is the
/// classic way to break the harmonic fixed point alpha = i m omega / 2.
struct LocalExpansion {
  Complex value;
  ComplexVector gradient;
  ComplexMatrix half_hessian;
};

/// Real-coefficient polynomial in D variables. Evaluation at complex points is
/// the analytic continuation of the real polynomial.
class PolynomialPotential {
 public:
  PolynomialPotential() = default;
  PolynomialPotential(std::size_t dim, std::vector<Monomial> terms);

  /// 1D polynomial from dense power coefficients c0 + c1 x + c2 x^2 + ...
  static PolynomialPotential from_power_series(const std::vector<double>& coeffs);

  /// sum_j 1/2 m_j omega_j^2 x_j^2
  static PolynomialPotential harmonic(const RealVector& masses, const RealVector& omegas);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  int degree() const noexcept;
  bool is_zero() const noexcept;

  Complex value(const ComplexVector& x) const;
  double value(const RealVector& x) const;
  /// Dense power coefficients of a 1D polynomial (index = power).
  std::vector<double> power_series() const;

  friend bool operator==(const PolynomialPotential&, const PolynomialPotential&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Monomial> terms_;
};

/// Exact value, gradient and half Hessian of `potential` at `q`.
LocalExpansion potential_lha(const PolynomialPotential& potential, const ComplexVector& q);

/// Separable linear imaginary vector potential b_j(x_j) = slope_j x_j + offset_j.
struct LinearVectorPotential {
  RealVector slope;
  RealVector offset;

  static LinearVectorPotential constant(const RealVector& k);
  static LinearVectorPotential none(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(slope.size()); }
  bool is_constant() const noexcept { return (slope.array() == 0.0).all(); }

  friend bool operator==(const LinearVectorPotential& a, const LinearVectorPotential& b) {
    return a.slope == b.slope && a.offset == b.offset;
  }
};

struct VectorPotentialValue {
  ComplexVector b;
  RealVector b_prime;
};

VectorPotentialValue eval_b(const LinearVectorPotential& vecpot, const ComplexVector& q);

/// Physical model: H = sum_j (P_j + i b_j(X_j))^2 / 2 m_j + V(X).
class ModelSpec {
 public:
  ModelSpec() = default;
  /// Throws DimensionMismatch / PreconditionViolation on inconsistent input.
  ModelSpec(RealVector masses, double hbar, PolynomialPotential potential,
            LinearVectorPotential vecpot);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(masses_.size()); }
  const RealVector& masses() const noexcept { return masses_; }
  double hbar() const noexcept { return hbar_; }
  const PolynomialPotential& potential() const noexcept { return potential_; }
  const LinearVectorPotential& vecpot() const noexcept { return vecpot_; }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
    return a.masses_ == b.masses_ && a.hbar_ == b.hbar_ && a.potential_ == b.potential_ &&
           a.vecpot_ == b.vecpot_;
  }

 private:
  RealVector masses_;
  double hbar_ = 1.0;
  PolynomialPotential potential_;
  LinearVectorPotential vecpot_;
};

/// Generalized Gaussian
///   psi(x) = exp((i/hbar) [(x-q).alpha.(x-q) + p.(x-q) + gamma])
/// with all parameters complex. Distinct parameter sets can describe the same
/// wavefunction; see transforms.hpp.
struct WavepacketState {
  ComplexMatrix alpha;
  ComplexVector q;
  ComplexVector p;
  Complex gamma{0.0, 0.0};
  double t = 0.0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(q.size()); }

  /// Replace alpha by (alpha + alpha^T) / 2.
  void symmetrize();
};

/// Throws DimensionMismatch unless alpha is DxD and q, p have length D.
void check_shape(const WavepacketState& state);
void check_shape(const WavepacketState& state, const ModelSpec& model);

/// True when Im(alpha) is symmetric positive definite.
bool is_normalizable(const WavepacketState& state);
/// Throws NonNormalizable unless Im(alpha) is positive definite.
void require_normalizable(const WavepacketState& state, const char* context);

}  // namespace nhgwp
