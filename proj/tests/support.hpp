#pragma once

// Test-side references that share no code with the library: the complex
// classical flow from a matrix exponential, a standalone Gaussian evaluator,
// and the pointwise Schrodinger residual of the Gaussian ansatz.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhgwp/engine.hpp"
#include "nhgwp/model.hpp"

namespace ref {

using Complex = std::complex<double>;
inline constexpr Complex I{0.0, 1.0};

/// 1D model H = (P + i(s x + c))^2 / 2m + c0 + c1 x + c2 x^2.
struct Quadratic1D {
  double m = 1.0;
  double hbar = 1.0;
  double s = 0.0;
  double c = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

struct FlowSample {
  Complex q;
  Complex p;
  Complex alpha;
  double Q;  ///< maximum of |psi|^2
  double P;  ///< d(Re S)/dx at Q, the canonical momentum expectation
};

/// Centre of a 1D Gaussian: maximum of -Im(alpha y^2 + p y).
inline double density_peak(Complex alpha, Complex q, Complex p) {
  return ((2.0 * alpha * q).imag() - p.imag()) / (2.0 * alpha.imag());
}

/// Exact solution of the complex Hamilton equations (an affine flow for this
/// model), with alpha carried along by the tangent map delta p = 2 alpha delta q.
inline FlowSample flow(const Quadratic1D& h, Complex q0, Complex p0, Complex alpha0, double t) {
  Eigen::Matrix3cd gen = Eigen::Matrix3cd::Zero();
  // dq = (p + i (s q + c)) / m
  gen(0, 0) = I * h.s / h.m;
  gen(0, 1) = 1.0 / h.m;
  gen(0, 2) = I * h.c / h.m;
  // dp = -(c1 + 2 c2 q) - (i s / m)(p + i (s q + c))
  gen(1, 0) = h.s * h.s / h.m - 2.0 * h.c2;
  gen(1, 1) = -I * h.s / h.m;
  gen(1, 2) = -h.c1 + h.s * h.c / h.m;
  const Eigen::Matrix3cd flow = (gen * t).exp();

  const Eigen::Vector3cd z = flow * Eigen::Vector3cd(q0, p0, 1.0);
  const Complex slope = (flow(1, 0) + flow(1, 1) * 2.0 * alpha0) / (flow(0, 0) + flow(0, 1) * 2.0 * alpha0);
  FlowSample out{z[0], z[1], 0.5 * slope, 0.0, 0.0};
  out.Q = density_peak(out.alpha, out.q, out.p);
  out.P = (out.p + 2.0 * out.alpha * (out.Q - out.q)).real();
  return out;
}

inline Complex psi(Complex alpha, Complex q, Complex p, Complex gamma, double x, double hbar = 1.0) {
  const Complex y = x - q;
  return std::exp(I / hbar * (alpha * y * y + p * y + gamma));
}

/// (i hbar d/dt psi - H psi) / psi at x for a 1D Gaussian whose parameters
/// move with the given derivatives. H in position form:
///   -hbar^2/2m d2 + hbar b/m d + hbar b'/2m - b^2/2m + V.
inline Complex schrodinger_residual(const nhgwp::WavepacketState& st, const nhgwp::StateDerivative& d,
                                    const nhgwp::ModelSpec& model, double x) {
  const double hbar = model.hbar();
  const double m = model.masses()[0];
  const double s = model.vecpot().slope[0];
  const double c = model.vecpot().offset[0];
  const Complex a = st.alpha(0, 0);
  const Complex q = st.q[0];
  const Complex p = st.p[0];
  const Complex y = x - q;

  const Complex dS = d.dalpha(0, 0) * y * y - 2.0 * a * y * d.dq[0] + d.dp[0] * y - p * d.dq[0] + d.dgamma;
  const Complex lhs = -dS;  // i hbar (i/hbar) dS

  const Complex g1 = I / hbar * (2.0 * a * y + p);  // psi'/psi
  const Complex g2 = I / hbar * 2.0 * a + g1 * g1;  // psi''/psi
  const double b = s * x + c;
  Eigen::VectorXd xv(1);
  xv[0] = x;
  const double v = model.potential().value(xv);
  const Complex h = -hbar * hbar / (2.0 * m) * g2 + hbar * b / m * g1 + hbar * s / (2.0 * m) - b * b / (2.0 * m) + v;
  return lhs - h;
}

/// Random complex symmetric alpha with Im(alpha) >= floor * identity.
inline Eigen::MatrixXcd random_alpha(std::mt19937_64& rng, int dim, double floor = 0.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(dim, dim), r(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = u(rng);
      r(i, j) = u(rng);
    }
  }
  const Eigen::MatrixXd im = a * a.transpose() + floor * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd re = 0.5 * (r + r.transpose());
  Eigen::MatrixXcd out(dim, dim);
  out.real() = re;
  out.imag() = im;
  return out;
}

inline Eigen::VectorXcd random_cvec(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(u(rng), u(rng));
  return v;
}

inline nhgwp::WavepacketState random_state(std::mt19937_64& rng, int dim) {
  nhgwp::WavepacketState s;
  s.alpha = random_alpha(rng, dim);
  s.q = random_cvec(rng, dim);
  s.p = random_cvec(rng, dim, 2.0);
  s.gamma = random_cvec(rng, 1)[0];
  return s;
}

inline nhgwp::WavepacketState gaussian1d(Complex alpha, double q, double p, Complex gamma = 0.0) {
  nhgwp::WavepacketState s;
  s.alpha = Eigen::MatrixXcd::Constant(1, 1, alpha);
  s.q = Eigen::VectorXcd::Constant(1, q);
  s.p = Eigen::VectorXcd::Constant(1, p);
  s.gamma = gamma;
  return s;
}

inline nhgwp::ModelSpec model1d(std::vector<double> coeffs, double slope, double offset, double m = 1.0,
                                double hbar = 1.0) {
  Eigen::VectorXd masses(1), sl(1), off(1);
  masses[0] = m;
  sl[0] = slope;
  off[0] = offset;
  return nhgwp::ModelSpec(masses, hbar, nhgwp::PolynomialPotential::from_power_series(coeffs), {sl, off});
}

}  // namespace ref
