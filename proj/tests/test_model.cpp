#include <doctest.h>

#include <cmath>
#include <random>

#include "nhgwp/error.hpp"
#include "nhgwp/model.hpp"
#include "support.hpp"

using namespace nhgwp;
using ref::Complex;

namespace {

ComplexVector cv(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("potential_lha of the unit harmonic potential at the origin") {
  const auto v = PolynomialPotential::from_power_series({0.0, 0.0, 0.5});
  const auto e = potential_lha(v, cv({0.0}));
  CHECK(std::abs(e.value) == 0.0);
  CHECK(std::abs(e.gradient[0]) == 0.0);
  CHECK(e.half_hessian(0, 0) == Complex(0.5, 0.0));
}

TEST_CASE("potential_lha of the quartic at q = 1") {
  // V = x^2/2 + 0.01 x^4: V(1) = 0.51, V'(1) = 1 + 0.04, V''(1)/2 = (1 + 0.12)/2.
  const auto v = PolynomialPotential::from_power_series({0.0, 0.0, 0.5, 0.0, 0.01});
  const auto e = potential_lha(v, cv({1.0}));
  CHECK(std::abs(e.value - 0.51) < 1e-15);
  CHECK(std::abs(e.gradient[0] - 1.04) < 1e-15);
  CHECK(std::abs(e.half_hessian(0, 0) - 0.56) < 1e-15);
}

TEST_CASE("potential_lha of a linear ramp") {
  const auto v = PolynomialPotential::from_power_series({0.0, 16.0});
  const auto e = potential_lha(v, cv({Complex(2.0, 0.0)}));
  CHECK(e.value == Complex(32.0, 0.0));
  CHECK(e.gradient[0] == Complex(16.0, 0.0));
  CHECK(e.half_hessian(0, 0) == Complex(0.0, 0.0));
}

TEST_CASE("potential_lha matches symbolic derivatives of a 2D polynomial at complex points") {
  // V = 3 x^2 y - x y^3 + 2 y^2 + 0.5 x
  const PolynomialPotential v(2, {{{2, 1}, 3.0}, {{1, 3}, -1.0}, {{0, 2}, 2.0}, {{1, 0}, 0.5}});
  const Complex x(0.3, -0.7);
  const Complex y(-1.1, 0.4);
  const auto e = potential_lha(v, cv({x, y}));
  const Complex val = 3.0 * x * x * y - x * y * y * y + 2.0 * y * y + 0.5 * x;
  const Complex vx = 6.0 * x * y - y * y * y + 0.5;
  const Complex vy = 3.0 * x * x - 3.0 * x * y * y + 4.0 * y;
  const Complex vxx = 6.0 * y;
  const Complex vxy = 6.0 * x - 3.0 * y * y;
  const Complex vyy = -6.0 * x * y + 4.0;
  CHECK(std::abs(e.value - val) < 1e-14);
  CHECK(std::abs(e.gradient[0] - vx) < 1e-14);
  CHECK(std::abs(e.gradient[1] - vy) < 1e-14);
  CHECK(std::abs(e.half_hessian(0, 0) - 0.5 * vxx) < 1e-14);
  CHECK(std::abs(e.half_hessian(0, 1) - 0.5 * vxy) < 1e-14);
  CHECK(std::abs(e.half_hessian(1, 0) - 0.5 * vxy) < 1e-14);
  CHECK(std::abs(e.half_hessian(1, 1) - 0.5 * vyy) < 1e-14);
}

TEST_CASE("local expansion reproduces quadratic polynomials exactly") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const PolynomialPotential v(2, {{{0, 0}, u(rng)}, {{1, 0}, u(rng)}, {{0, 1}, u(rng)},
                                    {{2, 0}, u(rng)}, {{1, 1}, u(rng)}, {{0, 2}, u(rng)}});
    const ComplexVector q = ref::random_cvec(rng, 2);
    const ComplexVector x = ref::random_cvec(rng, 2, 3.0);
    const auto e = potential_lha(v, q);
    const ComplexVector y = x - q;
    const Complex model = e.value + (e.gradient.transpose() * y)(0, 0) + (y.transpose() * e.half_hessian * y)(0, 0);
    CHECK(std::abs(model - v.value(x)) < 1e-12);
  }
}

TEST_CASE("local expansion error of a quartic shrinks as delta^3") {
  const auto v = PolynomialPotential::from_power_series({0.0, 0.0, 0.5, 0.3, 0.01});
  const ComplexVector q = cv({Complex(0.7, 0.2)});
  const auto e = potential_lha(v, q);
  auto error = [&](double delta) {
    const Complex y(delta, 0.5 * delta);
    const Complex model = e.value + e.gradient[0] * y + e.half_hessian(0, 0) * y * y;
    return std::abs(model - v.value(cv({q[0] + y})));
  };
  for (double delta : {1e-1, 5e-2, 2.5e-2}) {
    const double ratio = error(delta) / error(0.5 * delta);
    CHECK(ratio == doctest::Approx(8.0).epsilon(0.1));
  }
}

TEST_CASE("complex evaluation at real points agrees with real arithmetic") {
  const PolynomialPotential v(2, {{{3, 0}, 0.2}, {{1, 2}, -1.5}, {{0, 0}, 4.0}});
  RealVector x(2);
  x << 1.3, -0.4;
  const auto e = potential_lha(v, x.cast<Complex>());
  CHECK(e.value.imag() == 0.0);
  CHECK(e.value.real() == doctest::Approx(v.value(x)).epsilon(1e-15));
  CHECK(e.gradient.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(PolynomialPotential(0, {}), PreconditionViolation);
  CHECK_THROWS_AS(PolynomialPotential(2, {{{1}, 1.0}}), DimensionMismatch);
  CHECK_THROWS_AS(PolynomialPotential(1, {{{-1}, 1.0}}), PreconditionViolation);
  const auto v = PolynomialPotential::from_power_series({1.0, 2.0});
  CHECK_THROWS_AS(potential_lha(v, cv({1.0, 2.0})), DimensionMismatch);
  CHECK(v.degree() == 1);
  CHECK(PolynomialPotential::from_power_series({0.0, 0.0}).is_zero());
  CHECK(PolynomialPotential::from_power_series({1.0, 0.0, 0.5}).power_series() == std::vector<double>{1.0, 0.0, 0.5});
}

TEST_CASE("harmonic factory") {
  RealVector m(2), w(2);
  m << 1.0, 2.0;
  w << 1.0, 3.0;
  const auto v = PolynomialPotential::harmonic(m, w);
  RealVector x(2);
  x << 0.5, -1.0;
  CHECK(v.value(x) == doctest::Approx(0.5 * 0.25 + 0.5 * 2.0 * 9.0));
}

TEST_CASE("eval_b for constant and linear vector potentials") {
  RealVector one(1), zero(1), slope(1);
  one << 1.0;
  zero << 0.0;
  slope << 0.1;

  const auto constant = eval_b(LinearVectorPotential::constant(one), cv({Complex(3.0, -2.0)}));
  CHECK(constant.b[0] == Complex(1.0, 0.0));
  CHECK(constant.b_prime[0] == 0.0);

  const LinearVectorPotential lin{slope, one};
  const auto at0 = eval_b(lin, cv({0.0}));
  CHECK(at0.b[0] == Complex(1.0, 0.0));
  CHECK(at0.b_prime[0] == 0.1);

  const auto shifted = eval_b(lin, cv({-1.0 / 8.1}));
  CHECK(shifted.b[0].real() == doctest::Approx(1.0 - 0.1 / 8.1).epsilon(1e-15));
  CHECK(shifted.b[0].real() == doctest::Approx(0.98765).epsilon(1e-5));
  CHECK(shifted.b_prime[0] == 0.1);

  CHECK_THROWS_AS(eval_b(lin, cv({0.0, 1.0})), DimensionMismatch);
}

TEST_CASE("model validation") {
  RealVector m(1), bad(1), k(1);
  m << 1.0;
  bad << -1.0;
  k << 0.0;
  const auto v = PolynomialPotential::from_power_series({0.0});
  CHECK_NOTHROW(ModelSpec(m, 1.0, v, LinearVectorPotential::constant(k)));
  CHECK_THROWS_AS(ModelSpec(bad, 1.0, v, LinearVectorPotential::constant(k)), PreconditionViolation);
  CHECK_THROWS_AS(ModelSpec(m, 0.0, v, LinearVectorPotential::constant(k)), PreconditionViolation);
  CHECK_THROWS_AS(ModelSpec(m, 1.0, PolynomialPotential(2, {}), LinearVectorPotential::constant(k)),
                  DimensionMismatch);
  CHECK_THROWS_AS(ModelSpec(m, 1.0, v, LinearVectorPotential::none(2)), DimensionMismatch);
}

TEST_CASE("state shape and normalizability") {
  auto s = ref::gaussian1d(Complex(0.0, 4.0), 0.0, 0.0);
  CHECK(is_normalizable(s));
  s.alpha(0, 0) = Complex(1.0, -0.1);
  CHECK_FALSE(is_normalizable(s));
  CHECK_THROWS_AS(require_normalizable(s, "test"), NonNormalizable);

  WavepacketState bad = ref::gaussian1d(Complex(0.0, 1.0), 0.0, 0.0);
  bad.p = ComplexVector::Zero(2);
  CHECK_THROWS_AS(check_shape(bad), DimensionMismatch);

  std::mt19937_64 rng(3);
  WavepacketState r = ref::random_state(rng, 3);
  r.alpha(0, 2) += Complex(0.25, 0.0);
  r.symmetrize();
  CHECK((r.alpha - r.alpha.transpose()).cwiseAbs().maxCoeff() == 0.0);
}
