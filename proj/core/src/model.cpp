#include "nhgwp/model.hpp"

#include <algorithm>
#include <string>

#include "nhgwp/error.hpp"

namespace nhgwp {

namespace {

template <typename T>
T ipow(T base, int n) {
  T result{1.0};
  for (int i = 0; i < n; ++i) result *= base;
  return result;
}

// d^order/dx^order of x^n evaluated at x, as (falling factorial) * x^(n-order).
Complex power_derivative(Complex x, int n, int order) {
  if (order > n) return Complex{0.0};
  double factor = 1.0;
  for (int i = 0; i < order; ++i) factor *= static_cast<double>(n - i);
  return factor * ipow(x, n - order);
}

}  // namespace

PolynomialPotential::PolynomialPotential(std::size_t dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ == 0) throw PreconditionViolation("polynomial dimension must be positive");
  for (const auto& term : terms_) {
    if (term.powers.size() != dim_) {
      throw DimensionMismatch("monomial has " + std::to_string(term.powers.size()) +
                              " exponents, polynomial dimension is " + std::to_string(dim_));
    }
    if (std::any_of(term.powers.begin(), term.powers.end(), [](int e) { return e < 0; })) {
      throw PreconditionViolation("monomial exponents must be non-negative");
    }
  }
}

PolynomialPotential PolynomialPotential::from_power_series(const std::vector<double>& coeffs) {
  std::vector<Monomial> terms;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n] != 0.0) terms.push_back({{static_cast<int>(n)}, coeffs[n]});
  }
  return PolynomialPotential(1, std::move(terms));
}

PolynomialPotential PolynomialPotential::harmonic(const RealVector& masses, const RealVector& omegas) {
  if (masses.size() != omegas.size()) throw DimensionMismatch("masses and omegas differ in length");
  const auto dim = static_cast<std::size_t>(masses.size());
  std::vector<Monomial> terms;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<int> powers(dim, 0);
    powers[j] = 2;
    terms.push_back({std::move(powers), 0.5 * masses[j] * omegas[j] * omegas[j]});
  }
  return PolynomialPotential(dim, std::move(terms));
}

int PolynomialPotential::degree() const noexcept {
  int deg = 0;
  for (const auto& term : terms_) {
    if (term.coeff == 0.0) continue;
    int d = 0;
    for (int e : term.powers) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

bool PolynomialPotential::is_zero() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) { return m.coeff == 0.0; });
}

Complex PolynomialPotential::value(const ComplexVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw DimensionMismatch("potential evaluated at a point of the wrong dimension");
  }
  Complex total{0.0};
  for (const auto& term : terms_) {
    Complex v{term.coeff};
    for (std::size_t j = 0; j < dim_; ++j) v *= ipow(x[static_cast<Eigen::Index>(j)], term.powers[j]);
    total += v;
  }
  return total;
}

double PolynomialPotential::value(const RealVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw DimensionMismatch("potential evaluated at a point of the wrong dimension");
  }
  double total = 0.0;
  for (const auto& term : terms_) {
    double v = term.coeff;
    for (std::size_t j = 0; j < dim_; ++j) v *= ipow(x[static_cast<Eigen::Index>(j)], term.powers[j]);
    total += v;
  }
  return total;
}

std::vector<double> PolynomialPotential::power_series() const {
  if (dim_ != 1) throw DimensionMismatch("power_series is only defined for 1D polynomials");
  std::vector<double> coeffs(static_cast<std::size_t>(degree()) + 1, 0.0);
  for (const auto& term : terms_) {
    if (term.coeff != 0.0) coeffs[static_cast<std::size_t>(term.powers[0])] += term.coeff;
  }
  return coeffs;
}

LocalExpansion potential_lha(const PolynomialPotential& potential, const ComplexVector& q) {
  const auto dim = static_cast<Eigen::Index>(potential.dim());
  if (q.size() != dim) throw DimensionMismatch("potential_lha: point has the wrong dimension");

  LocalExpansion out{Complex{0.0}, ComplexVector::Zero(dim), ComplexMatrix::Zero(dim, dim)};
  for (const auto& term : potential.terms()) {
    if (term.coeff == 0.0) continue;
    // Per-coordinate factors x^n, d/dx x^n, d2/dx2 x^n.
    std::vector<Complex> f0(static_cast<std::size_t>(dim)), f1(f0.size()), f2(f0.size());
    for (Eigen::Index j = 0; j < dim; ++j) {
      const int n = term.powers[static_cast<std::size_t>(j)];
      f0[static_cast<std::size_t>(j)] = power_derivative(q[j], n, 0);
      f1[static_cast<std::size_t>(j)] = power_derivative(q[j], n, 1);
      f2[static_cast<std::size_t>(j)] = power_derivative(q[j], n, 2);
    }
    auto product_except = [&](Eigen::Index a, Eigen::Index b) {
      Complex v{term.coeff};
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (j != a && j != b) v *= f0[static_cast<std::size_t>(j)];
      }
      return v;
    };
    out.value += product_except(-1, -1);
    for (Eigen::Index a = 0; a < dim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      out.gradient[a] += f1[ua] * product_except(a, -1);
      out.half_hessian(a, a) += 0.5 * f2[ua] * product_except(a, -1);
      for (Eigen::Index b = a + 1; b < dim; ++b) {
        const Complex h = 0.5 * f1[ua] * f1[static_cast<std::size_t>(b)] * product_except(a, b);
        out.half_hessian(a, b) += h;
        out.half_hessian(b, a) += h;
      }
    }
  }
  return out;
}

LinearVectorPotential LinearVectorPotential::constant(const RealVector& k) {
  return {RealVector::Zero(k.size()), k};
}

LinearVectorPotential LinearVectorPotential::none(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return {RealVector::Zero(n), RealVector::Zero(n)};
}

VectorPotentialValue eval_b(const LinearVectorPotential& vecpot, const ComplexVector& q) {
  if (vecpot.slope.size() != vecpot.offset.size() || q.size() != vecpot.slope.size()) {
    throw DimensionMismatch("eval_b: dimension mismatch");
  }
  ComplexVector b = vecpot.slope.cast<Complex>().cwiseProduct(q) + vecpot.offset.cast<Complex>();
  return {std::move(b), vecpot.slope};
}

ModelSpec::ModelSpec(RealVector masses, double hbar, PolynomialPotential potential,
                     LinearVectorPotential vecpot)
    : masses_(std::move(masses)),
      hbar_(hbar),
      potential_(std::move(potential)),
      vecpot_(std::move(vecpot)) {
  if (masses_.size() == 0) throw PreconditionViolation("model dimension must be positive");
  if (!(masses_.array() > 0.0).all()) throw PreconditionViolation("masses must be positive");
  if (!(hbar_ > 0.0)) throw PreconditionViolation("hbar must be positive");
  if (potential_.dim() != dim()) throw DimensionMismatch("potential dimension differs from model dimension");
  if (vecpot_.slope.size() != masses_.size() || vecpot_.offset.size() != masses_.size()) {
    throw DimensionMismatch("vector potential dimension differs from model dimension");
  }
}

void WavepacketState::symmetrize() {
  const ComplexMatrix sym = 0.5 * (alpha + alpha.transpose());
  alpha = sym;
}

void check_shape(const WavepacketState& state) {
  const auto d = state.q.size();
  if (d == 0 || state.p.size() != d || state.alpha.rows() != d || state.alpha.cols() != d) {
    throw DimensionMismatch("wavepacket state has inconsistent dimensions");
  }
}

void check_shape(const WavepacketState& state, const ModelSpec& model) {
  check_shape(state);
  if (state.dim() != model.dim()) throw DimensionMismatch("state and model dimensions differ");
}

bool is_normalizable(const WavepacketState& state) {
  const RealMatrix im = state.alpha.imag();
  if (!im.allFinite()) return false;
  Eigen::LLT<RealMatrix> llt(0.5 * (im + im.transpose()));
  return llt.info() == Eigen::Success;
}

void require_normalizable(const WavepacketState& state, const char* context) {
  if (!is_normalizable(state)) {
    throw NonNormalizable(std::string(context) + ": Im(alpha) is not positive definite");
  }
}

}  // namespace nhgwp
