#include "nhgwp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nhgwp/error.hpp"

namespace nhgwp {

namespace {

bool is_real(const ComplexVector& v, double tol) {
  return v.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, v.real().cwiseAbs().maxCoeff());
}

void require_real_initial_conditions(const WavepacketState& s, const char* context) {
  constexpr double tol = 1e-12;
  if (!is_real(s.q, tol) || !is_real(s.p, tol)) {
    throw PreconditionViolation(std::string(context) + ": q(0) and p(0) must be real");
  }
  const double scale = std::max(1.0, s.alpha.cwiseAbs().maxCoeff());
  if (s.alpha.real().cwiseAbs().maxCoeff() > tol * scale) {
    throw PreconditionViolation(std::string(context) + ": alpha(0) must be purely imaginary");
  }
}

// After a guiding transform the centre and the velocity must come out real.
// The imaginary residue is checked and then dropped; gamma is recomputed from
// the invariants so the wavefunction is unchanged.
WavepacketState finish_guiding(const WavepacketState& original, WavepacketState shifted,
                               const ModelSpec& model, const char* context) {
  const auto [b, b1] = eval_b(model.vecpot(), shifted.q);
  const ComplexVector velocity = (shifted.p + I * b).cwiseQuotient(model.masses().cast<Complex>());
  if (!is_real(shifted.q, kRealityTolerance) || !is_real(velocity, kRealityTolerance)) {
    throw RealityViolation(std::string(context) + ": transformed centre or velocity is not real");
  }
  shifted.q = shifted.q.real().cast<Complex>();
  const RepresentationInvariants inv = representation_invariants(original);
  shifted.gamma = inv.constant - (shifted.q.transpose() * shifted.alpha * shifted.q)(0, 0) +
                  (shifted.p.transpose() * shifted.q)(0, 0);
  return shifted;
}

}  // namespace

RealPhasePoint to_real_phase_space(const WavepacketState& state) {
  check_shape(state);
  require_normalizable(state, "to_real_phase_space");
  const RealMatrix re = state.alpha.real();
  const RealMatrix im = state.alpha.imag();
  const RealVector rhs = re * state.q.imag() - 0.5 * state.p.imag();
  RealPhasePoint out;
  out.Q = state.q.real() + im.llt().solve(rhs);

  const ComplexVector momentum = state.p + 2.0 * state.alpha * (out.Q.cast<Complex>() - state.q);
  const double scale = std::max(1.0, state.p.cwiseAbs().maxCoeff() +
                                         2.0 * (state.alpha * (out.Q.cast<Complex>() - state.q))
                                                   .cwiseAbs()
                                                   .maxCoeff());
  if (momentum.imag().cwiseAbs().maxCoeff() > kRealityTolerance * scale) {
    throw RealityViolation("to_real_phase_space: momentum has a non-cancelling imaginary part");
  }
  out.P = momentum.real();
  return out;
}

RepresentationInvariants representation_invariants(const WavepacketState& state) {
  check_shape(state);
  RepresentationInvariants inv;
  inv.linear = state.p - 2.0 * state.alpha * state.q;
  // Bilinear (not sesquilinear) forms throughout.
  inv.constant = state.gamma + (state.q.transpose() * state.alpha * state.q)(0, 0) -
                 (state.p.transpose() * state.q)(0, 0);
  return inv;
}

WavepacketState shift_representation(const WavepacketState& state, const ComplexVector& new_p) {
  check_shape(state);
  if (new_p.size() != state.q.size()) throw DimensionMismatch("shift_representation: new_p has wrong size");
  require_normalizable(state, "shift_representation");

  const RepresentationInvariants inv = representation_invariants(state);
  WavepacketState out = state;
  out.p = new_p;
  out.q = state.q + 0.5 * state.alpha.partialPivLu().solve(ComplexVector(new_p - state.p));
  out.gamma = inv.constant - (out.q.transpose() * out.alpha * out.q)(0, 0) +
              (out.p.transpose() * out.q)(0, 0);
  return out;
}

WavepacketState guiding_ic_constant(const WavepacketState& state0, const ModelSpec& model) {
  check_shape(state0, model);
  if (!model.vecpot().is_constant()) {
    throw PreconditionViolation("guiding_ic_constant: vector potential has a non-zero slope");
  }
  require_real_initial_conditions(state0, "guiding_ic_constant");
  require_normalizable(state0, "guiding_ic_constant");
  const ComplexVector new_p = state0.p - I * model.vecpot().offset.cast<Complex>();
  return finish_guiding(state0, shift_representation(state0, new_p), model, "guiding_ic_constant");
}

WavepacketState guiding_ic_linear(const WavepacketState& state0, const ModelSpec& model) {
  check_shape(state0, model);
  require_real_initial_conditions(state0, "guiding_ic_linear");
  require_normalizable(state0, "guiding_ic_linear");
  const auto dim = static_cast<Eigen::Index>(state0.dim());
  const RealMatrix im = state0.alpha.imag();
  const double scale = std::max(1.0, im.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i != j && std::abs(im(i, j)) > 1e-12 * scale) {
        throw PreconditionViolation("guiding_ic_linear: alpha(0) must be diagonal");
      }
    }
  }

  const LinearVectorPotential& vp = model.vecpot();
  const ComplexVector b0 = eval_b(vp, state0.q).b;
  ComplexVector f_term(dim);  // i f = -2 alpha(0) (2 Im alpha + K)^-1 b(q(0))
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double denom = 2.0 * im(j, j) + vp.slope[j];
    if (std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(2.0 * im(j, j)))) {
      throw SingularTransform("guiding_ic_linear: 2 Im alpha + k is singular in dimension " +
                              std::to_string(j));
    }
    f_term[j] = b0[j] / denom;
  }
  f_term = -2.0 * state0.alpha * f_term;
  return finish_guiding(state0, shift_representation(state0, state0.p + f_term), model,
                        "guiding_ic_linear");
}

RealPhasePoint compute_real_center_constant(const RealVector& guiding_q, const RealVector& guiding_v,
                                            const ComplexMatrix& alpha_t, const ModelSpec& model) {
  if (!model.vecpot().is_constant()) {
    throw PreconditionViolation("compute_real_center_constant: vector potential has a non-zero slope");
  }
  const auto dim = static_cast<Eigen::Index>(model.dim());
  if (guiding_q.size() != dim || guiding_v.size() != dim || alpha_t.rows() != dim || alpha_t.cols() != dim) {
    throw DimensionMismatch("compute_real_center_constant: dimension mismatch");
  }
  const RealMatrix im = alpha_t.imag();
  Eigen::LLT<RealMatrix> llt(im);
  if (llt.info() != Eigen::Success) {
    throw NonNormalizable("compute_real_center_constant: Im(alpha) is not positive definite");
  }
  const RealVector im_inv_k = llt.solve(model.vecpot().offset);
  RealPhasePoint out;
  out.Q = guiding_q + 0.5 * im_inv_k;
  out.P = model.masses().cwiseProduct(guiding_v) + alpha_t.real() * im_inv_k;
  return out;
}

std::vector<RealVector> mechanical_momentum(const Trajectory& trajectory) {
  const auto& samples = trajectory.samples;
  if (samples.size() < 2) throw PreconditionViolation("mechanical_momentum: need at least two samples");
  std::vector<RealVector> centres;
  centres.reserve(samples.size());
  for (const auto& s : samples) centres.push_back(to_real_phase_space(s).Q);

  const RealVector& m = trajectory.model.masses();
  std::vector<RealVector> out(samples.size());
  const std::size_t last = samples.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == last ? last : i + 1;
    const double span = samples[hi].t - samples[lo].t;
    out[i] = m.cwiseProduct((centres[hi] - centres[lo]) / span);
  }
  return out;
}

}  // namespace nhgwp
