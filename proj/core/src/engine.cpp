#include "nhgwp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nhgwp/error.hpp"

namespace nhgwp {

namespace {

WavepacketState advance(const WavepacketState& s, const StateDerivative& d, double h) {
  WavepacketState out;
  out.alpha = s.alpha + h * d.dalpha;
  out.q = s.q + h * d.dq;
  out.p = s.p + h * d.dp;
  out.gamma = s.gamma + h * d.dgamma;
  out.t = s.t + h;
  return out;
}

}  // namespace

StateDerivative rhs(const WavepacketState& state, const ModelSpec& model) {
  check_shape(state, model);
  const auto dim = static_cast<Eigen::Index>(state.dim());
  const RealVector& m = model.masses();
  const double hbar = model.hbar();

  const LocalExpansion v = potential_lha(model.potential(), state.q);
  const auto [b, b1] = eval_b(model.vecpot(), state.q);

  const ComplexVector kinetic = state.p + I * b;  // p + i b
  const ComplexVector inv_m = m.cwiseInverse().cast<Complex>();

  StateDerivative d;
  d.dq = kinetic.cwiseProduct(inv_m);
  d.dp = -v.gradient - I * (b1.cwiseQuotient(m)).cast<Complex>().cwiseProduct(kinetic);

  // alpha M^-1 alpha
  const ComplexMatrix quad = state.alpha * inv_m.asDiagonal() * state.alpha;
  ComplexMatrix drive = v.half_hessian + 2.0 * quad;
  for (Eigen::Index k = 0; k < dim; ++k) {
    drive(k, k) -= b1[k] * b1[k] / (2.0 * m[k]);
    for (Eigen::Index l = 0; l < dim; ++l) {
      drive(k, l) += I * state.alpha(k, l) * (b1[l] / m[l] + b1[k] / m[k]);
    }
  }
  d.dalpha = -drive;

  Complex dgamma = -v.value;
  for (Eigen::Index j = 0; j < dim; ++j) {
    dgamma += state.p[j] * state.p[j] / (2.0 * m[j]);
    dgamma += I * hbar * state.alpha(j, j) / m[j];
    dgamma += (b[j] * b[j] - hbar * b1[j]) / (2.0 * m[j]);
  }
  d.dgamma = dgamma;
  return d;
}

WavepacketState step_rk4(const WavepacketState& state, const ModelSpec& model, double dt) {
  if (dt < 0.0 || !std::isfinite(dt)) throw PreconditionViolation("step_rk4: dt must be non-negative");
  if (dt == 0.0) return state;

  const StateDerivative k1 = rhs(state, model);
  const StateDerivative k2 = rhs(advance(state, k1, 0.5 * dt), model);
  const StateDerivative k3 = rhs(advance(state, k2, 0.5 * dt), model);
  const StateDerivative k4 = rhs(advance(state, k3, dt), model);

  WavepacketState out;
  const double w = dt / 6.0;
  out.alpha = state.alpha + w * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha);
  out.q = state.q + w * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
  out.p = state.p + w * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  out.gamma = state.gamma + w * (k1.dgamma + 2.0 * k2.dgamma + 2.0 * k3.dgamma + k4.dgamma);
  out.t = state.t + dt;
  out.symmetrize();

  if (!is_normalizable(out)) {
    throw NonNormalizable("step_rk4 at t=" + std::to_string(out.t) +
                          ": Im(alpha) lost positive definiteness (dt too large?)");
  }
  return out;
}

Trajectory propagate(const WavepacketState& state0, const ModelSpec& model, double t_final,
                     double dt, int sample_stride) {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw PreconditionViolation("propagate: t_final must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionViolation("propagate: dt must be positive");
  if (sample_stride < 1) throw PreconditionViolation("propagate: sample_stride must be at least 1");
  check_shape(state0, model);
  require_normalizable(state0, "propagate");

  // Full steps, plus one shortened landing step if t_final is not a multiple of dt.
  const double ratio = t_final / dt;
  auto full_steps = static_cast<long long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(full_steps)) > 1e-9 * std::max(1.0, ratio)) {
    full_steps = static_cast<long long>(std::floor(ratio));
  }
  const double remainder = t_final - static_cast<double>(full_steps) * dt;
  const bool landing = remainder > 1e-12 * t_final;

  Trajectory traj;
  traj.model = model;
  traj.dt = dt;
  traj.sample_stride = sample_stride;
  traj.samples.reserve(static_cast<std::size_t>(full_steps / sample_stride) + 3);

  const double t0 = state0.t;
  WavepacketState state = state0;
  traj.samples.push_back(state);
  for (long long i = 1; i <= full_steps; ++i) {
    state = step_rk4(state, model, dt);
    state.t = t0 + static_cast<double>(i) * dt;
    const bool last = (i == full_steps) && !landing;
    if (last) state.t = t0 + t_final;
    if (i % sample_stride == 0 || last) traj.samples.push_back(state);
  }
  if (landing) {
    state = step_rk4(state, model, remainder);
    state.t = t0 + t_final;
    traj.samples.push_back(state);
  }
  return traj;
}

ComplexVector eom1_residual(const WavepacketState& state, const StateDerivative& deriv,
                            const ModelSpec& model) {
  check_shape(state, model);
  const RealVector& m = model.masses();
  const LocalExpansion v = potential_lha(model.potential(), state.q);
  const auto [b, b1] = eval_b(model.vecpot(), state.q);
  const ComplexVector inv_m = m.cwiseInverse().cast<Complex>();
  const ComplexVector b1c = b1.cast<Complex>();

  const ComplexVector lhs = 2.0 * state.alpha * deriv.dq - deriv.dp;
  const ComplexVector rhs_side = v.gradient - b.cwiseProduct(b1c).cwiseProduct(inv_m) +
                                 2.0 * state.alpha * (state.p + I * b).cwiseProduct(inv_m) +
                                 I * state.p.cwiseProduct(b1c).cwiseProduct(inv_m);
  return lhs - rhs_side;
}

}  // namespace nhgwp
