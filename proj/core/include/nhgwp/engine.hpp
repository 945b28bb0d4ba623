#pragma once

#include <vector>

#include "nhgwp/model.hpp"

namespace nhgwp {

/// Time derivatives of the Gaussian parameters.
struct StateDerivative {
  ComplexMatrix dalpha;
  ComplexVector dq;
  ComplexVector dp;
  Complex dgamma{0.0, 0.0};
};

/// Right-hand side of the Gaussian wavepacket equations of motion.
///
/// Centre and momentum follow the complex classical equations
///   dq_j = (p_j + i b_j) / m_j
///   dp_j = -dV/dq_j - (i b'_j / m_j)(p_j + i b_j)
/// alpha follows the matrix Riccati equation
///   -dalpha = V2 - diag(b'^2 / 2m) + i (alpha_kl b'_l/m_l + alpha_kl b'_k/m_k) + 2 alpha M^-1 alpha
/// (V2 = Hessian / 2, cross term symmetrized so alpha stays symmetric), and
///   dgamma = sum_j p_j^2/2m_j - V + i hbar sum_j alpha_jj/m_j + sum_j (b_j^2 - hbar b'_j) / 2m_j.
StateDerivative rhs(const WavepacketState& state, const ModelSpec& model);

/// Classical RK4 step. Throws NonNormalizable if Im(alpha) stops being positive definite.
WavepacketState step_rk4(const WavepacketState& state, const ModelSpec& model, double dt);

struct Trajectory {
  std::vector<WavepacketState> samples;
  ModelSpec model;
  double dt = 0.0;
  int sample_stride = 1;
};

/// Integrate from state0.t to state0.t + t_final with fixed step dt. The last
/// step is shortened to land exactly on the final time. Samples are taken
/// every `sample_stride` steps, plus the initial and the final state.
Trajectory propagate(const WavepacketState& state0, const ModelSpec& model, double t_final,
                     double dt, int sample_stride);

/// LHS - RHS of the linear-in-(x-q) consistency condition between (dq, dp)
/// and (alpha, q, p):
///   2 alpha dq - dp - [V1 - b b'/m + 2 alpha M^-1 (p + i b) + i p b'/m].
/// Vanishes when dq and dp come from `rhs`.
ComplexVector eom1_residual(const WavepacketState& state, const StateDerivative& deriv,
                            const ModelSpec& model);

}  // namespace nhgwp
