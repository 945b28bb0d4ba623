#pragma once

#include <vector>

#include "nhgwp/engine.hpp"
#include "nhgwp/model.hpp"

namespace nhgwp {

/// Observable (real) centre and momentum of a generalized Gaussian.
struct RealPhasePoint {
  RealVector Q;
  RealVector P;
};

/// Tolerance for imaginary residue on quantities that are real analytically.
inline constexpr double kRealityTolerance = 1e-10;

/// Q is the maximum of |psi|^2 (and its centroid); P = p + 2 alpha (Q - q),
/// whose imaginary part cancels by construction of Q.
RealPhasePoint to_real_phase_space(const WavepacketState& state);

/// The two combinations that fix the represented wavefunction:
///   p - 2 alpha q   and   gamma + q.alpha.q - p.q
struct RepresentationInvariants {
  ComplexVector linear;
  Complex constant;
};
RepresentationInvariants representation_invariants(const WavepacketState& state);

/// Same wavefunction, momentum parameter moved to `new_p`.
WavepacketState shift_representation(const WavepacketState& state, const ComplexVector& new_p);

/// Constant b = k: p -> p - i k so that the centre and its velocity start
/// real. The resulting q(t) is the Hermitian classical trajectory.
WavepacketState guiding_ic_constant(const WavepacketState& state0, const ModelSpec& model);

/// Linear b_j = k_j x_j + c_j: real starting centre and velocity for diagonal,
/// purely imaginary alpha(0).
WavepacketState guiding_ic_linear(const WavepacketState& state0, const ModelSpec& model);

/// Real centre for constant b from the guiding trajectory:
///   Q = q~ + (Im alpha)^-1 k / 2,   P = m v~ + Re alpha (Im alpha)^-1 k.
RealPhasePoint compute_real_center_constant(const RealVector& guiding_q, const RealVector& guiding_v,
                                            const ComplexMatrix& alpha_t, const ModelSpec& model);

/// m dQ/dt along a trajectory by finite differences (central inside,
/// one-sided at the ends). P from to_real_phase_space is the canonical
/// momentum expectation; this is the velocity-based one.
std::vector<RealVector> mechanical_momentum(const Trajectory& trajectory);

}  // namespace nhgwp
