#pragma once

#include <variant>

#include "nhgwp/types.hpp"

namespace nhgwp::oracle {

// Closed-form 1D solutions for a constant imaginary vector potential b = k,
// starting from a real Gaussian with alpha(0) = i hbar / (2 sigma0^2) centred
// at (q0, p0). guide_q is the real guiding trajectory that starts at
// q0 - sigma0^2 k / hbar.

struct FreeParticle {};
struct LinearRamp {
  double beta = 0.0;  ///< V(x) = beta x
};
struct Harmonic {
  double omega = 1.0;  ///< V(x) = m omega^2 x^2 / 2
};
using Scenario = std::variant<FreeParticle, LinearRamp, Harmonic>;

struct OracleParams {
  double m = 1.0;
  double hbar = 1.0;
  double k = 0.0;
  double sigma0_sq = 1.0;
  double q0 = 0.0;
  double p0 = 0.0;
  Scenario scenario = FreeParticle{};

  /// Throws PreconditionViolation on non-positive m, hbar, sigma0^2 or omega.
  void validate() const;
  Complex alpha0() const { return Complex{0.0, hbar / (2.0 * sigma0_sq)}; }
  double guide_q0() const { return q0 - sigma0_sq * k / hbar; }
};

struct FreeParticleSample {
  double guide_q;
  Complex alpha;
  double Q;
  double P;
};
FreeParticleSample free_particle(const OracleParams& params, double t);

struct RampSample {
  double p;  ///< real part of the guiding momentum, p0 - beta t
  double guide_q;
  double Q;
};
RampSample linear_ramp(const OracleParams& params, double t);

/// Ramp slope at which the external force cancels the drift from k.
double critical_beta(const OracleParams& params);

struct HarmonicSample {
  double guide_q;
  Complex alpha;
  double Q;
};
/// alpha(t) comes from the linear lift alpha = (m/2) u'/u with u'' = -omega^2 u,
/// which has no singularity at omega t = n pi.
HarmonicSample harmonic(const OracleParams& params, double t);

/// Uniform view over all scenarios. P is built from the guiding velocity and
/// alpha(t) as m v + Re(alpha) k / Im(alpha).
struct OracleSample {
  double guide_q;
  double guide_v;
  Complex alpha;
  double Q;
  double P;
};
OracleSample evaluate(const OracleParams& params, double t);

}  // namespace nhgwp::oracle
