#include "nhgwp/oracles.hpp"

#include <cmath>
#include <string>

#include "nhgwp/error.hpp"

namespace nhgwp::oracle {

namespace {

template <typename T>
const T& require(const OracleParams& params, const char* name) {
  const T* s = std::get_if<T>(&params.scenario);
  if (s == nullptr) throw PreconditionViolation(std::string(name) + ": oracle scenario mismatch");
  params.validate();
  return *s;
}

Complex free_alpha(const OracleParams& p, double t) {
  const Complex a0 = p.alpha0();
  return p.m * a0 / (2.0 * a0 * t + p.m);
}

Complex harmonic_alpha(const OracleParams& p, double omega, double t) {
  // u = (m omega / 2) cos + alpha0 sin, alpha = (m/2) u'/u
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  const Complex a0 = p.alpha0();
  const double half_mw = 0.5 * p.m * omega;
  return half_mw * (a0 * c - half_mw * s) / (half_mw * c + a0 * s);
}

}  // namespace

void OracleParams::validate() const {
  if (!(m > 0.0)) throw PreconditionViolation("oracle: m must be positive");
  if (!(hbar > 0.0)) throw PreconditionViolation("oracle: hbar must be positive");
  if (!(sigma0_sq > 0.0)) throw PreconditionViolation("oracle: sigma0^2 must be positive");
  if (const auto* h = std::get_if<Harmonic>(&scenario); h != nullptr && !(h->omega > 0.0)) {
    throw PreconditionViolation("oracle: omega must be positive");
  }
}

FreeParticleSample free_particle(const OracleParams& p, double t) {
  require<FreeParticle>(p, "free_particle");
  const double drift = p.hbar * p.k / (p.m * p.sigma0_sq);
  return {
      p.guide_q0() + p.p0 * t / p.m,
      free_alpha(p, t),
      p.q0 + p.p0 * t / p.m + drift * t * t / p.m,
      p.p0 + drift * t,
  };
}

RampSample linear_ramp(const OracleParams& p, double t) {
  const double beta = require<LinearRamp>(p, "linear_ramp").beta;
  const double accel = p.hbar * p.k / (p.m * p.m * p.sigma0_sq) - beta / (2.0 * p.m);
  return {
      p.p0 - beta * t,
      p.guide_q0() + p.p0 * t / p.m - beta * t * t / (2.0 * p.m),
      p.q0 + p.p0 * t / p.m + accel * t * t,
  };
}

double critical_beta(const OracleParams& p) {
  p.validate();
  return 2.0 * p.hbar * p.k / (p.m * p.sigma0_sq);
}

HarmonicSample harmonic(const OracleParams& p, double t) {
  const double omega = require<Harmonic>(p, "harmonic").omega;
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  const double mw = p.m * omega;
  const double sig2 = p.sigma0_sq;
  const double shift = (p.hbar * p.hbar * s * s + mw * mw * sig2 * sig2 * c * c) /
                       (p.hbar * mw * mw * sig2) * p.k;
  const double guide = p.guide_q0() * c + p.p0 / mw * s;
  return {guide, harmonic_alpha(p, omega, t), guide + shift};
}

OracleSample evaluate(const OracleParams& p, double t) {
  OracleSample out{};
  if (std::holds_alternative<FreeParticle>(p.scenario)) {
    const auto f = free_particle(p, t);
    out = {f.guide_q, p.p0 / p.m, f.alpha, f.Q, f.P};
    return out;
  }
  if (std::holds_alternative<LinearRamp>(p.scenario)) {
    const auto r = linear_ramp(p, t);
    out = {r.guide_q, r.p / p.m, free_alpha(p, t), r.Q, 0.0};
  } else {
    const double omega = std::get<Harmonic>(p.scenario).omega;
    const auto h = harmonic(p, t);
    const double v = -p.guide_q0() * omega * std::sin(omega * t) + p.p0 / p.m * std::cos(omega * t);
    out = {h.guide_q, v, h.alpha, h.Q, 0.0};
  }
  out.P = p.m * out.guide_v + out.alpha.real() / out.alpha.imag() * p.k;
  return out;
}

}  // namespace nhgwp::oracle
