#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nhgwp/engine.hpp"
#include "nhgwp/model.hpp"

namespace nhgwp {

/// Uniform 1D grid; x_i = center + (i - n/2) dx, dx = length / n.
struct Grid1D {
  std::size_t n = 4096;
  double length = 40.0;
  double center = 0.0;

  void validate() const;
  double dx() const { return length / static_cast<double>(n); }
  double x(std::size_t i) const {
    return center + (static_cast<double>(i) - 0.5 * static_cast<double>(n)) * dx();
  }
  RealVector points() const;
  /// Signed angular wavenumbers in FFT order.
  RealVector wavenumbers() const;
};

struct GridField {
  ComplexVector values;
  Grid1D grid;
  double t = 0.0;
};

/// Samples the Gaussian on the grid (D = 1). Throws ExponentOverflow if the
/// real part of the exponent exceeds `exponent_cap` anywhere.
GridField evaluate_wavepacket(const WavepacketState& state, const Grid1D& grid, double hbar = 1.0,
                              double exponent_cap = 700.0);

/// ln |psi(x_i)|^2 on the grid (D = 1); finite wherever the exponent is.
RealVector log_density(const WavepacketState& state, const Grid1D& grid, double hbar = 1.0);

/// ln <psi|psi> in closed form (any D, complex q, p, gamma).
double log_norm_squared(const WavepacketState& state, double hbar = 1.0);
/// <psi|psi> in closed form; may overflow to inf for strongly growing runs.
double norm_squared(const WavepacketState& state, double hbar = 1.0);

/// Im(gamma) that makes a Gaussian with real q, p and this alpha unit-norm:
///   (hbar/4) ln(det(pi hbar (2 Im alpha)^-1)).
double unit_norm_gamma_imag(const ComplexMatrix& alpha, double hbar = 1.0);
/// Same state with Im(gamma) shifted so that <psi|psi> = 1.
WavepacketState normalized(const WavepacketState& state, double hbar = 1.0);

/// Smooth damping of high wavenumbers for the spectral scheme: wavenumbers
/// above `cutoff` are attenuated per step by exp(-dt 2|k|/m |kappa| s), with
/// s rising smoothly from 0 to 1 over `width`.
struct SpectralMask {
  double cutoff = 30.0;
  double width = 15.0;
};

struct SplitStepOptions {
  std::optional<SpectralMask> mask;
  /// Largest tolerated per-step amplification |exp(-i dt (hbar kappa + i k)^2 / 2 m hbar)| * mask.
  double max_step_growth = 1.05;
  /// Input spectrum in the top 5% of the band must stay below this fraction of its peak.
  double tail_tolerance = 1e-12;
};

/// Strang split-step Fourier propagation for constant b (periodic box).
/// Non-unitary for k != 0: high wavenumbers are amplified by exp(dt kappa k / m)
/// per step, which is why the growth guard and the optional mask exist.
GridField split_step_constant_b(const GridField& field, const ModelSpec& model, double dt,
                                std::size_t steps, const SplitStepOptions& options = {});

struct CrankNicolsonOptions {
  /// BoundaryContamination if |psi| at a wall exceeds this fraction of max |psi|.
  double boundary_tolerance = 1e-8;
};

/// Crank-Nicolson for any linear b with Dirichlet walls and second-order
/// central differences. The first-derivative term gives unequal left/right
/// hopping.
GridField crank_nicolson_linear_b(const GridField& field, const ModelSpec& model, double dt,
                                  std::size_t steps, const CrankNicolsonOptions& options = {});

struct DensityObservables {
  double norm2;
  double centroid;
  double variance;
};
/// Trapezoidal moments of |psi|^2. Throws ZeroNorm when the norm vanishes.
DensityObservables density_observables(const GridField& field);

/// Rows = samples, columns = grid points; |psi|^2 scaled to a global max of 1.
/// The trajectory overload works in log space, so packets whose norm spans
/// hundreds of orders of magnitude over the run do not overflow.
RealMatrix heatmap_normalized(const Trajectory& trajectory, const Grid1D& grid);
RealMatrix heatmap_normalized(const std::vector<GridField>& fields);

enum class GridScheme { Spectral, CrankNicolson };

struct GridRunOptions {
  GridScheme scheme = GridScheme::CrankNicolson;
  SplitStepOptions split_step;
  CrankNicolsonOptions crank_nicolson;
};

/// Repeated application of a scheme from field.t to field.t + t_final,
/// recording the field every `sample_stride` steps and at the end.
std::vector<GridField> propagate_grid(const GridField& field, const ModelSpec& model, double t_final,
                                      double dt, int sample_stride, const GridRunOptions& options = {});

}  // namespace nhgwp
