#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhgwp/grid.hpp"
#include "nhgwp/model.hpp"

namespace nhgwp {

enum class RunMode { Gwd, Grid, Compare, Analytic };
enum class GammaPolicy { UnitNorm, Zero, Explicit };
/// Direct: propagate (alpha0, q0, p0) as given. Guiding: transform first so
/// the centre stays real (constant or linear b).
enum class Representation { Direct, Guiding };
enum class Artifact { Trajectory, Density, GridTrajectory, GridDensity, Analytic, Report };

struct InitialSpec {
  RealVector q0;
  RealVector p0;
  ComplexMatrix alpha0;
  GammaPolicy gamma_policy = GammaPolicy::UnitNorm;
  Complex gamma0{0.0, 0.0};  ///< used when gamma_policy == Explicit
  Representation representation = Representation::Direct;

  friend bool operator==(const InitialSpec& a, const InitialSpec& b) {
    return a.q0 == b.q0 && a.p0 == b.p0 && a.alpha0 == b.alpha0 && a.gamma_policy == b.gamma_policy &&
           a.gamma0 == b.gamma0 && a.representation == b.representation;
  }
};

struct RunSpec {
  double dt = 1e-3;
  double t_final = 10.0;
  int sample_stride = 10;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct GridSpec {
  std::size_t n = 4096;
  double length = 40.0;
  /// Unset: midpoint of the packet's travel, taken from a wavepacket run.
  std::optional<double> center;
  GridScheme scheme = GridScheme::CrankNicolson;
  /// Unset: same step as the wavepacket run.
  std::optional<double> dt;
  std::optional<SpectralMask> mask;
  double max_step_growth = 1.05;
  double tail_tolerance = 1e-12;
  double boundary_tolerance = 1e-8;
  /// Decimation of density.csv rows (samples) and columns (grid points).
  int density_time_stride = 1;
  int density_x_stride = 1;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    auto mask_eq = [](const std::optional<SpectralMask>& x, const std::optional<SpectralMask>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->cutoff == y->cutoff && x->width == y->width);
    };
    return a.n == b.n && a.length == b.length && a.center == b.center && a.scheme == b.scheme &&
           a.dt == b.dt && mask_eq(a.mask, b.mask) && a.max_step_growth == b.max_step_growth &&
           a.tail_tolerance == b.tail_tolerance && a.boundary_tolerance == b.boundary_tolerance &&
           a.density_time_stride == b.density_time_stride && a.density_x_stride == b.density_x_stride;
  }
};

struct Scenario {
  ModelSpec model;
  InitialSpec initial;
  RunSpec run;
  std::optional<GridSpec> grid;
  /// Empty: every artifact the mode can produce.
  std::vector<Artifact> outputs;
  RunMode mode = RunMode::Gwd;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the `key = value` format. Throws ParseError (with line number) for
/// syntax problems and unknown or repeated keys, ValidationError (naming the
/// key) for values that are well-formed but unacceptable.
Scenario parse_scenario(std::string_view text);

/// Text that parses back to an equal Scenario.
std::string print_scenario(const Scenario& scenario);

/// Cross-field checks; parse_scenario calls this, and callers that edit a
/// Scenario afterwards (flag overrides) should call it again.
void validate_scenario(const Scenario& scenario);

/// Initial state after applying the gamma policy and representation.
WavepacketState initial_state(const Scenario& scenario);
/// Initial state before the representation change (what the grid samples).
WavepacketState initial_wavefunction(const Scenario& scenario);

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`). Throws std::invalid_argument.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

std::string_view to_string(RunMode mode);
std::string_view to_string(Artifact artifact);
/// Throws ValidationError("mode", ...) for unknown names.
RunMode parse_mode(std::string_view name);

/// Artifacts a mode can write, in output order.
std::vector<Artifact> artifacts_for(RunMode mode, bool has_grid);

}  // namespace nhgwp
