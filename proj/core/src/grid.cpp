#include "nhgwp/grid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "nhgwp/error.hpp"
#include "nhgwp/transforms.hpp"

namespace nhgwp {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place forward/backward transforms over an owned buffer.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    data_ = fftw_alloc_complex(n);
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftBuffer() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(data_);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(data_); }
  void forward() { fftw_execute(forward_); }
  /// Unnormalized; callers fold 1/n into their multipliers.
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t n_;
  fftw_complex* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

void require_1d(const ModelSpec& model, const char* context) {
  if (model.dim() != 1) throw DimensionMismatch(std::string(context) + ": grid propagation is 1D only");
}

void require_matching(const GridField& field, const char* context) {
  field.grid.validate();
  if (static_cast<std::size_t>(field.values.size()) != field.grid.n) {
    throw DimensionMismatch(std::string(context) + ": field size differs from grid size");
  }
}

RealVector potential_on_grid(const ModelSpec& model, const Grid1D& grid) {
  RealVector v(static_cast<Eigen::Index>(grid.n));
  RealVector x(1);
  for (std::size_t i = 0; i < grid.n; ++i) {
    x[0] = grid.x(i);
    v[static_cast<Eigen::Index>(i)] = model.potential().value(x);
  }
  return v;
}

double smoothstep(double r) {
  r = std::clamp(r, 0.0, 1.0);
  return r * r * (3.0 - 2.0 * r);
}

std::string num(double v) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 4);
  return std::string(buf.data(), r.ptr);
}

double max_abs(const ComplexVector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

void Grid1D::validate() const {
  if (n < 2) throw PreconditionViolation("grid needs at least two points");
  if (!(length > 0.0) || !std::isfinite(length)) throw PreconditionViolation("grid length must be positive");
  if (!std::isfinite(center)) throw PreconditionViolation("grid center must be finite");
}

RealVector Grid1D::points() const {
  RealVector x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = this->x(i);
  return x;
}

RealVector Grid1D::wavenumbers() const {
  RealVector kappa(static_cast<Eigen::Index>(n));
  const double dk = 2.0 * std::numbers::pi / length;
  for (std::size_t i = 0; i < n; ++i) {
    const auto signed_i = static_cast<double>(i) - (i < (n + 1) / 2 ? 0.0 : static_cast<double>(n));
    kappa[static_cast<Eigen::Index>(i)] = signed_i * dk;
  }
  return kappa;
}

GridField evaluate_wavepacket(const WavepacketState& state, const Grid1D& grid, double hbar,
                              double exponent_cap) {
  check_shape(state);
  if (state.dim() != 1) throw DimensionMismatch("evaluate_wavepacket: state must be 1D");
  grid.validate();
  require_normalizable(state, "evaluate_wavepacket");

  const Complex alpha = state.alpha(0, 0);
  const Complex q = state.q[0];
  const Complex p = state.p[0];
  GridField field{ComplexVector(static_cast<Eigen::Index>(grid.n)), grid, state.t};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const Complex y = grid.x(i) - q;
    const Complex exponent = (I / hbar) * (alpha * y * y + p * y + state.gamma);
    if (exponent.real() > exponent_cap) {
      throw ExponentOverflow("evaluate_wavepacket: exponent " + num(exponent.real()) +
                             " at x=" + num(grid.x(i)) + " exceeds the cap");
    }
    field.values[static_cast<Eigen::Index>(i)] = std::exp(exponent);
  }
  return field;
}

RealVector log_density(const WavepacketState& state, const Grid1D& grid, double hbar) {
  check_shape(state);
  if (state.dim() != 1) throw DimensionMismatch("log_density: state must be 1D");
  grid.validate();
  const Complex alpha = state.alpha(0, 0);
  const Complex q = state.q[0];
  const Complex p = state.p[0];
  RealVector out(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) {
    const Complex y = grid.x(i) - q;
    out[static_cast<Eigen::Index>(i)] = -2.0 * (alpha * y * y + p * y + state.gamma).imag() / hbar;
  }
  return out;
}

double log_norm_squared(const WavepacketState& state, double hbar) {
  const RealPhasePoint centre = to_real_phase_space(state);
  const ComplexVector y = centre.Q.cast<Complex>() - state.q;
  const Complex s = (y.transpose() * state.alpha * y)(0, 0) + (state.p.transpose() * y)(0, 0) + state.gamma;
  const RealMatrix width = 2.0 * state.alpha.imag() / hbar;
  const double dim = static_cast<double>(state.dim());
  const double log_det = 2.0 * width.llt().matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -2.0 * s.imag() / hbar + 0.5 * (dim * std::log(std::numbers::pi) - log_det);
}

double norm_squared(const WavepacketState& state, double hbar) {
  return std::exp(log_norm_squared(state, hbar));
}

double unit_norm_gamma_imag(const ComplexMatrix& alpha, double hbar) {
  const RealMatrix width = 2.0 * alpha.imag();
  Eigen::LLT<RealMatrix> llt(width);
  if (llt.info() != Eigen::Success) throw NonNormalizable("unit_norm_gamma_imag: Im(alpha) is not positive definite");
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double dim = static_cast<double>(alpha.rows());
  return 0.25 * hbar * (dim * std::log(std::numbers::pi * hbar) - log_det);
}

WavepacketState normalized(const WavepacketState& state, double hbar) {
  WavepacketState out = state;
  out.gamma += I * (0.5 * hbar * log_norm_squared(state, hbar));
  return out;
}

GridField split_step_constant_b(const GridField& field, const ModelSpec& model, double dt,
                                std::size_t steps, const SplitStepOptions& options) {
  require_1d(model, "split_step_constant_b");
  require_matching(field, "split_step_constant_b");
  if (!model.vecpot().is_constant()) {
    throw PreconditionViolation("split_step_constant_b: vector potential must be constant");
  }
  if (dt < 0.0) throw PreconditionViolation("split_step_constant_b: dt must be non-negative");
  if (steps == 0 || dt == 0.0) return field;

  const Grid1D& grid = field.grid;
  const auto n = static_cast<Eigen::Index>(grid.n);
  const double hbar = model.hbar();
  const double m = model.masses()[0];
  const double k = model.vecpot().offset[0];
  const RealVector kappa = grid.wavenumbers();
  const double kappa_max = kappa.cwiseAbs().maxCoeff();

  ComplexVector kinetic(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex momentum = hbar * kappa[i] + I * k;
    Complex factor = std::exp(-I * dt * momentum * momentum / (2.0 * m * hbar));
    if (options.mask) {
      const double a = std::abs(kappa[i]);
      const double s = smoothstep((a - options.mask->cutoff) / options.mask->width);
      factor *= std::exp(-dt * 2.0 * std::abs(k) / m * a * s);
    }
    kinetic[i] = factor / static_cast<double>(grid.n);
  }
  const double growth = kinetic.cwiseAbs().maxCoeff() * static_cast<double>(grid.n);
  if (growth > options.max_step_growth) {
    throw SpectralInstability("split_step_constant_b: per-step amplification " + num(growth) +
                              " exceeds " + num(options.max_step_growth) +
                              " (kappa_max=" + num(kappa_max) + "); refine dt or enable the mask");
  }

  const RealVector v = potential_on_grid(model, grid);
  ComplexVector half(n);
  for (Eigen::Index i = 0; i < n; ++i) half[i] = std::exp(-I * dt * v[i] / (2.0 * hbar));

  FftBuffer fft(grid.n);
  Complex* buf = fft.data();
  for (Eigen::Index i = 0; i < n; ++i) buf[i] = field.values[i];

  // Resolution guard on the incoming spectrum.
  fft.forward();
  double peak = 0.0;
  double tail = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(buf[i]);
    peak = std::max(peak, a);
    if (std::abs(kappa[i]) >= 0.95 * kappa_max) tail = std::max(tail, a);
  }
  if (peak > 0.0 && tail > options.tail_tolerance * peak) {
    throw SpectralInstability("split_step_constant_b: input spectrum is not resolved (tail/peak = " +
                              num(tail / peak) + ")");
  }
  fft.backward();
  for (Eigen::Index i = 0; i < n; ++i) buf[i] *= half[i] / static_cast<double>(grid.n);

  for (std::size_t s = 0; s < steps; ++s) {
    fft.forward();
    for (Eigen::Index i = 0; i < n; ++i) buf[i] *= kinetic[i];
    fft.backward();
    // Adjacent half potential steps merge into one full step between kicks.
    const bool last = s + 1 == steps;
    for (Eigen::Index i = 0; i < n; ++i) buf[i] *= last ? half[i] : half[i] * half[i];
  }

  GridField out{ComplexVector(n), grid, field.t + dt * static_cast<double>(steps)};
  for (Eigen::Index i = 0; i < n; ++i) out.values[i] = buf[i];
  if (!out.values.allFinite()) throw SpectralInstability("split_step_constant_b: field became non-finite");
  return out;
}

GridField crank_nicolson_linear_b(const GridField& field, const ModelSpec& model, double dt,
                                  std::size_t steps, const CrankNicolsonOptions& options) {
  require_1d(model, "crank_nicolson_linear_b");
  require_matching(field, "crank_nicolson_linear_b");
  if (dt < 0.0) throw PreconditionViolation("crank_nicolson_linear_b: dt must be non-negative");
  if (steps == 0 || dt == 0.0) return field;

  const Grid1D& grid = field.grid;
  const auto n = static_cast<Eigen::Index>(grid.n);
  const double hbar = model.hbar();
  const double m = model.masses()[0];
  const double slope = model.vecpot().slope[0];
  const double offset = model.vecpot().offset[0];
  const double dx = grid.dx();
  const RealVector v = potential_on_grid(model, grid);

  // L psi_i = lower_i psi_{i-1} + diag_i psi_i + upper_i psi_{i+1}
  const double kinetic = hbar * hbar / (2.0 * m * dx * dx);
  RealVector diag(n), upper(n), lower(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double b = slope * grid.x(static_cast<std::size_t>(i)) + offset;
    diag[i] = 2.0 * kinetic + hbar * slope / (2.0 * m) - b * b / (2.0 * m) + v[i];
    upper[i] = -kinetic + hbar * b / (2.0 * m * dx);
    lower[i] = -kinetic - hbar * b / (2.0 * m * dx);
  }

  // (1 + f L) psi^{n+1} = (1 - f L) psi^n, f = i dt / 2 hbar. Thomas factors are
  // computed once; the matrix does not change between steps.
  const Complex f = I * dt / (2.0 * hbar);
  ComplexVector c_prime(n), inv_denom(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex a = f * lower[i];
    const Complex b = 1.0 + f * diag[i];
    const Complex c = f * upper[i];
    const Complex denom = i == 0 ? b : b - a * c_prime[i - 1];
    inv_denom[i] = 1.0 / denom;
    c_prime[i] = c * inv_denom[i];
  }

  ComplexVector psi = field.values;
  ComplexVector work(n);
  for (std::size_t s = 0; s < steps; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex r = (1.0 - f * diag[i]) * psi[i];
      if (i > 0) r -= f * lower[i] * psi[i - 1];
      if (i + 1 < n) r -= f * upper[i] * psi[i + 1];
      work[i] = r;
    }
    // Forward sweep then back substitution.
    work[0] *= inv_denom[0];
    for (Eigen::Index i = 1; i < n; ++i) work[i] = (work[i] - f * lower[i] * work[i - 1]) * inv_denom[i];
    for (Eigen::Index i = n - 2; i >= 0; --i) work[i] -= c_prime[i] * work[i + 1];
    psi.swap(work);

    const double peak = max_abs(psi);
    if (!std::isfinite(peak)) throw BoundaryContamination("crank_nicolson_linear_b: field became non-finite");
    const double wall = std::max(std::abs(psi[0]), std::abs(psi[n - 1]));
    if (wall > options.boundary_tolerance * peak) {
      throw BoundaryContamination("crank_nicolson_linear_b: |psi| at the wall reached " +
                                  num(wall / peak) + " of its maximum at t=" +
                                  num(field.t + dt * static_cast<double>(s + 1)));
    }
  }
  return {std::move(psi), grid, field.t + dt * static_cast<double>(steps)};
}

DensityObservables density_observables(const GridField& field) {
  require_matching(field, "density_observables");
  const auto n = field.values.size();
  const double dx = field.grid.dx();
  double norm = 0.0;
  double first = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * dx : dx;
    const double rho = std::norm(field.values[i]) * w;
    norm += rho;
    first += rho * field.grid.x(static_cast<std::size_t>(i));
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ZeroNorm("density_observables: norm is zero or non-finite");
  const double centroid = first / norm;
  double second = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * dx : dx;
    const double y = field.grid.x(static_cast<std::size_t>(i)) - centroid;
    second += std::norm(field.values[i]) * w * y * y;
  }
  return {norm, centroid, second / norm};
}

RealMatrix heatmap_normalized(const std::vector<GridField>& fields) {
  if (fields.empty()) throw ZeroNorm("heatmap_normalized: no samples");
  const auto cols = fields.front().values.size();
  RealMatrix out(static_cast<Eigen::Index>(fields.size()), cols);
  for (std::size_t r = 0; r < fields.size(); ++r) {
    if (fields[r].values.size() != cols) throw DimensionMismatch("heatmap_normalized: ragged fields");
    out.row(static_cast<Eigen::Index>(r)) = fields[r].values.cwiseAbs2().transpose();
  }
  const double peak = out.maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) throw ZeroNorm("heatmap_normalized: density vanishes or overflows");
  return out / peak;
}

RealMatrix heatmap_normalized(const Trajectory& trajectory, const Grid1D& grid) {
  if (trajectory.samples.empty()) throw ZeroNorm("heatmap_normalized: no samples");
  RealMatrix out(static_cast<Eigen::Index>(trajectory.samples.size()), static_cast<Eigen::Index>(grid.n));
  for (std::size_t r = 0; r < trajectory.samples.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        log_density(trajectory.samples[r], grid, trajectory.model.hbar()).transpose();
  }
  const double peak = out.maxCoeff();
  if (!std::isfinite(peak)) throw ZeroNorm("heatmap_normalized: density is not finite");
  return (out.array() - peak).exp().matrix();
}

std::vector<GridField> propagate_grid(const GridField& field, const ModelSpec& model, double t_final,
                                      double dt, int sample_stride, const GridRunOptions& options) {
  if (!(t_final > 0.0)) throw PreconditionViolation("propagate_grid: t_final must be positive");
  if (!(dt > 0.0)) throw PreconditionViolation("propagate_grid: dt must be positive");
  if (sample_stride < 1) throw PreconditionViolation("propagate_grid: sample_stride must be at least 1");

  auto advance = [&](const GridField& f, double h, std::size_t steps) {
    return options.scheme == GridScheme::Spectral
               ? split_step_constant_b(f, model, h, steps, options.split_step)
               : crank_nicolson_linear_b(f, model, h, steps, options.crank_nicolson);
  };

  const double ratio = t_final / dt;
  auto full_steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(full_steps)) > 1e-9 * std::max(1.0, ratio)) {
    full_steps = static_cast<std::size_t>(std::floor(ratio));
  }
  const double remainder = t_final - static_cast<double>(full_steps) * dt;
  const auto stride = static_cast<std::size_t>(sample_stride);

  const double t0 = field.t;
  std::vector<GridField> samples{field};
  GridField current = field;
  std::size_t done = 0;
  while (done < full_steps) {
    const std::size_t chunk = std::min(stride, full_steps - done);
    current = advance(current, dt, chunk);
    done += chunk;
    current.t = t0 + static_cast<double>(done) * dt;
    samples.push_back(current);
  }
  if (remainder > 1e-12 * t_final) {
    current = advance(current, remainder, 1);
    samples.push_back(current);
  }
  samples.back().t = t0 + t_final;
  return samples;
}

}  // namespace nhgwp
