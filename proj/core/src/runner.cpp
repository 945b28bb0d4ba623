#include "nhgwp/runner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <string>
#include <system_error>

#include "nhgwp/engine.hpp"
#include "nhgwp/error.hpp"
#include "nhgwp/grid.hpp"
#include "nhgwp/transforms.hpp"

namespace nhgwp {

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw InputError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_csv_number(values[i]);
    }
    out_ << '\n';
  }

  void row(const std::string& label, double value) { out_ << label << ',' << format_csv_number(value) << '\n'; }

  void close() {
    out_.close();
    if (!out_) throw InputError("failed while writing CSV output");
  }

 private:
  std::ofstream out_;
};

struct Deviation {
  double max_abs = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double d) {
    const double a = std::abs(d);
    max_abs = std::max(max_abs, a);
    sum_sq += a * a;
    ++count;
  }
  double rms() const { return count ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0; }
};

std::string idx(std::size_t j) { return std::to_string(j); }

bool wants(const std::vector<Artifact>& outputs, Artifact a) {
  return std::find(outputs.begin(), outputs.end(), a) != outputs.end();
}

// Per-sample diagnostics shared by trajectory.csv and the report.
struct GwdSample {
  RealPhasePoint centre;
  double log_norm2;
};

std::vector<GwdSample> describe(const Trajectory& traj) {
  std::vector<GwdSample> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    out.push_back({to_real_phase_space(s), log_norm_squared(s, traj.model.hbar())});
  }
  return out;
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, const std::vector<GwdSample>& info) {
  const std::size_t d = traj.model.dim();
  std::vector<std::string> header{"t"};
  for (std::size_t j = 0; j < d; ++j) {
    header.push_back("re_q_" + idx(j));
    header.push_back("im_q_" + idx(j));
  }
  for (std::size_t j = 0; j < d; ++j) {
    header.push_back("re_p_" + idx(j));
    header.push_back("im_p_" + idx(j));
  }
  for (std::size_t j = 0; j < d; ++j) header.push_back("Q_" + idx(j));
  for (std::size_t j = 0; j < d; ++j) header.push_back("P_" + idx(j));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = j; l < d; ++l) {
      header.push_back("re_alpha_" + idx(j) + "_" + idx(l));
      header.push_back("im_alpha_" + idx(j) + "_" + idx(l));
    }
  }
  header.insert(header.end(), {"re_gamma", "im_gamma", "norm2"});
  for (std::size_t j = 0; j < d; ++j) header.push_back("sigma2_" + idx(j));

  CsvWriter csv(path, header);
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<double> row;
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const auto& st = traj.samples[s];
    row.clear();
    row.push_back(st.t);
    for (Eigen::Index j = 0; j < n; ++j) row.insert(row.end(), {st.q[j].real(), st.q[j].imag()});
    for (Eigen::Index j = 0; j < n; ++j) row.insert(row.end(), {st.p[j].real(), st.p[j].imag()});
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(info[s].centre.Q[j]);
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(info[s].centre.P[j]);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = j; l < n; ++l) row.insert(row.end(), {st.alpha(j, l).real(), st.alpha(j, l).imag()});
    }
    row.insert(row.end(), {st.gamma.real(), st.gamma.imag(), std::exp(info[s].log_norm2)});
    // Width of psi itself: sigma_j^2 = (hbar/2) [(Im alpha)^-1]_jj.
    const RealMatrix width = (0.5 * traj.model.hbar()) * st.alpha.imag().inverse();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(width(j, j));
    csv.row(row);
  }
  csv.close();
}

void write_density(const std::filesystem::path& path, const RealMatrix& heat, const std::vector<double>& times,
                   const Grid1D& grid, const GridSpec& spec) {
  CsvWriter csv(path, {"t", "x", "psi2_normalized"});
  const auto ts = static_cast<std::size_t>(spec.density_time_stride);
  const auto xs = static_cast<std::size_t>(spec.density_x_stride);
  for (std::size_t r = 0; r < times.size(); ++r) {
    if (r % ts != 0 && r + 1 != times.size()) continue;
    for (std::size_t i = 0; i < grid.n; i += xs) {
      csv.row({times[r], grid.x(i), heat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i))});
    }
  }
  csv.close();
}

struct GridRun {
  Grid1D grid;
  std::vector<GridField> fields;
  std::vector<DensityObservables> observables;
  std::size_t steps = 0;
};

GridRun run_grid(const Scenario& sc, double center) {
  const GridSpec& g = *sc.grid;
  GridRun out;
  out.grid = Grid1D{g.n, g.length, center};
  const double grid_dt = g.dt.value_or(sc.run.dt);
  const int stride = static_cast<int>(std::lround(sc.run.dt * sc.run.sample_stride / grid_dt));

  GridRunOptions opts;
  opts.scheme = g.scheme;
  opts.split_step.mask = g.mask;
  opts.split_step.max_step_growth = g.max_step_growth;
  opts.split_step.tail_tolerance = g.tail_tolerance;
  opts.crank_nicolson.boundary_tolerance = g.boundary_tolerance;

  const GridField f0 = evaluate_wavepacket(initial_wavefunction(sc), out.grid, sc.model.hbar());
  out.fields = propagate_grid(f0, sc.model, sc.run.t_final, grid_dt, stride, opts);
  out.steps = static_cast<std::size_t>(std::ceil(sc.run.t_final / grid_dt - 1e-9));
  out.observables.reserve(out.fields.size());
  for (const auto& f : out.fields) out.observables.push_back(density_observables(f));
  return out;
}

double travel_midpoint(const std::vector<GwdSample>& info) {
  double lo = info.front().centre.Q[0];
  double hi = lo;
  for (const auto& s : info) {
    lo = std::min(lo, s.centre.Q[0]);
    hi = std::max(hi, s.centre.Q[0]);
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string format_csv_number(double value) {
  std::array<char, 40> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), result.ptr);
}

std::optional<double> RunReport::metric(std::string_view name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::nullopt;
}

std::optional<oracle::OracleParams> infer_oracle(const Scenario& sc) {
  if (sc.model.dim() != 1 || !sc.model.vecpot().is_constant()) return std::nullopt;
  const Complex a0 = sc.initial.alpha0(0, 0);
  if (a0.real() != 0.0 || !(a0.imag() > 0.0)) return std::nullopt;

  auto coeffs = sc.model.potential().power_series();
  if (coeffs.size() > 3) return std::nullopt;
  coeffs.resize(3, 0.0);

  oracle::OracleParams p;
  p.m = sc.model.masses()[0];
  p.hbar = sc.model.hbar();
  p.k = sc.model.vecpot().offset[0];
  p.sigma0_sq = p.hbar / (2.0 * a0.imag());
  p.q0 = sc.initial.q0[0];
  p.p0 = sc.initial.p0[0];
  if (coeffs[2] == 0.0) {
    if (coeffs[1] == 0.0) {
      p.scenario = oracle::FreeParticle{};
    } else {
      p.scenario = oracle::LinearRamp{coeffs[1]};
    }
  } else if (coeffs[1] == 0.0 && coeffs[2] > 0.0) {
    p.scenario = oracle::Harmonic{std::sqrt(2.0 * coeffs[2] / p.m)};
  } else {
    return std::nullopt;
  }
  return p;
}

RunReport run(RunMode mode, const Scenario& scenario_in, const std::filesystem::path& outdir) {
  const auto started = std::chrono::steady_clock::now();
  Scenario sc = scenario_in;
  sc.mode = mode;
  validate_scenario(sc);

  RunReport report;
  report.mode = mode;
  const std::vector<Artifact> outputs = sc.outputs.empty() ? artifacts_for(mode, sc.grid.has_value()) : sc.outputs;

  std::optional<oracle::OracleParams> oracle_params;
  if (mode == RunMode::Analytic || mode == RunMode::Compare) {
    oracle_params = infer_oracle(sc);
    if (!oracle_params && mode == RunMode::Analytic) {
      throw ValidationError("potential", "no closed-form solution for this model (needs 1D, constant b, "
                                         "V free/linear/harmonic and purely imaginary alpha0)");
    }
    if (!oracle_params) report.flags.push_back("no_oracle");
  }

  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw InputError("cannot create output directory " + outdir.string() + ": " + ec.message());

  const bool need_gwd = mode != RunMode::Grid || (sc.grid && !sc.grid->center);
  const bool need_grid = mode == RunMode::Grid || mode == RunMode::Compare;

  // The grid can run alongside the wavepacket when it does not need the
  // wavepacket's travel to place the box.
  std::future<GridRun> grid_future;
  if (need_grid && sc.grid->center) {
    grid_future = std::async(std::launch::async, run_grid, std::cref(sc), *sc.grid->center);
  }

  std::optional<Trajectory> traj;
  std::vector<GwdSample> info;
  if (need_gwd) {
    try {
      traj = propagate(initial_state(sc), sc.model, sc.run.t_final, sc.run.dt, sc.run.sample_stride);
      info = describe(*traj);
    } catch (const NumericalError&) {
      if (mode != RunMode::Grid) throw;
      traj.reset();
      report.flags.push_back("grid_center_fallback");
    }
  }

  std::optional<GridRun> grid_run;
  if (need_grid) {
    if (grid_future.valid()) {
      grid_run = grid_future.get();
    } else {
      const double center = traj ? travel_midpoint(info) : sc.initial.q0[0];
      grid_run = run_grid(sc, center);
    }
    report.grid_steps = grid_run->steps;
  }

  auto& m = report.metrics;
  if (traj && mode != RunMode::Grid) {
    report.gwd_steps = static_cast<std::size_t>(std::ceil(sc.run.t_final / sc.run.dt - 1e-9));
    double eom1 = 0.0;
    double im_q = 0.0;
    for (const auto& s : traj->samples) {
      eom1 = std::max(eom1, eom1_residual(s, rhs(s, sc.model), sc.model).cwiseAbs().maxCoeff());
      im_q = std::max(im_q, s.q.imag().cwiseAbs().maxCoeff());
    }
    m.emplace_back("gwd.steps", static_cast<double>(report.gwd_steps));
    m.emplace_back("gwd.samples", static_cast<double>(traj->samples.size()));
    m.emplace_back("gwd.max_eom1_residual", eom1);
    m.emplace_back("gwd.max_abs_im_q", im_q);
    m.emplace_back("gwd.initial_log_norm2", info.front().log_norm2);
    m.emplace_back("gwd.final_log_norm2", info.back().log_norm2);

    if (wants(outputs, Artifact::Trajectory)) {
      write_trajectory(outdir / "trajectory.csv", *traj, info);
      report.files.push_back(outdir / "trajectory.csv");
    }
    if (wants(outputs, Artifact::Density) && sc.grid) {
      const Grid1D grid{sc.grid->n, sc.grid->length, sc.grid->center.value_or(travel_midpoint(info))};
      std::vector<double> times;
      for (const auto& s : traj->samples) times.push_back(s.t);
      write_density(outdir / "density.csv", heatmap_normalized(*traj, grid), times, grid, *sc.grid);
      report.files.push_back(outdir / "density.csv");
    }
  }

  if (traj && oracle_params && mode != RunMode::Grid) {
    Deviation dq, dp, da, dg;
    const bool guiding = sc.initial.representation == Representation::Guiding;
    std::optional<CsvWriter> csv;
    if (wants(outputs, Artifact::Analytic)) {
      csv.emplace(outdir / "analytic.csv",
                  std::vector<std::string>{"t", "re_q_0", "im_q_0", "Q_0", "P_0", "re_alpha_0_0", "im_alpha_0_0",
                                           "oracle_guide_q_0", "oracle_guide_v_0", "oracle_Q_0", "oracle_P_0",
                                           "oracle_re_alpha_0_0", "oracle_im_alpha_0_0"});
    }
    for (std::size_t s = 0; s < traj->samples.size(); ++s) {
      const auto& st = traj->samples[s];
      const oracle::OracleSample o = oracle::evaluate(*oracle_params, st.t);
      const double Q = info[s].centre.Q[0];
      const double P = info[s].centre.P[0];
      dq.add(Q - o.Q);
      dp.add(P - o.P);
      da.add(std::abs(st.alpha(0, 0) - o.alpha));
      if (guiding) dg.add(st.q[0].real() - o.guide_q);
      if (csv) {
        csv->row({st.t, st.q[0].real(), st.q[0].imag(), Q, P, st.alpha(0, 0).real(), st.alpha(0, 0).imag(), o.guide_q,
                  o.guide_v, o.Q, o.P, o.alpha.real(), o.alpha.imag()});
      }
    }
    if (csv) {
      csv->close();
      report.files.push_back(outdir / "analytic.csv");
    }
    m.emplace_back("oracle.Q.max_abs_dev", dq.max_abs);
    m.emplace_back("oracle.Q.rms_dev", dq.rms());
    m.emplace_back("oracle.P.max_abs_dev", dp.max_abs);
    m.emplace_back("oracle.P.rms_dev", dp.rms());
    m.emplace_back("oracle.alpha.max_abs_dev", da.max_abs);
    m.emplace_back("oracle.alpha.rms_dev", da.rms());
    if (guiding) {
      m.emplace_back("oracle.guide_q.max_abs_dev", dg.max_abs);
      m.emplace_back("oracle.guide_q.rms_dev", dg.rms());
    }
  }

  if (grid_run) {
    const auto& obs = grid_run->observables;
    m.emplace_back("grid.steps", static_cast<double>(grid_run->steps));
    m.emplace_back("grid.samples", static_cast<double>(obs.size()));
    m.emplace_back("grid.center", grid_run->grid.center);
    m.emplace_back("grid.initial_norm2", obs.front().norm2);
    m.emplace_back("grid.final_norm2", obs.back().norm2);

    const bool grid_only = mode == RunMode::Grid;
    if (wants(outputs, Artifact::GridTrajectory)) {
      CsvWriter csv(outdir / "grid_trajectory.csv", {"t", "norm2", "centroid", "variance"});
      for (std::size_t s = 0; s < obs.size(); ++s) {
        csv.row({grid_run->fields[s].t, obs[s].norm2, obs[s].centroid, obs[s].variance});
      }
      csv.close();
      report.files.push_back(outdir / "grid_trajectory.csv");
    }
    const Artifact density_artifact = grid_only ? Artifact::Density : Artifact::GridDensity;
    if (wants(outputs, density_artifact)) {
      const auto path = outdir / (grid_only ? "density.csv" : "grid_density.csv");
      std::vector<double> times;
      for (const auto& f : grid_run->fields) times.push_back(f.t);
      write_density(path, heatmap_normalized(grid_run->fields), times, grid_run->grid, *sc.grid);
      report.files.push_back(path);
    }

    if (traj && mode == RunMode::Compare) {
      // Pair samples taken at the same time.
      Deviation dc, dn, dv;
      const double tol = 1e-9 * sc.run.t_final;
      std::size_t a = 0;
      for (std::size_t b = 0; b < obs.size(); ++b) {
        const double t = grid_run->fields[b].t;
        while (a < traj->samples.size() && traj->samples[a].t < t - tol) ++a;
        if (a == traj->samples.size()) break;
        if (std::abs(traj->samples[a].t - t) > tol) continue;
        const auto& st = traj->samples[a];
        dc.add(info[a].centre.Q[0] - obs[b].centroid);
        dn.add(info[a].log_norm2 - std::log(obs[b].norm2));
        dv.add(sc.model.hbar() / (4.0 * st.alpha(0, 0).imag()) - obs[b].variance);
      }
      m.emplace_back("gwd_vs_grid.compared_samples", static_cast<double>(dc.count));
      m.emplace_back("gwd_vs_grid.centroid.max_abs_dev", dc.max_abs);
      m.emplace_back("gwd_vs_grid.centroid.rms_dev", dc.rms());
      m.emplace_back("gwd_vs_grid.log_norm2.max_abs_dev", dn.max_abs);
      m.emplace_back("gwd_vs_grid.variance.max_abs_dev", dv.max_abs);
    }
  }

  if (wants(outputs, Artifact::Report)) {
    CsvWriter csv(outdir / "report.csv", {"metric", "value"});
    for (const auto& [name, value] : m) csv.row(name, value);
    for (const auto& flag : report.flags) csv.row("flag." + flag, 1.0);
    csv.close();
    report.files.push_back(outdir / "report.csv");
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace nhgwp
