#include "nhgwp/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <system_error>

#include "nhgwp/error.hpp"
#include "nhgwp/transforms.hpp"

namespace nhgwp {

namespace {

constexpr std::array kKnownKeys = {
    "dim", "mass", "hbar", "potential.coeffs", "potential.terms", "b.slope", "b.offset", "q0", "p0",
    "alpha0", "gamma0", "representation", "dt", "t_final", "sample_stride", "mode", "outputs",
    "grid.n", "grid.L", "grid.center", "grid.scheme", "grid.dt", "grid.mask", "grid.mask.cutoff",
    "grid.mask.width", "grid.max_step_growth", "grid.tail_tolerance", "grid.boundary_tolerance",
    "density.time_stride", "density.x_stride",
};

struct Entry {
  std::string value;
  std::size_t line;
};
using Entries = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool parse_double_exact(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

std::string format_list(const RealVector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

/// Typed access to the entry map; conversion failures carry the line number.
class Reader {
 public:
  explicit Reader(const Entries& entries) : entries_(entries) {}

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  const Entry& entry(std::string_view key) const { return entries_.find(key)->second; }

  double real(std::string_view key) const {
    const Entry& e = entry(key);
    double v = 0.0;
    if (!parse_double_exact(e.value, v)) throw ParseError(e.line, "'" + std::string(key) + "' expects a number");
    return v;
  }
  double real_or(std::string_view key, double fallback) const { return has(key) ? real(key) : fallback; }

  long long integer(std::string_view key) const {
    const Entry& e = entry(key);
    std::string_view s = e.value;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ParseError(e.line, "'" + std::string(key) + "' expects an integer");
    }
    return v;
  }

  std::vector<double> reals(std::string_view key) const {
    const Entry& e = entry(key);
    std::vector<double> out;
    for (auto part : split(e.value, ',')) {
      double v = 0.0;
      if (!parse_double_exact(part, v)) {
        throw ParseError(e.line, "'" + std::string(key) + "' expects comma-separated numbers");
      }
      out.push_back(v);
    }
    return out;
  }

  std::vector<Complex> complexes(std::string_view key) const {
    const Entry& e = entry(key);
    std::vector<Complex> out;
    for (auto part : split(e.value, ',')) {
      try {
        out.push_back(parse_complex(part));
      } catch (const std::invalid_argument& err) {
        throw ParseError(e.line, "'" + std::string(key) + "': " + err.what());
      }
    }
    return out;
  }

  std::string_view word(std::string_view key) const { return entry(key).value; }

 private:
  const Entries& entries_;
};

Entries tokenize(std::string_view text) {
  Entries entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
    if (entries.find(key) != entries.end()) {
      throw ParseError(line_no, "'" + std::string(key) + "' given more than once");
    }
    entries.emplace(std::string(key), Entry{std::string(value), line_no});
  }
  return entries;
}

RealVector broadcast(const std::vector<double>& values, std::size_t dim, const char* key, double fallback) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (values.empty()) return RealVector::Constant(n, fallback);
  if (values.size() == 1) return RealVector::Constant(n, values.front());
  if (values.size() != dim) {
    throw ValidationError(key, "expected 1 or " + std::to_string(dim) + " values, got " + std::to_string(values.size()));
  }
  return Eigen::Map<const RealVector>(values.data(), n);
}

PolynomialPotential parse_terms(const Entry& e, std::size_t dim) {
  std::vector<Monomial> terms;
  for (auto item : split(e.value, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError(e.line, "potential term '" + std::string(item) + "' lacks ':'");
    Monomial m;
    for (auto power : split(item.substr(0, colon), ',')) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(power.data(), power.data() + power.size(), v);
      if (power.empty() || ec != std::errc{} || ptr != power.data() + power.size()) {
        throw ParseError(e.line, "bad exponent '" + std::string(power) + "'");
      }
      if (v < 0) throw ValidationError("potential.terms", "exponents must be non-negative");
      m.powers.push_back(v);
    }
    if (!parse_double_exact(trim(item.substr(colon + 1)), m.coeff)) {
      throw ParseError(e.line, "bad coefficient in potential term '" + std::string(item) + "'");
    }
    if (m.powers.size() != dim) {
      throw ValidationError("potential.terms", "term has " + std::to_string(m.powers.size()) +
                                                   " exponents, dim is " + std::to_string(dim));
    }
    terms.push_back(std::move(m));
  }
  return PolynomialPotential(dim, std::move(terms));
}

GridScheme parse_scheme(std::string_view s) {
  if (s == "crank-nicolson" || s == "cn") return GridScheme::CrankNicolson;
  if (s == "spectral") return GridScheme::Spectral;
  throw ValidationError("grid.scheme", "expected 'crank-nicolson' or 'spectral', got '" + std::string(s) + "'");
}

Artifact parse_artifact(std::string_view s) {
  for (auto a : {Artifact::Trajectory, Artifact::Density, Artifact::GridTrajectory, Artifact::GridDensity,
                 Artifact::Analytic, Artifact::Report}) {
    if (to_string(a) == s) return a;
  }
  throw ValidationError("outputs", "unknown artifact '" + std::string(s) + "'");
}

bool finite(const RealVector& v) { return v.allFinite(); }

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(key, "must be positive and finite");
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty complex literal");

  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split_at = std::string_view::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split_at = i;
  }

  auto imaginary = [&](std::string_view part) {
    if (part.empty() || part.back() != 'i') throw std::invalid_argument("malformed complex literal '" + std::string(s) + "'");
    part.remove_suffix(1);
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    double v = 0.0;
    if (!parse_double_exact(part, v)) throw std::invalid_argument("malformed complex literal '" + std::string(s) + "'");
    return v;
  };

  if (split_at == std::string_view::npos) {
    if (s.back() == 'i') return {0.0, imaginary(s)};
    double v = 0.0;
    if (!parse_double_exact(s, v)) throw std::invalid_argument("malformed complex literal '" + std::string(s) + "'");
    return {v, 0.0};
  }
  double re = 0.0;
  if (!parse_double_exact(s.substr(0, split_at), re)) {
    throw std::invalid_argument("malformed complex literal '" + std::string(s) + "'");
  }
  return {re, imaginary(s.substr(split_at))};
}

std::string format_complex(Complex z) {
  std::string im = format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(z.real()) + im + "i";
}

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Gwd: return "gwd";
    case RunMode::Grid: return "grid";
    case RunMode::Compare: return "compare";
    case RunMode::Analytic: return "analytic";
  }
  return "gwd";
}

std::string_view to_string(Artifact artifact) {
  switch (artifact) {
    case Artifact::Trajectory: return "trajectory";
    case Artifact::Density: return "density";
    case Artifact::GridTrajectory: return "grid_trajectory";
    case Artifact::GridDensity: return "grid_density";
    case Artifact::Analytic: return "analytic";
    case Artifact::Report: return "report";
  }
  return "report";
}

RunMode parse_mode(std::string_view name) {
  for (auto m : {RunMode::Gwd, RunMode::Grid, RunMode::Compare, RunMode::Analytic}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("mode", "expected gwd, grid, compare or analytic, got '" + std::string(name) + "'");
}

std::vector<Artifact> artifacts_for(RunMode mode, bool has_grid) {
  switch (mode) {
    case RunMode::Gwd:
      if (has_grid) return {Artifact::Trajectory, Artifact::Density, Artifact::Report};
      return {Artifact::Trajectory, Artifact::Report};
    case RunMode::Grid:
      return {Artifact::GridTrajectory, Artifact::Density, Artifact::Report};
    case RunMode::Compare:
      return {Artifact::Trajectory, Artifact::Density, Artifact::GridTrajectory, Artifact::GridDensity,
              Artifact::Report};
    case RunMode::Analytic:
      return {Artifact::Trajectory, Artifact::Analytic, Artifact::Report};
  }
  return {};
}

Scenario parse_scenario(std::string_view text) {
  const Entries entries = tokenize(text);
  const Reader r(entries);
  Scenario sc;

  const long long dim_ll = r.has("dim") ? r.integer("dim") : 1;
  if (dim_ll < 1 || dim_ll > 64) throw ValidationError("dim", "must be between 1 and 64");
  const auto dim = static_cast<std::size_t>(dim_ll);
  const auto n = static_cast<Eigen::Index>(dim);

  const RealVector masses = broadcast(r.has("mass") ? r.reals("mass") : std::vector<double>{}, dim, "mass", 1.0);
  if (!(masses.array() > 0.0).all() || !finite(masses)) throw ValidationError("mass", "masses must be positive");
  const double hbar = r.real_or("hbar", 1.0);
  require_positive(hbar, "hbar");

  if (r.has("potential.coeffs") && r.has("potential.terms")) {
    throw ValidationError("potential.terms", "give either potential.coeffs or potential.terms, not both");
  }
  PolynomialPotential potential(dim, {});
  if (r.has("potential.coeffs")) {
    if (dim != 1) throw ValidationError("potential.coeffs", "dense coefficients are for dim = 1; use potential.terms");
    potential = PolynomialPotential::from_power_series(r.reals("potential.coeffs"));
  } else if (r.has("potential.terms")) {
    potential = parse_terms(r.entry("potential.terms"), dim);
  }
  for (const auto& t : potential.terms()) {
    if (!std::isfinite(t.coeff)) throw ValidationError("potential", "coefficients must be finite");
  }

  LinearVectorPotential vecpot{
      broadcast(r.has("b.slope") ? r.reals("b.slope") : std::vector<double>{}, dim, "b.slope", 0.0),
      broadcast(r.has("b.offset") ? r.reals("b.offset") : std::vector<double>{}, dim, "b.offset", 0.0)};
  if (!finite(vecpot.slope)) throw ValidationError("b.slope", "must be finite");
  if (!finite(vecpot.offset)) throw ValidationError("b.offset", "must be finite");
  sc.model = ModelSpec(masses, hbar, std::move(potential), std::move(vecpot));

  sc.initial.q0 = broadcast(r.has("q0") ? r.reals("q0") : std::vector<double>{}, dim, "q0", 0.0);
  sc.initial.p0 = broadcast(r.has("p0") ? r.reals("p0") : std::vector<double>{}, dim, "p0", 0.0);
  if (!r.has("alpha0")) throw ValidationError("alpha0", "required");
  const auto alpha = r.complexes("alpha0");
  if (alpha.size() == dim * dim) {
    sc.initial.alpha0 = ComplexMatrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) sc.initial.alpha0(i, j) = alpha[static_cast<std::size_t>(i * n + j)];
    }
  } else if (alpha.size() == dim) {
    sc.initial.alpha0 = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) sc.initial.alpha0(i, i) = alpha[static_cast<std::size_t>(i)];
  } else {
    throw ValidationError("alpha0", "expected " + std::to_string(dim) + " diagonal or " + std::to_string(dim * dim) +
                                        " row-major entries, got " + std::to_string(alpha.size()));
  }

  if (r.has("gamma0")) {
    const auto g = r.word("gamma0");
    if (g == "unit-norm") {
      sc.initial.gamma_policy = GammaPolicy::UnitNorm;
    } else if (g == "zero") {
      sc.initial.gamma_policy = GammaPolicy::Zero;
    } else {
      sc.initial.gamma_policy = GammaPolicy::Explicit;
      const auto values = r.complexes("gamma0");
      if (values.size() != 1) throw ValidationError("gamma0", "expected a single value");
      sc.initial.gamma0 = values.front();
    }
  }
  if (r.has("representation")) {
    const auto rep = r.word("representation");
    if (rep == "direct") {
      sc.initial.representation = Representation::Direct;
    } else if (rep == "guiding") {
      sc.initial.representation = Representation::Guiding;
    } else {
      throw ValidationError("representation", "expected 'direct' or 'guiding'");
    }
  }

  if (r.has("dt")) sc.run.dt = r.real("dt");
  if (r.has("t_final")) sc.run.t_final = r.real("t_final");
  if (r.has("sample_stride")) {
    const auto s = r.integer("sample_stride");
    if (s < 1 || s > 1'000'000'000) throw ValidationError("sample_stride", "must be a positive integer");
    sc.run.sample_stride = static_cast<int>(s);
  }

  const bool any_grid = std::any_of(entries.begin(), entries.end(), [](const auto& kv) {
    return kv.first.rfind("grid.", 0) == 0 || kv.first.rfind("density.", 0) == 0;
  });
  if (any_grid) {
    GridSpec g;
    if (r.has("grid.n")) {
      const auto v = r.integer("grid.n");
      if (v < 16 || v > (1LL << 26)) throw ValidationError("grid.n", "must be between 16 and 2^26");
      g.n = static_cast<std::size_t>(v);
    }
    g.length = r.real_or("grid.L", g.length);
    if (r.has("grid.center")) g.center = r.real("grid.center");
    if (r.has("grid.scheme")) g.scheme = parse_scheme(r.word("grid.scheme"));
    if (r.has("grid.dt")) g.dt = r.real("grid.dt");
    const bool mask_params = r.has("grid.mask.cutoff") || r.has("grid.mask.width");
    if (r.has("grid.mask")) {
      const auto m = r.word("grid.mask");
      if (m == "on") {
        g.mask = SpectralMask{};
      } else if (m != "off") {
        throw ValidationError("grid.mask", "expected 'on' or 'off'");
      }
    }
    if (mask_params && !g.mask) throw ValidationError("grid.mask", "mask parameters given but grid.mask is not 'on'");
    if (g.mask) {
      g.mask->cutoff = r.real_or("grid.mask.cutoff", g.mask->cutoff);
      g.mask->width = r.real_or("grid.mask.width", g.mask->width);
    }
    g.max_step_growth = r.real_or("grid.max_step_growth", g.max_step_growth);
    g.tail_tolerance = r.real_or("grid.tail_tolerance", g.tail_tolerance);
    g.boundary_tolerance = r.real_or("grid.boundary_tolerance", g.boundary_tolerance);
    if (r.has("density.time_stride")) {
      const auto v = r.integer("density.time_stride");
      if (v < 1 || v > 1'000'000'000) throw ValidationError("density.time_stride", "must be a positive integer");
      g.density_time_stride = static_cast<int>(v);
    }
    if (r.has("density.x_stride")) {
      const auto v = r.integer("density.x_stride");
      if (v < 1 || v > 1'000'000'000) throw ValidationError("density.x_stride", "must be a positive integer");
      g.density_x_stride = static_cast<int>(v);
    }
    sc.grid = g;
  }

  if (r.has("mode")) sc.mode = parse_mode(r.word("mode"));
  if (r.has("outputs")) {
    for (auto name : split(r.word("outputs"), ',')) sc.outputs.push_back(parse_artifact(name));
  }

  validate_scenario(sc);
  return sc;
}

void validate_scenario(const Scenario& sc) {
  const auto dim = sc.model.dim();
  const auto n = static_cast<Eigen::Index>(dim);
  if (dim == 0) throw ValidationError("dim", "model is empty");
  if (sc.initial.q0.size() != n) throw ValidationError("q0", "length differs from dim");
  if (sc.initial.p0.size() != n) throw ValidationError("p0", "length differs from dim");
  if (!finite(sc.initial.q0)) throw ValidationError("q0", "must be finite");
  if (!finite(sc.initial.p0)) throw ValidationError("p0", "must be finite");

  const ComplexMatrix& a = sc.initial.alpha0;
  if (a.rows() != n || a.cols() != n) throw ValidationError("alpha0", "must be dim x dim");
  if (!a.allFinite()) throw ValidationError("alpha0", "must be finite");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1.0 + a.cwiseAbs().maxCoeff())) {
    throw ValidationError("alpha0", "must be symmetric");
  }
  const WavepacketState probe{a, ComplexVector::Zero(n), ComplexVector::Zero(n), {}, 0.0};
  if (!is_normalizable(probe)) throw ValidationError("alpha0", "Im(alpha0) must be positive definite");
  if (sc.initial.gamma_policy == GammaPolicy::Explicit &&
      (!std::isfinite(sc.initial.gamma0.real()) || !std::isfinite(sc.initial.gamma0.imag()))) {
    throw ValidationError("gamma0", "must be finite");
  }

  require_positive(sc.run.dt, "dt");
  require_positive(sc.run.t_final, "t_final");
  if (!(sc.run.dt < sc.run.t_final)) throw ValidationError("dt", "must be smaller than t_final");
  if (sc.run.sample_stride < 1) throw ValidationError("sample_stride", "must be at least 1");

  if (sc.grid) {
    const GridSpec& g = *sc.grid;
    if (dim != 1) throw ValidationError("dim", "grid propagation needs dim = 1");
    if (g.n < 16) throw ValidationError("grid.n", "must be at least 16");
    require_positive(g.length, "grid.L");
    if (g.center && !std::isfinite(*g.center)) throw ValidationError("grid.center", "must be finite");
    if (g.dt) {
      require_positive(*g.dt, "grid.dt");
      const double ratio = sc.run.dt * sc.run.sample_stride / *g.dt;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
        throw ValidationError("grid.dt", "dt * sample_stride must be a whole multiple of grid.dt");
      }
    }
    if (g.mask) {
      if (!(g.mask->cutoff >= 0.0) || !std::isfinite(g.mask->cutoff)) {
        throw ValidationError("grid.mask.cutoff", "must be non-negative");
      }
      require_positive(g.mask->width, "grid.mask.width");
    }
    require_positive(g.max_step_growth, "grid.max_step_growth");
    require_positive(g.tail_tolerance, "grid.tail_tolerance");
    require_positive(g.boundary_tolerance, "grid.boundary_tolerance");
    if (g.density_time_stride < 1) throw ValidationError("density.time_stride", "must be at least 1");
    if (g.density_x_stride < 1) throw ValidationError("density.x_stride", "must be at least 1");
    if (g.scheme == GridScheme::Spectral && !sc.model.vecpot().is_constant()) {
      throw ValidationError("grid.scheme", "the spectral scheme needs a constant b (b.slope = 0)");
    }
  }
  if ((sc.mode == RunMode::Grid || sc.mode == RunMode::Compare) && !sc.grid) {
    throw ValidationError("mode", std::string(to_string(sc.mode)) + " mode needs grid settings (grid.n, grid.L, ...)");
  }
  const auto allowed = artifacts_for(sc.mode, sc.grid.has_value());
  for (auto out : sc.outputs) {
    if (std::find(allowed.begin(), allowed.end(), out) == allowed.end()) {
      throw ValidationError("outputs", "'" + std::string(to_string(out)) + "' is not produced in " +
                                           std::string(to_string(sc.mode)) + " mode");
    }
  }
}

std::string print_scenario(const Scenario& sc) {
  const auto dim = sc.model.dim();
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  line("dim", std::to_string(dim));
  line("mass", format_list(sc.model.masses()));
  line("hbar", format_double(sc.model.hbar()));

  const auto& pot = sc.model.potential();
  bool dense = false;
  if (dim == 1) {
    const auto coeffs = pot.power_series();
    dense = PolynomialPotential::from_power_series(coeffs) == pot;
    if (dense) {
      std::string s;
      for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? ", " : "") + format_double(coeffs[i]);
      line("potential.coeffs", s);
    }
  }
  if (!dense && !pot.terms().empty()) {
    std::string s;
    for (std::size_t t = 0; t < pot.terms().size(); ++t) {
      if (t) s += "; ";
      const auto& m = pot.terms()[t];
      for (std::size_t j = 0; j < m.powers.size(); ++j) s += (j ? "," : "") + std::to_string(m.powers[j]);
      s += ":" + format_double(m.coeff);
    }
    line("potential.terms", s);
  }

  line("b.slope", format_list(sc.model.vecpot().slope));
  line("b.offset", format_list(sc.model.vecpot().offset));
  line("q0", format_list(sc.initial.q0));
  line("p0", format_list(sc.initial.p0));
  {
    std::string s;
    const auto& a = sc.initial.alpha0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) s += ((i || j) ? ", " : "") + format_complex(a(i, j));
    }
    line("alpha0", s);
  }
  switch (sc.initial.gamma_policy) {
    case GammaPolicy::UnitNorm: line("gamma0", "unit-norm"); break;
    case GammaPolicy::Zero: line("gamma0", "zero"); break;
    case GammaPolicy::Explicit: line("gamma0", format_complex(sc.initial.gamma0)); break;
  }
  line("representation", sc.initial.representation == Representation::Guiding ? "guiding" : "direct");
  line("dt", format_double(sc.run.dt));
  line("t_final", format_double(sc.run.t_final));
  line("sample_stride", std::to_string(sc.run.sample_stride));
  line("mode", std::string(to_string(sc.mode)));
  if (!sc.outputs.empty()) {
    std::string s;
    for (std::size_t i = 0; i < sc.outputs.size(); ++i) s += (i ? ", " : "") + std::string(to_string(sc.outputs[i]));
    line("outputs", s);
  }
  if (sc.grid) {
    const GridSpec& g = *sc.grid;
    line("grid.n", std::to_string(g.n));
    line("grid.L", format_double(g.length));
    if (g.center) line("grid.center", format_double(*g.center));
    line("grid.scheme", g.scheme == GridScheme::Spectral ? "spectral" : "crank-nicolson");
    if (g.dt) line("grid.dt", format_double(*g.dt));
    line("grid.mask", g.mask ? "on" : "off");
    if (g.mask) {
      line("grid.mask.cutoff", format_double(g.mask->cutoff));
      line("grid.mask.width", format_double(g.mask->width));
    }
    line("grid.max_step_growth", format_double(g.max_step_growth));
    line("grid.tail_tolerance", format_double(g.tail_tolerance));
    line("grid.boundary_tolerance", format_double(g.boundary_tolerance));
    line("density.time_stride", std::to_string(g.density_time_stride));
    line("density.x_stride", std::to_string(g.density_x_stride));
  }
  return out;
}

WavepacketState initial_wavefunction(const Scenario& sc) {
  WavepacketState s;
  s.alpha = sc.initial.alpha0;
  s.q = sc.initial.q0.cast<Complex>();
  s.p = sc.initial.p0.cast<Complex>();
  s.t = 0.0;
  switch (sc.initial.gamma_policy) {
    case GammaPolicy::UnitNorm:
      s.gamma = Complex{0.0, unit_norm_gamma_imag(s.alpha, sc.model.hbar())};
      break;
    case GammaPolicy::Zero:
      s.gamma = Complex{0.0, 0.0};
      break;
    case GammaPolicy::Explicit:
      s.gamma = sc.initial.gamma0;
      break;
  }
  return s;
}

WavepacketState initial_state(const Scenario& sc) {
  WavepacketState s = initial_wavefunction(sc);
  if (sc.initial.representation == Representation::Guiding) {
    s = sc.model.vecpot().is_constant() ? guiding_ic_constant(s, sc.model) : guiding_ic_linear(s, sc.model);
  }
  return s;
}

}  // namespace nhgwp
