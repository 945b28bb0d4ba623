#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nhgwp/error.hpp"
#include "nhgwp/runner.hpp"
#include "nhgwp/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nhgwp::InputError("cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path default_out() {
  if (const char* env = std::getenv("NHGWP_OUT"); env != nullptr && *env != '\0') return env;
  return "nhgwp_out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian wavepackets under an imaginary vector potential"};
  app.set_version_flag("--version", "nhgwp 0.1.0");

  std::string mode_name;
  std::filesystem::path scenario_path;
  std::filesystem::path out_dir = default_out();
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_L;

  app.add_option("mode", mode_name, "gwd | grid | compare | analytic")
      ->required()
      ->check(CLI::IsMember({"gwd", "grid", "compare", "analytic"}));
  app.add_option("--scenario", scenario_path, "Scenario file (key = value)")->required();
  app.add_option("--out", out_dir, "Output directory (default: $NHGWP_OUT or ./nhgwp_out)");
  app.add_option("--dt", dt, "Override the time step");
  app.add_option("--t-final", t_final, "Override the final time");
  app.add_option("--grid-n", grid_n, "Override the number of grid points");
  app.add_option("--grid-L", grid_L, "Override the grid length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    nhgwp::Scenario sc = nhgwp::parse_scenario(read_file(scenario_path));
    if (dt) sc.run.dt = *dt;
    if (t_final) sc.run.t_final = *t_final;
    if (grid_n || grid_L) {
      if (!sc.grid) sc.grid = nhgwp::GridSpec{};
      if (grid_n) sc.grid->n = *grid_n;
      if (grid_L) sc.grid->length = *grid_L;
    }
    const nhgwp::RunMode mode = nhgwp::parse_mode(mode_name);

    const nhgwp::RunReport report = nhgwp::run(mode, sc, out_dir);
    for (const auto& [name, value] : report.metrics) {
      std::cout << name << " = " << nhgwp::format_csv_number(value) << '\n';
    }
    for (const auto& flag : report.flags) std::cout << "flag: " << flag << '\n';
    for (const auto& file : report.files) std::cout << "wrote " << file.string() << '\n';
    std::cout << "wall time: " << report.wall_seconds << " s\n";
    return kExitOk;
  } catch (const nhgwp::InputError& e) {
    std::cerr << "nhgwp: " << scenario_path.string() << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const nhgwp::NumericalError& e) {
    std::cerr << "nhgwp: " << scenario_path.string() << ": numerical failure in " << mode_name
              << " run: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "nhgwp: " << scenario_path.string() << ": " << e.what() << '\n';
    return kExitNumerical;
  }
}
