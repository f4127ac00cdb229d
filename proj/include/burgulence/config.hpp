#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "burgulence/diagnostics.hpp"
#include "burgulence/flux.hpp"
#include "burgulence/scaling.hpp"
#include "burgulence/solver.hpp"

namespace burgulence {

enum class InitialKind { random, sine, samples };

struct InitialConditionSpec {
  InitialKind kind = InitialKind::random;
  std::uint64_t seed = 1;
  int modes = 4;
  double amplitude = 1.0;  // sine
  int mode = 1;            // sine
  std::string path;        // samples: CSV with columns x,u (or a single column u)
};

struct SnapshotPolicy {
  int uniform = 64;
  int logarithmic = 0;
  double t_min = 0.0;        ///< 0: t_end * 1e-4
  std::vector<double> times; ///< explicit list overrides the grids
};

enum class OracleKind { cole_hopf, lax_oleinik };

struct OracleSpec {
  OracleKind kind = OracleKind::cole_hopf;
  std::vector<double> times;
  std::size_t n_out = 0;  ///< 0: n_grid
};

/// Validated configuration for every CLI verb.
struct Config {
  FluxModel flux = FluxModel::quadratic();
  std::vector<double> nu_list;
  bool n_grid_auto = true;
  std::size_t n_grid = 0;  ///< resolved: the resolution floor of the smallest nu when auto
  double t_end = 0.0;
  InitialConditionSpec initial;
  SnapshotPolicy snapshots;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  std::uint64_t seed_base = 0;
  double K = 10.0;
  bool auto_K = false;
  double occupancy_floor = 0.1;
  double M = 2.0;
  RangeConstants ranges;
  std::vector<double> p_list{0.5, 1.0, 2.0, 3.0, 4.0};
  int ell_per_decade = 10;
  std::vector<double> ells;
  std::vector<long> k_list;
  double cfl_safety = 0.4;
  double dealias_fraction = 2.0 / 3.0;
  std::string output_dir = "out";
  bool deterministic = false;
  std::size_t workers = 1;
  OracleSpec oracle;
  ExponentOptions exponents;
  std::string hash;  ///< FNV-1a of the canonical JSON text, 16 hex digits

  double nu() const { return nu_list.front(); }
};

/// Parses and validates JSON text. Errors are config errors naming the field path.
Config parse_config_text(std::string_view text);
/// Reads the file (missing file: config error) and parses it.
Config parse_config(const std::string& path);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

PeriodicField build_initial_condition(const Config& config, std::size_t n);
/// Single run at config.nu() with the configured initial condition and snapshot policy.
RunConfig to_run_config(const Config& config);
SweepConfig to_sweep_config(const Config& config);
DiagnosticsOptions to_diagnostics_options(const Config& config, double nu);

}  // namespace burgulence
