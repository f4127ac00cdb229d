// Command-line entry point: simulate, oracle, diagnose, sweep, fit, report.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "burgulence/cole_hopf.hpp"
#include "burgulence/config.hpp"
#include "burgulence/diagnostics.hpp"
#include "burgulence/error.hpp"
#include "burgulence/field_io.hpp"
#include "burgulence/inviscid.hpp"
#include "burgulence/report.hpp"
#include "burgulence/scaling.hpp"
#include "burgulence/solver.hpp"

namespace fs = std::filesystem;
using namespace burgulence;

namespace {

enum Exit { ok = 0, config_error = 2, numerical_failure = 3, fit_failure = 4 };

struct Options {
  std::string config_path;
  std::string out;
  std::size_t workers = 0;
  bool deterministic = false;
  long long seed_base = -1;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::coverage:
    case ErrorKind::io:
      return config_error;
    default:
      return numerical_failure;
  }
}

Config load(const Options& o) {
  Config c = parse_config(o.config_path);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.workers > 0) c.workers = o.workers;
  if (o.deterministic) c.deterministic = true;
  if (o.seed_base >= 0) {
    c.seed_base = static_cast<std::uint64_t>(o.seed_base);
    c.hash = fnv1a_hex(c.hash + ";seed_base=" + std::to_string(o.seed_base));
  }
  fs::create_directories(c.output_dir);
  return c;
}

std::ofstream open_out(const Config& c, const std::string& name, bool binary = false) {
  const fs::path path = fs::path(c.output_dir) / name;
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  require(static_cast<bool>(f), ErrorKind::io, "cannot write " + path.string());
  return f;
}

std::ifstream open_in(const Config& c, const std::string& name) {
  const fs::path path = fs::path(c.output_dir) / name;
  std::ifstream f(path);
  if (!f) fail(ErrorKind::io, "missing input " + path.string() + " (run the previous verb first)");
  return f;
}

std::string indexed(const char* stem, std::size_t i, const char* ext) {
  std::ostringstream s;
  s << stem << '_' << std::setw(3) << std::setfill('0') << i << ext;
  return s.str();
}

int simulate(const Config& c) {
  const RunConfig run = to_run_config(c);
  const Trajectory traj = integrate(run);
  std::vector<FieldRecord> records;
  for (const auto& s : traj.snapshots) records.push_back({s.t, run.nu, s.field});
  {
    auto f = open_out(c, "trajectory.bin", true);
    write_field_records(f, records);
  }
  {
    auto f = open_out(c, "stats.csv");
    write_stats_csv(f, traj, c.hash);
  }
  {
    auto f = open_out(c, "final.csv");
    write_field_csv(f, traj.snapshots.back().field, c.hash);
  }
  std::cerr << "simulate: " << traj.stats.size() - 1 << " steps, " << traj.snapshots.size()
            << " snapshots, energy residual " << energy_balance_residual(traj) << '\n';
  return ok;
}

int oracle(const Config& c) {
  require(!c.oracle.times.empty(), ErrorKind::config, "oracle.times: required");
  const std::size_t n = c.oracle.n_out > 0 ? c.oracle.n_out : c.n_grid;
  require(n >= 16, ErrorKind::config, "oracle.n_out: required when n_grid is unknown");
  const PeriodicField u0 = build_initial_condition(c, std::max(n, c.n_grid));
  std::vector<FieldRecord> records;
  for (std::size_t i = 0; i < c.oracle.times.size(); ++i) {
    const double t = c.oracle.times[i];
    if (c.oracle.kind == OracleKind::cole_hopf) {
      require(!c.nu_list.empty(), ErrorKind::config, "nu: required for the Cole-Hopf oracle");
      const auto field = solve_classical(u0, c.nu(), t, n);
      auto f = open_out(c, indexed("cole_hopf", i, ".csv"));
      write_field_csv(f, field, c.hash);
      records.push_back({t, c.nu(), field});
    } else {
      const auto sol = solve_inviscid(u0, c.flux, t, n);
      {
        auto f = open_out(c, indexed("lax_oleinik", i, ".csv"));
        write_field_csv(f, sol.field, c.hash);
      }
      auto f = open_out(c, indexed("shocks", i, ".csv"));
      write_shocks_csv(f, sol, c.hash);
      records.push_back({t, 0.0, sol.field});
    }
  }
  auto f = open_out(c, "oracle.bin", true);
  write_field_records(f, records);
  return ok;
}

int diagnose_verb(const Config& c) {
  require(c.nu_list.size() == 1, ErrorKind::config, "nu: diagnose needs exactly one nu");
  const double nu = c.nu();
  DiagnosticsOptions options = to_diagnostics_options(c, nu);
  RunConfig run;
  if (c.t_end > 0.0) {
    run = to_run_config(c);
  } else {
    // Integrate to the averaging window's end with a dense uniform schedule.
    Config copy = c;
    const PeriodicField u0 = build_initial_condition(c, c.n_grid);
    copy.t_end = 2.0 * quantity_D(u0) / c.flux.sigma();
    copy.snapshots.uniform = std::max(c.snapshots.uniform, 256);
    run = to_run_config(copy);
  }
  const Trajectory traj = integrate(run);
  if (c.auto_K) {
    const auto window =
        averaging_window(quantity_D(traj.config.u0), c.flux.sigma(), estimate_C_tilde(traj));
    options.K = k_ladder[std::size(k_ladder) - 1];
    for (double K : k_ladder) {
      if (lk_fraction(traj, window, K, nu).O_K >= c.occupancy_floor) {
        options.K = K;
        break;
      }
    }
  }
  const DiagnosticsReport report = diagnose(traj, options);
  {
    auto f = open_out(c, "report.json");
    write_report_json(f, report);
  }
  write_report_csvs(c.output_dir, report, c.hash);
  return ok;
}

int sweep(const Config& c) {
  const SweepConfig s = to_sweep_config(c);
  const auto runs = sweep_nu(s, [&](const SweepRun& r) {
    if (!c.deterministic) std::cerr << "sweep: nu=" << r.nu << " seed=" << r.seed << " done\n";
  });
  auto f = open_out(c, "sweep.csv");
  write_sweep_csv(f, runs, c.hash);
  if (c.auto_K) {
    for (double nu : c.nu_list) {
      const auto cal = calibrate_K(runs, nu, c.occupancy_floor);
      std::cerr << "sweep: nu=" << nu << " calibrated K=" << cal.K << (cal.met ? "" : " (floor not met)")
                << '\n';
    }
  }
  return ok;
}

std::vector<SweepRun> read_sweep(const Config& c) {
  auto f = open_in(c, "sweep.csv");
  return read_sweep_csv(f);
}

int fit(const Config& c) {
  const auto runs = read_sweep(c);
  const auto fits = exponent_report(runs, c.exponents);
  auto f = open_out(c, "fits.csv");
  write_fits_csv(f, fits, c.hash);
  bool any_fail = false;
  for (const auto& x : fits) any_fail = any_fail || x.verdict == Verdict::fail;
  return any_fail ? fit_failure : ok;
}

int report(const Config& c) {
  const auto runs = read_sweep(c);
  std::vector<ScalingFit> fits;
  const fs::path fits_path = fs::path(c.output_dir) / "fits.csv";
  if (fs::exists(fits_path)) {
    std::ifstream f(fits_path);
    fits = read_fits_csv(f);
  } else {
    fits = exponent_report(runs, c.exponents);
  }
  auto f = open_out(c, "report.md");
  f << markdown_report(runs, fits, c.hash);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decaying Burgers turbulence: solver, exact oracles and scaling diagnostics"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration")->required();
    sub->add_option("--out", o.out, "output directory (overrides output_dir)");
    sub->add_option("--workers", o.workers, "concurrent runs for sweeps");
    sub->add_flag("--deterministic", o.deterministic, "quiet, reproducible output");
    sub->add_option("--seed-base", o.seed_base, "offset added to every seed");
  };
  struct Verb {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Verb verbs[] = {
      {"simulate", "integrate one run; trajectory.bin, stats.csv, final.csv", simulate},
      {"oracle", "Cole-Hopf or Lax-Oleinik fields at oracle.times", oracle},
      {"diagnose", "integrate and write report.json plus table CSVs", diagnose_verb},
      {"sweep", "nu x seed sweep; sweep.csv", sweep},
      {"fit", "exponent fits from sweep.csv; fits.csv (exit 4 on a failed verdict)", fit},
      {"report", "markdown summary with SVG plots from sweep.csv", report},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    add_common(sub);
    subs.emplace_back(sub, &v);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }
  try {
    for (const auto& [sub, verb] : subs) {
      if (sub->parsed()) return verb->run(load(o));
    }
  } catch (const Error& e) {
    std::cerr << "burgulence: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "burgulence: " << e.what() << '\n';
    return numerical_failure;
  }
  return config_error;
}
