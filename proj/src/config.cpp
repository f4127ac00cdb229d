#include "burgulence/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "burgulence/error.hpp"

namespace burgulence {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorKind::config, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Wraps one JSON object; every key must be consumed, leftovers are schema errors.
class Object {
 public:
  Object(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) schema(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return value_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return value_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) schema(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) schema(path(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (has(key) && !(x > 0.0)) schema(path(key), "must be positive");
    return x;
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) schema(path(key), "expected an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) schema(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) schema(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = raw(key);
    if (!v.is_array()) schema(path(key), "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) schema(path(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!used_.count(it.key()) && it.key().rfind("comment", 0) != 0) {
        schema(path(it.key()), "unknown field");
      }
    }
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

FluxModel parse_flux(Object& root) {
  if (!root.has("flux")) schema("flux", "required (quadratic, quartic or cosh)");
  const json& v = root.raw("flux");
  std::string family;
  double epsilon = 0.0;
  double working_range = FluxModel::default_working_range;
  if (v.is_string()) {
    family = v.get<std::string>();
  } else {
    Object f(v, "flux");
    if (!f.has("family")) schema("flux.family", "required (quadratic, quartic or cosh)");
    family = f.string("family", "");
    epsilon = f.number("epsilon", 0.0);
    working_range = f.positive("working_range", working_range);
    f.finish();
  }
  try {
    switch (parse_flux_family(family)) {
      case FluxFamily::quadratic: return FluxModel::quadratic(working_range);
      case FluxFamily::quartic:
        if (!(epsilon > 0.0)) schema("flux.epsilon", "quartic flux needs epsilon > 0");
        return FluxModel::quartic(epsilon, working_range);
      case FluxFamily::cosh: return FluxModel::cosh(working_range);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config && std::string(e.what()).rfind("flux", 0) == 0) throw;
    schema("flux", e.what());
  }
  schema("flux", "unknown family");
}

void parse_initial(Object& root, Config& c) {
  if (!root.has("initial_condition")) return;
  Object ic(root.raw("initial_condition"), "initial_condition");
  const std::string type = ic.string("type", "random");
  if (type == "random") {
    c.initial.kind = InitialKind::random;
    const long long seed = ic.integer("seed", 1);
    if (seed < 0) schema(ic.path("seed"), "must be >= 0");
    c.initial.seed = static_cast<std::uint64_t>(seed);
    c.initial.modes = static_cast<int>(ic.integer("modes", 4));
    if (c.initial.modes < 1 || c.initial.modes > 8) schema(ic.path("modes"), "must be in 1..8");
  } else if (type == "sine") {
    c.initial.kind = InitialKind::sine;
    c.initial.amplitude = ic.number("amplitude", 1.0);
    c.initial.mode = static_cast<int>(ic.integer("mode", 1));
    if (c.initial.mode < 1) schema(ic.path("mode"), "must be >= 1");
  } else if (type == "samples") {
    c.initial.kind = InitialKind::samples;
    c.initial.path = ic.string("path", "");
    if (c.initial.path.empty()) schema(ic.path("path"), "required for type samples");
  } else {
    schema(ic.path("type"), "expected random, sine or samples");
  }
  ic.finish();
}

void parse_snapshots(Object& root, Config& c) {
  if (!root.has("snapshots")) return;
  Object s(root.raw("snapshots"), "snapshots");
  c.snapshots.uniform = static_cast<int>(s.integer("uniform", c.snapshots.uniform));
  if (c.snapshots.uniform < 1) schema(s.path("uniform"), "must be >= 1");
  c.snapshots.logarithmic = static_cast<int>(s.integer("logarithmic", 0));
  if (c.snapshots.logarithmic < 0) schema(s.path("logarithmic"), "must be >= 0");
  c.snapshots.t_min = s.positive("t_min", 0.0);
  c.snapshots.times = s.numbers("times");
  for (double t : c.snapshots.times) {
    if (!(t >= 0.0)) schema(s.path("times"), "times must be >= 0");
  }
  s.finish();
}

void parse_ranges(Object& root, Config& c) {
  if (!root.has("ranges")) return;
  Object r(root.raw("ranges"), "ranges");
  c.ranges.K = r.number("K", c.ranges.K);
  if (!(c.ranges.K > 1.0)) schema(r.path("K"), "must be > 1");
  c.ranges.nu0 = r.positive("nu0", 0.0);
  c.ranges.C1 = r.positive("C1", 0.0);
  c.ranges.C2 = r.positive("C2", 0.0);
  r.finish();
}

void parse_oracle(Object& root, Config& c) {
  if (!root.has("oracle")) return;
  Object o(root.raw("oracle"), "oracle");
  const std::string kind = o.string("kind", "cole-hopf");
  if (kind == "cole-hopf") {
    c.oracle.kind = OracleKind::cole_hopf;
  } else if (kind == "lax-oleinik") {
    c.oracle.kind = OracleKind::lax_oleinik;
  } else {
    schema(o.path("kind"), "expected cole-hopf or lax-oleinik");
  }
  c.oracle.times = o.numbers("times");
  for (double t : c.oracle.times) {
    if (!(t > 0.0)) schema(o.path("times"), "times must be > 0");
  }
  const long long n = o.integer("n_out", 0);
  if (n != 0 && !(n >= 16 && is_power_of_two(n))) schema(o.path("n_out"), "must be a power of two >= 16");
  c.oracle.n_out = static_cast<std::size_t>(n);
  o.finish();
}

void parse_fits(Object& root, Config& c) {
  if (!root.has("fits")) return;
  Object f(root.raw("fits"), "fits");
  auto& e = c.exponents;
  e.trim_decades = f.number("trim_decades", e.trim_decades);
  if (e.trim_decades < 0.0) schema(f.path("trim_decades"), "must be >= 0");
  e.norm_tolerance = f.positive("norm_tolerance", e.norm_tolerance);
  e.sp_j2_tolerance = f.positive("sp_j2_tolerance", e.sp_j2_tolerance);
  e.sp_j1_tolerance = f.positive("sp_j1_tolerance", e.sp_j1_tolerance);
  e.sp_j1_nu_tolerance = f.positive("sp_j1_nu_tolerance", e.sp_j1_nu_tolerance);
  e.spectrum_tolerance = f.positive("spectrum_tolerance", e.spectrum_tolerance);
  e.flatness_tolerance = f.positive("flatness_tolerance", e.flatness_tolerance);
  e.fixed_ratio = f.positive("fixed_ratio", 0.0);
  f.finish();
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Config parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema("<root>", std::string("invalid JSON: ") + e.what());
  }
  Object root(doc, "");
  Config c;
  c.flux = parse_flux(root);

  if (root.has("nu") && root.has("nu_list")) schema("nu", "give either nu or nu_list, not both");
  if (root.has("nu")) {
    c.nu_list = {root.positive("nu", 0.0)};
  } else if (root.has("nu_list")) {
    c.nu_list = root.numbers("nu_list");
    if (c.nu_list.empty()) schema("nu_list", "must not be empty");
    for (std::size_t i = 0; i < c.nu_list.size(); ++i) {
      if (!(c.nu_list[i] > 0.0)) schema("nu_list[" + std::to_string(i) + "]", "must be positive");
    }
  }

  if (root.has("n_grid")) {
    const json& v = root.raw("n_grid");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") schema("n_grid", "expected an integer or \"auto\"");
    } else if (v.is_number_integer() && v.get<long long>() >= 16 && is_power_of_two(v.get<long long>())) {
      c.n_grid_auto = false;
      c.n_grid = v.get<std::size_t>();
    } else {
      schema("n_grid", "must be a power of two >= 16 or \"auto\"");
    }
  }
  if (c.n_grid_auto && !c.nu_list.empty()) {
    double nu_min = c.nu_list.front();
    for (double nu : c.nu_list) nu_min = std::min(nu_min, nu);
    c.n_grid = resolution_floor(nu_min);
  }

  c.t_end = root.number("t_end", 0.0);
  if (root.has("t_end") && !(c.t_end > 0.0)) schema("t_end", "must be positive");

  parse_initial(root, c);
  parse_snapshots(root, c);

  if (root.has("seeds")) {
    const auto seeds = root.numbers("seeds");
    if (seeds.empty()) schema("seeds", "must not be empty");
    c.seeds.clear();
    for (double s : seeds) {
      if (!(s >= 0.0) || s != std::floor(s)) schema("seeds", "entries must be nonnegative integers");
      c.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  const long long seed_base = root.integer("seed_base", 0);
  if (seed_base < 0) schema("seed_base", "must be >= 0");
  c.seed_base = static_cast<std::uint64_t>(seed_base);

  if (root.has("K")) {
    const json& v = root.raw("K");
    if (v.is_string() && v.get<std::string>() == "auto") {
      c.auto_K = true;
    } else if (v.is_number() && v.get<double>() > 1.0) {
      c.K = v.get<double>();
    } else {
      schema("K", "must be a number > 1 or \"auto\"");
    }
  }
  c.occupancy_floor = root.number("occupancy_floor", c.occupancy_floor);
  if (!(c.occupancy_floor >= 0.0 && c.occupancy_floor <= 1.0)) schema("occupancy_floor", "must be in [0, 1]");
  c.M = root.number("M", c.M);
  if (!(c.M >= 1.0)) schema("M", "must be >= 1");

  parse_ranges(root, c);

  if (root.has("p_list")) {
    c.p_list = root.numbers("p_list");
    if (c.p_list.empty()) schema("p_list", "must not be empty");
    for (double p : c.p_list) {
      if (!(p > 0.0)) schema("p_list", "entries must be positive");
    }
  }
  if (root.has("ell_policy")) {
    Object e(root.raw("ell_policy"), "ell_policy");
    c.ell_per_decade = static_cast<int>(e.integer("per_decade", c.ell_per_decade));
    if (c.ell_per_decade < 1) schema(e.path("per_decade"), "must be >= 1");
    c.ells = e.numbers("ells");
    for (double ell : c.ells) {
      if (!(ell > 0.0 && ell <= 0.5)) schema(e.path("ells"), "entries must lie in (0, 1/2]");
    }
    e.finish();
  }
  if (root.has("k_list")) {
    for (double k : root.numbers("k_list")) {
      if (!(k >= 1.0) || k != std::floor(k)) schema("k_list", "entries must be integers >= 1");
      c.k_list.push_back(static_cast<long>(k));
    }
  }

  c.cfl_safety = root.positive("cfl_safety", c.cfl_safety);
  c.dealias_fraction = root.number("dealias_fraction", c.dealias_fraction);
  if (!(c.dealias_fraction > 0.0 && c.dealias_fraction <= 1.0)) schema("dealias_fraction", "must be in (0, 1]");
  c.output_dir = root.string("output_dir", c.output_dir);
  c.deterministic = root.boolean("deterministic", false);
  const long long workers = root.integer("workers", 1);
  if (workers < 1) schema("workers", "must be >= 1");
  c.workers = static_cast<std::size_t>(workers);

  parse_oracle(root, c);
  parse_fits(root, c);
  root.finish();

  // Range constants must satisfy the admissibility constraints for every nu.
  if (c.nu_list.empty()) {
    c.ranges.resolve(1e-12);
  } else {
    for (double nu : c.nu_list) c.ranges.resolve(nu);
  }
  c.hash = fnv1a_hex(doc.dump());
  return c;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::config, "config file '" + path + "' cannot be read");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

PeriodicField build_initial_condition(const Config& config, std::size_t n) {
  switch (config.initial.kind) {
    case InitialKind::random:
      return random_initial_condition(n, config.seed_base + config.initial.seed, config.initial.modes);
    case InitialKind::sine: {
      const double a = config.initial.amplitude;
      const int k = config.initial.mode;
      return project_zero_mean(sample_function(n, [a, k](double x) { return a * std::sin(2.0 * pi * k * x); }));
    }
    case InitialKind::samples: {
      std::ifstream in(config.initial.path);
      if (!in) fail(ErrorKind::config, "initial_condition.path: cannot read '" + config.initial.path + "'");
      std::vector<double> values;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::size_t comma = line.rfind(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
          values.push_back(std::stod(cell));
        } catch (const std::exception&) {
          if (values.empty()) continue;  // header line
          fail(ErrorKind::config, "initial_condition.path: malformed line '" + line + "'");
        }
      }
      if (!(values.size() >= 16 && is_power_of_two(static_cast<long long>(values.size())))) {
        fail(ErrorKind::config, "initial_condition.path: sample count must be a power of two >= 16");
      }
      const auto field = PeriodicField::from_samples(values);
      return field.size() == n ? field : resample(field, n);
    }
  }
  fail(ErrorKind::internal, "unhandled initial condition kind");
}

RunConfig to_run_config(const Config& config) {
  if (config.nu_list.size() != 1) fail(ErrorKind::config, "nu: a single run needs exactly one nu");
  if (!(config.t_end > 0.0)) fail(ErrorKind::config, "t_end: required for a single run");
  RunConfig run;
  run.nu = config.nu();
  run.flux = config.flux;
  run.n_grid = config.n_grid;
  run.u0 = build_initial_condition(config, config.n_grid);
  run.t_end = config.t_end;
  run.cfl_safety = config.cfl_safety;
  run.dealias_fraction = config.dealias_fraction;
  if (!config.snapshots.times.empty()) {
    run.snapshot_times = config.snapshots.times;
    std::sort(run.snapshot_times.begin(), run.snapshot_times.end());
  } else {
    const double t_min = config.snapshots.t_min > 0.0 ? config.snapshots.t_min : 1e-4 * config.t_end;
    run.snapshot_times =
        snapshot_schedule(config.t_end, config.snapshots.uniform, config.snapshots.logarithmic, t_min);
  }
  validate(run);
  return run;
}

DiagnosticsOptions to_diagnostics_options(const Config& config, double nu) {
  DiagnosticsOptions o;
  o.K = config.K;
  o.M = config.M;
  o.ranges = config.ranges.resolve(nu);
  o.p_list = config.p_list;
  o.ells = config.ells;
  o.ks = config.k_list;
  o.ell_per_decade = config.ell_per_decade;
  return o;
}

SweepConfig to_sweep_config(const Config& config) {
  if (config.nu_list.empty()) fail(ErrorKind::config, "nu_list: required for a sweep");
  if (config.initial.kind != InitialKind::random) {
    fail(ErrorKind::config, "initial_condition.type: sweeps use the seeded random family");
  }
  SweepConfig s;
  s.flux = config.flux;
  s.nu_list = config.nu_list;
  s.seeds = config.seeds;
  s.seed_base = config.seed_base;
  s.modes = config.initial.modes;
  s.n_grid = config.n_grid_auto ? 0 : config.n_grid;
  s.cfl_safety = config.cfl_safety;
  s.dealias_fraction = config.dealias_fraction;
  // Windows can start as late as 2/3 of T2; 256 intervals keep >= 64 samples inside.
  s.uniform_snapshots = std::max(config.snapshots.uniform, 256);
  s.log_snapshots = config.snapshots.logarithmic;
  s.ranges = config.ranges;
  s.K = config.K;
  s.auto_K = config.auto_K;
  s.occupancy_floor = config.occupancy_floor;
  s.diagnostics = to_diagnostics_options(config, config.nu_list.front());
  s.workers = config.workers;
  return s;
}

}  // namespace burgulence
