#include "csflock/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace csflock {

using Json = nlohmann::ordered_json;

bool OutputConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ModelSpec RunConfig::model() const {
  ModelSpec m;
  m.kernel = kernel.family == KernelFamily::Constant ? CommunicationKernel::constant(kernel.H)
                                                     : CommunicationKernel::power_law(kernel.H, kernel.beta);
  m.wall = WallPotential(potential.ell, potential.theta);
  m.geometry = geometry.variant == GeometryKind::Interval ? ConfinementGeometry::interval(geometry.a, geometry.b)
                                                          : ConfinementGeometry::half_line();
  m.n_agents = ic.n_agents;
  return m;
}

IntegrationPlan RunConfig::plan() const { return IntegrationPlan{integrator.control, integrator.t_end, integrator.sample_every}; }

FlockState RunConfig::initial_state() const { return sample_box(ic); }

namespace {

std::string dotted(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

Json parse_json(std::string_view text, const char* what) {
  const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) return Json::object();
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed ") + what + " JSON: " + e.what());
  }
}

// Reads one section object, tracking which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const Json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    node_ = &root.at(name_);
    if (!node_->is_object()) throw ConfigError(name_, "expected an object");
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  void number(const char* key, double& out) {
    if (!take(key)) return;
    const Json& j = node_->at(key);
    if (!j.is_number()) throw ConfigError(dotted(name_, key), "expected a number");
    out = j.get<double>();
    if (!std::isfinite(out)) throw ConfigError(dotted(name_, key), "must be finite");
  }

  void count(const char* key, std::uint64_t& out) {
    if (!take(key)) return;
    const Json& j = node_->at(key);
    if (j.is_number_unsigned()) {
      out = j.get<std::uint64_t>();
    } else if (j.is_number_integer()) {
      throw ConfigError(dotted(name_, key), "must be nonnegative");
    } else {
      throw ConfigError(dotted(name_, key), "expected an unsigned integer");
    }
  }

  void integer(const char* key, int& out) {
    std::uint64_t v = static_cast<std::uint64_t>(std::max(out, 0));
    count(key, v);
    if (v > 1000000) throw ConfigError(dotted(name_, key), "out of range");
    out = static_cast<int>(v);
  }

  void text(const char* key, std::string& out) {
    if (!take(key)) return;
    const Json& j = node_->at(key);
    if (!j.is_string()) throw ConfigError(dotted(name_, key), "expected a string");
    out = j.get<std::string>();
  }

  void text_list(const char* key, std::vector<std::string>& out) {
    if (!take(key)) return;
    const Json& j = node_->at(key);
    if (!j.is_array()) throw ConfigError(dotted(name_, key), "expected an array of strings");
    out.clear();
    for (const auto& e : j) {
      if (!e.is_string()) throw ConfigError(dotted(name_, key), "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [k, _] : node_->items())
      if (!seen_.count(k)) throw ConfigError(dotted(name_, k), "unknown key");
  }

 private:
  bool take(const char* key) {
    if (!has(key)) return false;
    seen_.insert(key);
    return true;
  }

  std::string name_;
  const Json* node_ = nullptr;
  std::set<std::string> seen_;
};

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

RunConfig from_json(const Json& root) {
  if (!root.is_object()) throw ConfigError("", "configuration must be a JSON object");
  static const std::set<std::string> sections{"kernel", "potential", "geometry", "integrator",
                                              "thresholds", "ic",     "output"};
  for (const auto& [k, _] : root.items())
    if (!sections.count(k)) throw ConfigError(k, "unknown section");

  RunConfig cfg;

  Section kernel(root, "kernel");
  std::string family = std::string(to_string(cfg.kernel.family));
  kernel.text("family", family);
  if (family == "powerlaw") {
    cfg.kernel.family = KernelFamily::PowerLaw;
  } else if (family == "constant") {
    cfg.kernel.family = KernelFamily::Constant;
  } else {
    throw ConfigError("kernel.family", "expected \"powerlaw\" or \"constant\"");
  }
  kernel.number("H", cfg.kernel.H);
  kernel.number("beta", cfg.kernel.beta);
  kernel.finish();

  Section potential(root, "potential");
  potential.number("ell", cfg.potential.ell);
  potential.number("theta", cfg.potential.theta);
  potential.finish();

  Section geometry(root, "geometry");
  std::string variant = std::string(to_string(cfg.geometry.variant));
  geometry.text("variant", variant);
  if (variant == "halfline") {
    cfg.geometry.variant = GeometryKind::HalfLine;
    require(!geometry.has("a") && !geometry.has("b"), "geometry.a", "only an interval takes a and b");
  } else if (variant == "interval") {
    cfg.geometry.variant = GeometryKind::Interval;
    require(geometry.has("a"), "geometry.a", "required for an interval");
    require(geometry.has("b"), "geometry.b", "required for an interval");
    geometry.number("a", cfg.geometry.a);
    geometry.number("b", cfg.geometry.b);
  } else {
    throw ConfigError("geometry.variant", "expected \"halfline\" or \"interval\"");
  }
  geometry.finish();

  Section integ(root, "integrator");
  auto& c = cfg.integrator.control;
  integ.number("dt_init", c.dt_init);
  integ.number("abs_tol", c.abs_tol);
  integ.number("rel_tol", c.rel_tol);
  integ.number("dt_min", c.dt_min);
  integ.number("dt_max", c.dt_max);
  integ.number("wall_safety", c.wall_safety);
  integ.number("sample_every", cfg.integrator.sample_every);
  integ.number("t_end", cfg.integrator.t_end);
  integ.finish();

  Section th(root, "thresholds");
  auto& t = cfg.thresholds;
  th.number("align_eps", t.align_eps);
  th.number("settle_eps", t.settle_eps);
  th.number("tail_fraction", t.tail_fraction);
  th.integer("fit_min_points", t.fit_min_points);
  th.number("budget_tol", t.budget_tol);
  th.number("fit_min_r_squared", t.fit_min_r_squared);
  th.finish();

  Section ic(root, "ic");
  std::uint64_t n = cfg.ic.n_agents;
  ic.count("n_agents", n);
  cfg.ic.n_agents = static_cast<std::size_t>(n);
  ic.number("x_low", cfg.ic.x_low);
  ic.number("x_high", cfg.ic.x_high);
  ic.number("v_low", cfg.ic.v_low);
  ic.number("v_high", cfg.ic.v_high);
  ic.count("seed", cfg.ic.seed);
  ic.finish();

  Section out(root, "output");
  out.text("directory", cfg.output.directory);
  out.text_list("formats", cfg.output.formats);
  out.finish();

  validate_config(cfg);
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json j;
  j["kernel"] = {{"family", std::string(to_string(cfg.kernel.family))}, {"H", cfg.kernel.H}, {"beta", cfg.kernel.beta}};
  j["potential"] = {{"ell", cfg.potential.ell}, {"theta", cfg.potential.theta}};
  Json g = {{"variant", std::string(to_string(cfg.geometry.variant))}};
  if (cfg.geometry.variant == GeometryKind::Interval) {
    g["a"] = cfg.geometry.a;
    g["b"] = cfg.geometry.b;
  }
  j["geometry"] = g;
  const auto& c = cfg.integrator.control;
  j["integrator"] = {{"dt_init", c.dt_init},       {"abs_tol", c.abs_tol},
                     {"rel_tol", c.rel_tol},       {"dt_min", c.dt_min},
                     {"dt_max", c.dt_max},         {"wall_safety", c.wall_safety},
                     {"sample_every", cfg.integrator.sample_every}, {"t_end", cfg.integrator.t_end}};
  const auto& t = cfg.thresholds;
  j["thresholds"] = {{"align_eps", t.align_eps},         {"settle_eps", t.settle_eps},
                     {"tail_fraction", t.tail_fraction}, {"fit_min_points", t.fit_min_points},
                     {"budget_tol", t.budget_tol},       {"fit_min_r_squared", t.fit_min_r_squared}};
  j["ic"] = {{"n_agents", cfg.ic.n_agents}, {"x_low", cfg.ic.x_low},   {"x_high", cfg.ic.x_high},
             {"v_low", cfg.ic.v_low},       {"v_high", cfg.ic.v_high}, {"seed", cfg.ic.seed}};
  j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(cfg.kernel.H) && cfg.kernel.H > 0.0, "kernel.H", "must be positive");
  require(finite(cfg.kernel.beta) && cfg.kernel.beta >= 0.0, "kernel.beta", "must be nonnegative");
  require(finite(cfg.potential.ell) && cfg.potential.ell > 0.0, "potential.ell", "must be positive");
  require(finite(cfg.potential.theta) && cfg.potential.theta >= 0.0, "potential.theta", "must be nonnegative");
  if (cfg.geometry.variant == GeometryKind::Interval)
    require(finite(cfg.geometry.a) && finite(cfg.geometry.b) && cfg.geometry.a < cfg.geometry.b, "geometry.b",
            "must exceed geometry.a");

  const auto& c = cfg.integrator.control;
  auto positive = [&](double v) { return finite(v) && v > 0.0; };
  require(positive(c.abs_tol), "integrator.abs_tol", "must be positive");
  require(positive(c.rel_tol), "integrator.rel_tol", "must be positive");
  require(positive(c.dt_min), "integrator.dt_min", "must be positive");
  require(positive(c.dt_max), "integrator.dt_max", "must be positive");
  require(positive(c.dt_init) && c.dt_min <= c.dt_init && c.dt_init <= c.dt_max, "integrator.dt_init",
          "must satisfy dt_min <= dt_init <= dt_max");
  require(c.wall_safety > 0.0 && c.wall_safety < 1.0, "integrator.wall_safety", "must lie in (0, 1)");
  require(positive(cfg.integrator.t_end), "integrator.t_end", "must be positive");
  require(positive(cfg.integrator.sample_every) && cfg.integrator.sample_every <= cfg.integrator.t_end,
          "integrator.sample_every", "must lie in (0, t_end]");

  const auto& t = cfg.thresholds;
  require(positive(t.align_eps), "thresholds.align_eps", "must be positive");
  require(positive(t.settle_eps), "thresholds.settle_eps", "must be positive");
  require(t.tail_fraction > 0.0 && t.tail_fraction < 1.0, "thresholds.tail_fraction", "must lie in (0, 1)");
  require(t.fit_min_points >= 10, "thresholds.fit_min_points", "must be at least 10");
  require(positive(t.budget_tol), "thresholds.budget_tol", "must be positive");
  require(t.fit_min_r_squared >= 0.0 && t.fit_min_r_squared <= 1.0, "thresholds.fit_min_r_squared",
          "must lie in [0, 1]");

  const auto& ic = cfg.ic;
  require(ic.n_agents >= 1 && ic.n_agents <= 4096, "ic.n_agents", "must lie in [1, 4096]");
  require(finite(ic.x_low) && finite(ic.x_high) && ic.x_low <= ic.x_high, "ic.x_high", "must be >= ic.x_low");
  require(finite(ic.v_low) && finite(ic.v_high) && ic.v_low <= ic.v_high, "ic.v_high", "must be >= ic.v_low");
  const double margin = 0.05 * cfg.potential.ell;
  const double left = cfg.geometry.variant == GeometryKind::Interval ? cfg.geometry.a : 0.0;
  require(ic.x_low >= left + margin, "ic.x_low", "sampling box must keep 0.05 ell away from the wall");
  if (cfg.geometry.variant == GeometryKind::Interval)
    require(ic.x_high <= cfg.geometry.b - margin, "ic.x_high", "sampling box must keep 0.05 ell away from the wall");

  require(!cfg.output.directory.empty(), "output.directory", "must not be empty");
  for (const auto& f : cfg.output.formats)
    require(f == "csv" || f == "plot", "output.formats", "entries must be \"csv\" or \"plot\"");
}

RunConfig parse_config(std::string_view text) { return from_json(parse_json(text, "configuration")); }

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

namespace {

std::vector<std::string> leaf_keys() {
  RunConfig probe;
  probe.geometry.variant = GeometryKind::Interval;
  const Json j = to_json(probe);
  std::vector<std::string> keys;
  for (const auto& [section, body] : j.items())
    for (const auto& [k, _] : body.items()) keys.push_back(section + "." + k);
  return keys;
}

// Numbers order numerically, strings lexically, and numbers before strings.
bool value_less(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() < b.get<double>();
  if (a.is_number() != b.is_number()) return a.is_number();
  return a.dump() < b.dump();
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view text) {
  const Json root = parse_json(text, "sweep");
  if (!root.is_object()) throw ConfigError("", "sweep configuration must be a JSON object");
  for (const auto& [k, _] : root.items())
    if (k != "base" && k != "axes" && k != "seeds" && k != "parallelism") throw ConfigError(k, "unknown key");

  SweepConfig sw;
  const Json base = root.value("base", Json::object());
  const RunConfig base_cfg = from_json(base);
  sw.base_text = base.dump();

  const auto known = leaf_keys();
  if (root.contains("axes")) {
    const Json& axes = root.at("axes");
    if (!axes.is_array()) throw ConfigError("axes", "expected an array");
    for (const auto& a : axes) {
      if (!a.is_object() || !a.contains("key") || !a.contains("values") || a.size() != 2)
        throw ConfigError("axes", "each axis needs exactly \"key\" and \"values\"");
      if (!a.at("key").is_string()) throw ConfigError("axes", "axis key must be a string");
      SweepAxis axis;
      axis.key = a.at("key").get<std::string>();
      if (std::find(known.begin(), known.end(), axis.key) == known.end() || axis.key.rfind("output.", 0) == 0)
        throw ConfigError(axis.key, "not a sweepable configuration key");
      const Json& vals = a.at("values");
      if (!vals.is_array() || vals.empty()) throw ConfigError(axis.key, "values must be a nonempty array");
      std::vector<Json> sorted(vals.begin(), vals.end());
      for (const auto& v : sorted)
        if (!v.is_primitive() || v.is_null()) throw ConfigError(axis.key, "values must be scalars");
      std::stable_sort(sorted.begin(), sorted.end(), value_less);
      for (const auto& v : sorted) axis.values.push_back(v.dump());
      sw.axes.push_back(std::move(axis));
    }
  }

  if (root.contains("seeds")) {
    const Json& seeds = root.at("seeds");
    if (!seeds.is_array() || seeds.empty()) throw ConfigError("seeds", "expected a nonempty array");
    for (const auto& s : seeds) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds", "seeds must be unsigned integers");
      sw.seeds.push_back(s.get<std::uint64_t>());
    }
    std::stable_sort(sw.seeds.begin(), sw.seeds.end());
  } else {
    sw.seeds.push_back(base_cfg.ic.seed);
  }

  if (root.contains("parallelism")) {
    const Json& p = root.at("parallelism");
    if (!p.is_number_unsigned() || p.get<std::uint64_t>() == 0 || p.get<std::uint64_t>() > 256)
      throw ConfigError("parallelism", "must be an integer in [1, 256]");
    sw.parallelism = static_cast<unsigned>(p.get<std::uint64_t>());
  }

  std::size_t total = sw.seeds.size();
  for (const auto& a : sw.axes) {
    total *= a.values.size();
    if (total > kMaxSweepRuns) throw ConfigError("axes", "sweep exceeds 10000 runs");
  }
  if (total > kMaxSweepRuns) throw ConfigError("seeds", "sweep exceeds 10000 runs");
  return sw;
}

SweepConfig load_sweep_config(const std::string& path) { return parse_sweep_config(read_file(path)); }

std::vector<SweepRun> SweepConfig::expand() const {
  const Json base = Json::parse(base_text);
  std::vector<std::size_t> pos(axes.size(), 0);
  std::vector<SweepRun> runs;
  for (;;) {
    for (std::uint64_t seed : seeds) {
      SweepRun run;
      run.index = runs.size();
      run.seed = seed;
      Json j = base;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto& key = axes[a].key;
        const auto dot = key.find('.');
        run.values.push_back(axes[a].values[pos[a]]);
        j[key.substr(0, dot)][key.substr(dot + 1)] = Json::parse(axes[a].values[pos[a]]);
      }
      j["ic"]["seed"] = seed;
      try {
        run.config = from_json(j);
      } catch (const ConfigError& e) {
        run.error = e.what();
      }
      runs.push_back(std::move(run));
    }
    // Odometer over the axes, last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++pos[a] < axes[a].values.size()) break;
      pos[a] = 0;
      if (a == 0) return runs;
    }
    if (axes.empty()) return runs;
  }
}

}  // namespace csflock
