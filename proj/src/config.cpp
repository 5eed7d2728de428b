#include "giantatom/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace giantatom::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path, msg);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

const json& expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(join(path, it.key()), "unknown key");
  }
}

double get_double(const json& obj, const std::string& path, const char* key,
                  double fallback, bool* present = nullptr) {
  if (!obj.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(join(path, key), "must be finite");
  return d;
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string get_enum(const json& obj, const std::string& path, const char* key,
                     const std::string& fallback,
                     std::initializer_list<const char*> allowed) {
  std::string s = fallback;
  if (obj.contains(key)) {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    s = v.get<std::string>();
  }
  for (const char* a : allowed)
    if (s == a) return s;
  std::ostringstream msg;
  msg << "unknown value '" << s << "'";
  fail(join(path, key), msg.str());
}

std::vector<double> get_double_array(const json& obj, const std::string& path,
                                     const char* key, bool required) {
  if (!obj.contains(key)) {
    if (required) fail(join(path, key), "required array is missing");
    return {};
  }
  const json& v = obj.at(key);
  if (!v.is_array()) fail(join(path, key), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      std::ostringstream p;
      p << join(path, key) << "[" << i << "]";
      fail(p.str(), "expected a number");
    }
    const double d = v[i].get<double>();
    if (!std::isfinite(d)) {
      std::ostringstream p;
      p << join(path, key) << "[" << i << "]";
      fail(p.str(), "must be finite");
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace

double RunConfig::frequency_scale() const {
  if (unit == "angular") return 1.0;
  if (positions.size() < 2)
    throw ConfigError("atom.unit", "natural unit needs at least two connection points");
  return two_pi * velocity / (positions[1] - positions[0]);
}

AtomSpec RunConfig::atom() const {
  const double s = frequency_scale();
  AtomSpec a;
  a.levels = levels;
  a.omega10 = omega10 * s;
  a.anharmonicity = anharmonicity * s;
  a.validate();
  return a;
}

CouplingLayout RunConfig::layout() const {
  CouplingLayout l;
  l.positions = positions;
  l.weights = weights;
  l.velocity = velocity;
  l.mode_coupling = mode_coupling;
  l.validate();
  return l;
}

Environment RunConfig::environment() const {
  const double s = frequency_scale();
  Environment e;
  e.dos.model = dos_type == "ohmic" ? DensityOfStates::Model::ohmic
                                    : DensityOfStates::Model::constant;
  e.dos.value = dos_value;
  e.temperature = temperature * s;
  e.cutoff = cutoff ? *cutoff * s : 20.0 * omega10 * s;
  e.validate();
  return e;
}

MirrorSpec RunConfig::mirror() const { return {mirror_phase, mirror_enabled}; }

std::optional<dynamics::DriveSpec> RunConfig::drive_spec() const {
  if (!drive) return std::nullopt;
  const double s = frequency_scale();
  dynamics::DriveSpec d;
  d.amplitude = drive->amplitude * s;
  d.lower = drive->lower;
  d.upper = drive->upper;
  d.detuning = drive->detuning * s;
  d.validate(levels);
  return d;
}

spectral::ShiftMode RunConfig::resolved_shift_mode() const {
  if (shift_mode == "hilbert") return spectral::ShiftMode::hilbert;
  if (shift_mode == "renormalized") return spectral::ShiftMode::renormalized;
  return spectral::ShiftMode::automatic;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  expect_object(doc, "");
  check_keys(doc, "",
             {"atom", "layout", "environment", "mirror", "drive", "grid", "initial",
              "design", "shift_mode", "normalization", "output", "format", "seed"});

  RunConfig cfg;

  if (doc.contains("atom")) {
    const json& a = expect_object(doc.at("atom"), "atom");
    check_keys(a, "atom", {"levels", "omega10", "anharmonicity", "unit"});
    cfg.levels = get_int(a, "atom", "levels", cfg.levels);
    if (cfg.levels < 2) fail("atom.levels", "must be >= 2");
    cfg.omega10 = get_double(a, "atom", "omega10", cfg.omega10);
    if (!(cfg.omega10 > 0.0)) fail("atom.omega10", "must be > 0");
    cfg.anharmonicity = get_double(a, "atom", "anharmonicity", cfg.anharmonicity);
    cfg.unit = get_enum(a, "atom", "unit", cfg.unit, {"angular", "natural"});
  }

  if (!doc.contains("layout")) fail("layout", "required object is missing");
  {
    const json& l = expect_object(doc.at("layout"), "layout");
    check_keys(l, "layout", {"positions", "weights", "velocity", "mode_coupling"});
    cfg.positions = get_double_array(l, "layout", "positions", true);
    cfg.weights = get_double_array(l, "layout", "weights", true);
    if (cfg.positions.empty()) fail("layout.positions", "must be nonempty");
    if (cfg.positions.size() != cfg.weights.size())
      fail("layout.weights", "must match layout.positions in length");
    for (std::size_t k = 0; k + 1 < cfg.positions.size(); ++k) {
      if (!(cfg.positions[k] < cfg.positions[k + 1])) {
        std::ostringstream p;
        p << "layout.positions[" << k + 1 << "]";
        fail(p.str(), "positions must be strictly increasing");
      }
    }
    for (std::size_t k = 0; k < cfg.weights.size(); ++k) {
      if (!(cfg.weights[k] >= 0.0)) {
        std::ostringstream p;
        p << "layout.weights[" << k << "]";
        fail(p.str(), "must be >= 0");
      }
    }
    cfg.velocity = get_double(l, "layout", "velocity", cfg.velocity);
    if (!(cfg.velocity > 0.0)) fail("layout.velocity", "must be > 0");
    cfg.mode_coupling = get_double(l, "layout", "mode_coupling", cfg.mode_coupling);
  }

  if (doc.contains("environment")) {
    const json& e = expect_object(doc.at("environment"), "environment");
    check_keys(e, "environment", {"dos", "temperature", "cutoff"});
    if (e.contains("dos")) {
      const json& d = expect_object(e.at("dos"), "environment.dos");
      check_keys(d, "environment.dos", {"type", "value"});
      cfg.dos_type =
          get_enum(d, "environment.dos", "type", cfg.dos_type, {"constant", "ohmic"});
      cfg.dos_value = get_double(d, "environment.dos", "value", cfg.dos_value);
      if (!(cfg.dos_value >= 0.0)) fail("environment.dos.value", "must be >= 0");
    }
    cfg.temperature = get_double(e, "environment", "temperature", cfg.temperature);
    if (!(cfg.temperature >= 0.0)) fail("environment.temperature", "must be >= 0");
    bool has_cutoff = false;
    const double wc = get_double(e, "environment", "cutoff", 0.0, &has_cutoff);
    if (has_cutoff) {
      if (!(wc > 0.0)) fail("environment.cutoff", "must be > 0");
      cfg.cutoff = wc;
    }
  }

  if (doc.contains("mirror")) {
    const json& m = expect_object(doc.at("mirror"), "mirror");
    check_keys(m, "mirror", {"enabled", "phase"});
    if (m.contains("enabled")) {
      if (!m.at("enabled").is_boolean()) fail("mirror.enabled", "expected a boolean");
      cfg.mirror_enabled = m.at("enabled").get<bool>();
    }
    cfg.mirror_phase = get_double(m, "mirror", "phase", cfg.mirror_phase);
  }

  if (doc.contains("drive")) {
    const json& d = expect_object(doc.at("drive"), "drive");
    check_keys(d, "drive", {"amplitude", "pair", "detuning"});
    DriveConfig drv;
    drv.amplitude = get_double(d, "drive", "amplitude", 0.0);
    if (!(drv.amplitude >= 0.0)) fail("drive.amplitude", "must be >= 0");
    if (!d.contains("pair")) fail("drive.pair", "required array is missing");
    const json& pair = d.at("pair");
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_number_integer())
      fail("drive.pair", "expected [lower, upper] integer levels");
    drv.lower = pair[0].get<int>();
    drv.upper = pair[1].get<int>();
    if (drv.lower < 0 || drv.upper >= cfg.levels || drv.lower >= drv.upper)
      fail("drive.pair", "must satisfy 0 <= lower < upper < atom.levels");
    drv.detuning = get_double(d, "drive", "detuning", 0.0);
    cfg.drive = drv;
  }

  if (doc.contains("grid")) {
    const json& g = expect_object(doc.at("grid"), "grid");
    check_keys(g, "grid", {"min", "max", "points", "unit"});
    GridConfig grid;
    grid.min = get_double(g, "grid", "min", 0.0);
    grid.max = get_double(g, "grid", "max", 0.0);
    grid.points = get_int(g, "grid", "points", 0);
    grid.unit = get_enum(g, "grid", "unit", "angular", {"angular", "natural", "time"});
    if (grid.points < 1) fail("grid.points", "must be >= 1");
    if (grid.points > 1 && !(grid.min < grid.max))
      fail("grid.min", "must be < grid.max when points > 1");
    if (grid.min < 0.0) fail("grid.min", "must be >= 0");
    cfg.grid = grid;
  }

  if (doc.contains("initial")) {
    const json& ini = expect_object(doc.at("initial"), "initial");
    check_keys(ini, "initial", {"level"});
    const int lvl = get_int(ini, "initial", "level", cfg.levels - 1);
    if (lvl < 0 || lvl >= cfg.levels) fail("initial.level", "must lie in [0, atom.levels)");
    cfg.initial_level = lvl;
  }

  if (doc.contains("design")) {
    const json& d = expect_object(doc.at("design"), "design");
    check_keys(d, "design", {"target", "normalization", "points", "restarts", "bounds"});
    DesignConfig dc;
    if (!d.contains("target")) fail("design.target", "required object is missing");
    const json& t = expect_object(d.at("target"), "design.target");
    check_keys(t, "design.target", {"omega", "rate", "weight"});
    dc.target_omega = get_double_array(t, "design.target", "omega", true);
    dc.target_rate = get_double_array(t, "design.target", "rate", true);
    dc.target_weight = get_double_array(t, "design.target", "weight", false);
    if (dc.target_omega.size() != dc.target_rate.size())
      fail("design.target.rate", "must match design.target.omega in length");
    if (!dc.target_weight.empty() && dc.target_weight.size() != dc.target_omega.size())
      fail("design.target.weight", "must match design.target.omega in length");
    dc.normalization =
        get_enum(d, "design", "normalization", dc.normalization, {"absolute", "shape"});
    dc.points = get_int(d, "design", "points", dc.points);
    if (dc.points < 1) fail("design.points", "must be >= 1");
    dc.restarts = get_int(d, "design", "restarts", dc.restarts);
    if (dc.restarts < 1) fail("design.restarts", "must be >= 1");
    if (d.contains("bounds")) {
      const json& b = expect_object(d.at("bounds"), "design.bounds");
      check_keys(b, "design.bounds", {"weight_max", "gap_min", "gap_max"});
      dc.weight_max = get_double(b, "design.bounds", "weight_max", dc.weight_max);
      dc.gap_min = get_double(b, "design.bounds", "gap_min", dc.gap_min);
      dc.gap_max = get_double(b, "design.bounds", "gap_max", dc.gap_max);
      if (!(dc.weight_max > 0.0)) fail("design.bounds.weight_max", "must be > 0");
      if (!(dc.gap_min > 0.0)) fail("design.bounds.gap_min", "must be > 0");
      if (!(dc.gap_max >= dc.gap_min))
        fail("design.bounds.gap_max", "must be >= design.bounds.gap_min");
    }
    cfg.design = dc;
  }

  cfg.shift_mode = get_enum(doc, "", "shift_mode", cfg.shift_mode,
                            {"auto", "hilbert", "renormalized"});
  cfg.normalization = get_enum(doc, "", "normalization", cfg.normalization, {"none", "max"});
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) fail("output", "expected a string");
    cfg.output = doc.at("output").get<std::string>();
  }
  const std::string fmt = get_enum(doc, "", "format", "csv", {"csv", "json"});
  cfg.format = fmt == "json" ? Format::json : Format::csv;
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  // Physics-level validation through the resolved views.
  try {
    cfg.layout();
    cfg.atom();
    cfg.environment();
    cfg.drive_spec();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig& cfg) {
  json doc;
  doc["atom"] = {{"levels", cfg.levels},
                 {"omega10", cfg.omega10},
                 {"anharmonicity", cfg.anharmonicity},
                 {"unit", cfg.unit}};
  doc["layout"] = {{"positions", cfg.positions},
                   {"weights", cfg.weights},
                   {"velocity", cfg.velocity},
                   {"mode_coupling", cfg.mode_coupling}};
  json env = {{"dos", {{"type", cfg.dos_type}, {"value", cfg.dos_value}}},
              {"temperature", cfg.temperature}};
  if (cfg.cutoff) env["cutoff"] = *cfg.cutoff;
  doc["environment"] = env;
  doc["mirror"] = {{"enabled", cfg.mirror_enabled}, {"phase", cfg.mirror_phase}};
  if (cfg.drive) {
    doc["drive"] = {{"amplitude", cfg.drive->amplitude},
                    {"pair", {cfg.drive->lower, cfg.drive->upper}},
                    {"detuning", cfg.drive->detuning}};
  }
  if (cfg.grid) {
    doc["grid"] = {{"min", cfg.grid->min},
                   {"max", cfg.grid->max},
                   {"points", cfg.grid->points},
                   {"unit", cfg.grid->unit}};
  }
  if (cfg.initial_level) doc["initial"] = {{"level", *cfg.initial_level}};
  if (cfg.design) {
    json target = {{"omega", cfg.design->target_omega}, {"rate", cfg.design->target_rate}};
    if (!cfg.design->target_weight.empty()) target["weight"] = cfg.design->target_weight;
    doc["design"] = {{"target", target},
                     {"normalization", cfg.design->normalization},
                     {"points", cfg.design->points},
                     {"restarts", cfg.design->restarts},
                     {"bounds",
                      {{"weight_max", cfg.design->weight_max},
                       {"gap_min", cfg.design->gap_min},
                       {"gap_max", cfg.design->gap_max}}}};
  }
  doc["shift_mode"] = cfg.shift_mode;
  doc["normalization"] = cfg.normalization;
  doc["output"] = cfg.output;
  doc["format"] = cfg.format == Format::json ? "json" : "csv";
  doc["seed"] = cfg.seed;
  return doc.dump(2) + "\n";
}

}  // namespace giantatom::cli
