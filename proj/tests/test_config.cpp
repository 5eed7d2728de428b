#include <string>

#include "doctest.h"
#include "giantatom/config.hpp"

using namespace giantatom;
using cli::ConfigError;
using cli::RunConfig;

namespace {

const char* kMinimal = R"({
  "atom": {"levels": 2, "omega10": 1.0},
  "layout": {"positions": [0.0, 1.0], "weights": [1.0, 1.0]}
})";

std::string error_path(const std::string& text) {
  try {
    cli::parse_config(text);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const RunConfig cfg = cli::parse_config(kMinimal);
  CHECK(cfg.levels == 2);
  CHECK(cfg.omega10 == 1.0);
  CHECK(cfg.unit == "angular");
  CHECK(cfg.dos_type == "constant");
  CHECK(cfg.dos_value == 1.0);
  CHECK(cfg.temperature == 0.0);
  CHECK_FALSE(cfg.cutoff.has_value());
  CHECK_FALSE(cfg.mirror_enabled);
  CHECK(cfg.shift_mode == "auto");
  CHECK(cfg.normalization == "none");
  CHECK(cfg.format == cli::Format::csv);
  CHECK(cfg.seed == 42);
  // Resolved views.
  CHECK(cfg.atom().omega10 == 1.0);
  CHECK(cfg.environment().cutoff == 20.0);
  CHECK(cfg.layout().size() == 2);
}

TEST_CASE("natural unit rescales atom, bath and drive but not the mirror phase") {
  const std::string text = R"({
    "atom": {"levels": 3, "omega10": 1.0, "anharmonicity": -0.1, "unit": "natural"},
    "layout": {"positions": [0.0, 2.0, 4.0], "weights": [1.0, 1.0, 1.0], "velocity": 1.0},
    "environment": {"temperature": 0.05, "cutoff": 25.0},
    "mirror": {"enabled": true, "phase": 0.7},
    "drive": {"amplitude": 0.01, "pair": [0, 2], "detuning": 0.001}
  })";
  const RunConfig cfg = cli::parse_config(text);
  const double scale = two_pi * 1.0 / 2.0;  // 2 pi v / gap
  CHECK(cfg.frequency_scale() == doctest::Approx(scale).epsilon(1e-15));
  CHECK(cfg.atom().omega10 == doctest::Approx(scale).epsilon(1e-15));
  CHECK(cfg.atom().anharmonicity == doctest::Approx(-0.1 * scale).epsilon(1e-15));
  CHECK(cfg.environment().temperature == doctest::Approx(0.05 * scale).epsilon(1e-15));
  CHECK(cfg.environment().cutoff == doctest::Approx(25.0 * scale).epsilon(1e-15));
  CHECK(cfg.mirror().phase == 0.7);
  REQUIRE(cfg.drive_spec().has_value());
  CHECK(cfg.drive_spec()->amplitude == doctest::Approx(0.01 * scale).epsilon(1e-15));
  CHECK(cfg.drive_spec()->detuning == doctest::Approx(0.001 * scale).epsilon(1e-15));
  CHECK(cfg.drive_spec()->lower == 0);
  CHECK(cfg.drive_spec()->upper == 2);
}

TEST_CASE("round trip through serialize and parse is the identity") {
  const std::string text = R"({
    "atom": {"levels": 3, "omega10": 1.2, "anharmonicity": -0.15, "unit": "natural"},
    "layout": {"positions": [0.0, 1.0, 2.5], "weights": [0.5, 1.0, 0.75],
               "velocity": 2.0, "mode_coupling": 0.1},
    "environment": {"dos": {"type": "ohmic", "value": 0.02},
                    "temperature": 0.03, "cutoff": 30.0},
    "mirror": {"enabled": true, "phase": 1.9},
    "drive": {"amplitude": 0.02, "pair": [0, 1], "detuning": -0.004},
    "grid": {"min": 0.5, "max": 1.5, "points": 41, "unit": "natural"},
    "initial": {"level": 2},
    "design": {"target": {"omega": [1.0, 1.1], "rate": [0.5, 0.25],
                          "weight": [1.0, 2.0]},
               "normalization": "shape", "points": 3, "restarts": 5,
               "bounds": {"weight_max": 4.0, "gap_min": 0.01, "gap_max": 100.0}},
    "shift_mode": "renormalized",
    "normalization": "max",
    "output": "out.csv",
    "format": "json",
    "seed": 17
  })";
  const RunConfig first = cli::parse_config(text);
  const RunConfig second = cli::parse_config(cli::serialize(first));
  CHECK(first == second);
  CHECK(cli::serialize(first) == cli::serialize(second));

  const RunConfig minimal = cli::parse_config(kMinimal);
  CHECK(cli::parse_config(cli::serialize(minimal)) == minimal);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  CHECK(error_path(R"({"atom": {"levels": 2}, "layout":
        {"positions": [0, 1], "weights": [1, 1]}, "typo": 3})") == "typo");
  CHECK(error_path(R"({"atom": {"levels": 2, "color": "red"}, "layout":
        {"positions": [0, 1], "weights": [1, 1]}})") == "atom.color");
  CHECK(error_path(R"({"atom": {}, "layout": {"positions": [0, 1],
        "weights": [1, 1], "spacing": 2}})") == "layout.spacing");
}

TEST_CASE("schema violations carry precise field paths") {
  CHECK(error_path(R"({"atom": {"levels": 1},
        "layout": {"positions": [0, 1], "weights": [1, 1]}})") == "atom.levels");
  CHECK(error_path(R"({"atom": {"omega10": -1.0},
        "layout": {"positions": [0, 1], "weights": [1, 1]}})") == "atom.omega10");
  CHECK(error_path(R"({"atom": {},
        "layout": {"positions": [0, 1], "weights": [1, -2]}})") ==
        "layout.weights[1]");
  CHECK(error_path(R"({"atom": {},
        "layout": {"positions": [1, 1], "weights": [1, 1]}})") ==
        "layout.positions[1]");
  CHECK(error_path(R"({"atom": {},
        "layout": {"positions": [0, 1], "weights": [1]}})") == "layout.weights");
  CHECK(error_path(R"({"atom": {}})") == "layout");
  CHECK(error_path(R"({"atom": {"levels": "two"},
        "layout": {"positions": [0, 1], "weights": [1, 1]}})") == "atom.levels");
}

TEST_CASE("grid and drive blocks are validated") {
  const std::string base = R"("atom": {"levels": 3},
      "layout": {"positions": [0, 1], "weights": [1, 1]})";
  CHECK(error_path("{" + base + R"(, "grid": {"min": 1.0, "max": 0.5,
        "points": 5, "unit": "angular"}})") == "grid.min");
  CHECK(error_path("{" + base + R"(, "grid": {"min": 0.5, "max": 1.0,
        "points": 0, "unit": "angular"}})") == "grid.points");
  CHECK(error_path("{" + base + R"(, "grid": {"min": -0.5, "max": 1.0,
        "points": 5, "unit": "time"}})") == "grid.min");
  CHECK(error_path("{" + base + R"(, "grid": {"min": 0.5, "max": 1.0,
        "points": 5, "unit": "hertz"}})") == "grid.unit");
  CHECK(error_path("{" + base + R"(, "drive": {"amplitude": 0.1,
        "pair": [1, 1]}})") == "drive.pair");
  CHECK(error_path("{" + base + R"(, "drive": {"amplitude": 0.1,
        "pair": [0, 3]}})") == "drive.pair");
  CHECK(error_path("{" + base + R"(, "drive": {"amplitude": -0.1,
        "pair": [0, 1]}})") == "drive.amplitude");
  CHECK(error_path("{" + base + R"(, "seed": -4})") == "seed");
  CHECK(error_path("{" + base + R"(, "initial": {"level": 7}})") ==
        "initial.level");
}

TEST_CASE("file loading failures name the file") {
  bool thrown = false;
  try {
    cli::load_config("/nonexistent/path/config.json");
  } catch (const ConfigError& e) {
    thrown = true;
    CHECK(e.path == "/nonexistent/path/config.json");
  }
  CHECK(thrown);
}

TEST_CASE("malformed JSON is reported as a config error") {
  CHECK_THROWS_AS(cli::parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("[1, 2, 3]"), ConfigError);
}
