#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "giantatom/core.hpp"
#include "giantatom/dynamics.hpp"
#include "giantatom/spectral.hpp"

// Run configuration: a single JSON document holding the physical objects plus
// output/mode flags. Raw values are kept verbatim so serialize/parse round-
// trips exactly; resolved accessors apply units and defaults.

namespace giantatom::cli {

enum class Format { csv, json };

// Schema or physics violation; `path` names the offending field ("layout.weights[2]").
struct ConfigError : std::runtime_error {
  ConfigError(std::string path_, const std::string& message_)
      : std::runtime_error(path_.empty() ? message_ : path_ + ": " + message_),
        path(std::move(path_)) {}
  std::string path;
};

struct DriveConfig {
  double amplitude = 0.0;
  int lower = 0;
  int upper = 2;
  double detuning = 0.0;
  bool operator==(const DriveConfig&) const = default;
};

struct GridConfig {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  std::string unit = "angular";  // angular | natural | time
  bool operator==(const GridConfig&) const = default;
};

struct DesignConfig {
  std::vector<double> target_omega;
  std::vector<double> target_rate;
  std::vector<double> target_weight;       // empty = unit weights
  std::string normalization = "absolute";  // absolute | shape
  int points = 4;
  int restarts = 16;
  double weight_max = 10.0;
  double gap_min = 1e-3;
  double gap_max = 1e3;
  bool operator==(const DesignConfig&) const = default;
};

struct RunConfig {
  // atom (values in `unit`: "angular" or "natural" = multiples of 2*pi*v/(x2-x1))
  int levels = 2;
  double omega10 = 1.0;
  double anharmonicity = 0.0;
  std::string unit = "angular";
  // layout
  std::vector<double> positions;
  std::vector<double> weights;
  double velocity = 1.0;
  double mode_coupling = 1.0;
  // environment (temperature/cutoff share the atom's unit)
  std::string dos_type = "constant";  // constant | ohmic
  double dos_value = 1.0;
  double temperature = 0.0;
  std::optional<double> cutoff;  // default 20*omega10
  // optional blocks
  bool mirror_enabled = false;
  double mirror_phase = 0.0;
  std::optional<DriveConfig> drive;  // amplitude/detuning share the atom's unit
  std::optional<GridConfig> grid;
  std::optional<int> initial_level;
  std::optional<DesignConfig> design;
  // modes and output
  std::string shift_mode = "auto";     // auto | hilbert | renormalized
  std::string normalization = "none";  // none | max
  std::string output;                  // empty = stdout
  Format format = Format::csv;
  std::uint64_t seed = 42;

  bool operator==(const RunConfig&) const = default;

  // Resolved views (unit conversion + defaults applied).
  double frequency_scale() const;  // 1, or 2*pi*v/(x2-x1) for natural unit
  AtomSpec atom() const;
  CouplingLayout layout() const;
  Environment environment() const;
  MirrorSpec mirror() const;
  std::optional<dynamics::DriveSpec> drive_spec() const;
  spectral::ShiftMode resolved_shift_mode() const;
};

// Parse and fully validate a JSON document; unknown keys are rejected.
RunConfig parse_config(const std::string& text);
// Read the file and parse; file errors become ConfigError with the path.
RunConfig load_config(const std::string& path);
// Inverse of parse_config: parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

}  // namespace giantatom::cli
