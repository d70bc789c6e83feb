#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "eprlab/protocols.hpp"

namespace eprlab {

enum class StateKind { Epr, Discrete };

// Fully resolved run configuration. Every field has a default; parse_config
// rejects unknown keys and reports the offending key and constraint on any
// invariant violation.
struct RunConfig {
  PhysicalConstants constants;
  GridSpec grid;
  StateKind state_kind = StateKind::Epr;
  EprParams epr;
  DiscreteSpec discrete;
  Aperture aperture{ApertureKind::Tophat, 0.0, 1.0};
  Aperture aperture_low{ApertureKind::Tophat, 0.0, 0.2};
  double measurement_time = 0.0;
  std::vector<double> delays{0.0, 0.5, 1.0};
  ParaxialGeometry geometry;
  std::size_t blocks = 50;
  std::size_t pairs_per_block = 2000;
  Model model = Model::Conditional;
  std::uint64_t seed = 0;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_json(const nlohmann::json& doc);

// The config with all defaults applied, as echoed into every report.
nlohmann::ordered_json resolved_json(const RunConfig& cfg);

std::string to_string(Model model);
std::string to_string(StateKind kind);
std::string to_string(ApertureKind kind);

}  // namespace eprlab
