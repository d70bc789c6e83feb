#include "eprlab/config.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

namespace eprlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& constraint) {
  throw std::invalid_argument("config." + key + ": " + constraint);
}

void require_object(const json& j, const std::string& key) {
  if (!j.is_object()) fail(key, "must be an object");
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key()))
      fail(section.empty() ? item.key() : section + "." + item.key(), "unknown key");
  }
}

double take_number(const json& obj, const std::string& section, const char* key,
                   double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(section + "." + key, "must be a number");
  return v.get<double>();
}

std::uint64_t take_count(const json& obj, const std::string& section, const char* key,
                         std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) fail(section + "." + key, "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string take_string(const json& obj, const std::string& section, const char* key,
                        const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(section + "." + key, "must be a string");
  return v.get<std::string>();
}

Aperture parse_aperture(const json& obj, const std::string& section,
                        const Aperture& defaults) {
  require_object(obj, section);
  reject_unknown(obj, section, {"kind", "center", "width"});
  Aperture a = defaults;
  const std::string kind = take_string(
      obj, section, "kind",
      defaults.kind == ApertureKind::Tophat ? "tophat" : "gaussian");
  if (kind == "tophat")
    a.kind = ApertureKind::Tophat;
  else if (kind == "gaussian")
    a.kind = ApertureKind::Gaussian;
  else
    fail(section + ".kind", "must be \"tophat\" or \"gaussian\"");
  a.center = take_number(obj, section, "center", defaults.center);
  a.width = take_number(obj, section, "width", defaults.width);
  if (!std::isfinite(a.center)) fail(section + ".center", "must be finite");
  if (!(a.width > 0.0) || !std::isfinite(a.width)) fail(section + ".width", "must be > 0");
  return a;
}

}  // namespace

RunConfig parse_config_json(const json& doc) {
  require_object(doc, "(root)");
  reject_unknown(doc, "", {"constants", "grid", "state", "aperture", "aperture_low",
                           "times", "geometry", "protocol", "seed"});
  RunConfig cfg;

  if (doc.contains("constants")) {
    const json& s = doc.at("constants");
    require_object(s, "constants");
    reject_unknown(s, "constants", {"hbar", "mass"});
    cfg.constants.hbar = take_number(s, "constants", "hbar", 1.0);
    cfg.constants.mass = take_number(s, "constants", "mass", 1.0);
    if (!(cfg.constants.hbar > 0.0)) fail("constants.hbar", "must be > 0");
    if (!(cfg.constants.mass > 0.0)) fail("constants.mass", "must be > 0");
  }

  if (doc.contains("grid")) {
    const json& s = doc.at("grid");
    require_object(s, "grid");
    reject_unknown(s, "grid", {"n", "x_min", "x_max"});
    cfg.grid.n = take_count(s, "grid", "n", cfg.grid.n);
    cfg.grid.x_min = take_number(s, "grid", "x_min", cfg.grid.x_min);
    cfg.grid.x_max = take_number(s, "grid", "x_max", cfg.grid.x_max);
    if (cfg.grid.n < 2 || !std::has_single_bit(cfg.grid.n))
      fail("grid.n", "must be a power of two >= 2");
    if (!(cfg.grid.x_max > cfg.grid.x_min)) fail("grid.x_max", "must be > x_min");
  }

  if (doc.contains("state")) {
    const json& s = doc.at("state");
    require_object(s, "state");
    const std::string kind = take_string(s, "state", "kind", "epr");
    if (kind == "epr") {
      cfg.state_kind = StateKind::Epr;
      reject_unknown(s, "state", {"kind", "sigma_plus", "sigma_minus"});
      cfg.epr.sigma_plus = take_number(s, "state", "sigma_plus", cfg.epr.sigma_plus);
      cfg.epr.sigma_minus = take_number(s, "state", "sigma_minus", cfg.epr.sigma_minus);
      if (!(cfg.epr.sigma_plus > 0.0)) fail("state.sigma_plus", "must be > 0");
      if (!(cfg.epr.sigma_minus > 0.0)) fail("state.sigma_minus", "must be > 0");
    } else if (kind == "discrete") {
      cfg.state_kind = StateKind::Discrete;
      reject_unknown(s, "state", {"kind", "terms", "spacing", "peak_sigma"});
      cfg.discrete.terms = take_count(s, "state", "terms", cfg.discrete.terms);
      cfg.discrete.spacing = take_number(s, "state", "spacing", cfg.discrete.spacing);
      cfg.discrete.peak_sigma =
          take_number(s, "state", "peak_sigma", cfg.discrete.peak_sigma);
      if (cfg.discrete.terms < 2) fail("state.terms", "must be >= 2");
      if (!(cfg.discrete.spacing > 0.0)) fail("state.spacing", "must be > 0");
      if (!(cfg.discrete.peak_sigma > 0.0)) fail("state.peak_sigma", "must be > 0");
    } else {
      fail("state.kind", "must be \"epr\" or \"discrete\"");
    }
  }

  if (doc.contains("aperture"))
    cfg.aperture = parse_aperture(doc.at("aperture"), "aperture", cfg.aperture);
  if (doc.contains("aperture_low"))
    cfg.aperture_low =
        parse_aperture(doc.at("aperture_low"), "aperture_low", cfg.aperture_low);

  if (doc.contains("times")) {
    const json& s = doc.at("times");
    require_object(s, "times");
    reject_unknown(s, "times", {"measurement_time", "delays"});
    cfg.measurement_time =
        take_number(s, "times", "measurement_time", cfg.measurement_time);
    if (!(cfg.measurement_time >= 0.0)) fail("times.measurement_time", "must be >= 0");
    if (s.contains("delays")) {
      const json& d = s.at("delays");
      if (!d.is_array() || d.empty()) fail("times.delays", "must be a nonempty array");
      cfg.delays.clear();
      double prev = -1.0;
      for (const json& v : d) {
        if (!v.is_number()) fail("times.delays", "must contain numbers");
        const double t = v.get<double>();
        if (!(t >= 0.0)) fail("times.delays", "must be nonnegative");
        if (t <= prev) fail("times.delays", "must be strictly ascending");
        prev = t;
        cfg.delays.push_back(t);
      }
    }
  }

  if (doc.contains("geometry")) {
    const json& s = doc.at("geometry");
    require_object(s, "geometry");
    reject_unknown(s, "geometry", {"longitudinal_speed", "source_time"});
    cfg.geometry.longitudinal_speed = take_number(
        s, "geometry", "longitudinal_speed", cfg.geometry.longitudinal_speed);
    cfg.geometry.source_time =
        take_number(s, "geometry", "source_time", cfg.geometry.source_time);
    if (!(cfg.geometry.longitudinal_speed > 0.0))
      fail("geometry.longitudinal_speed", "must be > 0");
  }

  if (doc.contains("protocol")) {
    const json& s = doc.at("protocol");
    require_object(s, "protocol");
    reject_unknown(s, "protocol", {"blocks", "pairs_per_block", "model"});
    cfg.blocks = take_count(s, "protocol", "blocks", cfg.blocks);
    cfg.pairs_per_block =
        take_count(s, "protocol", "pairs_per_block", cfg.pairs_per_block);
    if (cfg.blocks < 1) fail("protocol.blocks", "must be >= 1");
    if (cfg.pairs_per_block < 2) fail("protocol.pairs_per_block", "must be >= 2");
    const std::string model = take_string(s, "protocol", "model",
                                          cfg.model == Model::Collapse ? "M1" : "M2");
    if (model == "M1")
      cfg.model = Model::Collapse;
    else if (model == "M2")
      cfg.model = Model::Conditional;
    else
      fail("protocol.model", "must be \"M1\" or \"M2\"");
  }

  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) fail("seed", "must be a nonnegative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed document: ") + e.what());
  }
  return parse_config_json(doc);
}

std::string to_string(Model model) {
  return model == Model::Collapse ? "M1" : "M2";
}

std::string to_string(StateKind kind) {
  return kind == StateKind::Epr ? "epr" : "discrete";
}

std::string to_string(ApertureKind kind) {
  return kind == ApertureKind::Tophat ? "tophat" : "gaussian";
}

nlohmann::ordered_json resolved_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["constants"] = {{"hbar", cfg.constants.hbar}, {"mass", cfg.constants.mass}};
  j["grid"] = {{"n", cfg.grid.n}, {"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max}};
  if (cfg.state_kind == StateKind::Epr) {
    j["state"] = {{"kind", "epr"},
                  {"sigma_plus", cfg.epr.sigma_plus},
                  {"sigma_minus", cfg.epr.sigma_minus}};
  } else {
    j["state"] = {{"kind", "discrete"},
                  {"terms", cfg.discrete.terms},
                  {"spacing", cfg.discrete.spacing},
                  {"peak_sigma", cfg.discrete.peak_sigma}};
  }
  j["aperture"] = {{"kind", to_string(cfg.aperture.kind)},
                   {"center", cfg.aperture.center},
                   {"width", cfg.aperture.width}};
  j["aperture_low"] = {{"kind", to_string(cfg.aperture_low.kind)},
                       {"center", cfg.aperture_low.center},
                       {"width", cfg.aperture_low.width}};
  j["times"] = {{"measurement_time", cfg.measurement_time}, {"delays", cfg.delays}};
  j["geometry"] = {{"longitudinal_speed", cfg.geometry.longitudinal_speed},
                   {"source_time", cfg.geometry.source_time}};
  j["protocol"] = {{"blocks", cfg.blocks},
                   {"pairs_per_block", cfg.pairs_per_block},
                   {"model", to_string(cfg.model)}};
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace eprlab
