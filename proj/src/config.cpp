#include "wdsmc/config.hpp"

#include <algorithm>
#include <set>

#include "wdsmc/errors.hpp"
#include "wdsmc/idm.hpp"
#include "wdsmc/io.hpp"
#include "wdsmc/sfm.hpp"

namespace wdsmc {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
  for (const auto& item : obj.items())
    if (allowed.find(item.key()) == allowed.end())
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

double get_number(const ordered_json& obj, const std::string& key, double fallback,
                  const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + key, "must be a number");
  return obj[key].get<double>();
}

double require_number(const ordered_json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key)) fail(path + key, "is required");
  if (!obj[key].is_number()) fail(path + key, "must be a number");
  return obj[key].get<double>();
}

long get_integer(const ordered_json& obj, const std::string& key, long fallback,
                 const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail(path + key, "must be an integer");
  return obj[key].get<long>();
}

std::uint64_t get_seed(const ordered_json& obj, const std::string& key,
                       std::uint64_t fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer() || (obj[key].is_number_integer() && obj[key].get<long long>() < 0 && !obj[key].is_number_unsigned()))
    fail(path + key, "must be a nonnegative integer");
  return obj[key].get<std::uint64_t>();
}

std::string get_string(const ordered_json& obj, const std::string& key,
                       const std::string& fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(path + key, "must be a string");
  return obj[key].get<std::string>();
}

sfm::RoomScenario room_scenario_from(const ordered_json& block) {
  const sfm::RoomScenario defaults;
  reject_unknown_keys(block,
                      {"room_size", "exit_center", "exit_width", "n_pedestrians",
                       "placement_seed", "dt", "frame_spacing"},
                      "scenario");
  const double room_size = get_number(block, "room_size", defaults.room_size, "scenario.");
  Eigen::Vector2d exit_center = defaults.exit_center;
  if (block.contains("exit_center")) {
    const auto& ec = block["exit_center"];
    if (!ec.is_array() || ec.size() != 2 || !ec[0].is_number() || !ec[1].is_number())
      fail("scenario.exit_center", "must be [x, y]");
    exit_center << ec[0].get<double>(), ec[1].get<double>();
  } else if (block.contains("room_size")) {
    exit_center << room_size, room_size / 2.0;  // keep the exit on the wall
  }
  const double exit_width = get_number(block, "exit_width", defaults.exit_width, "scenario.");
  const long n = get_integer(block, "n_pedestrians", defaults.n_pedestrians, "scenario.");
  const std::uint64_t placement_seed =
      get_seed(block, "placement_seed", defaults.placement_seed, "scenario.");
  const double dt = get_number(block, "dt", defaults.dt, "scenario.");
  const double spacing = get_number(block, "frame_spacing", defaults.frame_spacing, "scenario.");
  if (room_size <= 0.0) fail("scenario.room_size", "must be positive");
  if (exit_width <= 0.0) fail("scenario.exit_width", "must be positive");
  if (n < 1) fail("scenario.n_pedestrians", "must be at least 1");
  if (dt <= 0.0) fail("scenario.dt", "must be positive");
  if (spacing <= 0.0) fail("scenario.frame_spacing", "must be positive");
  return sfm::RoomScenario::make(room_size, exit_center, exit_width, static_cast<int>(n),
                            placement_seed, dt, spacing);
}

idm::HighwayScenario highway_scenario_from(const ordered_json& block) {
  idm::HighwayScenario sc;
  reject_unknown_keys(block,
                      {"lane_length", "n_lanes", "arrival_rate", "arrival_seed",
                       "entry_speed", "entry_jitter", "lane_spacing", "dt", "frame_spacing"},
                      "scenario");
  sc.lane_length = get_number(block, "lane_length", sc.lane_length, "scenario.");
  sc.n_lanes = static_cast<int>(get_integer(block, "n_lanes", sc.n_lanes, "scenario."));
  sc.arrival_rate = get_number(block, "arrival_rate", sc.arrival_rate, "scenario.");
  sc.arrival_seed = get_seed(block, "arrival_seed", sc.arrival_seed, "scenario.");
  sc.entry_speed = get_number(block, "entry_speed", sc.entry_speed, "scenario.");
  sc.entry_jitter = get_number(block, "entry_jitter", sc.entry_jitter, "scenario.");
  sc.lane_spacing = get_number(block, "lane_spacing", sc.lane_spacing, "scenario.");
  sc.dt = get_number(block, "dt", sc.dt, "scenario.");
  sc.frame_spacing = get_number(block, "frame_spacing", sc.frame_spacing, "scenario.");
  if (sc.lane_length <= 0.0) fail("scenario.lane_length", "must be positive");
  if (sc.n_lanes < 1) fail("scenario.n_lanes", "must be at least 1");
  if (sc.arrival_rate <= 0.0) fail("scenario.arrival_rate", "must be positive");
  if (sc.entry_speed < 0.0) fail("scenario.entry_speed", "must be nonnegative");
  if (sc.entry_jitter < 0.0) fail("scenario.entry_jitter", "must be nonnegative");
  if (sc.lane_spacing <= 0.0) fail("scenario.lane_spacing", "must be positive");
  if (sc.dt <= 0.0) fail("scenario.dt", "must be positive");
  if (sc.frame_spacing < sc.dt) fail("scenario.frame_spacing", "must be at least dt");
  return sc;
}

}  // namespace

RunConfig parse_config(const nlohmann::ordered_json& document) {
  if (!document.is_object()) throw ConfigError("document root must be an object");
  reject_unknown_keys(document,
                      {"model", "seed", "output_dir", "samples", "horizon", "noise_sigma",
                       "ess_threshold", "inferred", "fixed", "scenario"},
                      "");
  RunConfig cfg;
  cfg.document = document;
  cfg.model = get_string(document, "model", "", "");
  if (cfg.model != "sfm" && cfg.model != "idm")
    fail("model", "must be \"sfm\" or \"idm\", got \"" + cfg.model + "\"");
  cfg.seed = get_seed(document, "seed", 0, "");
  cfg.output_dir = get_string(document, "output_dir", "", "");
  const long samples = get_integer(document, "samples", 0, "");
  if (!document.contains("samples")) fail("samples", "is required");
  if (samples < 1) fail("samples", "must be at least 1");
  cfg.samples = static_cast<int>(samples);
  if (!document.contains("horizon")) fail("horizon", "is required");
  const long horizon = get_integer(document, "horizon", 0, "");
  if (horizon < 1) fail("horizon", "must be at least 1");
  cfg.horizon = static_cast<int>(horizon);
  cfg.noise_sigma = get_number(document, "noise_sigma", 0.0, "");
  if (cfg.noise_sigma < 0.0) fail("noise_sigma", "must be nonnegative");
  if (document.contains("ess_threshold")) {
    cfg.ess_threshold = require_number(document, "ess_threshold", "");
    if (cfg.ess_threshold <= 0.0 || cfg.ess_threshold > cfg.samples)
      fail("ess_threshold", "must lie in (0, samples]");
  }

  if (document.contains("inferred")) {
    const auto& arr = document["inferred"];
    if (!arr.is_array()) fail("inferred", "must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "inferred." + std::to_string(i);
      const auto& entry = arr[i];
      if (!entry.is_object()) fail(path, "must be an object");
      reject_unknown_keys(entry, {"name", "low", "high", "proposal_std"}, path);
      InferredParameter p;
      p.name = get_string(entry, "name", "", path + ".");
      if (p.name.empty()) fail(path + ".name", "is required");
      p.low = require_number(entry, "low", path + ".");
      p.high = require_number(entry, "high", path + ".");
      if (!(p.low < p.high)) fail(path, "low must be less than high");
      if (entry.contains("proposal_std")) {
        p.proposal_std = require_number(entry, "proposal_std", path + ".");
        if (p.proposal_std <= 0.0) fail(path + ".proposal_std", "must be positive");
      }
      for (const auto& other : cfg.inferred)
        if (other.name == p.name) fail(path + ".name", "duplicate parameter");
      cfg.inferred.push_back(std::move(p));
    }
  }

  if (!document.contains("fixed")) fail("fixed", "is required");
  if (!document["fixed"].is_object()) fail("fixed", "must be an object");
  for (const auto& item : document["fixed"].items()) {
    if (!item.value().is_number()) fail("fixed." + item.key(), "must be a number");
    cfg.fixed.emplace_back(item.key(), item.value().get<double>());
  }

  if (document.contains("scenario")) {
    if (!document["scenario"].is_object()) fail("scenario", "must be an object");
    cfg.scenario = document["scenario"];
  } else {
    cfg.scenario = ordered_json::object();
  }

  // Scenario and parameter-name checks against the chosen model.
  const std::vector<std::string> known =
      cfg.model == "sfm" ? std::vector<std::string>{"A", "B", "v_p"}
                         : std::vector<std::string>{"v0", "a", "T_s"};
  for (const auto& name : known) {
    const bool have = std::any_of(cfg.fixed.begin(), cfg.fixed.end(),
                                  [&](const auto& kv) { return kv.first == name; });
    if (!have) fail("fixed." + name, "is required for model " + cfg.model);
  }
  for (const auto& kv : cfg.fixed)
    if (std::find(known.begin(), known.end(), kv.first) == known.end())
      fail("fixed." + kv.first, "is not a parameter of model " + cfg.model);
  for (const auto& p : cfg.inferred)
    if (std::find(known.begin(), known.end(), p.name) == known.end())
      fail("inferred name " + p.name, "is not a parameter of model " + cfg.model);

  if (cfg.model == "sfm")
    (void)room_scenario_from(cfg.scenario);
  else
    (void)highway_scenario_from(cfg.scenario);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  const std::string text = read_text_file(path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  RunConfig cfg = parse_config(doc);
  cfg.source_text = text;
  return cfg;
}

void apply_override(nlohmann::ordered_json& document, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like KEY=VALUE: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  ordered_json value;
  try {
    value = ordered_json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;  // bare words are strings
  }

  ordered_json* node = &document;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (part.empty()) throw ConfigError("empty path segment in override: " + assignment);
    const bool last = dot == std::string::npos;
    const bool is_index = !part.empty() && part.find_first_not_of("0123456789") == std::string::npos;
    if (node->is_array()) {
      if (!is_index) throw ConfigError("array index expected in override: " + assignment);
      const std::size_t idx = std::stoul(part);
      if (idx >= node->size()) throw ConfigError("index out of range in override: " + assignment);
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) throw ConfigError("cannot descend into a scalar: " + assignment);
      // New keys may be introduced here; parse_config screens unknown ones.
      node = &(*node)[part];
    }
    if (last) {
      *node = value;
      return;
    }
    begin = dot + 1;
  }
}

BuiltModel build_model(const RunConfig& config) {
  BuiltModel out;
  const std::vector<std::string> names =
      config.model == "sfm" ? std::vector<std::string>{"A", "B", "v_p"}
                            : std::vector<std::string>{"v0", "a", "T_s"};
  Eigen::VectorXd values(static_cast<Eigen::Index>(names.size()));
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find_if(config.fixed.begin(), config.fixed.end(),
                                 [&](const auto& kv) { return kv.first == names[k]; });
    if (it == config.fixed.end())
      throw ConfigError("fixed." + names[k] + ": is required for model " + config.model);
    values[static_cast<Eigen::Index>(k)] = it->second;
  }
  out.truth = ParameterVector(names, values);

  // The fixed values become the model's base, so parameters left out of
  // "inferred" simulate at their configured values.
  if (config.model == "sfm")
    out.model = std::make_unique<sfm::SfmModel>(room_scenario_from(config.scenario),
                                                sfm::SfmParams{}.with(out.truth));
  else
    out.model = std::make_unique<idm::IdmModel>(highway_scenario_from(config.scenario),
                                                idm::IdmParams{}.with(out.truth));

  if (!config.inferred.empty()) {
    std::vector<std::string> pnames;
    Eigen::VectorXd low(config.inferred.size()), high(config.inferred.size()),
        width(config.inferred.size());
    for (std::size_t k = 0; k < config.inferred.size(); ++k) {
      const InferredParameter& p = config.inferred[k];
      pnames.push_back(p.name);
      low[k] = p.low;
      high[k] = p.high;
      width[k] = p.proposal_std > 0.0 ? p.proposal_std : 0.05 * (p.high - p.low);
    }
    out.prior = PriorBox(pnames, low, high);
    out.proposal_std = width;
  }
  return out;
}

}  // namespace wdsmc
