#pragma once

// Run configuration: a single JSON document names the model, the sampler
// settings, the inferred parameters with their prior boxes, the fixed
// (ground-truth) parameter values, and the scenario geometry.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wdsmc/model.hpp"
#include "wdsmc/smcs.hpp"

namespace wdsmc {

struct InferredParameter {
  std::string name;
  double low = 0.0;
  double high = 0.0;
  double proposal_std = -1.0;  // negative selects 5% of the range
};

struct RunConfig {
  std::string model;  // "sfm" or "idm"
  std::uint64_t seed = 0;
  std::string output_dir;
  int samples = 0;
  int horizon = 0;
  double noise_sigma = 0.0;
  double ess_threshold = -1.0;  // negative selects samples / 2
  std::vector<InferredParameter> inferred;
  std::vector<std::pair<std::string, double>> fixed;  // insertion order kept
  nlohmann::ordered_json scenario;  // model-specific block as written

  nlohmann::ordered_json document;  // the effective document
  std::string source_text;          // original file bytes, pre-override
};

// Validates types, ranges, and key spelling; unknown keys are errors.
// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::ordered_json& document);

RunConfig load_config_file(const std::string& path);

// KEY=VALUE with dotted paths into the document, e.g.
// scenario.n_pedestrians=30 or inferred.0.low=1.5. The value text is
// parsed as JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::ordered_json& document, const std::string& assignment);

struct BuiltModel {
  std::unique_ptr<ForwardModel> model;
  ParameterVector truth;          // every model parameter, from "fixed"
  PriorBox prior;                 // empty names when nothing is inferred
  Eigen::VectorXd proposal_std;   // aligned with prior
};

// Instantiates the forward model plus the prior implied by the config.
BuiltModel build_model(const RunConfig& config);

}  // namespace wdsmc
