#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rse/extension.hpp"
#include "rse/gamma.hpp"
#include "rse/holo_map.hpp"
#include "rse/sampler.hpp"
#include "rse/semigroup.hpp"
#include "rse/space.hpp"
#include "rse/verifiers.hpp"

namespace rse {

// Invalid or unparseable experiment configuration (CLI exit status 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed experiment: space, base map, multiplier rule, motion, fiber flow,
// and the list of checks to run. Heavy members are optional because not
// every check needs every section.
struct Experiment {
  SpacePair space{1, 1, Profile(2.0, 2.0)};
  std::optional<HoloMap> base;
  std::optional<GammaSpec> gamma;

  std::string motion_kind;  // "linear" | "shift" | "affine" | ""
  std::optional<LinearOperatorSpec> motion_A;
  double lambda = 0.0;
  Vec motion_tau;

  std::optional<Semigroup> fiber_flow;
  std::optional<LinearOperatorSpec> fiber_B;

  std::vector<std::string> checks;
  SamplerConfig sampler;
  nlohmann::json raw;

  const HoloMap& base_map() const;
  const GammaSpec& gamma_spec() const;
};

// Builders shared by the config parser and tests.
HoloMap base_map_from_json(const nlohmann::json& j);
GammaSpec gamma_from_json(const nlohmann::json& j);
Mat matrix_from_json(const nlohmann::json& j);  // row-major [[re, im], ...] rows
Vec vector_from_json(const nlohmann::json& j);

// Parses and validates a configuration document. Throws ConfigError.
Experiment parse_experiment(const nlohmann::json& config);

struct RunReport {
  nlohmann::json envelope;  // timestamps and tool metadata; excluded from determinism
  nlohmann::json payload;   // config echo + per-check reports; deterministic
  int exit_status = 0;      // 0 pass, 1 violation, 2 inconclusive

  nlohmann::json to_json() const;
};

// Executes the experiment's checks (concurrently when RS_EXTEND_THREADS
// allows), writing CSV artifacts under out_dir. Pass an empty out_dir to
// skip artifact files.
RunReport run_experiment(const Experiment& exp, const std::string& out_dir);

// Stable identifiers and parameter schemas of everything the runner can build.
nlohmann::json list_catalog();

// Write-temp-then-rename file emission.
void write_atomic(const std::string& path, const std::string& content);

std::string csv_from_table(const CurveTable& table);

}  // namespace rse
