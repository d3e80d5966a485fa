// harness.hpp - configuration-driven experiments and result bundles

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "collider/models.hpp"
#include "collider/schedule_io.hpp"

namespace collider {

inline constexpr const char* kVersion = "1.0.0";

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ExperimentConfig {
  std::string kind;  // extract | trajectory | appendixA | appendixB | squeezed-example | splitting-equivalence
  std::string name;
  nlohmann::json model;
  nlohmann::json operators;
  double gamma = 1.0;
  double mu = 0.0;
  double g_s = 1.0;
  double kappa = 1.0;
  double s = 0.5;
  std::vector<double> dt_sequence;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json trajectory = nlohmann::json::object();
  double tol_scale = 1.0;
  nlohmann::json raw;

  // Configured tolerance (scaled by tol_scale) or the default.
  double tol(const std::string& key, double fallback) const;
};

// Every violated field, empty when the config is usable. Also builds the
// model so unresolved operator names and bad dimensions are reported.
std::vector<std::string> validate_config(const nlohmann::json& j);
// Throws ValidationError listing every problem.
ExperimentConfig parse_config(const nlohmann::json& j);

ModelBuild build_model(const ExperimentConfig& config);

struct Verdict {
  std::string check;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string formula;  // how value is derived from the emitted data
};

struct ResultBundle {
  std::string name;
  std::string kind;
  nlohmann::json summary = nlohmann::json::object();
  std::map<std::string, std::string> csv;  // file name -> contents
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  nlohmann::json provenance = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

ResultBundle run(const ExperimentConfig& config);

// Writes summary.json and every CSV into dir, each through a temp file and rename.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

std::uint64_t fnv1a(const std::string& text);

}  // namespace collider
