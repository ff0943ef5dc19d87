#pragma once

#include "scert/common.hpp"
#include "scert/distributions.hpp"
#include "scert/geometry.hpp"
#include "scert/model.hpp"
#include "scert/safeset.hpp"
#include "scert/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace scert {

/// How the Q matrix of a fitted ellipsoid class is obtained: from the scenario
/// samples themselves, or from a separate draw of the same size.
enum class QFitMode { reuse, fresh_split };

std::string to_string(QFitMode mode);
QFitMode parse_q_fit_mode(const std::string& name);

struct AssessmentConfig {
  double epsilon = 0.1;
  double delta = 1e-5;
  CoverClass cover;
  Regularizer regularizer;
  std::uint64_t seed = 0;
  std::shared_ptr<const VectorFunction> model;
  std::shared_ptr<const InputDistribution> distribution;
  std::shared_ptr<const SafeSet> safe_set;
  /// Explicit sample count; must reach the sample-size bound unless
  /// allow_undersampled is set.
  std::optional<std::size_t> samples;
  bool allow_undersampled = false;
  QFitMode q_fit = QFitMode::reuse;
  SolverOptions solver;
};

struct RowResult {
  SafeRow row;
  CoverParams theta_star;
  double r_hat = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::optimal;
  std::size_t iterations = 0;
};

enum class Verdict { certified, not_certified };

std::string to_string(Verdict verdict);

struct AssessmentReport {
  AssessmentConfig config;
  std::size_t N = 0;
  std::size_t p = 0;
  /// False when fewer samples than the sample-size bound were used.
  bool guarantee = true;
  std::vector<RowResult> rows;
  std::size_t worst_row = 0;
  Verdict verdict = Verdict::not_certified;
  double wall_time_s = 0.0;
  std::string kernels;
  std::string sample_set_hash;
  Batch inputs;
  Batch outputs;

  double r_hat_min() const { return rows.at(worst_row).r_hat; }
};

/// Draws N samples, evaluates them, optionally fits Q, solves the scenario
/// problem for every safe-set row and aggregates the verdict.
AssessmentReport assess(const AssessmentConfig& config);

/// One report per lambda, all built on the same sample set. Lambdas are
/// sorted and deduplicated.
std::vector<AssessmentReport> sweep_lambda(const AssessmentConfig& config,
                                           std::vector<double> lambdas);

/// Inputs and outputs of the scenario draw for `config`.
std::pair<Batch, Batch> draw_scenario_samples(const AssessmentConfig& config);

nlohmann::json config_to_json(const AssessmentConfig& config);

/// Model, distribution and safe set may be inline objects or paths; paths are
/// resolved against `base_dir`.
AssessmentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

nlohmann::json report_to_json(const AssessmentReport& report);

/// One line per sample: x..., y..., one safety level per safe-set row.
void write_samples_csv(const std::filesystem::path& path, const Batch& inputs,
                       const Batch& outputs, const SafeSet& safe_set);

inline constexpr int kReportVersion = 1;

}  // namespace scert
