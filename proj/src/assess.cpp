#include "scert/assess.hpp"

#include "scert/json_util.hpp"
#include "scert/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

namespace scert {

using nlohmann::json;

std::string to_string(QFitMode mode) { return mode == QFitMode::reuse ? "reuse" : "fresh_split"; }

QFitMode parse_q_fit_mode(const std::string& name) {
  if (name == "reuse") return QFitMode::reuse;
  if (name == "fresh_split") return QFitMode::fresh_split;
  throw ParseError("unknown q_fit mode '" + name + "' (expected reuse or fresh_split)");
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::certified ? "certified" : "not_certified";
}

namespace {

constexpr const char* kStatement =
    "with probability >= 1 - delta over the drawn samples, h(theta*) is an epsilon-cover of the "
    "output and r_hat(theta*) <= r_bar(epsilon)";

struct SampleBudget {
  std::size_t N = 0;
  std::size_t p = 0;
  bool guarantee = true;
};

SampleBudget check_config(const AssessmentConfig& cfg) {
  if (!cfg.model) throw InvalidArgument("assessment config has no model");
  if (!cfg.distribution) throw InvalidArgument("assessment config has no input distribution");
  if (!cfg.safe_set) throw InvalidArgument("assessment config has no safe set");
  if (cfg.distribution->dim() != cfg.model->input_dim())
    throw DimensionError("distribution is " + std::to_string(cfg.distribution->dim()) +
                         "-dimensional, model takes " + std::to_string(cfg.model->input_dim()) +
                         " inputs");
  if (cfg.safe_set->output_dim() != cfg.model->output_dim())
    throw DimensionError("safe set acts on " + std::to_string(cfg.safe_set->output_dim()) +
                         " outputs, model produces " + std::to_string(cfg.model->output_dim()));
  if (cfg.cover.family == CoverFamily::half_space && cfg.regularizer.weight != 0.0 &&
      cfg.regularizer.kind != RegularizerKind::none)
    throw InvalidArgument("half-space covers take no volume regularizer");
  if (cfg.cover.norm == NormKind::quadratic && !cfg.cover.fit_q && !cfg.cover.Q)
    throw InvalidArgument("quadratic cover class needs Q or q_pca fitting");

  SampleBudget budget;
  budget.p = cfg.cover.parameter_dim(cfg.model->output_dim());
  const std::size_t bound = sample_size(cfg.epsilon, cfg.delta, budget.p);
  budget.N = cfg.samples.value_or(bound);
  if (budget.N == 0) throw InvalidArgument("sample count must be positive");
  budget.guarantee = budget.N >= bound;
  if (!budget.guarantee && !cfg.allow_undersampled)
    throw InvalidArgument("requested " + std::to_string(budget.N) +
                          " samples, the guarantee needs at least " + std::to_string(bound) +
                          " (set allow_undersampled to proceed without it)");
  return budget;
}

NormSpec cover_norm(const AssessmentConfig& cfg, const Batch& outputs) {
  switch (cfg.cover.norm) {
    case NormKind::l1: return NormSpec::l1();
    case NormKind::l2: return NormSpec::l2();
    case NormKind::linf: return NormSpec::linf();
    case NormKind::quadratic:
      if (!cfg.cover.fit_q) return NormSpec::quadratic(*cfg.cover.Q);
      if (cfg.q_fit == QFitMode::reuse) return fit_pca_qnorm(outputs);
      return fit_pca_qnorm(cfg.model->evaluate_batch(
          sample(*cfg.distribution, static_cast<std::size_t>(outputs.rows()), cfg.seed, streams::q_fit)));
  }
  return NormSpec::l2();
}

std::string batch_hash(const Batch& b) {
  std::string bytes = std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ":";
  bytes.append(reinterpret_cast<const char*>(b.data()), static_cast<std::size_t>(b.size()) * sizeof(double));
  return json_util::sha256_hex(bytes);
}

AssessmentReport assess_on_samples(const AssessmentConfig& cfg, const SampleBudget& budget,
                                   Batch inputs, Batch outputs, std::string hash) {
  const auto start = std::chrono::steady_clock::now();
  AssessmentReport report;
  report.config = cfg;
  report.N = budget.N;
  report.p = budget.p;
  report.guarantee = budget.guarantee;
  report.kernels = std::string(kernels::active().name);

  ScenarioProblem problem;
  problem.outputs = outputs;
  problem.family = cfg.cover.family;
  if (cfg.cover.family == CoverFamily::norm_ball) problem.norm = cover_norm(cfg, outputs);
  problem.regularizer = cfg.regularizer;
  problem.options = cfg.solver;

  for (const auto& row : cfg.safe_set->rows()) {
    problem.row = row;
    ScenarioSolution sol = solve(problem);
    RowResult result;
    result.row = row;
    result.r_hat = sol.r_hat;
    result.objective = sol.objective;
    result.status = sol.status;
    result.iterations = sol.iterations;
    result.theta_star = std::move(sol.theta_star);
    report.rows.push_back(std::move(result));
  }
  report.worst_row = 0;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (report.rows[i].r_hat < report.rows[report.worst_row].r_hat) report.worst_row = i;
  report.verdict = std::all_of(report.rows.begin(), report.rows.end(),
                               [](const RowResult& r) { return r.r_hat >= 0.0; })
                       ? Verdict::certified
                       : Verdict::not_certified;
  report.sample_set_hash = std::move(hash);
  report.inputs = std::move(inputs);
  report.outputs = std::move(outputs);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

std::pair<Batch, Batch> draw_scenario_samples(const AssessmentConfig& config) {
  const SampleBudget budget = check_config(config);
  Batch inputs = sample(*config.distribution, budget.N, config.seed, streams::scenario);
  Batch outputs = config.model->evaluate_batch(inputs);
  return {std::move(inputs), std::move(outputs)};
}

AssessmentReport assess(const AssessmentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const SampleBudget budget = check_config(config);
  auto [inputs, outputs] = draw_scenario_samples(config);
  std::string hash = batch_hash(outputs);
  AssessmentReport report =
      assess_on_samples(config, budget, std::move(inputs), std::move(outputs), std::move(hash));
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<AssessmentReport> sweep_lambda(const AssessmentConfig& config,
                                           std::vector<double> lambdas) {
  if (lambdas.empty()) throw InvalidArgument("sweep needs at least one lambda");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw InvalidArgument("lambda values must be nonnegative");
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  const SampleBudget budget = check_config(config);
  auto [inputs, outputs] = draw_scenario_samples(config);
  const std::string hash = batch_hash(outputs);
  std::vector<AssessmentReport> reports;
  for (double lambda : lambdas) {
    AssessmentConfig cfg = config;
    cfg.regularizer.weight = lambda;
    if (cfg.regularizer.kind == RegularizerKind::none && lambda > 0.0)
      cfg.regularizer.kind = RegularizerKind::radius_squared;
    reports.push_back(assess_on_samples(cfg, budget, inputs, outputs, hash));
  }
  return reports;
}

json config_to_json(const AssessmentConfig& config) {
  json doc;
  doc["epsilon"] = config.epsilon;
  doc["delta"] = config.delta;
  doc["cover"] = to_json(config.cover);
  doc["regularizer"] = to_json(config.regularizer);
  doc["seed"] = config.seed;
  doc["samples"] = config.samples ? json(*config.samples) : json(nullptr);
  doc["allow_undersampled"] = config.allow_undersampled;
  doc["q_fit"] = to_string(config.q_fit);
  doc["solver"] = {{"method", to_string(config.solver.method)},
                   {"max_iter", config.solver.max_iter},
                   {"tol_obj", config.solver.tol_obj},
                   {"tol_gap", config.solver.tol_gap},
                   {"radius_cap_multiplier", config.solver.radius_cap_multiplier}};
  const auto* net = dynamic_cast<const NetworkModel*>(config.model.get());
  doc["model"] = net != nullptr ? to_json(*net) : json(nullptr);
  doc["distribution"] = config.distribution ? to_json(*config.distribution) : json(nullptr);
  doc["safe_set"] = config.safe_set ? to_json(*config.safe_set) : json(nullptr);
  return doc;
}

namespace {

template <typename T, typename Load, typename Parse>
std::shared_ptr<const T> inline_or_path(const json& doc, const std::filesystem::path& base_dir,
                                        Load load, Parse parse) {
  if (doc.is_string()) {
    std::filesystem::path path = doc.get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return std::make_shared<const T>(load(path));
  }
  if (doc.is_object()) return std::make_shared<const T>(parse(doc));
  return nullptr;
}

}  // namespace

AssessmentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  try {
    AssessmentConfig cfg;
    if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
    if (doc.contains("cover")) cfg.cover = parse_cover_class(doc["cover"]);
    if (doc.contains("regularizer")) cfg.regularizer = parse_regularizer(doc["regularizer"]);
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("samples") && !doc["samples"].is_null())
      cfg.samples = doc["samples"].get<std::size_t>();
    cfg.allow_undersampled = doc.value("allow_undersampled", false);
    if (doc.contains("q_fit")) cfg.q_fit = parse_q_fit_mode(doc["q_fit"].get<std::string>());
    if (doc.contains("solver")) {
      const auto& s = doc["solver"];
      if (s.contains("method")) cfg.solver.method = parse_solver_method(s["method"].get<std::string>());
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
      cfg.solver.tol_obj = s.value("tol_obj", cfg.solver.tol_obj);
      cfg.solver.tol_gap = s.value("tol_gap", cfg.solver.tol_gap);
      cfg.solver.radius_cap_multiplier = s.value("radius_cap_multiplier", cfg.solver.radius_cap_multiplier);
    }
    if (doc.contains("model"))
      cfg.model = inline_or_path<NetworkModel>(doc["model"], base_dir, load_model, parse_model);
    if (doc.contains("distribution"))
      cfg.distribution = inline_or_path<InputDistribution>(doc["distribution"], base_dir,
                                                           load_distribution, parse_distribution);
    if (doc.contains("safe_set"))
      cfg.safe_set = inline_or_path<SafeSet>(doc["safe_set"], base_dir, load_safe_set, parse_safe_set);
    return cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

json report_to_json(const AssessmentReport& report) {
  const auto& cfg = report.config;
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"a", json_util::from_vector(r.row.a)},
                    {"b", r.row.b},
                    {"theta_star", to_json(r.theta_star)},
                    {"r_hat", r.r_hat},
                    {"objective", r.objective},
                    {"status", to_string(r.status)},
                    {"iterations", r.iterations}});
  }
  json config = config_to_json(cfg);
  json doc;
  doc["version"] = kReportVersion;
  doc["config"] = config;
  doc["epsilon"] = cfg.epsilon;
  doc["delta"] = cfg.delta;
  doc["N"] = report.N;
  doc["p"] = report.p;
  doc["lambda"] = json_util::from_double(cfg.regularizer.weight);
  doc["seed"] = cfg.seed;
  doc["cover_class"] = cfg.cover.name();
  if (cfg.cover.norm == NormKind::quadratic && cfg.cover.fit_q) doc["q_fit"] = to_string(cfg.q_fit);
  doc["guarantee"] = report.guarantee;
  doc["statement"] = report.guarantee ? json(kStatement)
                                      : json("no guarantee: fewer samples than the sample-size bound");
  doc["rows"] = std::move(rows);
  doc["worst_row"] = report.worst_row;
  doc["r_hat_min"] = report.r_hat_min();
  doc["verdict"] = to_string(report.verdict);
  doc["provenance"] = {{"config_hash", json_util::sha256_hex(config.dump())},
                       {"sample_set_hash", report.sample_set_hash},
                       {"samples_csv", nullptr},
                       {"kernels", report.kernels}};
  doc["wall_time_s"] = report.wall_time_s;
  return doc;
}

void write_samples_csv(const std::filesystem::path& path, const Batch& inputs,
                       const Batch& outputs, const SafeSet& safe_set) {
  if (inputs.rows() != outputs.rows()) throw DimensionError("inputs and outputs differ in count");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index k = 0; k < inputs.cols(); ++k) out << (k ? "," : "") << "x" << k + 1;
  for (Eigen::Index k = 0; k < outputs.cols(); ++k) out << ",y" << k + 1;
  for (std::size_t i = 0; i < safe_set.size(); ++i) out << ",s" << i + 1;
  out << '\n';
  std::vector<Vector> levels;
  for (const auto& row : safe_set.rows()) levels.push_back(safety_levels(row, outputs));
  for (Eigen::Index j = 0; j < inputs.rows(); ++j) {
    for (Eigen::Index k = 0; k < inputs.cols(); ++k) out << (k ? "," : "") << inputs(j, k);
    for (Eigen::Index k = 0; k < outputs.cols(); ++k) out << ',' << outputs(j, k);
    for (const auto& l : levels) out << ',' << l(j);
    out << '\n';
  }
}

}  // namespace scert
