#include "cli.hpp"

#include "scert/assess.hpp"
#include "scert/json_util.hpp"
#include "scert/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace scert::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct AssessFlags {
  std::string config;
  std::string model;
  std::string dist;
  std::string safe;
  std::string cover;
  std::string reg;
  std::string lambda;
  bool min_ball = false;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  bool allow_undersampled = false;
  std::string q_fit;
  std::string solver;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol;
  std::optional<double> radius_cap_multiplier;
  std::string out = "report.json";
  std::string samples_csv;
};

void add_assess_flags(CLI::App& cmd, AssessFlags& f) {
  cmd.add_option("--config", f.config, "JSON config bundling model, distribution, safe set and options");
  cmd.add_option("--model", f.model, "model JSON");
  cmd.add_option("--dist", f.dist, "input distribution JSON");
  cmd.add_option("--safe", f.safe, "safe set JSON");
  cmd.add_option("--class", f.cover, "cover class: l1, l2, linf, q_pca, half_space");
  cmd.add_option("--reg", f.reg, "volume regularizer: none, radius, radius_squared");
  cmd.add_option("--lambda", f.lambda, "regularization weight (number or inf)");
  cmd.add_flag("--min-ball", f.min_ball, "pure localization: smallest covering ball");
  cmd.add_option("--eps", f.eps, "violation level epsilon");
  cmd.add_option("--delta", f.delta, "confidence level delta");
  cmd.add_option("--seed", f.seed, "random seed (default: config, then SCENARIO_CERT_SEED, then 0)");
  cmd.add_option("--n", f.n, "explicit sample count");
  cmd.add_flag("--allow-undersampled", f.allow_undersampled,
               "accept fewer samples than the bound; the report carries no guarantee");
  cmd.add_option("--q-fit", f.q_fit, "q_pca fitting: reuse or fresh_split");
  cmd.add_option("--solver", f.solver, "interior_point or subgradient");
  cmd.add_option("--max-iter", f.max_iter, "solver iteration budget");
  cmd.add_option("--tol", f.tol, "solver stopping tolerance");
  cmd.add_option("--radius-cap-multiplier", f.radius_cap_multiplier,
                 "radius cap as a multiple of the sample diameter");
  cmd.add_option("--out", f.out, "report path")->capture_default_str();
  cmd.add_option("--samples-csv", f.samples_csv, "also write the scenario samples as CSV");
}

std::uint64_t env_seed() {
  const char* raw = std::getenv("SCENARIO_CERT_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::char_traits<char>::length(raw)) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("SCENARIO_CERT_SEED is not an unsigned integer: ") + raw);
  }
}

double parse_number(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw InvalidArgument(what + ": not a number: '" + text + "'");
  return v;
}

AssessmentConfig build_config(const AssessFlags& f) {
  AssessmentConfig cfg;
  bool seed_in_config = false;
  if (!f.config.empty()) {
    const json doc = json_util::read_file(f.config);
    cfg = config_from_json(doc, fs::path(f.config).parent_path());
    seed_in_config = doc.is_object() && doc.contains("seed");
  }
  if (!f.model.empty()) cfg.model = std::make_shared<const NetworkModel>(load_model(f.model));
  if (!f.dist.empty())
    cfg.distribution = std::make_shared<const InputDistribution>(load_distribution(f.dist));
  if (!f.safe.empty()) cfg.safe_set = std::make_shared<const SafeSet>(load_safe_set(f.safe));
  if (!f.cover.empty()) cfg.cover = cover_class_from_name(f.cover);
  if (f.eps) cfg.epsilon = *f.eps;
  if (f.delta) cfg.delta = *f.delta;
  if (f.seed) cfg.seed = *f.seed;
  else if (!seed_in_config) cfg.seed = env_seed();
  if (f.n) cfg.samples = *f.n;
  if (f.allow_undersampled) cfg.allow_undersampled = true;
  if (!f.q_fit.empty()) cfg.q_fit = parse_q_fit_mode(f.q_fit);
  if (!f.solver.empty()) cfg.solver.method = parse_solver_method(f.solver);
  if (f.max_iter) cfg.solver.max_iter = *f.max_iter;
  if (f.tol) {
    cfg.solver.tol_obj = *f.tol;
    cfg.solver.tol_gap = *f.tol;
  }
  if (f.radius_cap_multiplier) cfg.solver.radius_cap_multiplier = *f.radius_cap_multiplier;

  if (!f.reg.empty()) cfg.regularizer.kind = parse_regularizer_kind(f.reg);
  if (!f.lambda.empty()) {
    cfg.regularizer.weight = parse_number(f.lambda, "--lambda");
    if (f.reg.empty() && cfg.regularizer.kind == RegularizerKind::none && cfg.regularizer.weight > 0.0)
      cfg.regularizer.kind = RegularizerKind::radius_squared;
  }
  if (f.min_ball) {
    cfg.regularizer.weight = std::numeric_limits<double>::infinity();
    if (cfg.regularizer.kind == RegularizerKind::none) cfg.regularizer.kind = RegularizerKind::radius;
  }
  if (cfg.regularizer.pure_localization() && cfg.regularizer.kind == RegularizerKind::none)
    throw InvalidArgument("lambda = inf needs a radius or radius_squared regularizer");
  if (!(cfg.regularizer.weight >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  if (!cfg.model) throw InvalidArgument("no model given (--model or --config)");
  if (!cfg.distribution) throw InvalidArgument("no input distribution given (--dist or --config)");
  if (!cfg.safe_set) throw InvalidArgument("no safe set given (--safe or --config)");
  return cfg;
}

void print_summary(std::ostream& out, const AssessmentReport& r) {
  out << "N = " << r.N << " (p = " << r.p << ")" << (r.guarantee ? "" : ", no guarantee") << '\n';
  out << std::setprecision(10);
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    out << "row " << i << ": r_hat = " << r.rows[i].r_hat << " [" << to_string(r.rows[i].status)
        << "]\n";
  out << "verdict: " << to_string(r.verdict) << '\n';
}

json finish_report(const AssessmentReport& report, const std::string& csv_path) {
  json doc = report_to_json(report);
  if (!csv_path.empty()) {
    write_samples_csv(csv_path, report.inputs, report.outputs, *report.config.safe_set);
    doc["provenance"]["samples_csv"] = csv_path;
  }
  return doc;
}

int cmd_assess(const AssessFlags& f, std::ostream& out) {
  const AssessmentReport report = assess(build_config(f));
  json_util::write_file(f.out, finish_report(report, f.samples_csv));
  print_summary(out, report);
  out << f.out << '\n';
  return report.verdict == Verdict::certified ? kExitCertified : kExitNotCertified;
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) values.push_back(parse_number(item, "--lambdas"));
  }
  if (values.empty()) throw InvalidArgument("--lambdas needs at least one value");
  return values;
}

int cmd_sweep(const AssessFlags& f, const std::string& lambdas_text, std::ostream& out,
              std::ostream& err) {
  std::vector<double> lambdas = parse_lambdas(lambdas_text);
  std::vector<double> unique = lambdas;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() != lambdas.size())
    err << "warning: " << lambdas.size() - unique.size() << " duplicate lambda value(s) dropped\n";

  AssessFlags flags = f;
  if (flags.reg.empty() && flags.config.empty()) flags.reg = "radius_squared";
  AssessmentConfig cfg = build_config(flags);
  if (cfg.regularizer.kind == RegularizerKind::none) cfg.regularizer.kind = RegularizerKind::radius_squared;
  const std::vector<AssessmentReport> reports = sweep_lambda(cfg, unique);

  json bundle = {{"version", kReportVersion}, {"kind", "sweep"}, {"reports", json::array()}};
  bool all_certified = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    bundle["reports"].push_back(finish_report(reports[i], i == 0 ? f.samples_csv : std::string()));
    if (i > 0 && !f.samples_csv.empty())
      bundle["reports"].back()["provenance"]["samples_csv"] = f.samples_csv;
    out << "lambda = " << json_util::from_double(unique[i]).dump() << '\n';
    print_summary(out, reports[i]);
    all_certified = all_certified && reports[i].verdict == Verdict::certified;
  }
  json_util::write_file(f.out, bundle);
  out << f.out << '\n';
  return all_certified ? kExitCertified : kExitNotCertified;
}

struct ValidateFlags {
  std::string report;
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_validate(const ValidateFlags& f, std::ostream& out) {
  json doc = json_util::read_file(f.report);
  if (!doc.is_object() || !doc.contains("config") || !doc.contains("rows") || !doc["rows"].is_array())
    throw ParseError(f.report + ": not an assessment report (missing config or rows)");
  const AssessmentConfig cfg = config_from_json(doc["config"], fs::path(f.report).parent_path());
  if (!cfg.model || !cfg.distribution)
    throw ParseError(f.report + ": embedded config lacks a model or distribution");
  const double eps = cfg.epsilon;
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("report epsilon must lie in (0, 1]");
  if (static_cast<double>(f.samples) < 100.0 / eps)
    throw InvalidArgument("validation needs M >= 100/eps = " + std::to_string(100.0 / eps) +
                          " samples, got " + std::to_string(f.samples));
  const std::uint64_t seed = f.seed.value_or(cfg.seed);

  const Batch outputs = validation_outputs(*cfg.model, *cfg.distribution, f.samples, seed);
  json rows = json::array();
  bool pass = true;
  out << std::setprecision(10);
  for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
    const json& r = doc["rows"][i];
    SafeRow row{json_util::to_vector(r.at("a"), "row a"), r.at("b").get<double>()};
    if (static_cast<std::size_t>(row.a.size()) != static_cast<std::size_t>(outputs.cols()))
      throw DimensionError("report row " + std::to_string(i) + " does not match the model output");
    const CoverParams cover = parse_cover_params(r.at("theta_star"));
    const CoverageEstimate cov = coverage_of(outputs, cover, row);
    const Vector levels = safety_levels(row, outputs);
    const std::span<const double> view(levels.data(), static_cast<std::size_t>(levels.size()));
    const double prl = eps < 1.0 ? empirical_quantile(view, eps) : levels.minCoeff();
    const double min_level = levels.minCoeff();
    const bool row_pass = cov.p_hat >= 1.0 - eps;
    pass = pass && row_pass;
    rows.push_back({{"coverage", {{"p_hat", cov.p_hat}, {"ci_low", cov.ci_low}, {"M", cov.samples}}},
                    {"prl_estimate", prl},
                    {"min_safety", min_level},
                    {"r_hat_below_prl", r.at("r_hat").get<double>() <= prl},
                    {"pass", row_pass}});
    out << "row " << i << ": coverage " << cov.p_hat << " (99% lower " << cov.ci_low
        << "), prl estimate " << prl << '\n';
  }
  doc["validation"] = {{"M", f.samples}, {"seed", seed}, {"stream", "validation"},
                       {"rows", std::move(rows)}, {"pass", pass}};
  const std::string target = f.out.empty() ? f.report : f.out;
  json_util::write_file(target, doc);
  out << "validation: " << (pass ? "pass" : "fail") << '\n' << target << '\n';
  return pass ? kExitCertified : kExitNotCertified;
}

int cmd_export_samples(const AssessFlags& f, std::ostream& out) {
  const AssessmentConfig cfg = build_config(f);
  const auto [inputs, outputs] = draw_scenario_samples(cfg);
  const std::string path = f.samples_csv.empty() ? f.out : f.samples_csv;
  write_samples_csv(path, inputs, outputs, *cfg.safe_set);
  out << inputs.rows() << " samples\n" << path << '\n';
  return kExitCertified;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scenario-based robustness certification and output localization"};
  app.name("scenario-cert");
  app.require_subcommand(1);

  double ss_eps = 0.0, ss_delta = 0.0;
  std::size_t ss_p = 0;
  auto* sample_size_cmd = app.add_subcommand("sample-size", "print the sample-size bound");
  sample_size_cmd->add_option("--eps", ss_eps, "violation level")->required();
  sample_size_cmd->add_option("--delta", ss_delta, "confidence level")->required();
  sample_size_cmd->add_option("--p", ss_p, "number of cover parameters")->required();

  AssessFlags assess_flags;
  auto* assess_cmd = app.add_subcommand("assess", "certify and localize one configuration");
  add_assess_flags(*assess_cmd, assess_flags);

  AssessFlags sweep_flags;
  sweep_flags.out = "sweep.json";
  std::string lambdas;
  auto* sweep_cmd = app.add_subcommand("sweep", "assess several lambdas on one sample set");
  add_assess_flags(*sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--lambdas", lambdas, "comma-separated lambda values")->required();

  ValidateFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of a report");
  validate_cmd->add_option("--report", validate_flags.report, "report JSON")->required();
  validate_cmd->add_option("--samples", validate_flags.samples, "validation sample count M")
      ->capture_default_str();
  validate_cmd->add_option("--seed", validate_flags.seed, "validation seed (default: report seed)");
  validate_cmd->add_option("--out", validate_flags.out, "output path (default: the report itself)");

  AssessFlags export_flags;
  export_flags.out = "samples.csv";
  auto* export_cmd = app.add_subcommand("export-samples", "write the scenario samples as CSV");
  add_assess_flags(*export_cmd, export_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (sample_size_cmd->parsed()) {
      out << sample_size(ss_eps, ss_delta, ss_p) << '\n';
      return 0;
    }
    if (assess_cmd->parsed()) return cmd_assess(assess_flags, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, lambdas, out, err);
    if (validate_cmd->parsed()) return cmd_validate(validate_flags, out);
    if (export_cmd->parsed()) return cmd_export_samples(export_flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace scert::cli
