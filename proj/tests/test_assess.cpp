#include <doctest.h>

#include "scert/assess.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace scert;
using nlohmann::json;

namespace {

AssessmentConfig triangle_config(double lambda = 0.1) {
  AssessmentConfig cfg;
  cfg.epsilon = 0.1;
  cfg.delta = 1e-5;
  cfg.cover = cover_class_from_name("l2");
  cfg.regularizer = Regularizer{RegularizerKind::radius_squared, lambda};
  cfg.model = std::make_shared<NetworkModel>(
      std::vector<DenseLayer>{DenseLayer{Matrix::Identity(2, 2), Vector::Zero(2), Activation::relu()}});
  cfg.distribution = std::make_shared<InputDistribution>(
      InputDistribution::uniform_norm_ball(Vector{{1.0, 0.0}}, 1.0, PNorm::l1));
  Matrix A(1, 2);
  A << 0.0, 1.0;
  cfg.safe_set = std::make_shared<SafeSet>(A, Vector{{0.5}});
  return cfg;
}

const NormBall& ball_of(const RowResult& r) { return std::get<NormBall>(r.theta_star); }

}  // namespace

TEST_CASE("ReLU triangle is certified with lambda = 0.1") {
  const auto report = assess(triangle_config());
  CHECK(report.N == 291);
  CHECK(report.p == 3);
  CHECK(report.guarantee);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].r_hat > 0.0);
  CHECK(report.verdict == Verdict::certified);
  CHECK(report.outputs.rows() == 291);
  CHECK(report.inputs.cols() == 2);
  CHECK(report.sample_set_hash.size() == 64);
}

TEST_CASE("ReLU triangle in min-ball mode is not certified") {
  auto cfg = triangle_config();
  cfg.regularizer = Regularizer{RegularizerKind::radius, std::numeric_limits<double>::infinity()};
  const auto report = assess(cfg);
  CHECK(report.rows[0].r_hat < 0.0);
  CHECK(report.verdict == Verdict::not_certified);
}

TEST_CASE("assessment is deterministic and reproducible from its report") {
  auto cfg = triangle_config();
  cfg.seed = 77;
  const auto a = assess(cfg);
  const auto b = assess(cfg);
  CHECK(ball_of(a.rows[0]).center == ball_of(b.rows[0]).center);
  CHECK(ball_of(a.rows[0]).radius == ball_of(b.rows[0]).radius);
  json ja = report_to_json(a), jb = report_to_json(b);
  ja.erase("wall_time_s");
  jb.erase("wall_time_s");
  CHECK(ja == jb);

  const json text = json::parse(ja.dump());
  const auto replay = assess(config_from_json(text["config"]));
  CHECK(ball_of(replay.rows[0]).center == ball_of(a.rows[0]).center);
  CHECK(ball_of(replay.rows[0]).radius == ball_of(a.rows[0]).radius);
  CHECK(replay.sample_set_hash == a.sample_set_hash);
  CHECK(replay.config.seed == 77);
}

TEST_CASE("different seeds give different sample sets") {
  auto cfg = triangle_config();
  const auto a = assess(cfg);
  cfg.seed = 1;
  CHECK(assess(cfg).sample_set_hash != a.sample_set_hash);
}

TEST_CASE("sample count override") {
  auto cfg = triangle_config();
  cfg.samples = 100;
  CHECK_THROWS_AS(assess(cfg), InvalidArgument);
  cfg.allow_undersampled = true;
  const auto low = assess(cfg);
  CHECK(low.N == 100);
  CHECK_FALSE(low.guarantee);
  CHECK(report_to_json(low)["guarantee"] == false);
  cfg.samples = 500;
  cfg.allow_undersampled = false;
  const auto high = assess(cfg);
  CHECK(high.N == 500);
  CHECK(high.guarantee);
}

TEST_CASE("inconsistent configurations are rejected") {
  auto cfg = triangle_config();
  cfg.distribution = std::make_shared<InputDistribution>(
      InputDistribution::uniform_norm_ball(Vector::Zero(3), 1.0, PNorm::l2));
  CHECK_THROWS_AS(assess(cfg), DimensionError);
  cfg = triangle_config();
  cfg.safe_set = std::make_shared<SafeSet>(Matrix::Identity(3, 3), Vector::Zero(3));
  CHECK_THROWS_AS(assess(cfg), DimensionError);
  cfg = triangle_config();
  cfg.model = nullptr;
  CHECK_THROWS_AS(assess(cfg), InvalidArgument);
  cfg = triangle_config();
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(assess(cfg), InvalidArgument);
  cfg = triangle_config();
  cfg.cover = cover_class_from_name("half_space");
  CHECK_THROWS_AS(assess(cfg), InvalidArgument);
}

TEST_CASE("half-space class recovers the pure certificate") {
  auto cfg = triangle_config(0.0);
  cfg.cover = cover_class_from_name("half_space");
  cfg.regularizer = Regularizer{};
  const auto report = assess(cfg);
  CHECK(report.p == 1);
  CHECK(report.N == sample_size(0.1, 1e-5, 1));
  CHECK(report.rows[0].r_hat == safety_levels(report.rows[0].row, report.outputs).minCoeff());
}

TEST_CASE("multi-row safe sets: per-row certificates and the worst row") {
  auto cfg = triangle_config();
  Matrix A(3, 2);
  A << 0.0, 1.0, 1.0, 0.0, -1.0, -1.0;
  cfg.safe_set = std::make_shared<SafeSet>(A, Vector{{0.5, 0.2, 3.5}});
  const auto report = assess(cfg);
  REQUIRE(report.rows.size() == 3);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (report.rows[i].r_hat < report.rows[worst].r_hat) worst = i;
    CHECK(report.rows[i].row.a == Vector(A.row(static_cast<Eigen::Index>(i)).transpose()));
  }
  CHECK(report.worst_row == worst);
  CHECK(report.r_hat_min() == report.rows[worst].r_hat);
  const bool all_pos = report.rows[0].r_hat >= 0 && report.rows[1].r_hat >= 0 && report.rows[2].r_hat >= 0;
  CHECK((report.verdict == Verdict::certified) == all_pos);

  cfg.safe_set = std::make_shared<SafeSet>(A, Vector{{0.5, -10.0, 3.5}});
  CHECK(assess(cfg).verdict == Verdict::not_certified);
}

TEST_CASE("fitted ellipsoid class") {
  auto cfg = triangle_config();
  cfg.cover = cover_class_from_name("q_pca");
  const auto reuse = assess(cfg);
  CHECK(ball_of(reuse.rows[0]).norm.kind() == NormKind::quadratic);
  cfg.q_fit = QFitMode::fresh_split;
  const auto fresh = assess(cfg);
  CHECK(fresh.sample_set_hash == reuse.sample_set_hash);
  CHECK(ball_of(fresh.rows[0]).norm.Q() != ball_of(reuse.rows[0]).norm.Q());
  CHECK(report_to_json(fresh)["q_fit"] == "fresh_split");
  for (const auto* r : {&reuse, &fresh})
    for (Eigen::Index j = 0; j < r->outputs.rows(); ++j)
      CHECK(contains(r->rows[0].theta_star, r->rows[0].row, r->outputs.row(j).transpose()));
}

TEST_CASE("lambda sweep shares one sample set") {
  const auto reports = sweep_lambda(triangle_config(), {1.0, 0.0, 1e-4, 1.0});
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].config.regularizer.weight == 0.0);
  CHECK(reports[1].config.regularizer.weight == 1e-4);
  CHECK(reports[2].config.regularizer.weight == 1.0);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].sample_set_hash == reports[0].sample_set_hash);
    CHECK(reports[i].rows[0].r_hat <= reports[i - 1].rows[0].r_hat + 1e-9);
    CHECK(ball_of(reports[i].rows[0]).radius <= ball_of(reports[i - 1].rows[0]).radius + 1e-9);
  }
  CHECK(reports[0].rows[0].status == SolveStatus::radius_capped);

  const auto single = sweep_lambda(triangle_config(), {0.1});
  REQUIRE(single.size() == 1);
  const auto direct = assess(triangle_config());
  CHECK(ball_of(single[0].rows[0]).center == ball_of(direct.rows[0]).center);
  CHECK(single[0].rows[0].r_hat == direct.rows[0].r_hat);

  const auto big = sweep_lambda(triangle_config(), {0.0, 1e6});
  CHECK(ball_of(big[1].rows[0]).radius <= ball_of(big[0].rows[0]).radius);
  CHECK_THROWS(sweep_lambda(triangle_config(), {}));
  CHECK_THROWS(sweep_lambda(triangle_config(), {-1.0}));
}

TEST_CASE("report JSON fields") {
  const auto j = report_to_json(assess(triangle_config()));
  CHECK(j["version"] == kReportVersion);
  CHECK(j["N"] == 291);
  CHECK(j["p"] == 3);
  CHECK(j["seed"] == 0);
  CHECK(j["epsilon"] == 0.1);
  CHECK(j["delta"] == 1e-5);
  CHECK(j["lambda"] == 0.1);
  CHECK(j["verdict"] == "certified");
  CHECK(j["rows"][0]["theta_star"]["class"] == "norm_ball");
  CHECK(j["rows"][0]["status"] == "optimal");
  CHECK(j["provenance"]["config_hash"].get<std::string>().size() == 64);
  CHECK(j["provenance"]["kernels"].is_string());
  CHECK(j["config"]["model"]["layers"].size() == 1);
  CHECK(j.contains("wall_time_s"));

  auto cfg = triangle_config();
  cfg.regularizer = Regularizer{RegularizerKind::radius, std::numeric_limits<double>::infinity()};
  const auto m = report_to_json(assess(cfg));
  CHECK(m["lambda"] == "inf");
  CHECK(m["verdict"] == "not_certified");
}

TEST_CASE("config JSON with file references") {
  const auto dir = std::filesystem::temp_directory_path() / "scert_assess_cfg";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "net.json") << R"({"layers":[{"weights":[[1,0],[0,1]],"bias":[0,0],"activation":"relu"}]})";
  std::ofstream(dir / "dist.json") << R"({"kind":"uniform_norm_ball","norm":"l1","center":[1,0],"radius":1})";
  const json doc = json::parse(R"({"model":"net.json","distribution":"dist.json",
      "safe_set":{"A":[[0,1]],"b":[0.5]},"cover":"l2","regularizer":{"kind":"radius_squared","lambda":0.1},
      "epsilon":0.1,"delta":1e-5,"seed":0,"solver":{"method":"interior_point","max_iter":1000}})");
  const auto cfg = config_from_json(doc, dir);
  CHECK(cfg.solver.max_iter == 1000);
  const auto a = assess(cfg);
  const auto b = assess(triangle_config());
  CHECK(ball_of(a.rows[0]).center == ball_of(b.rows[0]).center);
  CHECK_THROWS(config_from_json(json::parse(R"({"model":"missing.json"})"), dir));
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"epsilon":"x"})")), ParseError);
  CHECK_THROWS(config_from_json(json::parse("[1,2]")));
  std::filesystem::remove_all(dir);
}

TEST_CASE("samples CSV") {
  const auto report = assess(triangle_config());
  const auto path = std::filesystem::temp_directory_path() / "scert_samples.csv";
  write_samples_csv(path, report.inputs, report.outputs, *report.config.safe_set);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,y1,y2,s1");
  std::string line;
  std::size_t count = 0;
  std::getline(in, line);
  ++count;
  std::stringstream ss(line);
  std::vector<double> vals;
  for (std::string cell; std::getline(ss, cell, ',');) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 5);
  CHECK(vals[0] == report.inputs(0, 0));
  CHECK(vals[3] == report.outputs(0, 1));
  CHECK(vals[4] == report.outputs(0, 1) + 0.5);
  while (std::getline(in, line)) ++count;
  CHECK(count == 291);
  std::filesystem::remove(path);
}
