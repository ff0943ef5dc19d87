#include <doctest.h>

#include "cli.hpp"
#include "scert/json_util.hpp"
#include "scert/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;

  std::string last_line() const {
    std::string s = out;
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s.substr(s.find_last_of('\n') + 1);
  }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = scert::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Bundle {
  fs::path dir;
  Bundle() {
    dir = fs::temp_directory_path() / ("scert_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "net.json") << R"({"layers":[{"weights":[[1,0],[0,1]],"bias":[0,0],"activation":"relu"}]})";
    std::ofstream(dir / "dist.json") << R"({"kind":"uniform_norm_ball","norm":"l1","center":[1,0],"radius":1})";
    std::ofstream(dir / "safe.json") << R"({"A":[[0,1]],"b":[0.5]})";
  }
  ~Bundle() { fs::remove_all(dir); }
  std::string p(const char* name) const { return (dir / name).string(); }
  std::vector<std::string> assess_args(const char* out) const {
    return {"assess", "--model", p("net.json"), "--dist", p("dist.json"), "--safe", p("safe.json"),
            "--class", "l2", "--out", p(out)};
  }
};

}  // namespace

TEST_CASE("sample-size subcommand") {
  auto r = run({"sample-size", "--eps", "0.1", "--delta", "1e-5", "--p", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "291\n");
  r = run({"sample-size", "--eps", "0.5", "--delta", "1", "--p", "1"});
  CHECK(r.out == "4\n");
  CHECK(run({"sample-size", "--eps", "0", "--delta", "1e-5", "--p", "3"}).code == 2);
  CHECK(run({"sample-size", "--eps", "abc", "--delta", "1e-5", "--p", "3"}).code == 2);
  CHECK(run({"sample-size", "--eps", "0.1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("assess exit codes and report") {
  Bundle b;
  auto args = b.assess_args("r.json");
  args.insert(args.end(), {"--lambda", "0.1", "--reg", "radius_squared", "--samples-csv", b.p("s.csv")});
  const auto ok = run(args);
  CHECK(ok.code == 0);
  CHECK(ok.last_line() == b.p("r.json"));
  const json rep = scert::json_util::read_file(b.p("r.json"));
  CHECK(rep["verdict"] == "certified");
  CHECK(rep["N"] == 291);
  CHECK(rep["provenance"]["samples_csv"] == b.p("s.csv"));
  CHECK(fs::exists(b.p("s.csv")));

  auto mb = b.assess_args("m.json");
  mb.push_back("--min-ball");
  const auto bad = run(mb);
  CHECK(bad.code == 1);
  CHECK(scert::json_util::read_file(b.p("m.json"))["rows"][0]["r_hat"].get<double>() < 0.0);

  auto inf = b.assess_args("i.json");
  inf.insert(inf.end(), {"--lambda", "inf"});
  CHECK(run(inf).code == 1);

  auto missing = b.assess_args("x.json");
  missing[2] = b.p("nope.json");
  const auto err = run(missing);
  CHECK(err.code == 2);
  CHECK(err.err.find("nope.json") != std::string::npos);
  CHECK_FALSE(fs::exists(b.p("x.json")));

  auto under = b.assess_args("u.json");
  under.insert(under.end(), {"--n", "50"});
  CHECK(run(under).code == 2);
  under.push_back("--allow-undersampled");
  CHECK(run(under).code != 2);
  CHECK(scert::json_util::read_file(b.p("u.json"))["guarantee"] == false);

  auto neg = b.assess_args("n.json");
  neg.insert(neg.end(), {"--lambda", "-1"});
  CHECK(run(neg).code == 2);
}

TEST_CASE("seed precedence") {
  Bundle b;
  ::setenv("SCENARIO_CERT_SEED", "12", 1);
  auto env = b.assess_args("e.json");
  run(env);
  CHECK(scert::json_util::read_file(b.p("e.json"))["seed"] == 12);
  auto flag = b.assess_args("f.json");
  flag.insert(flag.end(), {"--seed", "3"});
  run(flag);
  CHECK(scert::json_util::read_file(b.p("f.json"))["seed"] == 3);
  std::ofstream(b.dir / "cfg.json") << R"({"model":"net.json","distribution":"dist.json","safe_set":"safe.json","cover":"l2","seed":5})";
  run({"assess", "--config", b.p("cfg.json"), "--out", b.p("c.json")});
  CHECK(scert::json_util::read_file(b.p("c.json"))["seed"] == 5);
  ::setenv("SCENARIO_CERT_SEED", "junk", 1);
  CHECK(run(b.assess_args("j.json")).code == 2);
  ::unsetenv("SCENARIO_CERT_SEED");
  run(b.assess_args("z.json"));
  CHECK(scert::json_util::read_file(b.p("z.json"))["seed"] == 0);
}

TEST_CASE("config file with flag overrides") {
  Bundle b;
  std::ofstream(b.dir / "cfg.json") << R"({"model":"net.json","distribution":"dist.json",
      "safe_set":"safe.json","cover":"l2","regularizer":{"kind":"radius_squared","lambda":0.1},
      "epsilon":0.1,"delta":1e-5})";
  CHECK(run({"assess", "--config", b.p("cfg.json"), "--out", b.p("a.json")}).code == 0);
  CHECK(run({"assess", "--config", b.p("cfg.json"), "--min-ball", "--out", b.p("b.json")}).code == 1);
  CHECK(run({"assess", "--config", b.p("cfg.json"), "--eps", "0.05", "--out", b.p("c.json")}).code == 0);
  CHECK(scert::json_util::read_file(b.p("c.json"))["N"] == scert::sample_size(0.05, 1e-5, 3));
  std::ofstream(b.dir / "broken.json") << "{not json";
  CHECK(run({"assess", "--config", b.p("broken.json")}).code == 2);
}

TEST_CASE("validate appends without mutating") {
  Bundle b;
  auto args = b.assess_args("r.json");
  args.insert(args.end(), {"--lambda", "0.1"});
  REQUIRE(run(args).code == 0);
  const json before = scert::json_util::read_file(b.p("r.json"));
  const auto v = run({"validate", "--report", b.p("r.json"), "--samples", "100000", "--seed", "9"});
  CHECK(v.code == 0);
  CHECK(v.last_line() == b.p("r.json"));
  json after = scert::json_util::read_file(b.p("r.json"));
  REQUIRE(after.contains("validation"));
  const json& row = after["validation"]["rows"][0];
  CHECK(row["coverage"]["p_hat"].get<double>() >= 0.9);
  CHECK(row["coverage"]["M"] == 100000);
  CHECK(row["prl_estimate"] == 0.5);
  CHECK(row["min_safety"] == 0.5);
  after.erase("validation");
  CHECK(after == before);

  CHECK(run({"validate", "--report", b.p("r.json"), "--samples", "10"}).code == 2);

  json shrunk = before;
  shrunk["rows"][0]["theta_star"]["radius"] = 0.3;
  scert::json_util::write_file(b.p("shrunk.json"), shrunk);
  CHECK(run({"validate", "--report", b.p("shrunk.json"), "--samples", "1000"}).code == 1);

  std::ofstream(b.dir / "bad.json") << R"({"rows":[]})";
  CHECK(run({"validate", "--report", b.p("bad.json")}).code == 2);
  CHECK(run({"validate", "--report", b.p("absent.json")}).code == 2);

  CHECK(run({"validate", "--report", b.p("r.json"), "--samples", "1000", "--out", b.p("v.json")}).code == 0);
  CHECK(scert::json_util::read_file(b.p("v.json"))["validation"]["M"] == 1000);
}

TEST_CASE("sweep bundles one report per distinct lambda") {
  Bundle b;
  std::vector<std::string> args{"sweep", "--model", b.p("net.json"), "--dist", b.p("dist.json"),
                                "--safe", b.p("safe.json"), "--class", "l2", "--lambdas", "1,0,1e-4,1",
                                "--out", b.p("sw.json")};
  const auto r = run(args);
  CHECK(r.code != 2);
  CHECK(r.err.find("duplicate") != std::string::npos);
  CHECK(r.last_line() == b.p("sw.json"));
  const json bundle = scert::json_util::read_file(b.p("sw.json"));
  CHECK(bundle["kind"] == "sweep");
  REQUIRE(bundle["reports"].size() == 3);
  double prev = 1e300;
  bool all_certified = true;
  for (const auto& rep : bundle["reports"]) {
    all_certified = all_certified && rep["verdict"] == "certified";
    CHECK(rep["provenance"]["sample_set_hash"] == bundle["reports"][0]["provenance"]["sample_set_hash"]);
    CHECK(rep["rows"][0]["r_hat"].get<double>() <= prev + 1e-9);
    prev = rep["rows"][0]["r_hat"].get<double>();
  }
  CHECK(r.code == (all_certified ? 0 : 1));
  CHECK(bundle["reports"][0]["rows"][0]["status"] == "radius_capped");
  CHECK(bundle["reports"][0]["lambda"] == 0.0);
  CHECK(bundle["reports"][2]["lambda"] == 1.0);
  CHECK(run({"sweep", "--model", b.p("net.json"), "--dist", b.p("dist.json"), "--safe", b.p("safe.json"),
             "--lambdas", "0,x", "--out", b.p("bad.json")}).code == 2);
}

TEST_CASE("export-samples writes the scenario draw") {
  Bundle b;
  const auto r = run({"export-samples", "--model", b.p("net.json"), "--dist", b.p("dist.json"),
                      "--safe", b.p("safe.json"), "--class", "l2", "--out", b.p("s.csv")});
  CHECK(r.code == 0);
  std::ifstream in(b.p("s.csv"));
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 292);
}
