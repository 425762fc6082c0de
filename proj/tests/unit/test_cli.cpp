#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using rz2::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::create_directories(RZ2_TEST_TMPDIR);
  const std::string path = std::string(RZ2_TEST_TMPDIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSwap = R"({
  "distributions": [
    {"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.5},
    {"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.5}
  ],
  "coefficients": {
    "a": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}],
    "b": [{"re": 1, "disc": 1}, {"re": -1, "disc": 1}],
    "c": [{"re": 1, "disc": 1}, {"re": -1, "disc": 1}],
    "d": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}]
  },
  "mc": {"n_samples": 300, "n_perm": 99}
})";

const char* kPerturbed = R"({
  "distributions": [
    {"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.5},
    {"sigma": 1, "beta": 1, "sigma_p": 0.5, "beta_p": 1, "kappa": 0.5}
  ],
  "coefficients": {
    "a": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}],
    "b": [{"re": 1, "disc": 1}, {"re": -1, "disc": 1}],
    "c": [{"re": 1, "disc": 1}, {"re": -1, "disc": 1}],
    "d": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}]
  }
})";

const char* kDs = R"({
  "distributions": [
    {"sigma": 1, "beta": 0, "sigma_p": 1, "beta_p": 0, "kappa": 1},
    {"sigma": 1, "beta": 0, "sigma_p": 1, "beta_p": 0, "kappa": 1}
  ],
  "coefficients": {
    "a": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}],
    "b": [{"re": 1, "disc": 1}, {"re": -1, "disc": 1}]
  }
})";

}  // namespace

TEST_CASE("check-theta reports the bound") {
  const auto path = write_file("signed.json",
                               R"({"distributions": [{"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.8}]})");
  const auto r = invoke({"check-theta", "--config", path});
  CHECK(r.code == 0);
  const auto report = json::parse(r.out);
  CHECK(report["command"] == "check-theta");
  CHECK(report["summary"] == "not a probability measure; bound 0.70710678");
  CHECK(report["distributions"][0]["kappa_bound"]["tol"] == 1e-12);
  CHECK(report["distributions"][0]["probability"] == false);

  const auto csv = invoke({"check-theta", "--config", path, "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("t,f0,f1\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 402);
}

TEST_CASE("verify-eq1 and classify") {
  const auto swap = write_file("swap.json", kSwap);
  auto r = invoke({"verify-eq1", "--config", swap});
  CHECK(r.code == 0);
  auto report = json::parse(r.out);
  CHECK(report["eq1_residual"]["value"].get<double>() < 1e-12);
  CHECK(report["eq1_residual"]["tol"] == 1e-9);
  CHECK(report["identically_distributed"] == true);

  const auto csv = invoke({"verify-eq1", "--config", swap, "--format", "csv"});
  CHECK(csv.out.rfind("s1,s2,l1,l2,lhs_re,lhs_im,rhs_re,rhs_im,abs_diff\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 1 + 101 * 101 * 4);

  const auto perturbed = write_file("perturbed.json", kPerturbed);
  r = invoke({"verify-eq1", "--config", perturbed});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["eq1_residual"]["value"].get<double>() > 1e-2);

  r = invoke({"classify", "--config", perturbed});
  CHECK(r.code == 2);
  CHECK(r.err.find("precondition") != std::string::npos);

  r = invoke({"classify", "--config", swap});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["labels"] == json({"NoGuarantee", "NoGuarantee"}));
}

TEST_CASE("ds and heyde builders") {
  const auto ds = write_file("ds.json", kDs);
  auto r = invoke({"ds", "--config", ds});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["labels"] == json({"GammaX", "GammaX", "GammaX", "GammaX"}));

  const auto heyde = write_file("heyde.json", R"({
    "distributions": [
      {"sigma": 1, "sigma_p": 0.5, "kappa": 0.5},
      {"sigma": 0.5, "sigma_p": 0.25, "kappa": 0.6}
    ],
    "coefficients": {"a": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}],
                     "b": [{"re": 1, "disc": 1}, {"re": -2, "disc": 1}]}
  })");
  r = invoke({"heyde", "--config", heyde});
  CHECK(r.code == 0);
  const auto report = json::parse(r.out);
  CHECK(report["labels"] == json({"ThetaX", "ThetaX"}));
  CHECK(report["built_problem"]["coefficients"]["d"][1]["re"] == 2.0);
}

TEST_CASE("fd-verify and simulate") {
  const auto path = write_file("fd.json", R"({
    "distributions": [
      {"sigma": 1, "beta": 0.3, "sigma_p": 0.5, "beta_p": 0.1, "kappa": 0.5},
      {"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.5}
    ],
    "coefficients": {
      "a": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}],
      "b": [{"re": 2, "disc": 1}, {"re": -3, "disc": 1}],
      "c": [{"re": 2, "disc": 1}, {"re": -3, "disc": 1}],
      "d": [{"re": 1, "disc": 1}, {"re": 1, "disc": 1}]
    }
  })");
  auto r = invoke({"fd-verify", "--config", path});
  CHECK(r.code == 0);
  auto report = json::parse(r.out);
  CHECK(report["passed"] == true);
  CHECK(report["psi_degree"] == 2);
  CHECK(report["schedule"]["order"] == 3);

  const auto no_sym = write_file("fd_nosym.json", R"({
    "distributions": [{"sigma": 1, "beta": 0.3, "sigma_p": 0.5, "beta_p": 0.1, "kappa": 0.5}],
    "coefficients": {"a": [{"re": 1, "disc": 1}], "b": [{"re": 0, "disc": 0}],
                     "c": [{"re": 1, "disc": 1}], "d": [{"re": 0, "disc": 0}]},
    "fd": {"symmetrize": false}
  })");
  CHECK(invoke({"fd-verify", "--config", no_sym}).code == 2);

  const auto swap = write_file("swap_sim.json", kSwap);
  r = invoke({"simulate", "--config", swap, "--seed", "5"});
  CHECK(r.code == 0);
  report = json::parse(r.out);
  CHECK(report["seed"] == 5);
  CHECK(report["p_value"]["tol"] == 0.01);
  const auto again = json::parse(invoke({"simulate", "--config", swap, "--seed", "5"}).out);
  CHECK(again["p_value"] == report["p_value"]);
}

TEST_CASE("z2 summaries") {
  auto r = invoke({"z2", "--mode", "proposition", "--n", "2"});
  CHECK(r.code == 0);
  const auto report = json::parse(r.out);
  CHECK(report["summary"] == "0 violations");
  CHECK(report["violations"] == 0);

  const auto out = std::string(RZ2_TEST_TMPDIR) + "/z2.json";
  r = invoke({"z2", "--mode", "counterexample", "--n", "2", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("witnesses") != std::string::npos);
  CHECK(json::parse(read_file(out))["all_have_vanishing_component"] == true);

  const auto bad = write_file("z2bad.json", R"({"z2": {"q_grid": ["0", "1/2"]}})");
  CHECK(invoke({"z2", "--config", bad, "--mode", "proposition"}).code == 1);
}

TEST_CASE("validation errors carry line numbers") {
  const auto path = write_file("bad.json", "{\n  \"distributions\": [\n    {\"sigma\": -1, \"sigma_p\": 0.5, \"kappa\": 0.5}\n  ]\n}\n");
  auto r = invoke({"check-theta", "--config", path});
  CHECK(r.code == 1);
  CHECK(r.err.find(path + ":3:") != std::string::npos);
  CHECK(r.err.find("/distributions/0/sigma") != std::string::npos);

  const auto unknown = write_file("unknown.json", "{\n  \"grid\": {\"s_max\": 5},\n  \"extra\": 1\n}\n");
  r = invoke({"verify-eq1", "--config", unknown});
  CHECK(r.code == 1);
  CHECK(r.err.find(unknown + ":3:") != std::string::npos);

  const auto broken = write_file("broken.json", "{\n  \"grid\": {\n    \"s_max\": ,\n  }\n}\n");
  r = invoke({"verify-eq1", "--config", broken});
  CHECK(r.code == 1);
  CHECK(r.err.find(broken + ":3:") != std::string::npos);

  const auto short_c = write_file("short.json", R"({
  "distributions": [{"sigma": 1, "sigma_p": 0.5, "kappa": 0.5}],
  "coefficients": {"a": [{"re": 1, "disc": 1}], "b": [{"re": 1, "disc": 1}],
                   "c": [], "d": [{"re": 1, "disc": 1}]}
})");
  CHECK(invoke({"verify-eq1", "--config", short_c}).code == 1);

  CHECK(invoke({"verify-eq1"}).code == 1);
  CHECK(invoke({"bogus"}).code == 1);
  CHECK(invoke({"verify-eq1", "--config", "/nonexistent/x.json"}).code == 1);
  CHECK(invoke({"verify-eq1", "--config", path, "--format", "xml"}).code == 1);
}

TEST_CASE("reports round-trip as configs") {
  const auto swap = write_file("rt_swap.json", kSwap);
  const auto out1 = std::string(RZ2_TEST_TMPDIR) + "/rt1.json";
  auto r = invoke({"classify", "--config", swap, "--out", out1});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("labels:", 0) == 0);

  const auto out2 = std::string(RZ2_TEST_TMPDIR) + "/rt2.json";
  r = invoke({"classify", "--config", out1, "--out", out2});
  CHECK(r.code == 0);
  const auto a = json::parse(read_file(out1));
  const auto b = json::parse(read_file(out2));
  CHECK(a["labels"] == b["labels"]);
  CHECK(a["config"] == b["config"]);
  CHECK(a["eq1_residual"] == b["eq1_residual"]);

  const auto bad = write_file("rt_bad.json", R"({"command": "classify", "config": {
  "grid": {"s_steps": 1}
}})");
  r = invoke({"verify-eq1", "--config", bad});
  CHECK(r.code == 1);
  CHECK(r.err.find(bad + ":2:") != std::string::npos);
}
