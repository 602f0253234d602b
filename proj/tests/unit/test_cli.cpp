#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lorentzk/serialize.hpp"

using namespace lorentzk;

namespace {

const std::string src = LORENTZK_SOURCE_DIR;
const std::string indicator4 = src + "/fixtures/indicator4.json";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"lorentz-k"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lorentzk-cli-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("norm prints the S norm of an indicator") {
  const auto r = run({"norm", "--flavor", "s", "--p", "2", "--weight", "power:0", "--fn", indicator4});
  CHECK(r.code == cli::ok);
  CHECK(r.out == "2.0\n");
  const auto lam = run({"norm", "--flavor", "lambda", "--p", "2", "--weight", "power:0", "--fn", indicator4,
                        "--window", "head", "--t", "1"});
  CHECK(lam.code == cli::ok);
  CHECK(lam.out == "1.0\n");
}

TEST_CASE("JSON output is pinned by golden files") {
  const auto norm = run({"--format", "json", "norm", "--flavor", "s", "--p", "2", "--weight", "power:0", "--fn", indicator4});
  CHECK(norm.out == slurp(src + "/tests/golden/norm_s_indicator4.json"));
  CHECK(to_double(Json::parse(norm.out).at("norm").at("value")) == doctest::Approx(2.0));

  const auto cw = run({"--format", "json", "check-weights", "--p", "2", "--weight", "power:0.5"});
  CHECK(cw.code == cli::ok);
  CHECK(cw.out == slurp(src + "/tests/golden/check_weights_power_half.json"));
  const Json j = Json::parse(cw.out);
  CHECK(j.at("conditions").at(0).at("witness_constant").get<double>() == doctest::Approx(3.0));
  CHECK(j.at("conditions").at(1).at("witness_constant").get<double>() == doctest::Approx(1.0 / 3.0));

  const auto k = run({"--format", "json", "k", "--fn", indicator4, "--t", "4", "--method", "explicit"});
  CHECK(k.code == cli::ok);
  CHECK(k.out == slurp(src + "/tests/golden/k_explicit_indicator4.json"));
  CHECK(Json::parse(k.out).at("explicit").at("value").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("exit codes") {
  CHECK(run({"check-weights", "--p", "2", "--weight", "power:1.5"}).code == cli::ok);
  CHECK(run({"--strict", "check-weights", "--p", "2", "--weight", "power:1.5"}).code == cli::hypothesis_violation);
  CHECK(run({"norm", "--p", "2"}).code == cli::error);
  const auto bad = run({"norm", "--flavor", "s", "--p", "2", "--weight", "bogus:1", "--fn", indicator4});
  CHECK(bad.code == cli::error);
  CHECK(bad.err.find("invalid weight") != std::string::npos);
  CHECK(run({"norm", "--flavor", "s", "--p", "2", "--weight", "power:0", "--fn", "/nonexistent.json"}).code == cli::error);
  CHECK(run({"frobnicate"}).code == cli::error);
}

TEST_CASE("weight specs") {
  CHECK(cli::parse_weight("power:0.5") == Weight::power(0.5));
  CHECK(cli::parse_weight("powerlog:1:-2") == Weight::power_log(1.0, -2.0));
  CHECK(cli::parse_weight("file:" + indicator4) == Weight::tabulated(StepFunction::indicator(0, 4)));
  CHECK_THROWS(cli::parse_weight("power:"));
  CHECK_THROWS(cli::parse_weight("power:x"));
  CHECK_THROWS(cli::parse_weight("powerlog:1"));
}

TEST_CASE("number formatting") {
  CHECK(cli::format_number(2.0) == "2.0");
  CHECK(cli::format_number(0.1) == "0.1");
  CHECK(cli::format_number(1e-20) == "1e-20");
  CHECK(cli::format_number(INFINITY) == "inf");
  CHECK(std::stod(cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("config files") {
  const auto cfg = scratch("norm.json");
  {
    std::ofstream(cfg) << R"({"flavor": "gamma", "p": 2, "weight": "power:0", "fn": ")" << indicator4 << "\"}";
  }
  const auto r = run({"norm", "--config", cfg.string()});
  CHECK(r.code == cli::ok);
  CHECK(std::stod(r.out) == doctest::Approx(std::sqrt(8.0)));
  // Flags win over the file.
  CHECK(run({"norm", "--config", cfg.string(), "--flavor", "s"}).out == "2.0\n");

  const auto bad = scratch("bad.json");
  { std::ofstream(bad) << R"({"flavour": "s"})"; }
  const auto rb = run({"norm", "--config", bad.string()});
  CHECK(rb.code == cli::error);
  CHECK(rb.err.find("flavour") != std::string::npos);
}

TEST_CASE("verify writes reports and is deterministic") {
  const auto a = scratch("a.csv"), b = scratch("b.csv"), js = scratch("a.json");
  const auto r1 = run({"verify", "--suite", "cor1", "--p", "2", "--alpha", "1", "--seed", "7", "--size", "2",
                       "--t-count", "3", "--cells", "16", "--no-refine", "--csv", a.string(), "--out", js.string()});
  CHECK(r1.code == cli::ok);
  const auto r2 = run({"verify", "--suite", "cor1", "--p", "2", "--alpha", "1", "--seed", "7", "--size", "2",
                       "--t-count", "3", "--cells", "16", "--no-refine", "--csv", b.string()});
  CHECK(r2.code == cli::ok);
  const std::string ca = slurp(a.string());
  CHECK(ca.rfind("theorem,f_id,t,lhs,rhs,ratio,flags\n", 0) == 0);
  CHECK(ca == slurp(b.string()));
  const Json j = Json::parse(slurp(js.string()));
  CHECK(j.at("theorem") == "Cor1");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("records").size() == 6);

  CHECK(run({"verify", "--suite", "nope"}).code == cli::error);
}
