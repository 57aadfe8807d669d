#include <doctest.h>
#include <json.hpp>

#include <garchmom/cli.hpp>
#include <garchmom/csv.hpp>
#include <garchmom/garch.hpp>
#include <garchmom/mixture.hpp>
#include <garchmom/simulate.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace garchmom;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("garchmom_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

const std::vector<std::string> kFixtureCommand{
    "simulate", "--alpha0", "1e-5", "--alpha1", "0.1", "--beta1", "0.85",
    "--dist",   "preset:red", "--n", "500", "--seed", "20240521"};

}  // namespace

TEST_CASE("the documented seed regenerates the fixture") {
  const auto r = run(kFixtureCommand);
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out == slurp(fs::path(GARCHMOM_TEST_DATA) / "sim_fixture.csv"));
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"region", "--eta6", "41.7"}).code == cli::kUsage);
  CHECK(run({"region", "--eta4", "5"}).code == cli::kUsage);
  CHECK(run({"region", "--normal", "--eta4", "5", "--eta6", "41.7"}).code == cli::kUsage);
  CHECK(run({"region", "--dist", "preset:purple"}).code == cli::kUsage);
  CHECK(run({"fit", "--moments", "1e-4,4,30", "--mixture"}).code == cli::kUsage);
  CHECK(run({"fit", "--moments", "1e-4,4"}).code == cli::kUsage);
  CHECK(run({"fit"}).code == cli::kUsage);
  CHECK(run({"simulate", "--alpha0", "1e-5", "--alpha1", "0.1", "--beta1", "0.8"}).code ==
        cli::kUsage);
  CHECK(run({"simulate", "--alpha0", "-1", "--alpha1", "0.1", "--beta1", "0.8", "--n", "10"})
            .code == cli::kUsage);
  const auto help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("rolling") != std::string::npos);
}

TEST_CASE("input errors") {
  TempDir tmp;
  CHECK(run({"moments", tmp.file("missing.csv")}).code == cli::kIo);
  {
    std::ofstream(tmp.file("bad.csv")) << "date,close\n2020-01-01,1\n2020-01-02,x\n";
  }
  const auto bad = run({"moments", tmp.file("bad.csv")});
  CHECK(bad.code == cli::kIo);
  CHECK(bad.err.find("line 3") != std::string::npos);
  {
    std::ofstream f(tmp.file("flat.csv"));
    f << "date,close\n";
    for (int d = 1; d <= 20; ++d) f << "2020-01-" << (d < 10 ? "0" : "") << d << ",50\n";
  }
  const auto flat = run({"moments", tmp.file("flat.csv")});
  CHECK(flat.code == cli::kNumerical);
  CHECK(flat.err.find("variance") != std::string::npos);
}

TEST_CASE("model errors map onto distinct exit codes") {
  CHECK(run({"region", "--eta4", "2.5", "--eta6", "20"}).code == cli::kInfeasible);
  CHECK(run({"region", "--eta4", "12", "--eta6", "240"}).code == cli::kInfeasible);
  CHECK(run({"region", "--eta4", "12", "--eta6", "240", "--allow-boundary", "--resolution",
             "8"})
            .code == cli::kOk);
  CHECK(run({"fit", "--moments", "1e-4,4.2,20"}).code == cli::kOutOfRegion);
  CHECK(run({"fit", "--moments", "1e-4,2.5,20"}).code == cli::kInfeasible);
  const auto boom = run({"simulate", "--alpha0", "1e-5", "--alpha1", "0.9", "--beta1", "0.9",
                         "--n", "100"});
  CHECK(boom.code == cli::kNumerical);
  CHECK(boom.err.find("step") != std::string::npos);
}

TEST_CASE("region queries") {
  const auto r = run({"region", "--normal", "--query", "5.473,2981", "--query", "12.18,2981"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out == "gamma4,gamma6,membership\n5.473,2981,inside\n12.18,2981,outside\n");

  const auto j = json::parse(run({"region", "--eta4", "5", "--eta6", "41.7", "--resolution",
                                  "16", "--json"})
                                 .out);
  CHECK(j["results"]["boundary"][0]["gamma4"].get<double>() == doctest::Approx(5.0));
  CHECK(j["results"]["boundary"][0]["gamma6_min"].get<double>() == doctest::Approx(41.7));
  CHECK(run({"simulate", "--alpha0", "1e-5", "--alpha1", "0.1", "--beta1", "0.8", "--n", "50",
             "--dist", "mixture", "--eta4", "7", "--eta6", "81.7"})
            .code == cli::kOk);
}

TEST_CASE("simulate then moments reproduces the Monte Carlo estimate") {
  TempDir tmp;
  const std::vector<std::string> base{"simulate", "--alpha0", "2e-5", "--alpha1", "0.08",
                                      "--beta1", "0.9", "--n", "20000", "--seed", "9"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  REQUIRE(run(with({"--returns", "--out", tmp.file("r.csv")})).code == cli::kOk);
  const auto moments = run({"moments", tmp.file("r.csv"), "--json"});
  REQUIRE(moments.code == cli::kOk);
  const auto m = json::parse(moments.out)["results"];

  SimConfig c;
  c.params = {2e-5, 0.08, 0.9};
  c.n_steps = 20000;
  c.seed = 9;
  const auto e = mc_moment_estimate(c);
  CHECK(m["sigma_sq"].get<double>() == e.summary.variance);
  CHECK(m["gamma4"].get<double>() == e.summary.gamma4);
  CHECK(m["gamma6"].get<double>() == e.summary.gamma6);

  const auto est = json::parse(run(with({"--estimate", "--json"})).out);
  CHECK(est["results"]["estimates"][1]["value"].get<double>() == e.summary.gamma4);

  // Prices and returns files carry the same dates.
  REQUIRE(run(with({"--out", tmp.file("p.csv")})).code == cli::kOk);
  const auto from_prices = returns_of(read_series_csv(tmp.file("p.csv")));
  const auto from_returns = returns_of(read_series_csv(tmp.file("r.csv")));
  CHECK(from_prices.dates() == from_returns.dates());
  CHECK(from_prices.values()[0] == doctest::Approx(from_returns.values()[0]).epsilon(1e-9));
}

TEST_CASE("fit recovers forward-generated parameters end to end") {
  const auto red = ConditionalDistribution::mixture(MixtureParams::from_eta(5.0, 41.7));
  struct Case {
    GarchParams g;
    ConditionalDistribution dist;
    std::vector<std::string> flags;
  };
  const std::vector<Case> cases{
      {{1e-5, 0.1, 0.8}, ConditionalDistribution::normal(), {}},
      {{3e-6, 0.05, 0.9}, ConditionalDistribution::normal(), {"--normal"}},
      {{2e-5, 0.08, 0.6}, red, {"--dist", "preset:red"}},
  };
  for (const auto& c : cases) {
    const auto mm = model_moments(c.g, c.dist, 3);
    std::vector<std::string> args{"fit", "--moments",
                                  format_double(mm.variance) + "," + format_double(mm.gammas[0]) +
                                      "," + format_double(mm.gammas[1]),
                                  "--method", "both", "--json"};
    args.insert(args.end(), c.flags.begin(), c.flags.end());
    const auto r = run(args);
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["results"]["agreement"]["agree"].get<bool>());
    for (const auto& f : j["results"]["fits"]) {
      bool found = false;
      for (const auto& cand : f["candidates"]) {
        found = found ||
                (std::abs(cand["alpha0"].get<double>() / c.g.alpha0 - 1) < 1e-5 &&
                 std::abs(cand["alpha1"].get<double>() / c.g.alpha1 - 1) < 1e-5 &&
                 std::abs(cand["beta1"].get<double>() / c.g.beta1 - 1) < 1e-5);
      }
      CHECK(found);
    }
  }
}

TEST_CASE("csv fit output lists every root") {
  const auto r = run({"fit", "--moments", "2e-4,4.2,60", "--method", "both"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.rfind("method,root,roots,alpha0,alpha1,beta1,", 0) == 0);
  CHECK(r.out.find("\ntrajectory,0,") != std::string::npos);
  CHECK(r.out.find("\nmoment_match,0,") != std::string::npos);
  CHECK(r.err.find("cross-method max relative difference") != std::string::npos);
}

TEST_CASE("defaults and envelopes") {
  TempDir tmp;
  const std::string fixture = (fs::path(GARCHMOM_TEST_DATA) / "sim_fixture.csv").string();
  const auto win = json::parse(run({"moments", fixture, "--window", "--json"}).out);
  CHECK(win["inputs"]["window"] == 252);
  CHECK(win["results"]["windows"].size() == 500 - 252 + 1);
  const auto roll = json::parse(run({"rolling", fixture, "--json", "--dist", "preset:red"}).out);
  CHECK(roll["inputs"]["window"] == 126);
  CHECK(roll["inputs"]["step"] == 1);
  CHECK(roll["results"]["windows"].size() == 500 - 126 + 1);
  for (const auto& j : {win, roll}) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"command", "inputs", "results", "warnings"});
  }
  const auto trunc = run({"moments", fixture, "--truncate"});
  CHECK(trunc.code == cli::kOk);
  CHECK(trunc.err.find("warning:") != std::string::npos);  // 1%..5% prefixes are too short
  CHECK(trunc.out.rfind("percent,length,sigma_sq,gamma4,gamma6\n", 0) == 0);
}

TEST_CASE("outputs are identical across runs and thread counts") {
  const std::string fixture = (fs::path(GARCHMOM_TEST_DATA) / "sim_fixture.csv").string();
  const std::vector<std::vector<std::string>> commands{
      kFixtureCommand,
      {"moments", fixture, "--window", "60", "--order", "8"},
      {"region", "--dist", "preset:blue", "--resolution", "24", "--query", "8,120"},
      {"fit", fixture, "--dist", "preset:red", "--method", "both", "--json"},
      {"rolling", fixture, "--window", "100", "--step", "2", "--json"},
  };
  for (const auto& c : commands) {
    auto one = c, many = c;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "6"});
    const auto a = run(one), b = run(one), d = run(many);
    CHECK(a.out == b.out);
    CHECK(a.out == d.out);
    CHECK(a.code == d.code);
  }
}
