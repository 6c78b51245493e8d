#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "cuspsum/cli.hpp"
#include "cuspsum/coefficient_cache.hpp"

using namespace cuspsum;
using namespace cuspsum::cli;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cuspsum_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    ::setenv("CUSPSUM_CACHE_DIR", d.c_str(), 1);
    return d;
  }();
  return dir;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  work_dir();
  args.insert(args.begin(), "cuspsum");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary through the shell and returns its exit status.
int run_binary(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = "CUSPSUM_CACHE_DIR='" + work_dir().string() + "' '" + CUSPSUM_BIN + "' " + args + " > '" +
                          stdout_file.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

const char* const kHeader = "X,H,y,count,raw_mean_sq,normalized,smoothed,pass_flag";

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("") == std::vector<double>{});
  CHECK(parse_grid("  ") == std::vector<double>{});
  CHECK(parse_grid("100, 1e3,2000") == std::vector<double>{100, 1000, 2000});
  const auto g = parse_grid("logspace:1e2,1e6,5");
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 100);
  CHECK(g.back() == 1e6);
  CHECK(g[2] == doctest::Approx(1e4).epsilon(1e-14));
  CHECK(parse_grid("logspace:10,10,1") == std::vector<double>{10});
  CHECK_THROWS_AS(parse_grid("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_grid("abc"), UsageError);
  CHECK_THROWS_AS(parse_grid("logspace:1,2"), UsageError);
  CHECK_THROWS_AS(parse_grid("logspace:0,10,3"), UsageError);
}

TEST_CASE("count parsing") {
  CHECK(parse_count("1e6") == 1000000);
  CHECK(parse_count("10000") == 10000);
  CHECK_THROWS_AS(parse_count("1.5"), UsageError);
  CHECK_THROWS_AS(parse_count("-3"), UsageError);
}

TEST_CASE("config normalization and hashing") {
  ExperimentConfig c;
  c.X_grid = {300, 100, 200, 100};
  normalize(c);
  CHECK(c.X_grid == std::vector<double>{100, 200, 300});
  const auto h = config_hash(c);
  CHECK(config_hash(c) == h);
  ExperimentConfig d = c;
  d.N = 20000;
  CHECK(config_hash(d) != h);

  ExperimentConfig bad;
  bad.mode = WindowMode::fixed_delta;
  bad.delta = 0.5;
  CHECK_THROWS_AS(normalize(bad), UsageError);
  bad.delta = 0.7;
  CHECK_THROWS_AS(normalize(bad), UsageError);
  bad.delta = 2.0 / 3.0;
  CHECK_NOTHROW(normalize(bad));
  ExperimentConfig weight;
  weight.weight = 13;
  CHECK_THROWS_AS(normalize(weight), UnsupportedWeight);
  CHECK(parse_mode("fixed_y") == WindowMode::fixed_y);
  CHECK_THROWS_AS(parse_mode("nope"), UsageError);
}

TEST_CASE("default cache path honours the environment") {
  work_dir();
  CHECK(default_cache_path(12, 100) == work_dir() / "cuspsum_k12_N100.csp");
}

TEST_CASE("gen writes a cache and then hits it") {
  const auto path = work_dir() / "gen12.csp";
  auto first = run_args({"gen", "12", "1e4", "--cache", path.string()});
  CHECK(first.code == kExitPass);
  const auto table = cache::read_table(path);
  CHECK(table[1] == 1);
  CHECK(table[2] == -24);
  CHECK(table[3] == 252);
  CHECK(table.max_index() == 10000);
  const auto bytes = slurp(path);
  const auto time = fs::last_write_time(path);

  auto second = run_args({"gen", "--weight", "12", "--n", "10000", "--cache", path.string()});
  CHECK(second.code == kExitPass);
  CHECK(second.out.find("cache hit") != std::string::npos);
  CHECK(slurp(path) == bytes);
  CHECK(fs::last_write_time(path) == time);

  CHECK(run_args({"gen", "13", "100"}).code == kExitUsage);
}

TEST_CASE("windows in theorem mode") {
  auto r = run_args({"windows", "--n", "1016000", "--grid", "1e6"});
  REQUIRE(r.code == kExitPass);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].rfind("# cuspsum 1.0.0 weight=12 N=1016000", 0) == 0);
  CHECK(ls[0].find("config=0x") != std::string::npos);
  CHECK(ls[1] == kHeader);
  const auto f = fields(ls[2]);
  REQUIRE(f.size() == 8);
  CHECK(std::stod(f[1]) == doctest::Approx(15490.34735647617604018).epsilon(1e-14));
  CHECK(std::stod(f[5]) > 0);
  CHECK(f[7] == "1");
}

TEST_CASE("windows in fixed_delta mode") {
  auto r = run_args({"windows", "--n", "1e4", "--mode", "fixed_delta", "--delta", "0.6666666666666666", "--grid",
                     "logspace:100,5000,5"});
  REQUIRE(r.code == kExitPass);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 7);
  double last_X = 0;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    REQUIRE(f.size() == 8);
    const double X = std::stod(f[0]);
    CHECK(X > last_X);
    last_X = X;
    const double normalized = std::stod(f[5]);
    CHECK(std::isfinite(normalized));
    CHECK(normalized > 0);
  }
  CHECK(run_args({"windows", "--mode", "fixed_delta", "--delta", "0.7", "--grid", "100"}).code == kExitUsage);
}

TEST_CASE("pass flag is NA below y = 2") {
  auto r = run_args({"windows", "--n", "1e4", "--mode", "fixed_y", "--y", "1.5", "--grid", "100,200"});
  REQUIRE(r.code == kExitPass);
  for (std::size_t i = 2; i < 4; ++i) CHECK(fields(lines(r.out)[i]).back() == "NA");
}

TEST_CASE("empty grid gives a header-only CSV") {
  auto r = run_args({"windows", "--n", "1e4", "--grid", ""});
  CHECK(r.code == kExitPass);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[1] == kHeader);
}

TEST_CASE("windows out of range is a usage error") {
  CHECK(run_args({"windows", "--n", "1e4", "--grid", "9999"}).code == kExitUsage);
}

TEST_CASE("long-interval means") {
  auto r = run_args({"means", "--n", "1e4", "--grid", "3,1000"});
  REQUIRE(r.code == kExitPass);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[1] == "X,count,long_interval_mean");
  CHECK(std::stod(fields(ls[2])[2]) == doctest::Approx(0.0575469734349507591093).epsilon(1e-14));
}

TEST_CASE("config file with flags winning") {
  const auto ini = work_dir() / "exp.ini";
  std::ofstream(ini) << "# experiment\nweight=12\nn=10000\ngrid=100,200\nmode=fixed_y\ny=3\n";
  auto from_file = run_args({"windows", "--config", ini.string()});
  REQUIRE(from_file.code == kExitPass);
  CHECK(lines(from_file.out).size() == 4);
  CHECK(std::stod(fields(lines(from_file.out)[2])[2]) == 3);
  auto overridden = run_args({"windows", "--config", ini.string(), "--y", "20"});
  REQUIRE(overridden.code == kExitPass);
  CHECK(std::stod(fields(lines(overridden.out)[2])[2]) == 20);
  CHECK(run_args({"windows", "--config", (work_dir() / "missing.ini").string()}).code == kExitUsage);
}

TEST_CASE("verify kernel report schema") {
  auto r = run_args({"verify", "kernel"});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["suite"] == "kernel");
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].size() == 9);
  for (const auto& c : j["checks"]) {
    for (const char* key : {"check", "params", "lhs", "rhs", "rel_gap", "certified_error", "pass"}) {
      CHECK(c.contains(key));
    }
    CHECK(c["pass"] == true);
    CHECK(c["rel_gap"].get<double>() <= 1e-10);
  }
}

TEST_CASE("verify transform and hecke") {
  auto t = run_args({"verify", "transform"});
  CHECK(t.code == kExitPass);
  CHECK(nlohmann::json::parse(t.out)["checks"].size() == 36);
  auto h = run_args({"verify", "hecke", "--n", "1e4"});
  CHECK(h.code == kExitPass);
  const auto j = nlohmann::json::parse(h.out);
  CHECK(j["checks"][0]["lhs"] == 0);
  CHECK(j["checks"][0]["params"]["bound"] == 10000);
}

TEST_CASE("verify decomposition negative control") {
  auto r = run_args({"verify", "decomposition", "--n", "1000"});
  CHECK(r.code == kExitCheckFailure);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == false);
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][1]["lhs"].is_array());
  CHECK(j["checks"][0]["certified_error"].get<double>() > 1e-6);
}

TEST_CASE("binary exit codes") {
  const auto out = work_dir() / "stdout.txt";
  CHECK(run_binary("verify kernel", out) == 0);
  CHECK(run_binary("verify decomposition --n 1000", out) == 1);
  CHECK(run_binary("--no-such-flag", out) == 2);
  CHECK(run_binary("verify bogus", out) == 2);
  CHECK(run_binary("windows --grid 100 --out /nonexistent/dir/out.csv", out) == 3);
  CHECK(run_binary("--help", out) == 0);
}

TEST_CASE("CSV output is byte-identical across runs and thread counts") {
  const auto a = work_dir() / "a.csv";
  const auto b = work_dir() / "b.csv";
  const std::string args = "windows --n 1e4 --grid logspace:50,7000,12 --mode fixed_y --y 4";
  CHECK(run_binary(args + " --threads 1 --out '" + a.string() + "'", work_dir() / "o1") == 0);
  CHECK(run_binary(args + " --threads 4 --out '" + b.string() + "'", work_dir() / "o2") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 100);
}

TEST_CASE("cleanup") {
  fs::remove_all(work_dir());
}
