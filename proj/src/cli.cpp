#include "cuspsum/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cuspsum/check_report.hpp"
#include "cuspsum/coefficient_cache.hpp"
#include "cuspsum/decomposition.hpp"
#include "cuspsum/mellin.hpp"
#include "cuspsum/parallel.hpp"

namespace cuspsum::cli {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + ": not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError(std::string(what) + ": not a number: '" + text + "'");
  return v;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

void write_text(const std::optional<std::filesystem::path>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path->string() + " for writing");
  f << text;
  if (!f) throw IoError("short write to " + path->string());
}

struct Row {
  sums::WindowStat stat;
  double y = 0;
  double smoothed = 0;
  std::string pass_flag;
};

// Fixed grids for the verify suites.
constexpr double kKernelX[] = {2, 10, 100};
constexpr double kKernelY[] = {1, 5, 20};
constexpr int kTransformPairs[][2] = {{0, 0}, {1, 0}, {1, 1}, {2, 1}};

}  // namespace

WindowMode parse_mode(const std::string& text) {
  if (text == "theorem") return WindowMode::theorem;
  if (text == "fixed_delta") return WindowMode::fixed_delta;
  if (text == "fixed_y") return WindowMode::fixed_y;
  throw UsageError("unknown window mode '" + text + "' (theorem, fixed_delta, fixed_y)");
}

std::string to_string(WindowMode mode) {
  switch (mode) {
    case WindowMode::theorem: return "theorem";
    case WindowMode::fixed_delta: return "fixed_delta";
    case WindowMode::fixed_y: return "fixed_y";
  }
  return "?";
}

std::vector<double> parse_grid(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) return {};
  constexpr std::string_view kLog = "logspace:";
  if (text.starts_with(kLog)) {
    const auto parts = split(text.substr(kLog.size()), ',');
    if (parts.size() != 3) throw UsageError("grid: logspace needs a,b,count");
    const double a = parse_real(parts[0], "grid");
    const double b = parse_real(parts[1], "grid");
    const std::size_t count = parse_count(parts[2]);
    if (!(a > 0) || !(b > 0)) throw UsageError("grid: logspace endpoints must be positive");
    if (count == 0) return {};
    if (count == 1) {
      if (a != b) throw UsageError("grid: logspace with one point needs a = b");
      return {a};
    }
    std::vector<double> grid(count);
    const double la = std::log(a);
    const double lb = std::log(b);
    for (std::size_t i = 0; i < count; ++i) {
      grid[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    grid.front() = a;
    grid.back() = b;
    return grid;
  }
  std::vector<double> grid;
  for (const auto& part : split(text, ',')) grid.push_back(parse_real(part, "grid"));
  return grid;
}

std::size_t parse_count(const std::string& raw) {
  const std::string text = trim(raw);
  const double v = parse_real(text, "count");
  if (v < 0 || v != std::floor(v) || v > 9.0e15) throw UsageError("not a nonnegative integer: '" + text + "'");
  return static_cast<std::size_t>(v);
}

void normalize(ExperimentConfig& c) {
  if (!forms::is_supported_weight(c.weight)) {
    throw UnsupportedWeight("weight " + std::to_string(c.weight) + " is not supported (12, 16, 18, 20, 22, 26)");
  }
  for (double X : c.X_grid) {
    if (!std::isfinite(X) || !(X >= 1)) throw UsageError("grid: X must be >= 1, got " + fmt(X));
  }
  std::sort(c.X_grid.begin(), c.X_grid.end());
  c.X_grid.erase(std::unique(c.X_grid.begin(), c.X_grid.end()), c.X_grid.end());
  if (c.mode == WindowMode::fixed_delta && !(c.delta > 0.5 && c.delta <= 2.0 / 3.0 + 1e-15)) {
    throw UsageError("delta must lie in (1/2, 2/3]");
  }
  if (c.mode == WindowMode::fixed_y && !(c.y > 0 && std::isfinite(c.y))) throw UsageError("y must be positive");
  if (c.tolerance && !(*c.tolerance > 0)) throw UsageError("tolerance must be positive");
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::string s = "weight=" + std::to_string(c.weight) + ";N=" + std::to_string(c.N) + ";mode=" + to_string(c.mode);
  if (c.mode == WindowMode::fixed_delta) s += ";delta=" + fmt(c.delta);
  if (c.mode == WindowMode::fixed_y) s += ";y=" + fmt(c.y);
  s += ";grid=";
  for (double X : c.X_grid) s += fmt(X) + ",";
  if (c.tolerance) s += ";tolerance=" + fmt(*c.tolerance);
  return cache::fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::filesystem::path default_cache_path(int weight, std::size_t N) {
  std::filesystem::path dir = ".";
  if (const char* env = std::getenv("CUSPSUM_CACHE_DIR"); env != nullptr && *env != '\0') dir = env;
  return dir / ("cuspsum_k" + std::to_string(weight) + "_N" + std::to_string(N) + ".csp");
}

forms::EigenformTable load_or_generate(int weight, std::size_t N, const std::filesystem::path& path, bool* hit) {
  if (!forms::is_supported_weight(weight)) {
    throw UnsupportedWeight("weight " + std::to_string(weight) + " is not supported (12, 16, 18, 20, 22, 26)");
  }
  if (cache::is_valid_cache(path, weight, N)) {
    if (hit) *hit = true;
    return cache::read_table(path);
  }
  if (hit) *hit = false;
  forms::EigenformTable table = forms::eigenform(weight, N);
  cache::write_table(path, table);
  return table;
}

double window_half_width(const ExperimentConfig& c, double X) {
  switch (c.mode) {
    case WindowMode::theorem: return sums::theorem_window(X);
    case WindowMode::fixed_delta: return std::pow(X, c.delta);
    case WindowMode::fixed_y: return X / c.y;
  }
  return 0;
}

std::string windows_csv(const ExperimentConfig& c, const sums::PartialSumTable& p) {
  std::vector<Row> rows(c.X_grid.size());
  parallel_for(c.X_grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double X = c.X_grid[i];
      const double H = window_half_width(c, X);
      Row& r = rows[i];
      r.stat = sums::window_mean(p, X, H);
      r.y = X / H;
      r.smoothed = sums::smoothed_second_moment(p, X, r.y).value;
      r.pass_flag = r.y >= 2 ? (sums::window_vs_smoothed(p, X, r.y).pass ? "1" : "0") : "NA";
    }
  });
  std::ostringstream out;
  char hash[24];
  std::snprintf(hash, sizeof hash, "0x%016llx", static_cast<unsigned long long>(config_hash(c)));
  out << "# cuspsum " << kVersion << " weight=" << c.weight << " N=" << c.N << " mode=" << to_string(c.mode)
      << " config=" << hash << "\n";
  out << "X,H,y,count,raw_mean_sq,normalized,smoothed,pass_flag\n";
  for (const Row& r : rows) {
    out << fmt(r.stat.X) << ',' << fmt(r.stat.H) << ',' << fmt(r.y) << ',' << r.stat.count << ','
        << fmt(r.stat.raw_mean_sq) << ',' << fmt(r.stat.normalized) << ',' << fmt(r.smoothed) << ',' << r.pass_flag
        << "\n";
  }
  return out.str();
}

std::string means_csv(const ExperimentConfig& c, const sums::PartialSumTable& p) {
  std::vector<double> values(c.X_grid.size());
  parallel_for(c.X_grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = sums::long_interval_mean(p, c.X_grid[i]);
  });
  std::ostringstream out;
  char hash[24];
  std::snprintf(hash, sizeof hash, "0x%016llx", static_cast<unsigned long long>(config_hash(c)));
  out << "# cuspsum " << kVersion << " weight=" << c.weight << " N=" << c.N << " config=" << hash << "\n";
  out << "X,count,long_interval_mean\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double X = c.X_grid[i];
    out << fmt(X) << ',' << static_cast<std::size_t>(std::floor(X)) << ',' << fmt(values[i]) << "\n";
  }
  return out.str();
}

namespace {

std::vector<CheckReport> kernel_suite(double tolerance) {
  std::vector<CheckReport> checks;
  for (double X : kKernelX) {
    for (double y : kKernelY) {
      const mellin::KernelParams p{X, y};
      mellin::LineIntegralSpec spec;
      spec.tolerance = tolerance;
      checks.push_back(kernel_report(p, mellin::kernel_line_integral(p, spec), tolerance));
    }
  }
  return checks;
}

std::vector<CheckReport> transform_suite(std::optional<double> tolerance) {
  std::vector<CheckReport> checks;
  for (const auto& ml : kTransformPairs) {
    for (double X : kKernelX) {
      for (double y : kKernelY) {
        checks.push_back(transform_report(
            mellin::derivative_transform_check(ml[0], ml[1], mellin::KernelParams{X, y}, {}, tolerance)));
      }
    }
  }
  return checks;
}

std::vector<CheckReport> decomposition_suite(const forms::EigenformTable& t, std::size_t N, double target) {
  const sums::PartialSumTable p = sums::partial_sums(t);
  mellin::QuadratureOptions quad;
  quad.target = target;
  std::vector<CheckReport> checks;
  for (const special::Complex s : {special::Complex(4, 0), special::Complex(4, 3)}) {
    checks.push_back(decomposition_report(mellin::decomposition_check(t, p, s, 0.5, N, quad), t.weight()));
  }
  return checks;
}

struct Options {
  int weight = 12;
  std::string n;
  std::string cache;
  std::vector<std::string> grid;  // a config file splits "a,b" into tokens
  std::string mode = "theorem";
  double delta = 2.0 / 3.0;
  double y = 10;
  std::string out;
  double tolerance = 0;
  unsigned threads = 0;
  std::string suite;
  std::vector<std::string> gen_args;
};

ExperimentConfig make_config(const Options& o, const CLI::App& app, std::size_t default_n) {
  ExperimentConfig c;
  c.weight = o.weight;
  c.N = o.n.empty() ? default_n : parse_count(o.n);
  std::string grid;
  for (const auto& part : o.grid) grid += (grid.empty() ? "" : ",") + part;
  c.X_grid = parse_grid(grid);
  c.mode = parse_mode(o.mode);
  c.delta = o.delta;
  c.y = o.y;
  if (!o.cache.empty()) c.cache = o.cache;
  if (!o.out.empty()) c.out = o.out;
  if (app.count("--tolerance") > 0) c.tolerance = o.tolerance;
  normalize(c);
  return c;
}

std::filesystem::path cache_path(const ExperimentConfig& c) {
  return c.cache ? *c.cache : default_cache_path(c.weight, c.N);
}

int cmd_gen(const ExperimentConfig& c, std::ostream& out) {
  const auto path = cache_path(c);
  bool hit = false;
  const auto table = load_or_generate(c.weight, c.N, path, &hit);
  out << (hit ? "cache hit: " : "wrote: ") << path.string() << " (weight " << table.weight() << ", N "
      << table.max_index() << ")\n";
  return kExitPass;
}

int cmd_windows(const ExperimentConfig& c, bool means, std::ostream& out) {
  const auto table = load_or_generate(c.weight, c.N, cache_path(c));
  const auto p = sums::partial_sums(table);
  write_text(c.out, means ? means_csv(c, p) : windows_csv(c, p), out);
  return kExitPass;
}

int cmd_verify(const std::string& suite, const ExperimentConfig& c, std::ostream& out) {
  std::vector<CheckReport> checks;
  if (suite == "kernel") {
    checks = kernel_suite(c.tolerance.value_or(1e-10));
  } else if (suite == "transform") {
    checks = transform_suite(c.tolerance);
  } else if (suite == "decomposition") {
    checks = decomposition_suite(load_or_generate(c.weight, c.N, cache_path(c)), c.N, c.tolerance.value_or(1e-6));
  } else if (suite == "hecke") {
    const auto table = load_or_generate(c.weight, c.N, cache_path(c));
    checks.push_back(hecke_check_report(forms::hecke_report(table, c.N), c.weight));
  } else {
    throw UsageError("unknown suite '" + suite + "' (kernel, transform, decomposition, hecke)");
  }
  const auto json = suite_json(suite, checks);
  write_text(c.out, json.dump(2) + "\n", out);
  return json["pass"].get<bool>() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cusp form partial sums, window statistics and Mellin identity checks", "cuspsum"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "Flat key=value file; command-line flags win");

  Options o;
  app.add_option("--weight", o.weight, "Cusp form weight (12, 16, 18, 20, 22, 26)");
  app.add_option("--n", o.n, "Table size N, e.g. 10000 or 1e6");
  app.add_option("--cache", o.cache, "Coefficient cache file");
  app.add_option("--grid", o.grid, "X values: 'a,b,c' or 'logspace:a,b,count'")->expected(1, 1 << 16);
  app.add_option("--mode", o.mode, "Window mode: theorem, fixed_delta, fixed_y");
  app.add_option("--delta", o.delta, "Window exponent for fixed_delta, in (1/2, 2/3]");
  app.add_option("--y", o.y, "X/H for fixed_y");
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_option("--tolerance", o.tolerance, "Override the suite tolerance");
  app.add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)");

  auto* gen = app.add_subcommand("gen", "Generate and cache an eigenform table")->fallthrough();
  gen->add_option("args", o.gen_args, "Optional positional weight and N")->expected(0, 2);
  auto* windows = app.add_subcommand("windows", "Window mean-square CSV over an X grid")->fallthrough();
  auto* means = app.add_subcommand("means", "Long-interval mean CSV over an X grid")->fallthrough();
  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON report")->fallthrough();
  verify->add_option("suite", o.suite, "kernel, transform, decomposition or hecke")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out;
    std::ostringstream cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    set_thread_count(o.threads);
    if (gen->parsed()) {
      if (!o.gen_args.empty()) o.weight = static_cast<int>(parse_count(o.gen_args[0]));
      if (o.gen_args.size() > 1) o.n = o.gen_args[1];
      return cmd_gen(make_config(o, app, 10000), out);
    }
    if (windows->parsed()) return cmd_windows(make_config(o, app, 10000), false, out);
    if (means->parsed()) return cmd_windows(make_config(o, app, 10000), true, out);
    if (verify->parsed()) {
      const std::size_t default_n = o.suite == "decomposition" ? 100000 : 10000;
      return cmd_verify(o.suite, make_config(o, app, default_n), out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}

}  // namespace cuspsum::cli
