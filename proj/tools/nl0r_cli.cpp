// nl0r: generate instances, solve them, benchmark, and cross-check against
// the enumeration oracle.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nl0r/bench.hpp"
#include "nl0r/newton_solver.hpp"
#include "nl0r/oracle.hpp"
#include "nl0r/problems.hpp"
#include "nl0r/reporting.hpp"

namespace fs = std::filesystem;
using namespace nl0r;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Usage problems found after CLI11 parsing (bad sizes, unknown solver, ...).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Index ceil_frac(double frac, Index n) {
  return static_cast<Index>(std::ceil(frac * static_cast<double>(n) - 1e-9));
}

// "1000,2000" or "1000..3000" (step = lower end) or "1000..3000:500".
std::vector<Index> parse_sizes(const std::vector<std::string>& specs) {
  std::vector<Index> out;
  auto to_index = [](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad size '" + s + "'");
    }
    if (used != s.size() || v < 1) throw UsageError("bad size '" + s + "'");
    return static_cast<Index>(v);
  };
  for (const auto& spec : specs) {
    std::stringstream parts(spec);
    std::string item;
    while (std::getline(parts, item, ',')) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(to_index(item));
        continue;
      }
      std::string hi_s = item.substr(dots + 2);
      const Index lo = to_index(item.substr(0, dots));
      Index step = lo;
      if (const auto colon = hi_s.find(':'); colon != std::string::npos) {
        step = to_index(hi_s.substr(colon + 1));
        hi_s = hi_s.substr(0, colon);
      }
      const Index hi = to_index(hi_s);
      if (hi < lo) throw UsageError("empty size range '" + item + "'");
      for (Index n = lo; n <= hi; n += step) out.push_back(n);
    }
  }
  if (out.empty()) throw UsageError("no sizes given");
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& s : items) {
    std::stringstream parts(s);
    std::string item;
    while (std::getline(parts, item, ','))
      if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- gen -----------------------------------------------------------------

struct GenArgs {
  std::string kind;
  Index n = 0;
  std::optional<Index> m, s;
  std::uint64_t seed = 1;
  double noise = 0.0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const ProblemKind kind = parse_problem_kind(a.kind);
  if (a.n < 1) throw UsageError("--n must be >= 1");
  const Index m = a.m.value_or(kind == ProblemKind::Cs ? ceil_frac(0.25, a.n) : std::max<Index>(1, a.n / 2));
  const Index s = a.s.value_or(ceil_frac(0.01, a.n));
  if (s > a.n) throw UsageError("--s (" + std::to_string(s) + ") exceeds --n (" + std::to_string(a.n) + ")");
  if (m < 1) throw UsageError("--m must be >= 1");
  if (kind == ProblemKind::Cs && (m > a.n || s > m))
    throw UsageError("cs needs s <= m <= n");
  if (kind == ProblemKind::Lcp && a.noise != 0.0) throw UsageError("--noise applies to cs only");

  ProblemInstance inst;
  try {
    if (kind == ProblemKind::Cs) inst = gen_cs(a.n, m, s, a.seed, a.noise);
    else inst = gen_lcp(a.n, m, s, a.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  save_instance(inst, a.out);
  std::cerr << "wrote " << a.out << " (" << a.kind << ", n=" << a.n << ", m=" << m
            << ", s*=" << s << ", seed=" << a.seed << ")\n";
  return 0;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string solver = "nl0r";
  std::string config;
  std::optional<double> lambda0, r, c, tau0, tol, step;
  std::optional<int> max_iters;
  bool fixed_lambda = false;
  std::string trace, out;
  bool timing = false;
};

SolverConfig build_config(const std::string& config_path) {
  SolverConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = config_from_json(read_file(config_path), cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return cfg;
}

int run_solve(const SolveArgs& a) {
  if (a.solver != "nl0r" && a.solver != "proxgrad")
    throw UsageError("unknown solver '" + a.solver + "' (nl0r|proxgrad)");
  SolverConfig cfg = build_config(a.config);
  if (a.lambda0) cfg.lambda0 = *a.lambda0;
  if (a.r) cfg.lambda_decay = *a.r;
  if (a.c) cfg.lambda_init_fraction = *a.c;
  if (a.tau0) cfg.tau0 = *a.tau0;
  if (a.tol) cfg.residual_tol = *a.tol;
  if (a.max_iters) cfg.max_iters = *a.max_iters;
  if (a.fixed_lambda) cfg.lambda_decay = 1.0;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const ProblemInstance inst = load_instance(a.instance);
  const auto model = make_objective(inst);
  const SolveResult res = a.solver == "nl0r" ? solve(*model, cfg)
                                              : prox_gradient_solve(*model, cfg, a.step);
  const std::string doc =
      solve_result_to_json(res, a.solver, &ground_truth(inst), a.timing) + "\n";
  if (a.out.empty()) std::cout << doc;
  else write_file(a.out, doc);
  if (!a.trace.empty()) write_file(a.trace, res.trace.to_csv());
  return 0;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string kind;
  std::vector<std::string> sizes;
  int trials = 20;
  std::vector<std::string> solvers{"nl0r"};
  std::uint64_t seed = 1;
  std::optional<Index> m, s;
  std::optional<double> m_ratio, s_ratio;
  int jobs = 1;
  std::string config;
  std::string out = "bench.csv";
  std::string plot_dir;
};

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  fs::path stem = p;
  stem.replace_extension();
  return fs::path(stem.string() + suffix);
}

int run_bench_cmd(const BenchArgs& a) {
  BenchOptions opts;
  opts.kind = parse_problem_kind(a.kind);
  opts.sizes = parse_sizes(a.sizes);
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  opts.trials = a.trials;
  opts.solvers = split_list(a.solvers);
  if (opts.solvers.empty()) throw UsageError("empty solver list");
  for (const auto& s : opts.solvers)
    if (s != "nl0r" && s != "proxgrad") throw UsageError("unknown solver '" + s + "'");
  opts.base_seed = a.seed;
  opts.m = a.m;
  opts.s_star = a.s;
  opts.m_ratio = a.m_ratio;
  if (a.s_ratio) opts.s_ratio = *a.s_ratio;
  if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
  opts.jobs = a.jobs;
  opts.config = build_config(a.config);
  for (Index n : opts.sizes) {
    const auto [m, s] = bench_sizes(opts, n);
    if (m < 1 || s > n || (opts.kind == ProblemKind::Cs && (m > n || s > m)))
      throw UsageError("invalid sizes at n=" + std::to_string(n) + ": m=" + std::to_string(m) +
                       ", s*=" + std::to_string(s));
  }

  const auto rows = run_bench(opts);
  const fs::path out(a.out);
  write_file(out, rows_csv(rows));
  write_file(with_suffix(out, ".timing.csv"), timing_csv(rows));
  const std::string summary = summary_csv(rows);
  write_file(with_suffix(out, ".summary.csv"), summary);
  const fs::path plot_dir = a.plot_dir.empty() ? with_suffix(out, "_plot") : fs::path(a.plot_dir);
  for (const auto& [stem, text] : plot_data(rows)) write_file(plot_dir / (stem + ".dat"), text);
  std::cout << summary;
  return 0;
}

// ---- oracle --------------------------------------------------------------

struct OracleArgs {
  std::string instance;
  std::optional<double> lambda;
  Index limit = kDefaultOracleLimit;
  std::string config;
  std::string out;
};

int run_oracle(const OracleArgs& a) {
  if (a.lambda && !(*a.lambda > 0.0)) throw UsageError("--lambda must be > 0");
  CrossValidationConfig cv;
  cv.newton = build_config(a.config);
  cv.prox_gradient = cv.newton;
  cv.oracle_limit = a.limit;
  const ProblemInstance inst = load_instance(a.instance);
  const auto model = make_objective(inst);
  if (model->dimension() > a.limit) throw DimensionTooLarge(model->dimension(), a.limit);
  const auto report = cross_validate(*model, a.lambda, cv, fs::path(a.instance).filename().string(),
                                     &ground_truth(inst));
  const std::string doc = report.to_json() + "\n";
  if (a.out.empty()) std::cout << doc;
  else write_file(a.out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newton method for l0-regularized optimization"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a seeded instance file");
  g->add_option("kind", gen.kind, "cs | lcp")->required()->check(CLI::IsMember({"cs", "lcp"}));
  g->add_option("--n", gen.n, "dimension")->required();
  g->add_option("--m", gen.m, "rows of A (cs, default ceil(n/4)) or rank of M (lcp, default n/2)");
  g->add_option("--s", gen.s, "nonzeros of x* (default ceil(n/100))");
  g->add_option("--seed", gen.seed);
  g->add_option("--noise", gen.noise, "cs measurement noise factor");
  g->add_option("--out", gen.out, "output JSON path")->required();

  SolveArgs sv;
  auto* s = app.add_subcommand("solve", "solve an instance and print the result as JSON");
  s->add_option("instance", sv.instance)->required()->check(CLI::ExistingFile);
  s->add_option("--solver", sv.solver, "nl0r | proxgrad");
  s->add_option("--config", sv.config, "JSON file of solver overrides")->check(CLI::ExistingFile);
  s->add_option("--lambda0", sv.lambda0, "initial lambda (default: automatic)");
  s->add_option("--r", sv.r, "lambda decay factor");
  s->add_option("--c", sv.c, "fraction of the upper lambda bound used for lambda0");
  s->add_flag("--fixed-lambda", sv.fixed_lambda, "keep lambda at lambda0 (r = 1)");
  s->add_option("--tau0", sv.tau0);
  s->add_option("--tol", sv.tol, "residual tolerance");
  s->add_option("--max-iters", sv.max_iters);
  s->add_option("--step", sv.step, "proxgrad step size (default 0.5/L)");
  s->add_option("--trace", sv.trace, "write per-iteration CSV here");
  s->add_option("--out", sv.out, "write the JSON result here instead of stdout");
  s->add_flag("--timing", sv.timing, "include wall time in the JSON");

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "seeded benchmark over a size grid");
  b->add_option("kind", bn.kind, "cs | lcp")->required()->check(CLI::IsMember({"cs", "lcp"}));
  b->add_option("--n", bn.sizes, "sizes: 1000,2000 or 1000..3000[:step]")->required();
  b->add_option("--trials", bn.trials);
  b->add_option("--solvers", bn.solvers, "comma list of nl0r, proxgrad");
  b->add_option("--seed", bn.seed, "trial t uses seed + t");
  b->add_option("--m", bn.m);
  b->add_option("--s", bn.s);
  b->add_option("--m-ratio", bn.m_ratio);
  b->add_option("--s-ratio", bn.s_ratio);
  b->add_option("--jobs", bn.jobs);
  b->add_option("--config", bn.config)->check(CLI::ExistingFile);
  b->add_option("--out", bn.out, "rows CSV; siblings .timing.csv and .summary.csv");
  b->add_option("--plot-dir", bn.plot_dir, "directory for two-column plot data");

  OracleArgs oc;
  auto* o = app.add_subcommand("oracle", "cross-check solvers against exhaustive enumeration");
  o->add_option("instance", oc.instance)->required()->check(CLI::ExistingFile);
  o->add_option("--lambda", oc.lambda, "evaluation lambda (default: NL0R's final lambda)");
  o->add_option("--limit", oc.limit, "largest n to enumerate");
  o->add_option("--config", oc.config)->check(CLI::ExistingFile);
  o->add_option("--out", oc.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*s) return run_solve(sv);
    if (*b) return run_bench_cmd(bn);
    if (*o) return run_oracle(oc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
