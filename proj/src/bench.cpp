#include "nl0r/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

namespace nl0r {

namespace {

struct Aggregate {
  int count = 0;
  int successes = 0;
  double error = 0.0;
  double objective = 0.0;
  double regularized = 0.0;
  double iterations = 0.0;
  double seconds = 0.0;
};

std::map<std::pair<std::string, Index>, Aggregate> aggregate(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::string, Index>, Aggregate> out;
  for (const auto& r : rows) {
    auto& a = out[{r.solver, r.n}];
    ++a.count;
    a.successes += r.recovery_error <= kRecoverySuccessTol;
    a.error += r.recovery_error;
    a.objective += r.objective;
    a.regularized += r.regularized_objective;
    a.iterations += r.iterations;
    a.seconds += r.wall_seconds;
  }
  for (auto& [key, a] : out) {
    const double c = a.count;
    a.error /= c;
    a.objective /= c;
    a.regularized /= c;
    a.iterations /= c;
    a.seconds /= c;
  }
  return out;
}

}  // namespace

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "cs") return ProblemKind::Cs;
  if (name == "lcp") return ProblemKind::Lcp;
  throw std::invalid_argument("unknown problem kind '" + name + "' (expected cs or lcp)");
}

std::pair<Index, Index> bench_sizes(const BenchOptions& opts, Index n) {
  const double ratio = opts.m_ratio.value_or(opts.kind == ProblemKind::Cs ? 0.25 : 0.5);
  const Index m = opts.m.value_or(static_cast<Index>(std::ceil(ratio * static_cast<double>(n))));
  const Index s =
      opts.s_star.value_or(static_cast<Index>(std::ceil(opts.s_ratio * static_cast<double>(n))));
  return {m, s};
}

ProblemInstance generate_instance(ProblemKind kind, Index n, Index m, Index s_star,
                                  std::uint64_t seed) {
  if (kind == ProblemKind::Cs) return gen_cs(n, m, s_star, seed);
  return gen_lcp(n, m, s_star, seed);
}

SolveResult run_solver(const std::string& name, const ObjectiveModel& model,
                       const SolverConfig& config) {
  if (name == "nl0r") return solve(model, config);
  if (name == "proxgrad") return prox_gradient_solve(model, config);
  throw std::invalid_argument("unknown solver '" + name + "' (expected nl0r or proxgrad)");
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  if (opts.solvers.empty()) throw std::invalid_argument("bench: solver list is empty");
  for (const auto& s : opts.solvers) {
    if (s != "nl0r" && s != "proxgrad") throw std::invalid_argument("bench: unknown solver '" + s + "'");
  }
  if (opts.trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  if (opts.sizes.empty()) throw std::invalid_argument("bench: no sizes given");
  opts.config.validate();

  struct Task {
    Index n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Index n : opts.sizes) {
    const auto [m, s] = bench_sizes(opts, n);
    if (opts.kind == ProblemKind::Cs && !(s <= m && m <= n)) {
      throw std::invalid_argument("bench: invalid sizes for n=" + std::to_string(n));
    }
    for (int t = 0; t < opts.trials; ++t) tasks.push_back({n, opts.base_seed + static_cast<std::uint64_t>(t)});
  }

  std::vector<BenchRow> rows;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task task = tasks[i];
        const auto [m, s] = bench_sizes(opts, task.n);
        const ProblemInstance inst = generate_instance(opts.kind, task.n, m, s, task.seed);
        const auto model = make_objective(inst);
        for (const auto& solver : opts.solvers) {
          const SolveResult r = run_solver(solver, *model, opts.config);
          BenchRow row;
          row.solver = solver;
          row.n = task.n;
          row.m = m;
          row.s_star = s;
          row.seed = task.seed;
          row.recovery_error = (r.x - ground_truth(inst)).norm();
          row.objective = r.objective;
          row.regularized_objective = r.regularized_objective;
          row.iterations = r.iterations;
          row.wall_seconds = r.wall_seconds;
          row.status = to_string(r.status);
          std::lock_guard lock(mu);
          rows.push_back(std::move(row));
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(tasks.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.solver, a.n, a.seed) < std::tie(b.solver, b.n, b.seed);
  });
  return rows;
}

std::string rows_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string("# ") + kBenchCsvVersion + "\n";
  out += "solver,n,m,s_star,seed,recovery_error,objective,regularized_objective,iterations,status\n";
  for (const auto& r : rows) {
    out += r.solver + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.s_star) + ',' + std::to_string(r.seed) + ',' +
           format_real(r.recovery_error) + ',' + format_real(r.objective) + ',' +
           format_real(r.regularized_objective) + ',' + std::to_string(r.iterations) + ',' +
           r.status + '\n';
  }
  return out;
}

std::string timing_csv(const std::vector<BenchRow>& rows) {
  std::string out = "solver,n,seed,wall_seconds\n";
  for (const auto& r : rows) {
    out += r.solver + ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' +
           format_real(r.wall_seconds) + '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "solver,n,trials,success_rate,mean_recovery_error,mean_objective,"
      "mean_regularized_objective,mean_iterations,mean_wall_seconds\n";
  for (const auto& [key, a] : aggregate(rows)) {
    out += key.first + ',' + std::to_string(key.second) + ',' + std::to_string(a.count) + ',' +
           format_real(static_cast<double>(a.successes) / a.count) + ',' + format_real(a.error) +
           ',' + format_real(a.objective) + ',' + format_real(a.regularized) + ',' +
           format_real(a.iterations) + ',' + format_real(a.seconds) + '\n';
  }
  return out;
}

std::map<std::string, std::string> plot_data(const std::vector<BenchRow>& rows) {
  std::map<std::string, std::string> files;
  for (const auto& [key, a] : aggregate(rows)) {
    const std::string n = std::to_string(key.second);
    auto add = [&](const char* metric, double v) {
      auto& body = files[key.first + "_" + metric];
      if (body.empty()) body = std::string("# n ") + metric + "\n";
      body += n + ' ' + format_real(v) + '\n';
    };
    add("recovery_error", a.error);
    add("objective", a.objective);
    add("wall_seconds", a.seconds);
  }
  return files;
}

}  // namespace nl0r
