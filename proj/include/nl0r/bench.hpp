#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nl0r/core_types.hpp"
#include "nl0r/newton_solver.hpp"
#include "nl0r/problems.hpp"

namespace nl0r {

/// One (solver, instance) outcome.
struct BenchRow {
  std::string solver;
  Index n = 0;
  Index m = 0;
  Index s_star = 0;
  std::uint64_t seed = 0;
  double recovery_error = 0.0;  // ||x - x*||
  double objective = 0.0;
  double regularized_objective = 0.0;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string status;
};

enum class ProblemKind { Cs, Lcp };

ProblemKind parse_problem_kind(const std::string& name);

struct BenchOptions {
  ProblemKind kind = ProblemKind::Cs;
  std::vector<Index> sizes;
  int trials = 1;
  std::vector<std::string> solvers{"nl0r"};
  std::uint64_t base_seed = 1;
  /// m = ceil(m_ratio * n) unless m is fixed; defaults 0.25 (cs), 0.5 (lcp).
  std::optional<double> m_ratio;
  std::optional<Index> m;
  /// s* = ceil(s_ratio * n) unless s_star is fixed.
  double s_ratio = 0.01;
  std::optional<Index> s_star;
  SolverConfig config;
  int jobs = 1;
};

/// Instance sizes (m, s*) a bench run uses for dimension n.
std::pair<Index, Index> bench_sizes(const BenchOptions& opts, Index n);

ProblemInstance generate_instance(ProblemKind kind, Index n, Index m, Index s_star,
                                  std::uint64_t seed);

/// Runs a named solver ("nl0r" or "proxgrad"); throws std::invalid_argument otherwise.
SolveResult run_solver(const std::string& name, const ObjectiveModel& model,
                       const SolverConfig& config);

/// Trial t at size n uses seed base_seed + t. Rows come back sorted by
/// (solver, n, seed), whatever the job count.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

inline constexpr const char* kBenchCsvVersion = "bench-rows v1";

/// Deterministic per-row CSV; wall time is kept out of it (see timing_csv).
std::string rows_csv(const std::vector<BenchRow>& rows);
std::string timing_csv(const std::vector<BenchRow>& rows);

/// Recovery counts as a success when ||x - x*|| <= this.
inline constexpr double kRecoverySuccessTol = 1e-6;

/// Means per (solver, n) plus success rate; includes mean wall time.
std::string summary_csv(const std::vector<BenchRow>& rows);

/// Two-column "n value" files per (solver, metric), keyed by file stem
/// such as "nl0r_recovery_error".
std::map<std::string, std::string> plot_data(const std::vector<BenchRow>& rows);

}  // namespace nl0r
