#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nl0r/core_types.hpp"
#include "nl0r/newton_solver.hpp"

namespace nl0r {

class DimensionTooLarge : public std::runtime_error {
 public:
  DimensionTooLarge(Index n, Index limit)
      : std::runtime_error("dimension " + std::to_string(n) + " exceeds enumeration limit " +
                           std::to_string(limit)) {}
};

struct OracleResult {
  Vector best_x;
  double best_value = 0.0;  // f(best_x) + lambda * |best_support|
  IndexSet best_support;
  std::size_t supports_evaluated = 0;
};

inline constexpr Index kDefaultOracleLimit = 14;

/// Global minimizer of f(x) + lambda ||x||_0 by enumerating all 2^n
/// supports. Least-squares models are solved in closed form per support;
/// other models use multi-start damped Newton on the restricted problem
/// (starts: 0, `hint` restricted to the support, a seeded random point),
/// which is a heuristic when the restricted problem is nonconvex.
/// Ties go to the lexicographically smallest support.
OracleResult brute_force_global(const ObjectiveModel& model, double lambda,
                                Index n_limit = kDefaultOracleLimit,
                                const Vector* hint = nullptr);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h. h <= 0 picks
/// 1e-5 * (1 + ||x||_inf).
Vector finite_diff_gradient(const ObjectiveModel& model, const Vector& x, double h = 0.0);

/// Columns are central differences of the gradient along e_j, j in cols,
/// restricted to rows.
Matrix finite_diff_hessian_block(const ObjectiveModel& model, const Vector& x,
                                 const IndexSet& rows, const IndexSet& cols, double h = 0.0);

struct SolverOutcome {
  std::string name;
  double value = 0.0;  // regularized objective at the evaluation lambda
  IndexSet support;
  bool stationarity_ok = false;
  double stationarity_tau = 0.0;
  std::size_t iterations = 0;
  std::string status;
};

struct CrossValidationReport {
  std::string instance_id;
  double lambda = 0.0;
  std::vector<SolverOutcome> solvers;  // nl0r, proxgrad, then oracle if run

  const SolverOutcome* find(const std::string& name) const;
  std::string to_json() const;
};

struct CrossValidationConfig {
  SolverConfig newton;
  SolverConfig prox_gradient;
  Index oracle_limit = kDefaultOracleLimit;
};

/// Runs the Newton solver, the proximal-gradient baseline and (when the
/// dimension allows) the enumeration oracle on one model, all scored at the
/// same lambda. With `lambda` unset the Newton solver runs its automatic
/// schedule and its final lambda becomes the evaluation lambda; with it set,
/// the Newton solver runs at that fixed lambda.
CrossValidationReport cross_validate(const ObjectiveModel& model, std::optional<double> lambda,
                                     const CrossValidationConfig& configs,
                                     const std::string& instance_id = "",
                                     const Vector* hint = nullptr);

}  // namespace nl0r
