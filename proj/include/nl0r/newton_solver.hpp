#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "nl0r/core_types.hpp"
#include "nl0r/stationarity.hpp"

namespace nl0r {

enum class SolveStatus { ResidualConverged, MaxIters, TrivialZero };

const char* to_string(SolveStatus status);

/// Iterate bookkeeping for the Newton loop. `t_prev` is T_{k-1}; `t` is T_k
/// once update_support has run for iteration k.
struct SolverState {
  int k = 0;
  Vector x;
  Vector g;            // grad f(x)
  double fx = 0.0;     // f(x)
  IndexSet t_prev;
  IndexSet t;
  double tau = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  DirectionKind last_direction = DirectionKind::None;
  double last_alpha = 0.0;
};

struct SolveResult {
  Vector x;
  double objective = 0.0;               // f(x)
  double regularized_objective = 0.0;   // f(x) + final_lambda * ||x||_0
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
  SolverTrace trace;
  double lambda0 = 0.0;
  double final_lambda = 0.0;
  double final_tau = 0.0;
  /// A tau at which x is certified tau-stationary for final_lambda. Only
  /// meaningful when status == ResidualConverged.
  double certificate_tau = 0.0;
  double wall_seconds = 0.0;
};

/// Thrown when f or grad f turns non-finite mid-solve; carries the trace so far.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, SolverTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

struct SupportUpdate {
  IndexSet t;        // T_k
  IndexSet t_tilde;  // threshold set at (x^k, tau_k, lambda_k)
  IndexSet added;    // S_k = t_tilde \ T_{k-1}
};

/// T_k = T~_k if T~_k brings in an index outside T_{k-1}, else T_{k-1}.
SupportUpdate update_support(const SolverState& state);

struct NewtonDirection {
  Vector d;
  bool solvable = false;
};

/// Solves  H d_T = G x_J - g_T  with H = hess_{T,T} f, G = hess_{T,J} f,
/// where J collects the nonzeros of x outside T; sets d_{~T} = -x_{~T}.
/// Factorization failure (pivot below 1e-12 * max|H_ii|) is reported
/// through `solvable`, not thrown.
NewtonDirection newton_direction(const ObjectiveModel& model, const SolverState& state);

/// <g_T, d_T> <= -delta ||d||^2 + ||x_{~T}||^2 / (4 tau)
bool accept_newton(const SolverState& state, const Vector& d);

/// d_T = -g_T, d_{~T} = -x_{~T}.
Vector gradient_direction(const SolverState& state);

/// x(alpha): x_T + alpha d_T on T, exact zeros elsewhere.
Vector restricted_step(const Vector& x, const Vector& d, const IndexSet& t, double alpha);

enum class LineSearchStatus { Accepted, Exhausted };

struct LineSearchResult {
  double alpha = 1.0;
  int m = 0;
  Vector x_new;
  double f_new = 0.0;
  LineSearchStatus status = LineSearchStatus::Accepted;
};

/// Smallest m in [0, max_backtracks] with
///   f(x(beta^m)) <= f(x) + sigma beta^m <g, d>.
/// When none qualifies, status is Exhausted and the last trial is returned.
LineSearchResult armijo_search(const ObjectiveModel& model, const SolverState& state,
                               const Vector& d, double sigma, double beta,
                               int max_backtracks = 50);

struct ScheduledParameters {
  double delta = 0.0;   // delta_k for the current iteration
  double tau = 0.0;     // tau_{k+1}
  double lambda = 0.0;  // lambda_{k+1}
};

/// delta_k from whether the support grew; tau shrinks (grows) by
/// tau_adapt_factor every tau_adapt_period iterations when the residual is
/// above (at or below) k^-2; lambda decays geometrically down to lambda_floor.
ScheduledParameters schedule_parameters(const SolverState& state, double residual_norm,
                                        bool support_grew, const SolverConfig& config,
                                        double lambda_floor);

/// Initial lambda: config.lambda0 when set, else max(lower, c * upper) with
/// the bounds taken at the given tau.
double initial_lambda(const Vector& grad_at_origin, const SolverConfig& config, double tau);

/// tau* = min(tau, 0.5 |x_i| / (2 lambda), 0.5 x_i^2 / (2 lambda)) over
/// supp(x). Inside the range where a converged point is tau*-stationary.
double certificate_tau(const Vector& x, double tau, double lambda);

/// Newton method for min f(x) + lambda ||x||_0 started from the origin.
SolveResult solve(const ObjectiveModel& model, const SolverConfig& config);

/// Warm start: coordinates of x0 outside T_{tau0}(x0, lambda0) are zeroed first.
SolveResult solve(const ObjectiveModel& model, const SolverConfig& config, const Vector& x0);

/// Power iteration on finite-difference Hessian-vector products at x.
double estimate_lipschitz(const ObjectiveModel& model, const Vector& x, std::uint64_t seed,
                          int iterations = 200);

/// Baseline: x <- prox_l0(x - step * grad f(x)) at fixed lambda until
/// ||x_{k+1} - x_k|| <= 1e-10. The default step is 0.5 / L_est.
SolveResult prox_gradient_solve(const ObjectiveModel& model, const SolverConfig& config,
                                std::optional<double> step = std::nullopt);

}  // namespace nl0r
