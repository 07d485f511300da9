#include "nl0r/newton_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nl0r/random.hpp"

namespace nl0r {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_zero(const Vector& v) { return (v.array() == 0.0).all(); }

SolveResult trivial_zero(const ObjectiveModel& model, double lambda0) {
  const Index n = model.dimension();
  SolveResult r;
  r.x = Vector::Zero(n);
  r.objective = model.eval(r.x);
  r.regularized_objective = r.objective;
  r.status = SolveStatus::TrivialZero;
  r.lambda0 = r.final_lambda = lambda0;
  TraceRecord rec;
  rec.objective = r.objective;
  rec.lambda = lambda0;
  rec.support_stable = true;
  r.trace.records.push_back(rec);
  return r;
}

void require_finite(double fx, const Vector& g, const SolverTrace& trace, int k) {
  if (!std::isfinite(fx) || !all_finite(g)) {
    throw SolverFailure("non-finite objective or gradient at iteration " + std::to_string(k),
                        trace);
  }
}

/// True when no index outside t would clear the threshold at lambda_min,
/// i.e. decaying lambda further cannot enlarge the working set at x.
bool settled_for(const SolverState& st, double lambda_min) {
  const double thr = std::sqrt(2.0 * st.tau * std::max(lambda_min, 0.0));
  for (Index i = 0; i < st.x.size(); ++i) {
    if (!st.t.contains(i) && std::abs(st.x[i] - st.tau * st.g[i]) >= thr) return false;
  }
  return true;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ResidualConverged: return "ResidualConverged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::TrivialZero: return "TrivialZero";
  }
  return "unknown";
}

SupportUpdate update_support(const SolverState& state) {
  SupportUpdate u;
  u.t_tilde = compute_T(state.x, state.g, state.tau, state.lambda);
  u.added = set_difference(u.t_tilde, state.t_prev);
  u.t = u.added.empty() ? state.t_prev : u.t_tilde;
  return u;
}

NewtonDirection newton_direction(const ObjectiveModel& model, const SolverState& state) {
  const IndexSet& t = state.t;
  NewtonDirection out{-state.x, false};
  if (t.empty()) return out;

  const Matrix h = model.hessian_block(state.x, t, t);
  Vector rhs = -gather(state.g, t);
  const IndexSet j = set_difference(support(state.x), t);
  if (!j.empty()) rhs += model.hessian_block(state.x, t, j) * gather(state.x, j);

  const double scale = h.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return out;
  Eigen::LDLT<Matrix> ldlt(h);
  if (ldlt.info() != Eigen::Success) return out;
  if (ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * scale) return out;

  const Vector dt = ldlt.solve(rhs);
  if (!all_finite(dt)) return out;
  scatter(dt, t, out.d);
  out.solvable = true;
  return out;
}

bool accept_newton(const SolverState& state, const Vector& d) {
  const IndexSet& t = state.t;
  const double gd = gather(state.g, t).dot(gather(d, t));
  const double x_off = gather(state.x, complement(t)).squaredNorm();
  return gd <= -state.delta * d.squaredNorm() + x_off / (4.0 * state.tau);
}

Vector gradient_direction(const SolverState& state) {
  Vector d = -state.x;
  for (Index i : state.t) d[i] = -state.g[i];
  return d;
}

Vector restricted_step(const Vector& x, const Vector& d, const IndexSet& t, double alpha) {
  Vector out = Vector::Zero(x.size());
  for (Index i : t) out[i] = x[i] + alpha * d[i];
  return out;
}

LineSearchResult armijo_search(const ObjectiveModel& model, const SolverState& state,
                               const Vector& d, double sigma, double beta, int max_backtracks) {
  const double slope = state.g.dot(d);
  LineSearchResult r;
  double alpha = 1.0;
  for (int m = 0; m <= max_backtracks; ++m, alpha *= beta) {
    r.alpha = alpha;
    r.m = m;
    r.x_new = restricted_step(state.x, d, state.t, alpha);
    r.f_new = model.eval(r.x_new);
    if (r.f_new <= state.fx + sigma * alpha * slope) {
      r.status = LineSearchStatus::Accepted;
      return r;
    }
  }
  r.status = LineSearchStatus::Exhausted;
  return r;
}

ScheduledParameters schedule_parameters(const SolverState& state, double residual_norm,
                                        bool support_grew, const SolverConfig& config,
                                        double lambda_floor) {
  ScheduledParameters p;
  p.delta = support_grew ? config.delta_large : config.delta_small;
  p.tau = state.tau;
  const int k = state.k;
  if (k >= config.tau_adapt_period && k % config.tau_adapt_period == 0) {
    const double target = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
    p.tau = residual_norm > target ? state.tau / config.tau_adapt_factor
                                   : state.tau * config.tau_adapt_factor;
  }
  p.lambda = std::max(lambda_floor, config.lambda_decay * state.lambda);
  return p;
}

double initial_lambda(const Vector& grad_at_origin, const SolverConfig& config, double tau) {
  if (!config.auto_lambda()) return config.lambda0;
  const LambdaBounds b = lambda_bounds(grad_at_origin, tau);
  return std::max(b.lower, config.lambda_init_fraction * b.upper);
}

double certificate_tau(const Vector& x, double tau, double lambda) {
  double cap = tau;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double a = std::abs(x[i]);
    // Both |x_i| / (2 lambda) and x_i^2 / (2 lambda) must bound tau; the
    // second is what |x_i| >= sqrt(2 tau lambda) actually requires.
    cap = std::min(cap, 0.5 * a / (2.0 * lambda));
    cap = std::min(cap, 0.5 * a * a / (2.0 * lambda));
  }
  return cap;
}

SolveResult solve(const ObjectiveModel& model, const SolverConfig& config) {
  return solve(model, config, Vector::Zero(model.dimension()));
}

SolveResult solve(const ObjectiveModel& model, const SolverConfig& config, const Vector& x0) {
  config.validate();
  const Index n = model.dimension();
  if (n < 1) throw std::invalid_argument("solve: model dimension must be >= 1");
  if (x0.size() != n) throw std::invalid_argument("solve: start point has wrong dimension");
  const auto start = Clock::now();

  const Vector g0 = model.gradient(Vector::Zero(n));
  if (!all_finite(g0)) throw SolverFailure("non-finite gradient at the origin", {});
  if (is_zero(g0)) {
    auto r = trivial_zero(model, config.auto_lambda() ? 0.0 : config.lambda0);
    r.wall_seconds = seconds_since(start);
    return r;
  }

  const double lambda0 = initial_lambda(g0, config, config.tau0);
  const double lambda_floor = config.lambda_floor_fraction * lambda0;

  SolverState st;
  st.x = x0;
  if (!is_zero(x0)) {
    const IndexSet keep = compute_T(x0, model.gradient(x0), config.tau0, lambda0);
    for (Index i : complement(keep)) st.x[i] = 0.0;
  }
  st.g = is_zero(st.x) ? g0 : model.gradient(st.x);
  st.fx = model.eval(st.x);
  st.t_prev = IndexSet(n);
  st.t = IndexSet(n);
  st.tau = config.tau0;
  st.lambda = lambda0;

  SolveResult result;
  result.lambda0 = lambda0;
  require_finite(st.fx, st.g, result.trace, 0);

  for (;;) {
    const SupportUpdate upd = update_support(st);
    st.t = upd.t;
    const bool grew = !upd.added.empty();
    const double residual = stationary_residual(st.x, st.g, st.t).norm;
    ScheduledParameters next = schedule_parameters(st, residual, grew, config, lambda_floor);
    st.delta = next.delta;

    TraceRecord rec;
    rec.k = st.k;
    rec.objective = st.fx;
    rec.lambda = st.lambda;
    rec.tau = st.tau;
    rec.support_size = st.t.size();
    rec.residual = residual;
    rec.support_stable = (st.t == st.t_prev);

    const double lambda_min = config.lambda_decay < 1.0 ? lambda_floor : st.lambda;
    if (rec.support_stable && residual <= config.residual_tol &&
        support(st.x).subset_of(st.t) && settled_for(st, lambda_min)) {
      result.status = SolveStatus::ResidualConverged;
      rec.wall_seconds = seconds_since(start);
      result.trace.records.push_back(rec);
      break;
    }
    if (st.k >= config.max_iters) {
      result.status = SolveStatus::MaxIters;
      rec.wall_seconds = seconds_since(start);
      result.trace.records.push_back(rec);
      break;
    }

    DirectionKind kind = DirectionKind::Gradient;
    Vector d;
    if (NewtonDirection nd = newton_direction(model, st); nd.solvable && accept_newton(st, nd.d)) {
      kind = DirectionKind::Newton;
      d = std::move(nd.d);
    } else {
      d = gradient_direction(st);
    }

    const LineSearchResult ls = armijo_search(model, st, d, config.sigma, config.beta,
                                              config.max_backtracks);
    // An exhausted search is still taken if it strictly lowers f; any trial
    // that would raise f is refused and tau is tightened instead.
    const bool take = ls.f_new <= st.fx &&
                      (ls.status == LineSearchStatus::Accepted || ls.f_new < st.fx);
    rec.direction = kind;
    st.last_direction = kind;
    if (take) {
      rec.alpha = ls.alpha;
      st.last_alpha = ls.alpha;
      st.x = ls.x_new;
      st.fx = ls.f_new;
      st.g = model.gradient(st.x);
    } else {
      rec.step_rejected = true;
      st.last_alpha = 0.0;
      next.tau /= config.tau_adapt_factor;
    }
    rec.wall_seconds = seconds_since(start);
    result.trace.records.push_back(rec);
    require_finite(st.fx, st.g, result.trace, st.k + 1);

    st.tau = next.tau;
    st.lambda = next.lambda;
    st.t_prev = st.t;
    ++st.k;
  }

  // Coordinates left at round-off level by the last Newton solve sit below
  // the threshold; drop them when that keeps x stationary on its support
  // and does not raise f + lambda ||x||_0.
  if (result.status == SolveStatus::ResidualConverged) {
    const double thr = hard_threshold(st.tau, st.lambda);
    Vector pruned = st.x;
    for (Index i : support(st.x))
      if (std::abs(st.x[i]) < thr) pruned[i] = 0.0;
    const Index dropped = count_nonzeros(st.x) - count_nonzeros(pruned);
    if (dropped > 0) {
      const double f_pruned = model.eval(pruned);
      const Vector g_pruned = model.gradient(pruned);
      if (std::isfinite(f_pruned) &&
          f_pruned - st.fx <= st.lambda * static_cast<double>(dropped) &&
          stationary_residual(pruned, g_pruned, support(pruned)).norm <= config.residual_tol) {
        st.x = std::move(pruned);
        st.fx = f_pruned;
        st.g = g_pruned;
      }
    }
  }

  result.x = st.x;
  result.objective = st.fx;
  result.iterations = st.k;
  result.final_lambda = st.lambda;
  result.final_tau = st.tau;
  result.regularized_objective =
      st.fx + st.lambda * static_cast<double>(count_nonzeros(st.x));
  result.certificate_tau = certificate_tau(st.x, st.tau, st.lambda);
  result.wall_seconds = seconds_since(start);
  return result;
}

double estimate_lipschitz(const ObjectiveModel& model, const Vector& x, std::uint64_t seed,
                          int iterations) {
  const Index n = model.dimension();
  Rng rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  v.normalize();
  const double h = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector hv = (model.gradient(x + h * v) - model.gradient(x - h * v)) / (2.0 * h);
    const double norm = hv.norm();
    if (!(norm > 0.0)) return 0.0;
    const bool settled = std::abs(norm - estimate) <= 1e-10 * norm;
    estimate = norm;
    v = hv / norm;
    if (settled) break;
  }
  return estimate;
}

SolveResult prox_gradient_solve(const ObjectiveModel& model, const SolverConfig& config,
                                std::optional<double> step) {
  config.validate();
  const Index n = model.dimension();
  if (n < 1) throw std::invalid_argument("prox_gradient_solve: model dimension must be >= 1");
  const auto start = Clock::now();

  Vector x = Vector::Zero(n);
  Vector g = model.gradient(x);
  if (!all_finite(g)) throw SolverFailure("non-finite gradient at the origin", {});
  if (is_zero(g)) {
    auto r = trivial_zero(model, config.auto_lambda() ? 0.0 : config.lambda0);
    r.wall_seconds = seconds_since(start);
    return r;
  }

  double tau = 0.0;
  if (step) {
    tau = *step;
  } else {
    const double lip = estimate_lipschitz(model, x, config.rng_seed);
    tau = lip > 0.0 ? 0.5 / lip : config.tau0;
  }
  if (!(tau > 0.0)) throw std::invalid_argument("prox_gradient_solve: step must be positive");
  const double lambda = initial_lambda(g, config, tau);

  SolveResult result;
  result.lambda0 = lambda;
  double fx = model.eval(x);
  result.status = SolveStatus::MaxIters;
  int k = 0;
  for (;; ++k) {
    TraceRecord rec;
    rec.k = k;
    rec.objective = fx;
    rec.lambda = lambda;
    rec.tau = tau;
    rec.support_size = static_cast<std::size_t>(count_nonzeros(x));
    if (k >= config.max_iters) {
      rec.wall_seconds = seconds_since(start);
      result.trace.records.push_back(rec);
      break;
    }
    Vector next = prox_l0(x - tau * g, tau, lambda).point;
    const double moved = (next - x).norm();
    rec.residual = moved;
    rec.alpha = 1.0;
    rec.direction = DirectionKind::Gradient;
    x = std::move(next);
    fx = model.eval(x);
    g = model.gradient(x);
    rec.wall_seconds = seconds_since(start);
    result.trace.records.push_back(rec);
    require_finite(fx, g, result.trace, k + 1);
    if (moved <= 1e-10) {
      result.status = SolveStatus::ResidualConverged;
      ++k;
      break;
    }
  }

  result.x = x;
  result.objective = fx;
  result.iterations = k;
  result.final_lambda = lambda;
  result.final_tau = tau;
  result.certificate_tau = tau;
  result.regularized_objective = fx + lambda * static_cast<double>(count_nonzeros(x));
  result.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace nl0r
