#include "nl0r/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nl0r {

namespace {

void require_positive(double tau, double lambda, const char* who) {
  if (!(tau > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": tau and lambda must be positive");
  }
}

}  // namespace

ProxResult prox_l0(const Vector& z, double tau, double lambda, double tie_tol) {
  require_positive(tau, lambda, "prox_l0");
  if (!all_finite(z)) throw NonFiniteInput("prox_l0: non-finite input");
  if (!(tie_tol >= 0.0)) throw std::invalid_argument("prox_l0: tie_tol must be >= 0");

  const double thr = hard_threshold(tau, lambda);
  ProxResult out{Vector::Zero(z.size()), IndexSet(z.size())};
  std::vector<Index> ties;
  for (Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]);
    if (std::abs(a - thr) <= tie_tol) {
      ties.push_back(i);
      out.point[i] = z[i];
    } else if (a > thr) {
      out.point[i] = z[i];
    }
  }
  out.boundary_indices = IndexSet(z.size(), std::move(ties));
  return out;
}

IndexSet compute_T(const Vector& x, const Vector& g, double tau, double lambda) {
  require_positive(tau, lambda, "compute_T");
  if (x.size() != g.size()) throw std::invalid_argument("compute_T: dimension mismatch");
  const double thr = hard_threshold(tau, lambda);
  std::vector<Index> idx;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - tau * g[i]) >= thr) idx.push_back(i);
  }
  return IndexSet(x.size(), std::move(idx));
}

StationaryResidual stationary_residual(const Vector& x, const Vector& g, const IndexSet& t) {
  if (t.ambient() != x.size() || g.size() != x.size()) {
    throw std::invalid_argument("stationary_residual: dimension mismatch");
  }
  const IndexSet tc = complement(t);
  StationaryResidual out;
  out.residual.resize(x.size());
  out.residual.head(static_cast<Index>(t.size())) = gather(g, t);
  out.residual.tail(static_cast<Index>(tc.size())) = gather(x, tc);
  out.norm = out.residual.norm();
  return out;
}

StationaryResidual stationary_residual(const ObjectiveModel& model, const Vector& x,
                                       const IndexSet& t) {
  return stationary_residual(x, model.gradient(x), t);
}

StationarityCheck check_tau_stationary(const Vector& x, const Vector& g, double tau,
                                       double lambda, double tol) {
  require_positive(tau, lambda, "check_tau_stationary");
  if (x.size() != g.size()) throw std::invalid_argument("check_tau_stationary: dimension mismatch");
  if (!all_finite(x) || !all_finite(g)) {
    return {false, std::numeric_limits<double>::infinity()};
  }
  const double on_bound = hard_threshold(tau, lambda);
  const double off_bound = std::sqrt(2.0 * lambda / tau);

  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      worst = std::max(worst, std::abs(g[i]));
      worst = std::max(worst, on_bound - std::abs(x[i]));
    } else {
      worst = std::max(worst, std::abs(g[i]) - off_bound);
    }
  }
  const double violation = std::max(0.0, worst);
  return {violation <= tol, violation};
}

StationarityCheck check_tau_stationary(const ObjectiveModel& model, const Vector& x,
                                       double tau, double lambda, double tol) {
  return check_tau_stationary(x, model.gradient(x), tau, lambda, tol);
}

LambdaBounds lambda_bounds(const Vector& grad_at_origin, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("lambda_bounds: tau must be positive");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index i = 0; i < grad_at_origin.size(); ++i) {
    const double gi = grad_at_origin[i];
    if (gi == 0.0) continue;
    const double v = 0.5 * tau * gi * gi;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == 0.0) throw GradientZeroAtOrigin();
  return {lo, hi};
}

LambdaBounds lambda_bounds(const ObjectiveModel& model, double tau) {
  return lambda_bounds(model.gradient(Vector::Zero(model.dimension())), tau);
}

}  // namespace nl0r
