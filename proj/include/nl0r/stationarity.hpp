#pragma once

#include <cmath>
#include <stdexcept>

#include "nl0r/core_types.hpp"

namespace nl0r {

class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by lambda_bounds when grad f(0) = 0, i.e. the origin is already
/// tau-stationary for every lambda and there is nothing to solve.
class GradientZeroAtOrigin : public std::runtime_error {
 public:
  GradientZeroAtOrigin() : std::runtime_error("gradient of f vanishes at the origin") {}
};

struct ProxResult {
  Vector point;
  IndexSet boundary_indices;  // |z_i| equal to the threshold (within tie_tol)
};

struct LambdaBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct StationaryResidual {
  Vector residual;  // [grad_T f(x); x_{complement of T}]
  double norm = 0.0;
};

struct StationarityCheck {
  bool is_stationary = false;
  double worst_violation = 0.0;
};

/// Hard-threshold level sqrt(2 * tau * lambda).
inline double hard_threshold(double tau, double lambda) { return std::sqrt(2.0 * tau * lambda); }

/// Proximal map of tau*lambda*||.||_0: keeps z_i when |z_i| clears
/// sqrt(2 tau lambda), zeroes it otherwise. On a tie the set-valued prox is
/// resolved to z_i and the index is reported.
ProxResult prox_l0(const Vector& z, double tau, double lambda, double tie_tol = 0.0);

/// T_tau(x, lambda) = { i : |x_i - tau g_i| >= sqrt(2 tau lambda) } with g = grad f(x).
IndexSet compute_T(const Vector& x, const Vector& g, double tau, double lambda);

StationaryResidual stationary_residual(const Vector& x, const Vector& g, const IndexSet& t);
StationaryResidual stationary_residual(const ObjectiveModel& model, const Vector& x,
                                       const IndexSet& t);

/// Componentwise tau-stationarity test:
///   i in supp(x):  grad_i f = 0  and  |x_i| >= sqrt(2 tau lambda)
///   i off supp(x): |grad_i f| <= sqrt(2 lambda / tau)
/// each with additive slack tol.
StationarityCheck check_tau_stationary(const Vector& x, const Vector& g, double tau,
                                       double lambda, double tol = 1e-8);
StationarityCheck check_tau_stationary(const ObjectiveModel& model, const Vector& x,
                                       double tau, double lambda, double tol = 1e-8);

/// Bounds on lambda from g0 = grad f(0): below `lower` the origin is never
/// tau-stationary, above `upper` it always is.
LambdaBounds lambda_bounds(const Vector& grad_at_origin, double tau);
LambdaBounds lambda_bounds(const ObjectiveModel& model, double tau);

}  // namespace nl0r
