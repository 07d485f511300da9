#include "nl0r/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "nl0r/problems.hpp"
#include "nl0r/random.hpp"
#include "nl0r/stationarity.hpp"

namespace nl0r {

namespace {

IndexSet mask_to_set(std::uint64_t mask, Index n) {
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i) {
    if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
  }
  return IndexSet(n, std::move(idx));
}

bool lex_less(const IndexSet& a, const IndexSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Vector least_squares_on(const CsObjective& cs, const IndexSet& s) {
  Vector x = Vector::Zero(cs.dimension());
  if (s.empty()) return x;
  const Matrix as = cs.matrix()(Eigen::all, s.indices());
  const Vector xs = Eigen::CompleteOrthogonalDecomposition<Matrix>(as).solve(cs.measurements());
  scatter(xs, s, x);
  return x;
}

/// Minimizes f over vectors supported on s from one start point.
Vector restricted_newton(const ObjectiveModel& model, const IndexSet& s, Vector x) {
  for (Index i : complement(s)) x[i] = 0.0;
  if (s.empty()) return x;
  double fx = model.eval(x);
  for (int it = 0; it < 200; ++it) {
    const Vector gs = gather(model.gradient(x), s);
    if (gs.norm() <= 1e-12) break;
    const Matrix h = model.hessian_block(x, s, s);
    const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    Vector d;
    bool found = false;
    for (double mu = 0.0; mu < 1e12 * scale; mu = (mu == 0.0 ? 1e-10 * scale : 10.0 * mu)) {
      Eigen::LDLT<Matrix> ldlt(h + mu * Matrix::Identity(h.rows(), h.cols()));
      if (ldlt.info() != Eigen::Success) continue;
      d = ldlt.solve(-gs);
      if (all_finite(d) && gs.dot(d) < 0.0) {
        found = true;
        break;
      }
    }
    if (!found) d = -gs;
    const double slope = gs.dot(d);
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-16) {
      Vector trial = x;
      for (std::size_t k = 0; k < s.size(); ++k) trial[s[k]] += alpha * d[static_cast<Index>(k)];
      const double ft = model.eval(trial);
      if (ft <= fx + 1e-4 * alpha * slope) {
        x = std::move(trial);
        fx = ft;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

nlohmann::json support_json(const IndexSet& s) {
  return nlohmann::json(std::vector<Index>(s.begin(), s.end()));
}

}  // namespace

OracleResult brute_force_global(const ObjectiveModel& model, double lambda, Index n_limit,
                                const Vector* hint) {
  const Index n = model.dimension();
  if (n > n_limit || n > 62) throw DimensionTooLarge(n, std::min<Index>(n_limit, 62));
  if (!(lambda >= 0.0)) throw std::invalid_argument("brute_force_global: lambda must be >= 0");

  const auto* cs = dynamic_cast<const CsObjective*>(&model);
  OracleResult best;
  best.best_value = std::numeric_limits<double>::infinity();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const IndexSet s = mask_to_set(mask, n);
    Vector x;
    double f = 0.0;
    if (cs) {
      x = least_squares_on(*cs, s);
      f = model.eval(x);
    } else {
      std::vector<Vector> starts{Vector::Zero(n)};
      if (hint) starts.push_back(*hint);
      Rng rng(mask);
      Vector r(n);
      for (Index i = 0; i < n; ++i) r[i] = rng.normal();
      starts.push_back(std::move(r));
      f = std::numeric_limits<double>::infinity();
      for (auto& start : starts) {
        Vector cand = restricted_newton(model, s, std::move(start));
        const double fc = model.eval(cand);
        if (fc < f) {
          f = fc;
          x = std::move(cand);
        }
      }
    }
    const double value = f + lambda * static_cast<double>(s.size());
    ++best.supports_evaluated;
    if (value < best.best_value || (value == best.best_value && lex_less(s, best.best_support))) {
      best.best_value = value;
      best.best_x = std::move(x);
      best.best_support = s;
    }
  }
  return best;
}

Vector finite_diff_gradient(const ObjectiveModel& model, const Vector& x, double h) {
  if (!(h > 0.0)) h = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = model.eval(probe);
    probe[i] = x[i] - h;
    const double fm = model.eval(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix finite_diff_hessian_block(const ObjectiveModel& model, const Vector& x,
                                 const IndexSet& rows, const IndexSet& cols, double h) {
  if (!(h > 0.0)) h = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  Vector probe = x;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Index j = cols[c];
    probe[j] = x[j] + h;
    const Vector gp = model.gradient(probe);
    probe[j] = x[j] - h;
    const Vector gm = model.gradient(probe);
    probe[j] = x[j];
    out.col(static_cast<Index>(c)) = gather((gp - gm) / (2.0 * h), rows);
  }
  return out;
}

const SolverOutcome* CrossValidationReport::find(const std::string& name) const {
  for (const auto& s : solvers) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string CrossValidationReport::to_json() const {
  nlohmann::json doc;
  doc["instance_id"] = instance_id;
  doc["lambda"] = lambda;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& s : solvers) {
    per[s.name] = {{"value", s.value},
                   {"support", support_json(s.support)},
                   {"stationarity_ok", s.stationarity_ok},
                   {"stationarity_tau", s.stationarity_tau},
                   {"iterations", s.iterations},
                   {"status", s.status}};
  }
  doc["solvers"] = per;
  nlohmann::json gaps = nlohmann::json::object();
  for (std::size_t a = 0; a < solvers.size(); ++a) {
    for (std::size_t b = a + 1; b < solvers.size(); ++b) {
      gaps[solvers[a].name + "_minus_" + solvers[b].name] = solvers[a].value - solvers[b].value;
    }
  }
  doc["gaps"] = gaps;
  return doc.dump(2);
}

CrossValidationReport cross_validate(const ObjectiveModel& model, std::optional<double> lambda,
                                     const CrossValidationConfig& configs,
                                     const std::string& instance_id, const Vector* hint) {
  CrossValidationReport report;
  report.instance_id = instance_id;

  SolverConfig nc = configs.newton;
  if (lambda) {
    nc.lambda0 = *lambda;
    nc.lambda_decay = 1.0;
  }
  const SolveResult nr = solve(model, nc);
  double eval_lambda = lambda.value_or(nr.final_lambda);
  if (!(eval_lambda > 0.0)) eval_lambda = nc.auto_lambda() ? 1.0 : nc.lambda0;
  report.lambda = eval_lambda;

  auto score = [&](const Vector& x) {
    return model.eval(x) + eval_lambda * static_cast<double>(count_nonzeros(x));
  };

  SolverOutcome newton;
  newton.name = "nl0r";
  newton.value = score(nr.x);
  newton.support = support(nr.x);
  newton.stationarity_tau = nr.status == SolveStatus::TrivialZero ? nc.tau0 : nr.certificate_tau;
  newton.stationarity_ok =
      nr.status != SolveStatus::MaxIters &&
      check_tau_stationary(model, nr.x, newton.stationarity_tau, eval_lambda, 1e-6).is_stationary;
  newton.iterations = static_cast<std::size_t>(nr.iterations);
  newton.status = to_string(nr.status);
  report.solvers.push_back(newton);

  SolverConfig pc = configs.prox_gradient;
  pc.lambda0 = eval_lambda;
  const SolveResult pr = prox_gradient_solve(model, pc);
  SolverOutcome prox;
  prox.name = "proxgrad";
  prox.value = score(pr.x);
  prox.support = support(pr.x);
  prox.stationarity_tau = pr.final_tau > 0.0 ? pr.final_tau : pc.tau0;
  prox.stationarity_ok =
      check_tau_stationary(model, pr.x, prox.stationarity_tau, eval_lambda, 1e-6).is_stationary;
  prox.iterations = static_cast<std::size_t>(pr.iterations);
  prox.status = to_string(pr.status);
  report.solvers.push_back(prox);

  if (model.dimension() <= configs.oracle_limit) {
    const OracleResult orc = brute_force_global(model, eval_lambda, configs.oracle_limit, hint);
    SolverOutcome o;
    o.name = "oracle";
    o.value = orc.best_value;
    o.support = orc.best_support;
    const double lip = estimate_lipschitz(model, Vector::Zero(model.dimension()), 0);
    o.stationarity_tau = lip > 0.0 ? 0.5 / lip : configs.newton.tau0;
    o.stationarity_ok =
        check_tau_stationary(model, orc.best_x, o.stationarity_tau, eval_lambda, 1e-6)
            .is_stationary;
    o.iterations = orc.supports_evaluated;
    o.status = "Enumerated";
    report.solvers.push_back(o);
  }
  return report;
}

}  // namespace nl0r
