#include "nl0r/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nl0r/random.hpp"

namespace nl0r {

namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }
double ind_pos(double v) { return v > 0.0 ? 1.0 : 0.0; }
double ind_neg(double v) { return v < 0.0 ? 1.0 : 0.0; }

/// M x over the nonzero columns only when x is sparse enough to pay off.
Vector sparse_aware_product(const Matrix& m, const Vector& x) {
  const Index nnz = count_nonzeros(x);
  if (4 * nnz >= x.size()) return m * x;
  Vector out = Vector::Zero(m.rows());
  for (Index j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) out.noalias() += x[j] * m.col(j);
  }
  return out;
}

void normalize_columns(Matrix& z, Rng& rng) {
  for (Index j = 0; j < z.cols(); ++j) {
    double norm = z.col(j).norm();
    while (!(norm > 0.0)) {
      for (Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
      norm = z.col(j).norm();
    }
    z.col(j) /= norm;
  }
}

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  Matrix z(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) z(i, j) = rng.normal();
  }
  return z;
}

Vector sparse_signal(Index n, Index s, Rng& rng, bool positive) {
  Vector x = Vector::Zero(n);
  for (Index i : rng.sample_without_replacement(n, s)) {
    double v = 0.0;
    while (v == 0.0) v = rng.normal();
    x[i] = positive ? std::abs(v) : v;
  }
  return x;
}

}  // namespace

CsObjective::CsObjective(Matrix a, Vector y) : a_(std::move(a)), y_(std::move(y)) {
  if (a_.rows() != y_.size()) throw std::invalid_argument("CsObjective: A rows must match y");
}

Vector CsObjective::residual(const Vector& x) const {
  if (x.size() != a_.cols()) throw std::invalid_argument("CsObjective: dimension mismatch");
  return sparse_aware_product(a_, x) - y_;
}

double CsObjective::eval(const Vector& x) const { return residual(x).squaredNorm(); }

Vector CsObjective::gradient(const Vector& x) const {
  return 2.0 * (a_.transpose() * residual(x));
}

Matrix CsObjective::hessian_block(const Vector& x, const IndexSet& rows,
                                  const IndexSet& cols) const {
  if (x.size() != a_.cols() || rows.ambient() != a_.cols() || cols.ambient() != a_.cols()) {
    throw std::invalid_argument("CsObjective: dimension mismatch");
  }
  const Matrix ar = a_(Eigen::all, rows.indices());
  if (rows == cols) {
    Matrix h = Matrix::Zero(ar.cols(), ar.cols());
    h.selfadjointView<Eigen::Lower>().rankUpdate(ar.transpose(), 2.0);
    return h.selfadjointView<Eigen::Lower>();
  }
  return 2.0 * (ar.transpose() * a_(Eigen::all, cols.indices()));
}

double ncp_phi(double a, double b) {
  const double ap = pos(a), bp = pos(b), an = pos(-a), bn = pos(-b);
  return ap * ap * bp * bp + an * an + bn * bn;
}

LcpObjective::LcpObjective(Matrix m, Vector q) : m_(std::move(m)), q_(std::move(q)) {
  if (m_.rows() != m_.cols() || m_.rows() != q_.size()) {
    throw std::invalid_argument("LcpObjective: M must be square and match q");
  }
}

Vector LcpObjective::slack(const Vector& x) const {
  if (x.size() != m_.cols()) throw std::invalid_argument("LcpObjective: dimension mismatch");
  return sparse_aware_product(m_, x) + q_;
}

double LcpObjective::eval(const Vector& x) const {
  const Vector w = slack(x);
  double f = 0.0;
  for (Index i = 0; i < x.size(); ++i) f += ncp_phi(x[i], w[i]);
  return f;
}

Vector LcpObjective::gradient(const Vector& x) const {
  const Vector w = slack(x);
  const Index n = x.size();
  Vector u(n), v(n);
  for (Index i = 0; i < n; ++i) {
    const double ap = pos(x[i]), bp = pos(w[i]);
    u[i] = 2.0 * ap * bp * bp - 2.0 * pos(-x[i]);
    v[i] = 2.0 * ap * ap * bp - 2.0 * pos(-w[i]);
  }
  return u + m_.transpose() * v;
}

Matrix LcpObjective::hessian_block(const Vector& x, const IndexSet& rows,
                                   const IndexSet& cols) const {
  if (rows.ambient() != m_.rows() || cols.ambient() != m_.rows()) {
    throw std::invalid_argument("LcpObjective: dimension mismatch");
  }
  const Vector w = slack(x);
  const Index n = x.size();
  Vector daa(n), dab(n), dbb(n);
  for (Index i = 0; i < n; ++i) {
    const double a = x[i], b = w[i];
    daa[i] = 2.0 * ind_pos(a) * pos(b) * pos(b) + 2.0 * ind_neg(a);
    dab[i] = 4.0 * pos(a) * pos(b);
    dbb[i] = 2.0 * pos(a) * pos(a) * ind_pos(b) + 2.0 * ind_neg(b);
  }
  const Matrix mr = m_(Eigen::all, rows.indices());
  const Matrix mc = m_(Eigen::all, cols.indices());
  Matrix h = mr.transpose() * (dbb.asDiagonal() * mc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index i = rows[r];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Index j = cols[c];
      double extra = dab[i] * m_(i, j) + m_(j, i) * dab[j];
      if (i == j) extra += daa[i];
      h(static_cast<Index>(r), static_cast<Index>(c)) += extra;
    }
  }
  return h;
}

CsObjective cs_objective(const CsInstance& inst) { return CsObjective(inst.a, inst.y); }

LcpObjective lcp_objective(const LcpInstance& inst) { return LcpObjective(inst.m_mat, inst.q); }

std::unique_ptr<ObjectiveModel> make_objective(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& p) -> std::unique_ptr<ObjectiveModel> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CsInstance>) {
          return std::make_unique<CsObjective>(cs_objective(p));
        } else {
          return std::make_unique<LcpObjective>(lcp_objective(p));
        }
      },
      inst);
}

const Vector& ground_truth(const ProblemInstance& inst) {
  return std::visit([](const auto& p) -> const Vector& { return p.x_star; }, inst);
}

std::string kind_name(const ProblemInstance& inst) {
  return std::holds_alternative<CsInstance>(inst) ? "cs" : "lcp";
}

CsInstance gen_cs(Index n, Index m, Index s_star, std::uint64_t seed, double noise_factor) {
  if (n < 1 || m < 1 || s_star < 0 || s_star > m || m > n) {
    throw std::invalid_argument("gen_cs: need 0 <= s_star <= m <= n and m >= 1");
  }
  if (!(noise_factor >= 0.0)) throw std::invalid_argument("gen_cs: noise_factor must be >= 0");
  Rng rng(seed);
  CsInstance inst;
  inst.a = gaussian(m, n, rng);
  normalize_columns(inst.a, rng);
  inst.x_star = sparse_signal(n, s_star, rng, /*positive=*/false);
  inst.y = inst.a * inst.x_star;
  if (noise_factor > 0.0) {
    for (Index i = 0; i < m; ++i) inst.y[i] += noise_factor * rng.normal();
  }
  inst.s_star = s_star;
  inst.seed = seed;
  inst.noise_factor = noise_factor;
  return inst;
}

OmegaCheck check_omega(const Matrix& m, const Vector& q, const Vector& x) {
  const Vector w = m * x + q;
  OmegaCheck c;
  c.min_x = x.size() ? x.minCoeff() : 0.0;
  c.min_w = w.size() ? w.minCoeff() : 0.0;
  c.complementarity = std::abs(x.dot(w));
  return c;
}

LcpInstance gen_lcp(Index n, Index m, Index s_star, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n || s_star < 0 || s_star > n) {
    throw std::invalid_argument("gen_lcp: need 1 <= m <= n and 0 <= s_star <= n");
  }
  Rng rng(seed);
  Matrix z = gaussian(n, m, rng);
  normalize_columns(z, rng);
  Matrix mm = z * z.transpose();
  mm = (0.5 * (mm + mm.transpose())).eval();

  LcpInstance inst;
  inst.rank = m;
  inst.s_star = s_star;
  inst.seed = seed;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector x = sparse_signal(n, s_star, rng, /*positive=*/true);
    const Vector mx = mm * x;
    Vector q(n);
    for (Index i = 0; i < n; ++i) q[i] = x[i] > 0.0 ? -mx[i] : std::abs(mx[i]);
    if (check_omega(mm, q, x).ok(1e-10)) {
      inst.m_mat = std::move(mm);
      inst.q = std::move(q);
      inst.x_star = std::move(x);
      return inst;
    }
  }
  throw std::runtime_error("gen_lcp: could not draw a complementary ground truth");
}

double psnr(const Vector& x, const Vector& x_star) {
  if (x.size() != x_star.size()) throw std::invalid_argument("psnr: dimension mismatch");
  const double err2 = (x - x_star).squaredNorm();
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(x.size()) / err2);
}

}  // namespace nl0r
