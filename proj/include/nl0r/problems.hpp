#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>

#include "nl0r/core_types.hpp"

namespace nl0r {

/// Compressed-sensing data: y = A x* (+ optional noise), unit-norm columns.
struct CsInstance {
  Matrix a;       // m x n
  Vector y;       // m
  Vector x_star;  // n, s_star nonzeros
  Index s_star = 0;
  std::uint64_t seed = 0;
  double noise_factor = 0.0;

  Index n() const { return a.cols(); }
  Index m() const { return a.rows(); }
};

/// Sparse LCP data: find x >= 0 with Mx + q >= 0 and <x, Mx + q> = 0.
/// M = Z Z^T for an n x m Gaussian Z with unit-norm columns.
struct LcpInstance {
  Matrix m_mat;   // n x n, symmetric PSD
  Vector q;
  Vector x_star;
  Index rank = 0;  // columns of Z
  Index s_star = 0;
  std::uint64_t seed = 0;

  Index n() const { return m_mat.rows(); }
};

using ProblemInstance = std::variant<CsInstance, LcpInstance>;

/// f(x) = ||Ax - y||^2.
class CsObjective final : public ObjectiveModel {
 public:
  CsObjective(Matrix a, Vector y);

  Index dimension() const override { return a_.cols(); }
  double eval(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  /// 2 A_{:,rows}^T A_{:,cols}; independent of x.
  Matrix hessian_block(const Vector& x, const IndexSet& rows,
                       const IndexSet& cols) const override;

  /// Ax - y, touching only the nonzero columns when x is sparse.
  Vector residual(const Vector& x) const;
  const Matrix& matrix() const { return a_; }
  const Vector& measurements() const { return y_; }

 private:
  Matrix a_;
  Vector y_;
};

/// f(x) = sum_i phi(x_i, (Mx + q)_i) with the NCP function
///   phi(a, b) = a+^2 b+^2 + (-a)+^2 + (-b)+^2.
///
/// f is C^1 but only piecewise C^2. hessian_block returns the generalized
/// Hessian with every indicator taken as 0 at a kink.
class LcpObjective final : public ObjectiveModel {
 public:
  LcpObjective(Matrix m, Vector q);

  Index dimension() const override { return m_.rows(); }
  double eval(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian_block(const Vector& x, const IndexSet& rows,
                       const IndexSet& cols) const override;

  /// w = Mx + q.
  Vector slack(const Vector& x) const;

 private:
  Matrix m_;
  Vector q_;
};

double ncp_phi(double a, double b);

CsObjective cs_objective(const CsInstance& inst);
LcpObjective lcp_objective(const LcpInstance& inst);

std::unique_ptr<ObjectiveModel> make_objective(const ProblemInstance& inst);
const Vector& ground_truth(const ProblemInstance& inst);
std::string kind_name(const ProblemInstance& inst);

/// Gaussian sensing matrix with normalized columns; x* has s_star iid normal
/// nonzeros at uniformly random positions. Requires s_star <= m <= n.
CsInstance gen_cs(Index n, Index m, Index s_star, std::uint64_t seed, double noise_factor = 0.0);

/// M = Z Z^T with Z (n x m) Gaussian, unit-norm columns; x* has s_star
/// positive half-normal entries; q_i = -(Mx*)_i on supp(x*), |(Mx*)_i| elsewhere.
LcpInstance gen_lcp(Index n, Index m, Index s_star, std::uint64_t seed);

struct OmegaCheck {
  double min_x = 0.0;
  double min_w = 0.0;
  double complementarity = 0.0;  // |<x, Mx + q>|
  bool ok(double tol) const { return min_x >= -tol && min_w >= -tol && complementarity <= tol; }
};

OmegaCheck check_omega(const Matrix& m, const Vector& q, const Vector& x);

/// 10 log10(n / ||x - x*||^2); +infinity on exact recovery.
double psnr(const Vector& x, const Vector& x_star);

/// Raised for malformed instance documents and failed load-time invariants.
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kInstanceFormatVersion = 1;

/// Versioned JSON document; matrices row-major.
std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace nl0r
