#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nl0r {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = std::ptrdiff_t;

/// Raised when an index set is built or combined with out-of-range indices.
class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sorted, duplicate-free set of coordinate indices in [0, n).
///
/// The ambient dimension n travels with the set so that complements and
/// mixed-dimension combinations are checked rather than silently wrong.
class IndexSet {
 public:
  IndexSet() = default;

  /// Empty set over [0, n).
  explicit IndexSet(Index n);

  /// Builds a set from arbitrary (unsorted, possibly repeated) indices.
  IndexSet(Index n, std::vector<Index> indices);
  IndexSet(Index n, std::initializer_list<Index> indices);

  /// {0, 1, ..., n-1}.
  static IndexSet full(Index n);

  Index ambient() const { return n_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  bool contains(Index i) const;

  /// Every element of *this is also in other.
  bool subset_of(const IndexSet& other) const;

  std::span<const Index> indices() const { return idx_; }
  Index operator[](std::size_t k) const { return idx_[k]; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

  std::string to_string() const;

 private:
  Index n_ = 0;
  std::vector<Index> idx_;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet complement(const IndexSet& a);

/// { i : |x_i| > zero_tol }.
IndexSet support(const Vector& x, double zero_tol = 0.0);

/// x_T as a dense |T|-vector.
Vector gather(const Vector& x, const IndexSet& t);

/// Writes values into out at positions t.
void scatter(const Vector& values, const IndexSet& t, Vector& out);

/// Number of exact nonzeros.
Index count_nonzeros(const Vector& x);

bool all_finite(const Vector& x);

/// %.17g rendering; round-trips every finite double.
std::string format_real(double v);

/// Smooth part f of the regularized problem  min f(x) + lambda * ||x||_0.
///
/// Hessians are only ever requested as (rows, cols) blocks so that large
/// problems never build an n x n matrix.
class ObjectiveModel {
 public:
  virtual ~ObjectiveModel() = default;

  virtual Index dimension() const = 0;
  virtual double eval(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian_block(const Vector& x, const IndexSet& rows,
                               const IndexSet& cols) const = 0;
};

/// Tunables for the Newton solver and the proximal-gradient baseline.
/// Defaults follow the reference parameter choices.
struct SolverConfig {
  double sigma = 5e-5;                 // Armijo constant, in (0, 1/2)
  double beta = 0.5;                   // backtracking factor, in (0, 1)
  double tau0 = 0.5;
  double lambda0 = 0.0;                // <= 0 selects the automatic rule
  double lambda_decay = 0.75;          // r in (0, 1]
  double lambda_init_fraction = 0.5;   // c in (0, 1]
  double delta_small = 1e-10;          // used when the support did not grow
  double delta_large = 1e-4;           // used when new indices entered
  int max_iters = 2000;
  double residual_tol = 1e-6;
  double tau_adapt_factor = 1.25;
  int tau_adapt_period = 10;
  double lambda_floor_fraction = 1e-10;
  int max_backtracks = 50;
  std::uint64_t rng_seed = 0;

  bool auto_lambda() const { return !(lambda0 > 0.0); }

  /// Throws std::invalid_argument when a parameter leaves its admissible range.
  void validate() const;
};

enum class DirectionKind { None, Newton, Gradient };

const char* to_string(DirectionKind kind);

struct TraceRecord {
  int k = 0;
  double objective = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  std::size_t support_size = 0;   // |T_k|
  double residual = 0.0;          // ||F_tau(x^k; T_k)||
  double alpha = 0.0;             // step taken from x^k; 0 if none
  DirectionKind direction = DirectionKind::None;
  bool support_stable = false;    // T_k == T_{k-1}
  bool step_rejected = false;
  double wall_seconds = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;

  /// Per-iteration CSV: k,f,lambda,tau,T_size,residual,alpha,dir
  std::string to_csv() const;
};

}  // namespace nl0r
