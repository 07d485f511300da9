#include "nl0r/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <sstream>

namespace nl0r {

namespace {

void check_range(Index n, const std::vector<Index>& idx) {
  if (n < 0) throw std::invalid_argument("IndexSet: negative ambient dimension");
  for (Index i : idx) {
    if (i < 0 || i >= n) {
      throw IndexOutOfRange("IndexSet: index " + std::to_string(i) +
                            " outside [0, " + std::to_string(n) + ")");
    }
  }
}

void check_same_ambient(const IndexSet& a, const IndexSet& b) {
  if (a.ambient() != b.ambient()) {
    throw IndexOutOfRange("IndexSet: ambient dimensions differ (" +
                          std::to_string(a.ambient()) + " vs " +
                          std::to_string(b.ambient()) + ")");
  }
}

}  // namespace

IndexSet::IndexSet(Index n) : n_(n) {
  if (n < 0) throw std::invalid_argument("IndexSet: negative ambient dimension");
}

IndexSet::IndexSet(Index n, std::vector<Index> indices) : n_(n), idx_(std::move(indices)) {
  check_range(n_, idx_);
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
}

IndexSet::IndexSet(Index n, std::initializer_list<Index> indices)
    : IndexSet(n, std::vector<Index>(indices)) {}

IndexSet IndexSet::full(Index n) {
  IndexSet s(n);
  s.idx_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) s.idx_[static_cast<std::size_t>(i)] = i;
  return s;
}

bool IndexSet::contains(Index i) const {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

bool IndexSet::subset_of(const IndexSet& other) const {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (k) os << ',';
    os << idx_[k];
  }
  os << '}';
  return os.str();
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  check_same_ambient(a, b);
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(a.ambient(), std::move(out));
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  check_same_ambient(a, b);
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(a.ambient(), std::move(out));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  check_same_ambient(a, b);
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return IndexSet(a.ambient(), std::move(out));
}

IndexSet complement(const IndexSet& a) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(a.ambient()) - a.size());
  auto it = a.begin();
  for (Index i = 0; i < a.ambient(); ++i) {
    if (it != a.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return IndexSet(a.ambient(), std::move(out));
}

IndexSet support(const Vector& x, double zero_tol) {
  if (zero_tol < 0.0) throw std::invalid_argument("support: zero_tol must be >= 0");
  std::vector<Index> out;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > zero_tol) out.push_back(i);
  }
  return IndexSet(x.size(), std::move(out));
}

Vector gather(const Vector& x, const IndexSet& t) {
  Vector out(static_cast<Index>(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) out[static_cast<Index>(k)] = x[t[k]];
  return out;
}

void scatter(const Vector& values, const IndexSet& t, Vector& out) {
  for (std::size_t k = 0; k < t.size(); ++k) out[t[k]] = values[static_cast<Index>(k)];
}

Index count_nonzeros(const Vector& x) {
  Index c = 0;
  for (Index i = 0; i < x.size(); ++i) c += (x[i] != 0.0);
  return c;
}

bool all_finite(const Vector& x) { return x.allFinite(); }

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("SolverConfig: " + what); };
  if (!(sigma > 0.0 && sigma < 0.5)) fail("sigma must lie in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0, 1)");
  if (!(tau0 > 0.0)) fail("tau0 must be positive");
  if (!(lambda_decay > 0.0 && lambda_decay <= 1.0)) fail("lambda_decay must lie in (0, 1]");
  if (!(lambda_init_fraction > 0.0 && lambda_init_fraction <= 1.0))
    fail("lambda_init_fraction must lie in (0, 1]");
  if (!(delta_small > 0.0 && delta_large > 0.0)) fail("delta values must be positive");
  if (max_iters < 0) fail("max_iters must be >= 0");
  if (!(residual_tol >= 0.0)) fail("residual_tol must be >= 0");
  if (!(tau_adapt_factor >= 1.0)) fail("tau_adapt_factor must be >= 1");
  if (tau_adapt_period < 1) fail("tau_adapt_period must be >= 1");
  if (!(lambda_floor_fraction >= 0.0 && lambda_floor_fraction <= 1.0))
    fail("lambda_floor_fraction must lie in [0, 1]");
  if (max_backtracks < 0) fail("max_backtracks must be >= 0");
}

const char* to_string(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::Newton: return "newton";
    case DirectionKind::Gradient: return "gradient";
    case DirectionKind::None: break;
  }
  return "none";
}

std::string SolverTrace::to_csv() const {
  std::string out = "k,f,lambda,tau,T_size,residual,alpha,dir\n";
  for (const auto& r : records) {
    out += std::to_string(r.k);
    out += ',' + format_real(r.objective);
    out += ',' + format_real(r.lambda);
    out += ',' + format_real(r.tau);
    out += ',' + std::to_string(r.support_size);
    out += ',' + format_real(r.residual);
    out += ',' + format_real(r.alpha);
    out += ',';
    out += to_string(r.direction);
    out += '\n';
  }
  return out;
}

}  // namespace nl0r
