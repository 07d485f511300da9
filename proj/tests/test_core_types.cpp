#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <set>

#include "nl0r/core_types.hpp"
#include "nl0r/random.hpp"

using namespace nl0r;

namespace {

std::set<Index> as_set(const IndexSet& s) { return {s.begin(), s.end()}; }

IndexSet random_set(Rng& rng, Index n) {
  std::vector<Index> idx;
  for (Index i = 0; i < n; ++i)
    if (rng.uniform() < 0.4) idx.push_back(i);
  return IndexSet(n, idx);
}

}  // namespace

TEST_CASE("index sets are sorted and deduplicated") {
  IndexSet s(10, {7, 2, 2, 9, 0, 7});
  CHECK(s.size() == 4);
  CHECK(std::vector<Index>(s.begin(), s.end()) == std::vector<Index>{0, 2, 7, 9});
  CHECK(s.contains(7));
  CHECK_FALSE(s.contains(3));
  CHECK(s.to_string() == "{0,2,7,9}");
  CHECK_THROWS_AS(IndexSet(3, {3}), IndexOutOfRange);
  CHECK_THROWS_AS(IndexSet(3, {-1}), IndexOutOfRange);
}

TEST_CASE("set algebra examples") {
  CHECK(set_difference(IndexSet(4, {1, 2, 3}), IndexSet(4, {2})) == IndexSet(4, {1, 3}));
  CHECK(complement(IndexSet(3, {0, 2})) == IndexSet(3, {1}));
  CHECK(set_difference(IndexSet(1), IndexSet(1, {0})).empty());
  CHECK(set_union(IndexSet(5, {0, 4}), IndexSet(5, {1})) == IndexSet(5, {0, 1, 4}));
  CHECK(set_intersection(IndexSet(5, {0, 1, 4}), IndexSet(5, {1, 2, 4})) == IndexSet(5, {1, 4}));
  CHECK(complement(IndexSet(0)).empty());
  CHECK(complement(IndexSet(4)) == IndexSet::full(4));
}

TEST_CASE("mixing ambient dimensions is an error") {
  CHECK_THROWS_AS(set_union(IndexSet(3), IndexSet(4)), IndexOutOfRange);
  CHECK_THROWS_AS(set_intersection(IndexSet(3), IndexSet(4)), IndexOutOfRange);
  CHECK_THROWS_AS(set_difference(IndexSet(3), IndexSet(4)), IndexOutOfRange);
}

TEST_CASE("set algebra laws on random sets") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(20));
    const IndexSet a = random_set(rng, n), b = random_set(rng, n);
    CHECK(complement(complement(a)) == a);
    CHECK(complement(set_union(a, b)) == set_intersection(complement(a), complement(b)));
    CHECK(complement(set_intersection(a, b)) == set_union(complement(a), complement(b)));
    CHECK(set_difference(a, b) == set_intersection(a, complement(b)));
    CHECK(set_union(a, complement(a)) == IndexSet::full(n));
    CHECK(set_intersection(a, complement(a)).empty());
    CHECK(set_intersection(a, b).subset_of(a));
    CHECK(a.subset_of(set_union(a, b)));

    std::set<Index> ref;
    for (Index i : a) ref.insert(i);
    for (Index i : b) ref.insert(i);
    CHECK(as_set(set_union(a, b)) == ref);
    auto idx = a.indices();
    for (std::size_t k = 1; k < idx.size(); ++k) CHECK(idx[k - 1] < idx[k]);
  }
}

TEST_CASE("support with and without tolerance") {
  CHECK(support(Vector{{0.0, 3.0, 0.0, -1.0}}) == IndexSet(4, {1, 3}));
  CHECK(support(Vector::Zero(2)).empty());
  CHECK(support(Vector{{1e-14, 2.0}}, 1e-10) == IndexSet(2, {1}));
}

TEST_CASE("support size equals the nonzero count") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x = Vector::Zero(30);
    for (Index i = 0; i < 30; ++i)
      if (rng.uniform() < 0.3) x[i] = rng.normal();
    CHECK(static_cast<Index>(support(x).size()) == count_nonzeros(x));
  }
}

TEST_CASE("gather and scatter are inverse on T") {
  const Vector x{{1.0, 2.0, 3.0, 4.0}};
  const IndexSet t(4, {1, 3});
  const Vector xt = gather(x, t);
  CHECK(xt.size() == 2);
  CHECK(xt[0] == 2.0);
  CHECK(xt[1] == 4.0);
  Vector out = Vector::Zero(4);
  scatter(xt, t, out);
  CHECK(out == Vector{{0.0, 2.0, 0.0, 4.0}});
}

TEST_CASE("finiteness check") {
  Vector x = Vector::Ones(3);
  CHECK(all_finite(x));
  x[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(x));
  x[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(x));
}

TEST_CASE("format_real round-trips") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.normal() * 20);
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("solver config defaults and validation") {
  const SolverConfig c;
  CHECK(c.sigma == 5e-5);
  CHECK(c.beta == 0.5);
  CHECK(c.tau0 == 0.5);
  CHECK(c.lambda_decay == 0.75);
  CHECK(c.lambda_init_fraction == 0.5);
  CHECK(c.max_iters == 2000);
  CHECK(c.residual_tol == 1e-6);
  CHECK(c.auto_lambda());
  CHECK_NOTHROW(c.validate());

  auto bad = [](auto mutate) {
    SolverConfig x;
    mutate(x);
    return x;
  };
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.sigma = 0.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.sigma = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.beta = 1.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.lambda_decay = 1.5; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.lambda_init_fraction = 0.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(bad([](SolverConfig& x) { x.tau0 = -1.0; }).validate(), std::invalid_argument);
  CHECK_NOTHROW(bad([](SolverConfig& x) { x.lambda_decay = 1.0; }).validate());
}

TEST_CASE("trace csv header and rows") {
  SolverTrace tr;
  TraceRecord r;
  r.k = 3;
  r.objective = 0.25;
  r.lambda = 1.0;
  r.tau = 0.5;
  r.support_size = 4;
  r.residual = 1e-3;
  r.alpha = 1.0;
  r.direction = DirectionKind::Newton;
  tr.records.push_back(r);
  CHECK(tr.to_csv() == "k,f,lambda,tau,T_size,residual,alpha,dir\n3,0.25,1,0.5,4,0.001,1,newton\n");
}
