#include "doctest.h"
#include "oracles.hpp"

#include "hyperlab/families.hpp"
#include "hyperlab/metric_core.hpp"
#include "hyperlab/suites.hpp"

#include <cmath>
#include <limits>

using namespace hyperlab;

namespace {

DistanceMatrix<double> matrix_of(std::initializer_list<std::initializer_list<double>> rows)
{
  const auto n = static_cast<Index>(rows.size());
  DistanceMatrix<double> m(n, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) {
      m(i, j++) = v;
    }
    ++i;
  }
  return m;
}

template <typename F>
Errc code_of(F&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hyperlab::Error");
  return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("validate_metric accepts a two-point space")
{
  auto r = validate_metric<double>(matrix_of({{0, 1}, {1, 0}}), 1e-9);
  REQUIRE(r.ok());
  CHECK(r.space->size() == 2);
  CHECK(r.space->diameter() == 1.0);
}

TEST_CASE("validate_metric reports each axiom violation")
{
  SUBCASE("asymmetry")
  {
    auto r = validate_metric<double>(matrix_of({{0, 1}, {2, 0}}), 1e-9);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == MetricViolation{Errc::Asymmetry, 0, 1});
    CHECK(r.summary() == "ASYMMETRY(0,1)");
  }
  SUBCASE("triangle")
  {
    auto r = validate_metric<double>(matrix_of({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}), 1e-9);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == MetricViolation{Errc::TriangleViolation, 0, 2, 1});
  }
  SUBCASE("coincident points")
  {
    auto r = validate_metric<double>(matrix_of({{0, 0}, {0, 0}}), 1e-9);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == Errc::CoincidentPoints);
  }
  SUBCASE("nonzero diagonal")
  {
    auto r = validate_metric<double>(matrix_of({{0.5, 1}, {1, 0}}), 1e-9);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations[0] == MetricViolation{Errc::NonzeroDiagonal, 0});
  }
  SUBCASE("tolerance absorbs tiny triangle slack")
  {
    CHECK(validate_metric<double>(matrix_of({{0, 1, 2 + 1e-12}, {1, 0, 1}, {2 + 1e-12, 1, 0}}), 1e-9).ok());
  }
}

TEST_CASE("make_metric_space throws MetricError carrying the violations")
{
  try {
    make_metric_space<double>(matrix_of({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
    FAIL("no throw");
  } catch (const MetricError& e) {
    CHECK(e.code() == Errc::TriangleViolation);
    CHECK(e.violations().size() == 1);
  }
  CHECK(code_of([] { make_metric_space<double>(DistanceMatrix<double>(2, 3)); }) == Errc::InvalidArgument);
}

TEST_CASE("point_to_set_dist and eps_neighborhood on a line")
{
  auto x = oracle::line({0, 1, 2, 5});
  CHECK(point_to_set_dist(x, 3, x.subset({0, 1})) == 4.0);
  CHECK(eps_neighborhood(x, x.subset({0}), 1.5).indices() == std::vector<Index>{0, 1});
  CHECK(eps_neighborhood(x, x.subset({0}), 1.0).indices() == std::vector<Index>{0});
  CHECK(eps_neighborhood(x, x.subset({0}), 10.0).size() == 4);
  CHECK(code_of([&] { eps_neighborhood(x, x.subset({0}), 0.0); }) == Errc::InvalidArgument);

  auto other = oracle::line({0, 1, 2, 5});
  CHECK(code_of([&] { point_to_set_dist(x, 0, other.subset({1})); }) == Errc::KindMismatch);
}

TEST_CASE("isolation on reciprocals and small spaces")
{
  auto b = reciprocals(3);
  CHECK(isolation(b.space, 0) == doctest::Approx(0.5));
  CHECK(isolation(b.space, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(isolation(b.space, 2) == doctest::Approx(1.0 / 6.0));
  CHECK(isolation(oracle::line({0, 7}), 1) == 7.0);
  CHECK(code_of([] { isolation(oracle::line({3}), 0); }) == Errc::SingletonSpace);
}

TEST_CASE("limit_points_at_scale")
{
  auto r = reciprocals(10);
  auto lim = limit_points_at_scale(r.space, 0.2);
  REQUIRE(lim.has_value());
  CHECK(lim->size() == 9);
  CHECK_FALSE(lim->contains(0));
  CHECK_FALSE(limit_points_at_scale(naturals(10).space, 0.5).has_value());
  CHECK(limit_points_at_scale(naturals(10).space, 1.5)->size() == 10);
  CHECK_FALSE(limit_points_at_scale(oracle::line({1}), 1.0).has_value());
}

TEST_CASE("uniform discreteness scale")
{
  auto nat = naturals(100).space;
  CHECK(uniform_discreteness_scale(nat, nat.whole()).value() == 1.0);
  auto r = reciprocals(10);
  CHECK(uniform_discreteness_scale(r.space, r.space.whole()).value() == doctest::Approx(1.0 / 90.0).epsilon(1e-12));
  CHECK(uniform_discreteness_scale(r.space, r.space.singleton(4)).is_infinite());
}

TEST_CASE("atsuji_profile examples")
{
  const std::vector<double> half{0.5};
  auto nat = atsuji_profile(naturals(10).space, std::span<const double>(half));
  CHECK(nat.limit_set_sizes == std::vector<Index>{0});
  CHECK(nat.at(0, 0).value() == 1.0);
  CHECK(nat.min_isolation.value() == 1.0);

  const std::vector<double> fifth{0.2};
  auto rec = atsuji_profile(reciprocals(10).space, std::span<const double>(fifth));
  CHECK(rec.limit_set_sizes == std::vector<Index>{9});
  CHECK(rec.at(0, 0).is_infinite());

  auto single = atsuji_profile(oracle::line({2}), std::span<const double>(half));
  CHECK(single.min_isolation.is_infinite());
  CHECK(single.min_packing().is_infinite());

  const std::vector<double> bad{0.5, 0.5};
  CHECK(code_of([&] { atsuji_profile(naturals(3).space, std::span<const double>(bad)); }) == Errc::InvalidArgument);
}

TEST_CASE("cauchy_subsequence_at_scale")
{
  SUBCASE("constant sequence is taken whole")
  {
    auto x = oracle::line({0, 1});
    auto got = cauchy_subsequence_at_scale(x, PointSequence(x, {1, 1, 1, 1}), 0.1);
    REQUIRE(got);
    CHECK(got->size() == 4);
  }
  SUBCASE("reciprocals at 0.1")
  {
    auto r = reciprocals(20);
    const auto& seq = point_sequence(r, "reciprocals");
    auto got = cauchy_subsequence_at_scale(r.space, seq, 0.1);
    REQUIRE(got);
    CHECK(got->size() >= 10);
    CHECK(std::is_sorted(got->begin(), got->end()));
    auto t = oracle::table_of(r.space);
    for (Index p : *got) {
      for (Index q : *got) {
        CHECK(t[seq[p]][seq[q]] < 0.1);
      }
    }
    for (Index p = 10; p < 20; ++p) {
      for (Index q = 10; q < 20; ++q) {
        CHECK(t[p][q] < 0.1);
      }
    }
  }
  SUBCASE("spread points have none")
  {
    auto x = oracle::line({0, 10, 20});
    CHECK_FALSE(cauchy_subsequence_at_scale(x, PointSequence(x, {0, 1, 2}), 1.0));
  }
  SUBCASE("alternating two points returns one cluster")
  {
    auto x = oracle::line({0, 5});
    auto got = cauchy_subsequence_at_scale(x, PointSequence(x, {0, 1, 0, 1, 0, 1}), 1.0);
    REQUIRE(got);
    CHECK(*got == std::vector<Index>{0, 2, 4});
  }
  SUBCASE("foreign sequence")
  {
    auto x = oracle::line({0, 5});
    auto y = oracle::line({0, 5});
    CHECK(code_of([&] { cauchy_subsequence_at_scale(x, PointSequence(y, {0}), 1.0); }) == Errc::KindMismatch);
  }
}

TEST_CASE("point-to-set distance properties on random spaces")
{
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto kind = seed % 2 ? RandomSpaceKind::Graph : RandomSpaceKind::Euclidean;
    auto s = random_space(7, seed, kind);
    auto t = oracle::table_of(s);
    CounterRng rng(seed + 100);
    for (int trial = 0; trial < 30; ++trial) {
      auto am = oracle::random_members(rng, s.size());
      auto bm = oracle::random_members(rng, s.size());
      auto a = s.subset(am);
      auto b = s.subset(bm);
      for (Index x = 0; x < s.size(); ++x) {
        const double dx = point_to_set_dist(s, x, a);
        CHECK(dx == oracle::point_to_set(t, x, am));
        CHECK(point_to_set_dist(s, x, a.unite(b)) == std::min(dx, point_to_set_dist(s, x, b)));
        for (Index y = 0; y < s.size(); ++y) {
          // 1-Lipschitz in x
          CHECK(std::abs(dx - point_to_set_dist(s, y, a)) <= t[x][y] + 1e-12);
          // d(x, B) <= d(x, y) + d(y, B)
          CHECK(point_to_set_dist(s, x, b) <= t[x][y] + point_to_set_dist(s, y, b) + 1e-12);
        }
      }
      const double eps = 0.05 + rng.uniform();
      auto small = eps_neighborhood(s, a, eps);
      CHECK(a.is_subset_of(small));
      CHECK(small.is_subset_of(eps_neighborhood(s, a, eps * 2)));
    }
    for (Index x = 0; x < s.size(); ++x) {
      std::vector<Index> rest;
      for (Index y = 0; y < s.size(); ++y) {
        if (y != x) {
          rest.push_back(y);
        }
      }
      CHECK(isolation(s, x) == oracle::point_to_set(t, x, rest));
    }
    const double scale = uniform_discreteness_scale(s, s.whole()).value();
    CHECK_FALSE(limit_points_at_scale(s, scale).has_value());
    CHECK(limit_points_at_scale(s, scale * 1.0001).has_value());
  }
}

TEST_CASE("ExtReal arithmetic and ordering")
{
  using X = ExtReal<double>;
  CHECK(X(1.0) < X::infinity());
  CHECK((X(1.0) + X::infinity()).is_infinite());
  CHECK((X(1.0) + X(2.0)).value() == 3.0);
  CHECK(min(X(2.0), X::infinity()).value() == 2.0);
  CHECK_THROWS_AS(X(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)X::infinity().value(), std::domain_error);
}

TEST_CASE("SubsetHandle basics")
{
  auto x = naturals(70).space;
  auto a = x.subset({65, 3, 3, 0});
  CHECK(a.size() == 3);
  CHECK(a.indices() == std::vector<Index>{0, 3, 65});
  CHECK(a.contains(65));
  CHECK_FALSE(a.contains(70));
  CHECK(code_of([&] { x.subset(std::span<const Index>{}); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { x.subset({70}); }) == Errc::InvalidArgument);
  CHECK(SubsetHandle::from_mask(7, 4, 0b1010).indices() == std::vector<Index>{1, 3});
}

TEST_CASE("CounterRng is keyed by seed only")
{
  CounterRng a(42);
  CounterRng b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
  CounterRng c(42);
  CHECK(c.at(5) == CounterRng(42).at(5));
  CHECK(CounterRng(1).next() != CounterRng(2).next());
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.below(7);
    CHECK(v < 7);
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
