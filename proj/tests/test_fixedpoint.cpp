#include "doctest.h"
#include "oracles.hpp"

#include "hyperlab/families.hpp"
#include "hyperlab/fixedpoint.hpp"
#include "hyperlab/suites.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

using namespace hyperlab;

namespace {

// Point labels 1..N live at indices 0..N-1.
MultiMap on_naturals(const MetricSpace& x, const std::function<std::vector<long long>(long long)>& f)
{
  std::vector<SubsetHandle> images;
  for (Index i = 0; i < x.size(); ++i) {
    std::vector<Index> idx;
    for (long long k : f(i + 1)) {
      idx.push_back(static_cast<Index>(k - 1));
    }
    images.push_back(x.subset(idx));
  }
  return MultiMap(x, images);
}

Errc code_of(const std::function<void()>& f)
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

TEST_CASE("residuals")
{
  auto x = naturals(16).space;
  auto halve = on_naturals(x, [](long long k) { return std::vector<long long>{(k + 1) / 2}; });
  CHECK(residual(x, halve, 0) == 0.0);
  CHECK(residual(x, halve, 15) == 8.0);
  CHECK_THROWS_AS(MultiMap(x, {x.singleton(0)}), Error);
}

TEST_CASE("staged search on naturals")
{
  SUBCASE("ceil(k/2) fixes the first point")
  {
    auto x = naturals(16).space;
    auto t = almost_fixed_point_search(x, on_naturals(x, [](long long k) { return std::vector<long long>{(k + 1) / 2}; }), 64);
    CHECK(t.status == SearchStatus::Found);
    CHECK(t.point == Index{0});
    CHECK(t.final_residual == 0.0);
    CHECK(t.steps.size() == 1);
  }
  SUBCASE("capped successor fixes the last point")
  {
    auto x = naturals(8).space;
    auto t = almost_fixed_point_search(
      x, on_naturals(x, [](long long k) { return std::vector<long long>{std::min(k + 1, 8LL)}; }), 64);
    CHECK(t.found());
    CHECK(t.point == Index{7});
    REQUIRE(t.steps.size() == 2);
    CHECK(t.steps[0].point == 0);
    CHECK(t.steps[0].residual == 1.0);
  }
  SUBCASE("wrapped successor fails at the second stage")
  {
    auto x = naturals(8).space;
    auto t = almost_fixed_point_search(x, on_naturals(x, [](long long k) { return std::vector<long long>{k % 8 + 1}; }), 64);
    CHECK(t.status == SearchStatus::NotFound);
    CHECK(t.failed_stage == Index{2});
    CHECK_FALSE(t.point.has_value());
  }
  SUBCASE("a stage budget can run out")
  {
    auto x = oracle::line({0, 0.25, 1});
    auto f = MultiMap::from_point_images(x, {1, 0, 0});
    auto t = almost_fixed_point_search(x, f, 3);
    CHECK(t.status == SearchStatus::Exhausted);
    CHECK(t.steps.size() == 3);
    CHECK_THROWS_AS(almost_fixed_point_search(x, f, 0), Error);
  }
}

TEST_CASE("search succeeds exactly when some residual vanishes")
{
  CounterRng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.between(2, 9);
    auto x = random_space(n, rng.next(), trial % 2 ? RandomSpaceKind::Graph : RandomSpaceKind::Euclidean);
    std::vector<SubsetHandle> images;
    for (Index i = 0; i < n; ++i) {
      images.push_back(x.subset(oracle::random_members(rng, n)));
    }
    MultiMap f(x, images);
    auto t = oracle::table_of(x);
    bool any_fixed = false;
    for (Index i = 0; i < n; ++i) {
      const double r = residual(x, f, i);
      CHECK(r == oracle::point_to_set(t, i, f(i).indices()));
      any_fixed = any_fixed || r == 0.0;
    }
    auto tr = almost_fixed_point_search(x, f, 64);
    CHECK(tr.found() == any_fixed);
    if (tr.found()) {
      CHECK(f(*tr.point).contains(*tr.point));
    }
  }
}

TEST_CASE("hyper search examples")
{
  auto x = naturals(8).space;
  auto id = on_naturals(x, [](long long k) { return std::vector<long long>{k}; });
  auto t1 = hyper_fixed_search(x, id, false, 64);
  CHECK(t1.point == Index{0});
  CHECK(t1.route == "direct");
  auto t1i = hyper_fixed_search(x, id, true, 64, Caps{});
  CHECK(t1i.point == Index{0});
  CHECK(t1i.route == "inverse");

  auto pairs = on_naturals(x, [](long long k) {
    return std::vector<long long>{std::min(k + 1, 8LL), std::min(k + 2, 8LL)};
  });
  auto t2 = hyper_fixed_search(x, pairs, false, 64);
  CHECK(t2.found());
  CHECK(t2.point == Index{7});

  auto rec = reciprocals(20).space;
  std::vector<SubsetHandle> nn{rec.subset({0, 1})};
  for (Index i = 1; i < rec.size(); ++i) {
    nn.push_back(rec.subset({i, i + 1 < rec.size() ? i + 1 : i - 1}));
  }
  auto t3 = hyper_fixed_search(rec, MultiMap(rec, nn), false, 64);
  CHECK(t3.found());
  CHECK(t3.steps.size() == 1);
  CHECK(t3.point == Index{0});
}

TEST_CASE("inverse route needs an injective map")
{
  auto x = naturals(4).space;
  auto constant = MultiMap::from_point_images(x, {0, 0, 1, 2});
  CHECK(code_of([&] { hyper_fixed_search(x, constant, true, 8, Caps{}); }) == Errc::NotInjective);
  CHECK_NOTHROW(hyper_fixed_search(x, constant, false, 8));
}

TEST_CASE("direct and inverse routes agree on injective maps")
{
  CounterRng rng(40);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = rng.between(2, 8);
    auto x = random_space(n, rng.next());
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    rng.shuffle(std::span<Index>(perm));
    auto f = MultiMap::from_point_images(x, perm);
    auto a = hyper_fixed_search(x, f, false, 64);
    auto b = hyper_fixed_search(x, f, true, 64, Caps{});
    CHECK(a.status == b.status);
    CHECK(a.point == b.point);
    CHECK(a.failed_stage == b.failed_stage);
  }
}

TEST_CASE("image modulus of the singleton map is the identity modulus")
{
  auto x = random_space(7, 3);
  auto f = MultiMap::from_point_images(x, {0, 1, 2, 3, 4, 5, 6});
  auto prof = image_modulus(x, f);
  for (const auto& [t, w] : prof.samples) {
    CHECK(w == t);
  }
}

TEST_CASE("joint continuity gap stays nonpositive")
{
  auto line = oracle::line({0, 1, 2, 5});
  CHECK(joint_continuity_gap(line) <= 1e-12);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto x = random_space(5, seed, seed % 2 ? RandomSpaceKind::Graph : RandomSpaceKind::Euclidean);
    CHECK(joint_continuity_gap(x) <= 1e-9);
    CHECK(joint_continuity_gap(random_space(14, seed), seed, 2000) <= 1e-9);
  }
  // x = y and A = B reach equality.
  CHECK(joint_continuity_gap(oracle::line({0, 3})) == 0.0);
}

TEST_CASE("snap_to_grid")
{
  CHECK(snap_to_grid(0.25, 3) == 0);
  CHECK(snap_to_grid(0.75, 3) == 1);
  CHECK(snap_to_grid(0.76, 3) == 2);
  CHECK(snap_to_grid(1.0, 3) == 2);
  CHECK_THROWS_AS(snap_to_grid(-1.0, 3), Error);
  CHECK_THROWS_AS(snap_to_grid(2.0, 3), Error);
  CHECK_THROWS_AS(unit_grid(1), Error);
}

TEST_CASE("convex demo")
{
  auto cg = make_convex_grid(17);
  CHECK(cg.ranges.size() == 153);

  auto half = convex_demo(cg, [](double x) { return x / 2; });
  CHECK(half.fixed_range == std::make_pair(Index{0}, Index{0}));
  CHECK(half.fixed_point == Index{0});
  CHECK(half.snapped[3] == 1);

  auto id = convex_demo(cg, [](double x) { return x; });
  CHECK(id.range_count == 153);
  CHECK(id.fixed_point.has_value());

  CHECK(code_of([&] { convex_demo(cg, [](double x) { return 1 - x; }); }) == Errc::NotMonotone);
  CHECK(code_of([&] { convex_demo(cg, [](double x) { return x < 0.5 ? 0.0 : 1.0; }); }) ==
        Errc::NotConvexPreserving);

  auto small = convex_demo(5, [](double x) { return 0.5 + x / 4; });
  REQUIRE(small.fixed_point.has_value());
  CHECK(small.snapped[static_cast<std::size_t>(*small.fixed_point)] == *small.fixed_point);
}
