#include "doctest.h"
#include "oracles.hpp"

#include "hyperlab/hausdorff.hpp"
#include "hyperlab/suites.hpp"

#include <numeric>

using namespace hyperlab;

namespace {

CoordSet<double> random_cloud(CounterRng& rng, Index n, Index dim)
{
  Eigen::MatrixXd pts(dim, n);
  for (Index j = 0; j < n; ++j) {
    for (Index c = 0; c < dim; ++c) {
      // A coarse lattice so clouds share points now and then.
      pts(c, j) = static_cast<double>(rng.below(6));
    }
  }
  return CoordSet<double>(pts);
}

} // namespace

TEST_CASE("directed and symmetric distance on a small line")
{
  auto x = oracle::line({0, 1, 2, 5});
  auto a = x.subset({0, 1});
  auto b = x.subset({2, 3});
  CHECK(directed_hausdorff(x, a, b).value() == 2.0);
  CHECK(directed_hausdorff(x, b, a).value() == 4.0);
  CHECK(hausdorff_naive(x, a, b).value() == 4.0);
  CHECK(hausdorff_early_break(x, a, b, 0).value() == 4.0);
}

TEST_CASE("kernels reject mixed inputs")
{
  auto x = oracle::line({0, 1});
  auto y = oracle::line({0, 1});
  try {
    hausdorff_naive(x, x.subset({0}), y.subset({1}));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::KindMismatch);
  }
  CoordSet<double> p2(Eigen::MatrixXd::Zero(2, 3));
  CoordSet<double> p3(Eigen::MatrixXd::Zero(3, 3));
  CHECK_THROWS_AS(hausdorff_naive(p2, p3), Error);
  CHECK_THROWS_AS(hausdorff_early_break(p2, p3, 1), Error);
  CHECK_THROWS_AS(CoordSet<double>(Eigen::MatrixXd(2, 0)), Error);
}

TEST_CASE("identical sets cost no inner visits")
{
  auto x = random_space(30, 4);
  auto a = x.subset({1, 5, 9, 22});
  KernelStats stats;
  CHECK(hausdorff_early_break(x, a, a, 3, &stats).value() == 0.0);
  CHECK(stats.inner_visits == 0);
  CHECK(hausdorff_naive(x, a, a).value() == 0.0);
}

TEST_CASE("early-break matches the brute-force oracle bit for bit")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto x = random_space(40, seed, seed % 2 ? RandomSpaceKind::Graph : RandomSpaceKind::Euclidean);
    auto t = oracle::table_of(x);
    CounterRng rng(seed * 7 + 1);
    for (int trial = 0; trial < 40; ++trial) {
      auto am = oracle::random_members(rng, x.size());
      auto bm = oracle::random_members(rng, x.size());
      auto a = x.subset(am);
      auto b = x.subset(bm);
      KernelStats naive_stats;
      KernelStats early_stats;
      const double h = hausdorff_naive(x, a, b, &naive_stats).value();
      CHECK(h == oracle::hausdorff(t, am, bm));
      CHECK(directed_hausdorff(x, a, b).value() == oracle::directed(t, am, bm));
      CHECK(hausdorff_early_break(x, a, b, rng.next(), &early_stats).value() == h);
      CHECK(early_stats.inner_visits <= naive_stats.inner_visits);
    }
  }
}

TEST_CASE("coordinate kernels agree with each other and with the table kernels")
{
  CounterRng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Index dim = 1 + static_cast<Index>(rng.below(3));
    auto a = random_cloud(rng, 1 + static_cast<Index>(rng.below(12)), dim);
    auto b = random_cloud(rng, 1 + static_cast<Index>(rng.below(12)), dim);
    KernelStats ns;
    KernelStats es;
    const auto naive = hausdorff_naive(a, b, &ns);
    const auto early = hausdorff_early_break(a, b, rng.next(), &es);
    CHECK(naive.value() == early.value());
    CHECK(es.inner_visits <= ns.inner_visits);

    Eigen::MatrixXd joint(dim, a.size() + b.size());
    joint << a.points(), b.points();
    Eigen::MatrixXd table = euclidean_table<double>(joint);
    std::vector<Index> am(static_cast<std::size_t>(a.size()));
    std::vector<Index> bm(static_cast<std::size_t>(b.size()));
    std::iota(am.begin(), am.end(), Index{0});
    std::iota(bm.begin(), bm.end(), a.size());
    oracle::Table t(static_cast<std::size_t>(table.rows()), std::vector<double>(static_cast<std::size_t>(table.cols())));
    for (Index i = 0; i < table.rows(); ++i) {
      for (Index j = 0; j < table.cols(); ++j) {
        t[i][j] = table(i, j);
      }
    }
    CHECK(naive.value() == doctest::Approx(oracle::hausdorff(t, am, bm)).epsilon(1e-12));
  }
}

TEST_CASE("H is a metric on all nonempty subsets of small spaces")
{
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Index n = 3 + static_cast<Index>(seed % 4);
    auto x = random_space(n, seed + 20, seed % 2 ? RandomSpaceKind::Graph : RandomSpaceKind::Euclidean);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<SubsetHandle> all;
    for (std::uint64_t m = 1; m <= full; ++m) {
      all.push_back(SubsetHandle::from_mask(x.id(), n, m));
    }
    const double diam = x.diameter();
    for (const auto& a : all) {
      CHECK(hausdorff_naive(x, a, a).value() == 0.0);
      for (const auto& b : all) {
        const double hab = hausdorff_naive(x, a, b).value();
        CHECK(hab == hausdorff_naive(x, b, a).value());
        CHECK((hab > 0.0) == (a != b));
        CHECK(directed_hausdorff(x, a, b).value() <= hab);
        CHECK(hab <= diam);
        for (const auto& c : all) {
          CHECK(hab <= hausdorff_naive(x, a, c).value() + hausdorff_naive(x, c, b).value() + 1e-12);
        }
      }
    }
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        CHECK(hausdorff_naive(x, x.singleton(i), x.singleton(j)).value() == x(i, j));
      }
    }
  }
}
