#include "hyperlab/suites.hpp"

#include "hyperlab/families.hpp"
#include "hyperlab/fixedpoint.hpp"
#include "hyperlab/hyperspace.hpp"
#include "hyperlab/io.hpp"
#include "hyperlab/metric_core.hpp"
#include "hyperlab/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_set>

namespace hyperlab {

MetricSpace random_space(Index n, std::uint64_t seed, RandomSpaceKind kind)
{
  if (n < 1) {
    throw Error(Errc::BadParams, "random_space needs n >= 1");
  }
  CounterRng rng(seed);
  if (kind == RandomSpaceKind::Euclidean) {
    Eigen::MatrixXd pts(2, n);
    for (Index i = 0; i < n; ++i) {
      pts(0, i) = rng.uniform();
      pts(1, i) = rng.uniform();
    }
    return make_metric_space<double>(euclidean_table<double>(pts));
  }
  DistanceMatrix<double> d = DistanceMatrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = 0.5 + rng.uniform();
    }
  }
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
      }
    }
  }
  return make_metric_space<double>(d);
}

namespace {

using Checks = std::vector<Check>;

RandomSpaceKind alternate(std::uint64_t trial)
{
  return trial % 2 == 0 ? RandomSpaceKind::Euclidean : RandomSpaceKind::Graph;
}

std::string n_tag(long long n) { return " N=" + std::to_string(n); }

Index positive(SuiteParams& p, const std::string& key, long long fallback, long long min_value = 1)
{
  const long long v = p.get_int(key, fallback);
  if (v < min_value) {
    throw Error(Errc::BadConfig, key + " must be >= " + std::to_string(min_value));
  }
  return static_cast<Index>(v);
}

std::vector<Index> iota_indices(Index n)
{
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = i;
  }
  return v;
}

// Largest |ω(t) - g(t)| over the realized t of a profile.
double profile_gap(const ModulusProfile<double>& prof, const std::function<double(double)>& g)
{
  double worst = 0.0;
  for (const auto& [t, w] : prof.samples) {
    worst = std::max(worst, std::abs(w - g(t)));
  }
  return worst;
}

bool nondecreasing(const ModulusProfile<double>& prof)
{
  for (std::size_t i = 1; i < prof.samples.size(); ++i) {
    if (prof.samples[i].second < prof.samples[i - 1].second) {
      return false;
    }
  }
  return true;
}

// Consecutive drops v[i] - v[i+1]; all positive iff strictly decreasing.
std::vector<double> drops(const std::vector<double>& v)
{
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i) {
    out.push_back(v[i - 1] - v[i]);
  }
  return out;
}

void trend_check(Checks& out, const std::string& name, const std::vector<double>& values)
{
  if (values.size() < 2) {
    out.push_back(skip_check(name, "needs at least two family sizes"));
    return;
  }
  out.push_back(make_check(name, drops(values), {0.0}, 0.0, Relation::Gt));
}

template <typename F>
bool raises(Errc code, F&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

// ---------------------------------------------------------------------------

void suite_thm3_1(SuiteParams& p, Checks& out)
{
  const Index maps = positive(p, "maps", 100);
  const Index max_n = positive(p, "max_n", 8, 2);
  CounterRng rng(p.get_seed("seed", 31));
  Caps caps = caps_from_env();

  double worst = 0.0;
  Index checked = 0;
  bool monotone = true;
  for (Index t = 0; t < maps; ++t) {
    const Index nd = rng.between(2, max_n);
    const Index nc = rng.between(2, max_n);
    const auto dom = random_space(nd, rng.next(), alternate(static_cast<std::uint64_t>(t)));
    const auto cod = random_space(nc, rng.next(), alternate(static_cast<std::uint64_t>(t) + 1));
    std::vector<Index> images;
    for (Index x = 0; x < nd; ++x) {
      images.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(nc))));
    }
    const auto rep = modulus_transfer_report(dom, cod, PointMap(dom, cod, std::move(images)), caps);
    worst = std::max(worst, rep.max_discrepancy);
    monotone = monotone && nondecreasing(rep.base) && nondecreasing(rep.hyper);
    ++checked;
  }
  out.push_back(make_check("max |omega_F - omega_f| at realized t", {worst}, {0.0}, kModulusTol, Relation::Le));
  out.push_back(make_check("random maps checked", {double(checked)}, {double(maps)}, 0.0));
  out.push_back(flag_check("omega_f and omega_F nondecreasing", monotone));

  const auto x = random_space(6, rng.next());
  const auto id = modulus_transfer_report(x, x, PointMap::identity(x, x), caps);
  out.push_back(make_check("identity map discrepancy", {id.max_discrepancy}, {0.0}, 0.0));
  out.push_back(make_check("identity map omega(t) - t", {profile_gap(id.hyper, [](double s) { return s; })}, {0.0},
                           0.0));

  DistanceMatrix<double> uniform = DistanceMatrix<double>::Ones(3, 3) - DistanceMatrix<double>::Identity(3, 3);
  const auto tri = make_metric_space(uniform);
  const auto cyc = modulus_transfer_report(tri, tri, PointMap(tri, tri, {1, 2, 0}), caps);
  out.push_back(make_check("3-cycle on uniform 3-point space discrepancy", {cyc.max_discrepancy}, {0.0}, 0.0));
}

void suite_ex3_2(SuiteParams& p, Checks& out)
{
  const auto sizes = p.get_int_list("N_values", {4, 8, 16});
  const double eps = p.get_double("eps", 0.5);
  const std::uint64_t order_seed = p.get_seed("seed", 0);

  std::vector<double> deltas;
  for (long long n_top : sizes) {
    if (n_top < 1) {
      throw Error(Errc::BadConfig, "N_values entries must be >= 1");
    }
    const auto b = tangent_grid(n_top);
    const auto& a = subset_sequence(b, "A_n");
    const auto& f = *b.companion_map;
    const auto& cod = *b.codomain;

    std::vector<double> base;
    std::vector<double> base_expected;
    std::vector<double> lifted;
    for (long long n = 1; n < n_top; ++n) {
      const auto& an = a[static_cast<std::size_t>(n - 1)];
      const auto& an1 = a[static_cast<std::size_t>(n)];
      base.push_back(hausdorff_early_break(b.space, an, an1, order_seed).value());
      base_expected.push_back(1.0 / static_cast<double>((n + 1) * (n + 2)));
      lifted.push_back(hausdorff_early_break(cod, induced_apply(f, an), induced_apply(f, an1), order_seed).value());
    }
    if (base.empty()) {
      out.push_back(skip_check("H(A_n, A_n+1)" + n_tag(n_top), "no consecutive pairs"));
    } else {
      out.push_back(make_check("H(A_n, A_n+1) = 1/((n+1)(n+2))" + n_tag(n_top), base, base_expected, 1e-12));
      out.push_back(make_check("H'(F(A_n), F(A_n+1)) = 1" + n_tag(n_top), lifted, {1.0}, 0.0));
    }

    const auto prof = modulus_profile(b.space, cod, f);
    const double expected = 1.0 / static_cast<double>(n_top * (n_top + 1));
    const auto ds = prof.delta_star(eps);
    const double measured = ds.is_infinite() ? INFINITY : ds.value();
    out.push_back(make_check("delta*(" + format_double(eps) + ") of f" + n_tag(n_top), {measured}, {expected}, 1e-12));
    const double outer = b.space(2 * n_top - 1, 2 * n_top);
    out.push_back(make_check("omega_f at outermost gap" + n_tag(n_top), {prof.omega_at(outer)}, {1.0}, 0.0,
                             Relation::Ge));
    deltas.push_back(measured);
  }
  trend_check(out, "delta* strictly decreasing in N", deltas);
}

void suite_cor3_3(SuiteParams& p, Checks& out)
{
  const auto sizes = p.get_int_list("N_values", {5, 10, 20});
  const double eps = p.get_double("eps", 0.4);
  const Index scale_n = positive(p, "scale_n", 5, 2);
  const Caps caps = caps_from_env();

  std::vector<double> backward;
  for (long long n : sizes) {
    if (n < 2) {
      throw Error(Errc::BadConfig, "N_values entries must be >= 2");
    }
    const auto d = naturals(n).space;
    const auto dp = reciprocals(n).space;
    const auto id = iota_indices(static_cast<Index>(n));
    const double expected = 1.0 / static_cast<double>(n * (n - 1));

    const auto bwd = modulus_profile(dp, d, std::span<const Index>(id)).delta_star(eps);
    const auto fwd = modulus_profile(d, dp, std::span<const Index>(id)).delta_star(eps);
    out.push_back(make_check("delta*(eps) for (X,d')->(X,d)" + n_tag(n), {bwd.value()}, {expected}, 1e-12));
    out.push_back(make_check("delta*(eps) for (X,d)->(X,d')" + n_tag(n), {fwd.value()}, {1.0}, 0.0));
    backward.push_back(bwd.value());

    if (n > caps.exhaustive_max_n) {
      out.push_back(skip_check("delta*(eps) for (C(X),H')->(C(X),H)" + n_tag(n),
                               "N above exhaustive cap " + std::to_string(caps.exhaustive_max_n)));
      continue;
    }
    const auto rep = uniform_equivalence_profile(d, dp, caps);
    out.push_back(make_check("delta*(eps) for (C(X),H')->(C(X),H)" + n_tag(n),
                             {rep.hyper_backward.delta_star(eps).value()}, {expected}, 1e-12));
    out.push_back(make_check("delta*(eps) for (C(X),H)->(C(X),H')" + n_tag(n),
                             {rep.hyper_forward.delta_star(eps).value()}, {1.0}, 0.0));
  }
  trend_check(out, "backward delta* strictly decreasing in N", backward);

  const auto d = naturals(scale_n).space;
  const auto d2 = make_metric_space<double>(2.0 * d.table());
  const auto twice = uniform_equivalence_profile(d, d2, caps);
  const auto dbl = [](double t) { return 2.0 * t; };
  const auto half = [](double t) { return t / 2.0; };
  out.push_back(make_check("d'=2d: omega(t)=2t and t/2, both levels",
                           {profile_gap(twice.base_forward, dbl), profile_gap(twice.base_backward, half),
                            profile_gap(twice.hyper_forward, dbl), profile_gap(twice.hyper_backward, half)},
                           {0.0}, 1e-12));
  const auto same = uniform_equivalence_profile(d, d, caps);
  const auto ident = [](double t) { return t; };
  out.push_back(make_check("d'=d: identity profiles, both levels",
                           {profile_gap(same.base_forward, ident), profile_gap(same.base_backward, ident),
                            profile_gap(same.hyper_forward, ident), profile_gap(same.hyper_backward, ident)},
                           {0.0}, 0.0));
}

void suite_ex4_2(SuiteParams& p, Checks& out)
{
  const auto sizes = p.get_int_list("N_values", {10, 20, 40});
  std::vector<double> recip;
  for (long long n : sizes) {
    if (n < 2) {
      throw Error(Errc::BadConfig, "N_values entries must be >= 2");
    }
    const auto nat = naturals(n).space;
    const auto rec = reciprocals(n).space;
    out.push_back(make_check("uniform_discreteness_scale(NATURALS)" + n_tag(n),
                             {uniform_discreteness_scale(nat, nat.whole()).value()}, {1.0}, 0.0));
    std::vector<double> iso;
    for (Index x = 0; x < nat.size(); ++x) {
      iso.push_back(isolation(nat, x));
    }
    out.push_back(make_check("I(k) = 1 on NATURALS" + n_tag(n), iso, {1.0}, 0.0));
    const double v = uniform_discreteness_scale(rec, rec.whole()).value();
    out.push_back(make_check("uniform_discreteness_scale(RECIPROCALS) = 1/(N(N-1))" + n_tag(n), {v},
                             {1.0 / static_cast<double>(n * (n - 1))}, 1e-12));
    recip.push_back(v);
  }
  trend_check(out, "RECIPROCALS scale strictly decreasing in N", recip);
}

void suite_ex4_4(SuiteParams& p, Checks& out)
{
  const Index m_pairs = positive(p, "M", 50, 2);
  const double eps_pairs = p.get_double("eps_pairs", 0.5);
  const Index radial_m = positive(p, "radial_M", 5);
  const Index radial_n = positive(p, "radial_N", 50, 2);
  const double eps_radial = p.get_double("eps_radial", 0.1);
  const std::uint64_t order_seed = p.get_seed("seed", 0);

  const auto pb = ortho_scaled(m_pairs, 1);
  const auto& pairs = subset_sequence(pb, "pair_0_en");
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double h = hausdorff_early_break(pb.space, pairs[i], pairs[j], order_seed).value();
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  }
  out.push_back(make_check("pairwise H({0,e_m},{0,e_k}) = 1 (min, max)", {lo, hi}, {1.0}, 1e-12));

  const auto view = materialize(pb.space, pairs);
  const auto none = cauchy_subsequence_at_scale(view.metric(), PointSequence(view.metric(), iota_indices(view.size())),
                                                eps_pairs);
  out.push_back(flag_check("no eps-Cauchy subsequence of pair_0_en at eps=" + format_double(eps_pairs), !none));

  const auto rb = ortho_scaled(radial_m, radial_n);
  const auto& radial = point_sequence(rb, "e1_over_n");
  std::vector<double> iso;
  for (Index i = 0; i < radial.size(); ++i) {
    iso.push_back(isolation(rb.space, radial[i]));
  }
  bool falling = true;
  for (std::size_t i = 1; i < iso.size(); ++i) {
    falling = falling && iso[i] <= iso[i - 1];
  }
  const double last_gap =
    1.0 / static_cast<double>(radial_n - 1) - 1.0 / static_cast<double>(radial_n);
  out.push_back(flag_check("isolation along e_1/n nonincreasing", falling));
  out.push_back(make_check("I(e_1/N) = 1/(N-1) - 1/N", {iso.back()}, {last_gap}, 1e-12));

  const auto sub = cauchy_subsequence_at_scale(rb.space, radial, eps_radial);
  out.push_back(flag_check("eps-Cauchy subsequence of e_1/n at eps=" + format_double(eps_radial), sub.has_value()));
  if (sub) {
    double spread = 0.0;
    for (Index a : *sub) {
      for (Index b : *sub) {
        spread = std::max(spread, rb.space(radial[a], radial[b]));
      }
    }
    out.push_back(make_check("Cauchy subsequence length", {double(sub->size())},
                             {double((radial.size() + 1) / 2)}, 0.0, Relation::Ge));
    out.push_back(make_check("Cauchy subsequence max pairwise distance", {spread}, {eps_radial}, 0.0, Relation::Lt));
  }
}

void suite_thm4_5(SuiteParams& p, Checks& out)
{
  const Index n = positive(p, "N", 8, 2);
  const auto grid = p.get_double_list("grid", {0.1, 0.25, 0.5});
  const auto space = naturals(n).space;

  const auto prof = hyper_atsuji_shadow(space, singleton_embed(space), std::span<const double>(grid));
  std::vector<double> packing;
  for (const auto& v : prof.packing) {
    packing.push_back(v.is_infinite() ? INFINITY : v.value());
  }
  std::vector<double> sizes(prof.limit_set_sizes.begin(), prof.limit_set_sizes.end());
  out.push_back(make_check("singletons: packing radius at every (delta, eps)", packing, {1.0}, 0.0));
  out.push_back(make_check("singletons: delta-limit set sizes", sizes, {0.0}, 0.0));

  std::vector<SubsetHandle> members = singleton_embed(space).members();
  members.push_back(space.whole());
  const CollectionSpec with_whole(space, members);
  const auto view = materialize(space, members);
  std::vector<double> to_whole;
  std::vector<double> expected;
  for (Index k = 1; k <= n; ++k) {
    to_whole.push_back(view.metric()(k - 1, n));
    expected.push_back(static_cast<double>(std::max(k - 1, n - k)));
  }
  out.push_back(make_check("H({k}, X) = max(k-1, N-k)", to_whole, expected, 0.0));
  const auto prof2 = hyper_atsuji_shadow(space, with_whole, std::span<const double>(grid));
  const auto minp = prof2.min_packing();
  out.push_back(make_check("singletons + X: min packing radius", {minp.is_infinite() ? INFINITY : minp.value()},
                           {0.0}, 0.0, Relation::Gt));

  members = singleton_embed(space).members();
  members.erase(members.begin());
  const CollectionSpec missing(space, members);
  out.push_back(flag_check("missing singleton raises MISSING_SINGLETONS", raises(Errc::MissingSingletons, [&] {
                             hyper_atsuji_shadow(space, missing, std::span<const double>(grid));
                           })));
}

void suite_thm4_6(SuiteParams& p, Checks& out)
{
  const Index n = positive(p, "N", 20, 3);
  const double delta = p.get_double("delta", 0.02);
  const Index spaces = positive(p, "spaces", 50);
  const Index max_n = positive(p, "max_n", 10, 2);
  const auto deltas = p.get_double_list("singleton_deltas", {0.05, 0.1, 0.2, 0.4});
  CounterRng rng(p.get_seed("seed", 46));

  const auto space = reciprocals(n).space;
  std::vector<SubsetHandle> windows;
  for (Index k = 0; k + 1 < n; ++k) {
    windows.push_back(space.subset({k, k + 1}));
  }
  const CollectionSpec c(space, windows);
  const auto rep = cluster_members_check(space, c, delta);
  out.push_back(make_check("window collection multiplicity", {double(rep.multiplicity)}, {2.0}, 0.0));
  out.push_back(make_check("window collection flagged members", {double(rep.flagged.size())}, {0.0}, 0.0,
                           Relation::Gt));
  out.push_back(make_check("window collection violators", {double(rep.violators.size())}, {0.0}, 0.0));

  Index violators = 0;
  Index flagged = 0;
  for (Index t = 0; t < spaces; ++t) {
    const auto x = random_space(rng.between(2, max_n), rng.next(), alternate(static_cast<std::uint64_t>(t)));
    const auto s = singleton_embed(x);
    for (double dl : deltas) {
      const auto r = cluster_members_check(x, s, dl);
      violators += static_cast<Index>(r.violators.size());
      flagged += static_cast<Index>(r.flagged.size());
    }
  }
  out.push_back(make_check("singleton collections: violators", {double(violators)}, {0.0}, 0.0));
  out.push_back(make_check("singleton collections: flagged members exercised", {double(flagged)}, {0.0}, 0.0,
                           Relation::Gt));
}

void suite_lemma5_1(SuiteParams& p, Checks& out)
{
  const Index spaces = positive(p, "spaces", 20);
  const Index n = positive(p, "n", 6, 1);
  CounterRng rng(p.get_seed("seed", 51));
  double worst = -INFINITY;
  for (Index t = 0; t < spaces; ++t) {
    const auto x = random_space(n, rng.next(), alternate(static_cast<std::uint64_t>(t)));
    worst = std::max(worst, joint_continuity_gap(x, rng.next()));
  }
  out.push_back(make_check("max |d(x,A)-d(y,B)| - (d(x,y)+H(A,B))", {worst}, {0.0}, 1e-9, Relation::Le));

  Eigen::MatrixXd pts(1, 4);
  pts << 0, 1, 2, 5;
  const auto line = make_metric_space<double>(euclidean_table<double>(pts));
  out.push_back(make_check("H({0},{5}) on {0,1,2,5}",
                           {hausdorff_naive(line, line.singleton(0), line.singleton(3)).value()}, {5.0}, 0.0));
}

// Naturals are labelled 1..N at indices 0..N-1.
MultiMap naturals_map(const MetricSpace& space, const std::function<std::vector<long long>(long long)>& f)
{
  std::vector<SubsetHandle> images;
  for (Index x = 0; x < space.size(); ++x) {
    std::vector<Index> idx;
    for (long long k : f(x + 1)) {
      idx.push_back(static_cast<Index>(k - 1));
    }
    images.push_back(space.subset(idx));
  }
  return MultiMap(space, std::move(images));
}

double label_of(const SearchTrace<double>& t) { return t.point ? static_cast<double>(*t.point + 1) : 0.0; }

void suite_thm5_2(SuiteParams& p, Checks& out)
{
  const Index n_max = positive(p, "nmax", 64);
  const Index trials = positive(p, "random_maps", 100);
  CounterRng rng(p.get_seed("seed", 52));

  const auto n16 = naturals(16).space;
  const auto halve = naturals_map(n16, [](long long k) { return std::vector<long long>{(k + 1) / 2}; });
  out.push_back(make_check("ceil(k/2): residual(1), residual(16)", {residual(n16, halve, 0), residual(n16, halve, 15)},
                           {0.0, 8.0}, 0.0));
  const auto t1 = almost_fixed_point_search(n16, halve, n_max);
  out.push_back(flag_check("ceil(k/2) on NATURALS(16): found", t1.found()));
  out.push_back(make_check("ceil(k/2) on NATURALS(16): point label, residual", {label_of(t1), t1.final_residual},
                           {1.0, 0.0}, 0.0));

  const auto n8 = naturals(8).space;
  const auto step = naturals_map(n8, [](long long k) { return std::vector<long long>{std::min(k + 1, 8LL)}; });
  const auto t2 = almost_fixed_point_search(n8, step, n_max);
  out.push_back(flag_check("k+1 capped on NATURALS(8): found", t2.found()));
  out.push_back(make_check("k+1 capped on NATURALS(8): point label, residual", {label_of(t2), t2.final_residual},
                           {8.0, 0.0}, 0.0));

  const auto wrap = naturals_map(n8, [](long long k) { return std::vector<long long>{k % 8 + 1}; });
  const auto t3 = almost_fixed_point_search(n8, wrap, n_max);
  out.push_back(flag_check("k+1 wrapped on NATURALS(8): NOT_FOUND", t3.status == SearchStatus::NotFound));
  out.push_back(make_check("k+1 wrapped on NATURALS(8): failing stage", {double(t3.failed_stage.value_or(0))},
                           {2.0}, 0.0));

  // Success exactly when some residual is zero, on random set-valued maps.
  Index agree = 0;
  for (Index t = 0; t < trials; ++t) {
    const Index n = rng.between(2, 10);
    const auto x = random_space(n, rng.next(), alternate(static_cast<std::uint64_t>(t)));
    std::vector<SubsetHandle> images;
    for (Index i = 0; i < n; ++i) {
      std::vector<Index> idx{static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))};
      if (rng.below(3) == 0) {
        idx.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
      }
      images.push_back(x.subset(idx));
    }
    const MultiMap f(x, std::move(images));
    double min_res = INFINITY;
    for (Index i = 0; i < n; ++i) {
      min_res = std::min(min_res, residual(x, f, i));
    }
    const auto tr = almost_fixed_point_search(x, f, n_max);
    const bool consistent = tr.found() == (min_res == 0.0) && (!tr.found() || tr.final_residual == 0.0);
    agree += consistent ? 1 : 0;
  }
  out.push_back(make_check("search succeeds iff min residual is 0 (random maps)", {double(agree)}, {double(trials)},
                           0.0));
}

void suite_cor5_3(SuiteParams& p, Checks& out)
{
  const Index n_max = positive(p, "nmax", 64);
  const auto n8 = naturals(8).space;
  const auto id = naturals_map(n8, [](long long k) { return std::vector<long long>{k}; });
  const auto t1 = hyper_fixed_search(n8, id, false, n_max);
  out.push_back(make_check("f(x)={x}: found at lowest index", {t1.found() ? double(*t1.point) : -1.0}, {0.0}, 0.0));

  const auto rec = reciprocals(20).space;
  std::vector<SubsetHandle> nn;
  for (Index x = 0; x < rec.size(); ++x) {
    Index best = x == 0 ? 1 : 0;
    for (Index y = 0; y < rec.size(); ++y) {
      if (y != x && rec(x, y) < rec(x, best)) {
        best = y;
      }
    }
    nn.push_back(rec.subset({x, best}));
  }
  const MultiMap fnn(rec, nn);
  const auto t2 = hyper_fixed_search(rec, fnn, false, n_max);
  out.push_back(make_check("f(x)={x, nearest}: found, stage, point",
                           {t2.found() ? 1.0 : 0.0, double(t2.steps.size()), double(t2.point.value_or(-1))},
                           {1.0, 1.0, 0.0}, 0.0));

  const auto pairs = naturals_map(n8, [](long long k) {
    return std::vector<long long>{std::min(k + 1, 8LL), std::min(k + 2, 8LL)};
  });
  std::vector<double> scores;
  for (Index x = 0; x < n8.size(); ++x) {
    scores.push_back(hausdorff_naive(n8, n8.singleton(x), pairs(x)).value());
  }
  out.push_back(make_check("f(k)={k+1,k+2} capped: H({k},f(k))", scores, {2, 2, 2, 2, 2, 2, 1, 0}, 0.0));
  const auto t3 = hyper_fixed_search(n8, pairs, false, n_max);
  out.push_back(flag_check("f(k)={k+1,k+2} capped: found", t3.found()));
  out.push_back(make_check("f(k)={k+1,k+2} capped: point label", {label_of(t3)}, {8.0}, 0.0));
}

void suite_thm5_4(SuiteParams& p, Checks& out)
{
  const Index maps = positive(p, "maps", 50);
  const Index max_n = positive(p, "max_n", 10, 2);
  const Index n_max = positive(p, "nmax", 64);
  CounterRng rng(p.get_seed("seed", 54));

  Index agree = 0;
  Index found = 0;
  double worst_residual = 0.0;
  for (Index t = 0; t < maps; ++t) {
    const Index n = rng.between(2, max_n);
    const auto x = random_space(n, rng.next(), alternate(static_cast<std::uint64_t>(t)));
    std::unordered_set<SubsetHandle, SubsetHash> used;
    std::vector<SubsetHandle> images;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (Index i = 0; i < n; ++i) {
      while (true) {
        std::uint64_t mask = rng.next() & full;
        if (rng.below(2) == 0) {
          mask &= ~(std::uint64_t{1} << i);
        }
        if (mask == 0) {
          continue;
        }
        auto s = SubsetHandle::from_mask(x.id(), n, mask);
        if (used.insert(s).second) {
          images.push_back(std::move(s));
          break;
        }
      }
    }
    const MultiMap f(x, std::move(images));
    const auto direct = hyper_fixed_search(x, f, false, n_max);
    const auto inverse = hyper_fixed_search(x, f, true, n_max);
    const bool same = direct.status == inverse.status && direct.found() == inverse.found() &&
                      (!direct.found() || (direct.final_residual == 0.0 && inverse.final_residual == 0.0));
    agree += same ? 1 : 0;
    if (inverse.found()) {
      ++found;
      worst_residual = std::max(worst_residual, residual(x, f, *inverse.point));
    }
  }
  out.push_back(make_check("direct and inverse routes agree", {double(agree)}, {double(maps)}, 0.0));
  out.push_back(make_check("inverse-route outcomes: max residual", {worst_residual}, {0.0}, 0.0));
  out.push_back(make_check("maps with a fixed point exercised", {double(found)}, {0.0}, 0.0, Relation::Gt));

  const auto n8 = naturals(8).space;
  const auto id = naturals_map(n8, [](long long k) { return std::vector<long long>{k}; });
  const auto t1 = hyper_fixed_search(n8, id, true, n_max);
  out.push_back(make_check("inverse route, f(x)={x}: point", {double(t1.point.value_or(-1))}, {0.0}, 0.0));

  const auto collide = naturals_map(n8, [](long long k) { return std::vector<long long>{std::min(k + 1, 8LL)}; });
  out.push_back(flag_check("colliding images raise NOT_INJECTIVE", raises(Errc::NotInjective, [&] {
                             hyper_fixed_search(n8, collide, true, n_max);
                           })));
}

// Continuous, nondecreasing, 1-Lipschitz map of [0,1] into itself, linear
// between grid points. Adjacent grid points then snap at most one index
// apart, which is what keeps range images contiguous.
std::function<double(double)> random_monotone_map(CounterRng& rng, Index grid_size)
{
  const double h = 1.0 / static_cast<double>(grid_size - 1);
  std::vector<double> knots{0.0};
  for (Index i = 1; i < grid_size; ++i) {
    knots.push_back(knots.back() + h * rng.uniform());
  }
  const double offset = rng.uniform() * (1.0 - knots.back());
  for (double& k : knots) {
    k = std::min(1.0, k + offset);
  }
  return [knots, grid_size](double x) {
    const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(grid_size - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), knots.size() - 2);
    const double w = pos - static_cast<double>(i);
    return knots[i] + w * (knots[i + 1] - knots[i]);
  };
}

void suite_thm5_5(SuiteParams& p, Checks& out)
{
  const Index demo_grid = positive(p, "grid", 17, 2);
  const Index random_grid = positive(p, "random_grid", 33, 2);
  const Index maps = positive(p, "maps", 100);
  CounterRng rng(p.get_seed("seed", 55));

  const auto cg = make_convex_grid(demo_grid);
  const auto half = convex_demo(cg, [](double x) { return x / 2.0; });
  const double lo = half.fixed_range ? double(half.fixed_range->first) : -1.0;
  const double hi = half.fixed_range ? double(half.fixed_range->second) : -1.0;
  out.push_back(make_check("x/2: fixed range bounds, fixed point", {lo, hi, double(half.fixed_point.value_or(-1))},
                           {0.0, 0.0, 0.0}, 0.0));

  const auto ident = convex_demo(cg, [](double x) { return x; });
  const auto pf = PointMap(cg.grid, cg.grid, ident.snapped);
  Index fixed_ranges = 0;
  for (const auto& r : cg.ranges) {
    fixed_ranges += induced_apply(pf, r) == r ? 1 : 0;
  }
  out.push_back(make_check("identity: every range fixed", {double(fixed_ranges)}, {double(ident.range_count)}, 0.0));

  out.push_back(flag_check("1-x rejected NOT_MONOTONE", raises(Errc::NotMonotone, [&] {
                             convex_demo(cg, [](double x) { return 1.0 - x; });
                           })));

  const auto rg = make_convex_grid(random_grid);
  Index preserved = 0;
  Index with_range = 0;
  Index with_point = 0;
  for (Index t = 0; t < maps; ++t) {
    const auto f = random_monotone_map(rng, random_grid);
    try {
      const auto rep = convex_demo(rg, f);
      ++preserved;
      with_range += rep.fixed_range ? 1 : 0;
      with_point += rep.fixed_point ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != Errc::NotConvexPreserving) {
        throw;
      }
    }
  }
  out.push_back(flag_check("jump map leaves a gap: NOT_CONVEX_PRESERVING", raises(Errc::NotConvexPreserving, [&] {
                             convex_demo(cg, [](double x) { return x < 0.5 ? 0.0 : 1.0; });
                           })));
  out.push_back(make_check("random monotone maps: convexity preserved", {double(preserved)}, {double(maps)}, 0.0));
  out.push_back(make_check("random monotone maps: fixed range found", {double(with_range)}, {double(maps)}, 0.0));
  out.push_back(make_check("random monotone maps: fixed point inside range", {double(with_point)}, {double(maps)},
                           0.0));
}

void suite_hausdorff_oracle(SuiteParams& p, Checks& out)
{
  const Index trials = positive(p, "trials", 1000);
  const Index seeds = positive(p, "seeds", 20);
  const Index n = positive(p, "n", 200);
  const std::uint64_t seed = p.get_seed("seed", 7);

  const auto random_members = [](CounterRng& rng, Index size) {
    const double density = rng.uniform();
    std::vector<Index> idx;
    for (Index i = 0; i < size; ++i) {
      if (rng.uniform() < density) {
        idx.push_back(i);
      }
    }
    if (idx.empty()) {
      idx.push_back(rng.between(0, size - 1));
    }
    return idx;
  };
  const auto columns = [](const CoordSet<double>& c, const std::vector<Index>& idx) {
    Eigen::MatrixXd pts(c.dim(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      pts.col(static_cast<Index>(k)) = c.points().col(idx[k]);
    }
    return CoordSet<double>(std::move(pts));
  };

  Index subset_match = 0;
  Index coord_match = 0;
  std::uint64_t naive_visits = 0;
  std::uint64_t early_visits = 0;
  CounterRng keys(seed);
  for (Index s = 0; s < seeds; ++s) {
    const auto bundle = uniform_random(n, seed + static_cast<std::uint64_t>(s));
    const auto& coords = *bundle.coords;
    CounterRng rng = keys.split();
    for (Index t = 0; t < trials; ++t) {
      const auto ia = random_members(rng, n);
      const auto ib = random_members(rng, n);
      const auto a = bundle.space.subset(ia);
      const auto b = bundle.space.subset(ib);
      const std::uint64_t order = rng.next();
      KernelStats ns;
      KernelStats es;
      const double hn = hausdorff_naive(bundle.space, a, b, &ns).value();
      const double he = hausdorff_early_break(bundle.space, a, b, order, &es).value();
      subset_match += hn == he ? 1 : 0;
      naive_visits += ns.inner_visits;
      early_visits += es.inner_visits;

      const auto ca = columns(coords, ia);
      const auto cb = columns(coords, ib);
      coord_match += hausdorff_naive(ca, cb).value() == hausdorff_early_break(ca, cb, order).value() ? 1 : 0;
    }
  }
  const double total = static_cast<double>(trials * seeds);
  out.push_back(make_check("subset kernel: early_break == naive (bit-exact)", {double(subset_match)}, {total}, 0.0));
  out.push_back(make_check("coordinate kernel: early_break == naive (bit-exact)", {double(coord_match)}, {total}, 0.0));
  out.push_back(make_check("subset kernel: early_break visits <= naive visits",
                           {static_cast<double>(early_visits)}, {static_cast<double>(naive_visits)}, 0.0,
                           Relation::Le));
}

void suite_metric_axioms(SuiteParams& p, Checks& out)
{
  const Index spaces = positive(p, "spaces", 20);
  const Index n = positive(p, "n", 6);
  const Index iso_spaces = positive(p, "iso_spaces", 50);
  const Index iso_max_n = positive(p, "iso_max_n", 12);
  CounterRng rng(p.get_seed("seed", 2));
  Caps caps = caps_from_env();

  double worst_triangle = -INFINITY;
  Index asym = 0;
  Index identity_bad = 0;
  Index kernel_mismatch = 0;
  Index bound_bad = 0;
  for (Index t = 0; t < spaces; ++t) {
    const auto x = random_space(n, rng.next(), alternate(static_cast<std::uint64_t>(t)));
    const auto subsets = enumerate_subsets(x, caps);
    const Index m = static_cast<Index>(subsets.size());
    const double diam = x.diameter();
    DistanceMatrix<double> h(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        const auto& a = subsets[static_cast<std::size_t>(i)];
        const auto& b = subsets[static_cast<std::size_t>(j)];
        h(i, j) = hausdorff_naive(x, a, b).value();
        if (hausdorff_early_break(x, a, b, rng.next()).value() != h(i, j)) {
          ++kernel_mismatch;
        }
        const double dir = directed_hausdorff(x, a, b).value();
        if (!(dir <= h(i, j)) || !(h(i, j) <= diam)) {
          ++bound_bad;
        }
        if ((h(i, j) == 0.0) != (i == j)) {
          ++identity_bad;
        }
      }
    }
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) {
        asym += h(i, j) != h(j, i) ? 1 : 0;
        for (Index k = 0; k < m; ++k) {
          worst_triangle = std::max(worst_triangle, h(i, k) - (h(i, j) + h(j, k)));
        }
      }
    }
  }
  out.push_back(make_check("triangle excess max H(A,C) - H(A,B) - H(B,C)", {worst_triangle}, {0.0}, 1e-9,
                           Relation::Le));
  out.push_back(make_check("symmetry violations", {double(asym)}, {0.0}, 0.0));
  out.push_back(make_check("identity violations (H=0 iff A=B)", {double(identity_bad)}, {0.0}, 0.0));
  out.push_back(make_check("directed <= H <= diameter violations", {double(bound_bad)}, {0.0}, 0.0));
  out.push_back(make_check("early_break != naive", {double(kernel_mismatch)}, {0.0}, 0.0));

  Index iso_bad = 0;
  for (Index t = 0; t < iso_spaces; ++t) {
    const auto x = random_space(rng.between(1, iso_max_n), rng.next(), alternate(static_cast<std::uint64_t>(t)));
    const auto view = materialize(x, singleton_embed(x).members(), caps, rng.next());
    iso_bad += (view.metric().table().array() == x.table().array()).all() ? 0 : 1;
  }
  out.push_back(make_check("singleton embedding tables differing from base", {double(iso_bad)}, {0.0}, 0.0));
}

using SuiteFn = void (*)(SuiteParams&, Checks&);

const std::vector<std::pair<std::string, SuiteFn>>& registry()
{
  static const std::vector<std::pair<std::string, SuiteFn>> r{
    {"thm3-1", suite_thm3_1},
    {"ex3-2", suite_ex3_2},
    {"cor3-3", suite_cor3_3},
    {"ex4-2", suite_ex4_2},
    {"ex4-4", suite_ex4_4},
    {"thm4-5-shadow", suite_thm4_5},
    {"thm4-6-shadow", suite_thm4_6},
    {"lemma5-1", suite_lemma5_1},
    {"thm5-2", suite_thm5_2},
    {"cor5-3", suite_cor5_3},
    {"thm5-4", suite_thm5_4},
    {"thm5-5-demo", suite_thm5_5},
    {"hausdorff-oracle", suite_hausdorff_oracle},
    {"metric-axioms", suite_metric_axioms},
  };
  return r;
}

} // namespace

const std::vector<std::string>& suite_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) {
      v.push_back(name);
    }
    return v;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, const Config& config)
{
  for (const auto& [key, fn] : registry()) {
    if (key != name) {
      continue;
    }
    SuiteResult result;
    result.suite = key;
    SuiteParams params(config, key);
    const auto start = std::chrono::steady_clock::now();
    fn(params, result.checks);
    result.wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    result.config = params.echo();
    return result;
  }
  throw Error(Errc::UnknownSuite, "no suite named '" + std::string(name) + "'");
}

} // namespace hyperlab
