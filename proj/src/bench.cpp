#include "hyperlab/bench.hpp"

#include "hyperlab/rng.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <ostream>
#include <thread>

namespace hyperlab {

CoordSet<double> two_blob_cloud(Index n, std::uint64_t seed, double separation, double sigma)
{
  if (n < 1) {
    throw Error(Errc::BadParams, "two_blob_cloud needs n >= 1");
  }
  CounterRng rng(seed);
  Eigen::MatrixXd pts(2, n);
  for (Index i = 0; i < n; ++i) {
    const double cx = (i % 2 == 0) ? 0.0 : separation;
    pts(0, i) = cx + sigma * rng.normal();
    pts(1, i) = sigma * rng.normal();
  }
  return CoordSet<double>(std::move(pts));
}

namespace {

struct Job {
  Index n;
  std::uint64_t seed;
  bool early;
};

BenchRecord run_job(const Job& job)
{
  CounterRng keys(job.seed);
  const auto a = two_blob_cloud(job.n, keys.next());
  const auto b = two_blob_cloud(job.n, keys.next());
  const std::uint64_t order_seed = keys.next();

  KernelStats stats;
  const auto start = std::chrono::steady_clock::now();
  const auto h = job.early ? hausdorff_early_break(a, b, order_seed, &stats) : hausdorff_naive(a, b, &stats);
  const auto stop = std::chrono::steady_clock::now();

  BenchRecord rec;
  rec.kernel = job.early ? "early_break" : "naive";
  rec.n = a.size();
  rec.m = b.size();
  rec.seed = job.seed;
  rec.value = h.value();
  rec.inner_visits = stats.inner_visits;
  rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  return rec;
}

} // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& config)
{
  std::vector<Job> jobs;
  for (Index n : config.sizes) {
    for (std::uint64_t seed : config.seeds) {
      jobs.push_back({n, seed, false});
      jobs.push_back({n, seed, true});
    }
  }
  std::vector<BenchRecord> records(jobs.size());
  unsigned workers = config.workers ? config.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      records[i] = run_job(jobs[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  return records;
}

void write_bench_records(std::ostream& os, const std::vector<BenchRecord>& records)
{
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["kernel"] = r.kernel;
    j["n"] = r.n;
    j["m"] = r.m;
    j["seed"] = r.seed;
    j["value"] = r.value;
    j["inner_visits"] = r.inner_visits;
    j["wall_ns"] = r.wall_ns;
    os << j.dump() << '\n';
  }
}

SuiteResult bench_checks(const std::vector<BenchRecord>& records, double max_visit_ratio)
{
  std::map<std::pair<Index, std::uint64_t>, std::pair<const BenchRecord*, const BenchRecord*>> runs;
  for (const auto& r : records) {
    auto& slot = runs[{r.n, r.seed}];
    (r.kernel == "naive" ? slot.first : slot.second) = &r;
  }
  SuiteResult out;
  out.suite = "bench";
  for (const auto& [key, pair] : runs) {
    const auto* naive = pair.first;
    const auto* early = pair.second;
    const std::string tag = "n=" + std::to_string(key.first) + " seed=" + std::to_string(key.second);
    if (naive == nullptr || early == nullptr) {
      out.checks.push_back(skip_check("kernel pair " + tag, "missing kernel record"));
      continue;
    }
    const double ratio = static_cast<double>(early->inner_visits) / static_cast<double>(naive->inner_visits);
    const double speedup = static_cast<double>(naive->wall_ns) / static_cast<double>(std::max<std::int64_t>(early->wall_ns, 1));
    out.checks.push_back(make_check("visit ratio " + tag, {ratio}, {max_visit_ratio}, 0.0, Relation::Le));
    out.checks.push_back(make_check("speedup " + tag, {speedup}, {1.0}, 0.0, Relation::Gt));
    out.checks.push_back(make_check("value match " + tag, {early->value}, {naive->value}, 0.0));
    out.wall_ns += naive->wall_ns + early->wall_ns;
  }
  return out;
}

} // namespace hyperlab
