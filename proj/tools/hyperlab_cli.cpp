// hyperlab command-line front end.
//
//   hyperlab --suite ex4-4 [--suite ...|all] [--config f] [--out f] [--format json|csv] [--seed n]
//   hyperlab --bench [--config f] [--out f]
//   hyperlab suites
//   hyperlab space gen --family TANGENT_GRID --params 8 [--seed n] --out grid.sp
//   hyperlab hyperspace --space f.sp [--collection c.col] --out h.sp
//   hyperlab fixedpoint --space f.sp --map m.map [--nmax 64] [--route residual|direct|inverse] [--trace t.json]
//
// Exit status: 0 when every check passes, 1 when any check fails, 2 on errors.

#include "hyperlab/bench.hpp"
#include "hyperlab/config.hpp"
#include "hyperlab/families.hpp"
#include "hyperlab/fixedpoint.hpp"
#include "hyperlab/io.hpp"
#include "hyperlab/report.hpp"
#include "hyperlab/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace hyperlab;

constexpr int kExitError = 2;

// Writes to --out when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path)
  {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) {
        throw Error(Errc::Io, "cannot write " + path);
      }
    }
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void close()
  {
    if (file_) {
      file_->close();
      if (!*file_) {
        throw Error(Errc::Io, "write failed");
      }
    }
  }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<long long> parse_param_list(const std::string& text)
{
  std::vector<long long> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw Error(Errc::BadParams, "bad family parameter '" + item + "'");
    }
  }
  return out;
}

struct RunOptions {
  std::vector<std::string> suites;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool bench = false;
};

Config effective_config(const RunOptions& o)
{
  Config cfg = o.config_path.empty() ? Config{} : Config::load(o.config_path);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Errc::BadConfig, "--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) {
    for (const auto& name : suite_names()) {
      cfg.set(name + ".seed", std::to_string(*o.seed));
    }
    cfg.set("bench.seeds", std::to_string(*o.seed));
  }
  return cfg;
}

int run_suites(const RunOptions& o)
{
  const auto cfg = effective_config(o);
  const auto format = parse_report_format(o.format);
  std::vector<std::string> names;
  for (const auto& s : o.suites) {
    if (s == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    } else {
      names.push_back(s);
    }
  }
  std::vector<SuiteResult> results;
  for (const auto& n : names) {
    results.push_back(run_suite(n, cfg));
    const auto& r = results.back();
    std::cerr << (r.failed() ? "FAIL " : "PASS ") << r.suite << " (" << r.checks.size() << " checks, "
              << r.wall_ns / 1000000 << " ms)\n";
  }

  if (o.bench) {
    SuiteParams p(cfg, "bench");
    BenchConfig bc;
    bc.sizes.clear();
    for (long long v : p.get_int_list("sizes", {10000})) {
      bc.sizes.push_back(static_cast<Index>(v));
    }
    bc.seeds.clear();
    for (long long v : p.get_int_list("seeds", {1})) {
      bc.seeds.push_back(static_cast<std::uint64_t>(v));
    }
    bc.workers = static_cast<unsigned>(p.get_int("workers", 0));
    const double ratio = p.get_double("max_visit_ratio", 0.25);
    const auto records = run_bench(bc);
    auto summary = bench_checks(records, ratio);
    summary.config = p.echo();
    std::cerr << (summary.failed() ? "FAIL " : "PASS ") << "bench\n";

    const std::string path = p.get_string("records", "");
    if (!path.empty()) {
      Sink rec(path);
      write_bench_records(rec.stream(), records);
      rec.close();
    } else {
      write_bench_records(std::cerr, records);
    }
    results.push_back(std::move(summary));
  }

  if (results.empty()) {
    throw Error(Errc::BadConfig, "nothing to run: pass --suite <name> or --bench");
  }
  Sink sink(o.out);
  emit_report(sink.stream(), results, format);
  sink.close();
  return exit_code(results);
}

int run_space_gen(const std::string& family, const std::string& params, std::uint64_t seed, const std::string& out)
{
  FamilySpec spec{parse_family(family), parse_param_list(params), seed};
  const auto bundle = generate(spec);
  write_space_file(out, bundle.space);
  for (const auto& [name, seq] : bundle.named_sequences) {
    std::vector<SubsetHandle> members;
    if (const auto* subsets = std::get_if<std::vector<SubsetHandle>>(&seq)) {
      members = *subsets;
    } else {
      const auto& points = std::get<PointSequence>(seq);
      for (Index i = 0; i < points.size(); ++i) {
        members.push_back(bundle.space.singleton(points[i]));
      }
    }
    std::ofstream col(out + "." + name + ".col", std::ios::binary);
    if (!col) {
      throw Error(Errc::Io, "cannot write " + out + "." + name + ".col");
    }
    write_collection(col, members);
  }
  std::cout << family_name(spec.kind) << ": " << bundle.space.size() << " points -> " << out << '\n';
  return 0;
}

int run_hyperspace(const std::string& space_path, const std::string& collection_path, const std::string& out)
{
  const auto space = parse_space_file(space_path);
  std::optional<std::vector<SubsetHandle>> members;
  if (!collection_path.empty()) {
    members = parse_collection_file(collection_path, space).members();
  }
  const auto view = materialize(space, std::move(members));
  Sink sink(out);
  write_space(sink.stream(), view.metric());
  sink.close();
  std::cerr << view.size() << " members\n";
  return 0;
}

nlohmann::ordered_json number(double v)
{
  if (std::isfinite(v)) {
    return v;
  }
  return format_double(v);
}

int run_fixedpoint(const std::string& space_path, const std::string& map_path, Index n_max, const std::string& route,
                   const std::string& trace_path)
{
  const auto space = parse_space_file(space_path);
  const auto f = parse_map_file(map_path, space);
  SearchTrace<double> trace;
  if (route == "residual") {
    trace = almost_fixed_point_search(space, f, n_max);
  } else if (route == "direct" || route == "inverse") {
    trace = hyper_fixed_search(space, f, route == "inverse", n_max);
  } else {
    throw Error(Errc::BadParams, "unknown route '" + route + "'");
  }

  nlohmann::ordered_json j;
  j["route"] = trace.route;
  j["status"] = search_status_name(trace.status);
  j["point"] = trace.point ? nlohmann::ordered_json(*trace.point) : nlohmann::ordered_json(nullptr);
  j["point_label"] = trace.point ? nlohmann::ordered_json(space.label(*trace.point)) : nlohmann::ordered_json(nullptr);
  j["final_residual"] = trace.point ? number(trace.final_residual) : nlohmann::ordered_json(nullptr);
  j["failed_stage"] =
    trace.failed_stage ? nlohmann::ordered_json(*trace.failed_stage) : nlohmann::ordered_json(nullptr);
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"n", s.stage}, {"point", s.point}, {"residual", number(s.residual)}});
  }
  j["steps"] = std::move(steps);
  auto prof = nlohmann::ordered_json::array();
  for (const auto& [t, w] : image_modulus(space, f).samples) {
    prof.push_back({number(t), number(w)});
  }
  j["image_modulus"] = std::move(prof);

  if (!trace_path.empty()) {
    Sink sink(trace_path);
    sink.stream() << j.dump(2) << '\n';
    sink.close();
  }
  std::cout << search_status_name(trace.status);
  if (trace.point) {
    std::cout << " point " << *trace.point << " (" << space.label(*trace.point) << ") residual "
              << format_double(trace.final_residual);
  }
  if (trace.failed_stage) {
    std::cout << " at stage n=" << *trace.failed_stage;
  }
  std::cout << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"hyperlab: Hausdorff hyperspaces over finite metric spaces"};
  app.set_help_all_flag("--help-all", "Expand all help");

  RunOptions run;
  app.add_option("--suite", run.suites, "Suite to run (repeatable, or 'all')");
  app.add_option("--config", run.config_path, "Flat key=value config file")->check(CLI::ExistingFile);
  app.add_option("--set", run.overrides, "Config override key=value (repeatable)");
  app.add_option("--out", run.out, "Report path (default stdout)");
  app.add_option("--format", run.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", run.seed, "Seed for every suite and the benchmark");
  app.add_flag("--bench", run.bench, "Run the Hausdorff kernel benchmark");

  auto* list = app.add_subcommand("suites", "List suite names");

  auto* space_cmd = app.add_subcommand("space", "Space file utilities");
  auto* gen = space_cmd->add_subcommand("gen", "Generate a family space");
  space_cmd->require_subcommand(1);
  std::string family;
  std::string params;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--family", family, "NATURALS, RECIPROCALS, TANGENT_GRID, ORTHO_SCALED, UNIFORM_RANDOM")->required();
  gen->add_option("--params", params, "Comma-separated integers, e.g. 5,50")->required();
  gen->add_option("--seed", gen_seed, "Seed (UNIFORM_RANDOM)");
  gen->add_option("--out", gen_out, "Space file to write")->required();

  auto* hyper = app.add_subcommand("hyperspace", "Materialize a collection under H as a space file");
  std::string hyper_space;
  std::string hyper_col;
  std::string hyper_out;
  hyper->add_option("--space", hyper_space, "Space file")->required()->check(CLI::ExistingFile);
  hyper->add_option("--collection", hyper_col, "Collection file (default: all nonempty subsets)")
    ->check(CLI::ExistingFile);
  hyper->add_option("--out", hyper_out, "Output space file (default stdout)");

  auto* fp = app.add_subcommand("fixedpoint", "Staged fixed-point search for a set-valued map");
  std::string fp_space;
  std::string fp_map;
  Index fp_nmax = 64;
  std::string fp_route = "residual";
  std::string fp_trace;
  fp->add_option("--space", fp_space, "Space file")->required()->check(CLI::ExistingFile);
  fp->add_option("--map", fp_map, "Map file (i : j,k,...)")->required()->check(CLI::ExistingFile);
  fp->add_option("--nmax", fp_nmax, "Last stage n")->check(CLI::PositiveNumber);
  fp->add_option("--route", fp_route, "residual | direct | inverse")
    ->check(CLI::IsMember({"residual", "direct", "inverse"}));
  fp->add_option("--trace", fp_trace, "Write the trace as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : suite_names()) {
        std::cout << n << '\n';
      }
      return 0;
    }
    if (gen->parsed()) {
      return run_space_gen(family, params, gen_seed, gen_out);
    }
    if (hyper->parsed()) {
      return run_hyperspace(hyper_space, hyper_col, hyper_out);
    }
    if (fp->parsed()) {
      return run_fixedpoint(fp_space, fp_map, fp_nmax, fp_route, fp_trace);
    }
    if (run.suites.empty() && !run.bench) {
      std::cerr << app.help();
      return kExitError;
    }
    return run_suites(run);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
