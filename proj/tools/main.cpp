// Command-line driver for building proximity graphs, generating ground truth,
// running range-search benchmarks, and analyzing dataset range characteristics.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "rangegraph/builder.hpp"
#include "rangegraph/datatools.hpp"
#include "rangegraph/eval.hpp"
#include "rangegraph/io.hpp"
#include "rangegraph/quantization.hpp"
#include "rangegraph/range_search.hpp"

namespace rg = rangegraph;

namespace {

int default_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

rg::DistanceKind parse_metric(const std::string& name) {
  if (name == "l2") return rg::DistanceKind::squared_l2;
  if (name == "ip") return rg::DistanceKind::neg_inner_product;
  throw CLI::ValidationError("--metric", "expected 'l2' or 'ip'");
}

rg::StopMetric parse_stop_metric(const std::string& name) {
  if (name == "d_visited") return rg::StopMetric::d_visited;
  if (name == "d_top1") return rg::StopMetric::d_top1;
  if (name == "d_top10") return rg::StopMetric::d_top10;
  if (name == "d_top10_over_d_start") return rg::StopMetric::d_top10_over_d_start;
  if (name == "d_visited_outside_beam") return rg::StopMetric::d_visited_outside_beam;
  if (name == "never") return rg::StopMetric::never;
  throw CLI::ValidationError("--stop-metric", "unknown early stopping metric: " + name);
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

struct BuildArgs {
  std::string data, out, metric = "l2";
  rg::BuildParams params;
  int threads = default_threads();
};

int run_build(const BuildArgs& args) {
  const auto points = rg::read_points(args.data, parse_metric(args.metric));
#if defined(_OPENMP)
  omp_set_num_threads(args.threads);
#endif
  const auto graph = rg::build_index(points, args.params);
  rg::save_graph(graph, args.out);
  std::cout << "built graph over " << points.size() << " points (R=" << args.params.max_degree
            << ", L=" << args.params.build_beam << ", alpha=" << args.params.alpha
            << ", seed=" << args.params.seed << ")\n"
            << "edges: " << graph.edge_count() << ", start points: "
            << graph.start_points().size() << "\nwrote " << args.out << "\n";
  return 0;
}

struct GtArgs {
  std::string data, queries, out, metric = "l2";
  double radius = 0.0;
  int threads = default_threads();
};

int run_gt(const GtArgs& args) {
  const auto points = rg::read_points(args.data, parse_metric(args.metric));
  const auto queries = rg::read_points(args.queries, parse_metric(args.metric));
  const auto gt = rg::brute_force_range(points, queries, args.radius, args.threads);
  rg::write_gt(gt, args.out);
  std::cout << "ground truth for " << gt.query_count() << " queries at radius " << args.radius
            << ": " << gt.total_results() << " total results\nwrote " << args.out << "\n";
  return 0;
}

struct SearchArgs {
  std::string data, queries, graph, gt, out, metric = "l2";
  std::string strategy = "baseline";
  std::string beams = "10,20,40,80";
  std::string stop_metric = "d_visited";
  double radius = 0.0;
  double lambda = 1.0;
  bool early_stop = false;
  std::uint32_t visit_limit = 20;
  double esr = 0.0;
  bool use_quantized = false;
  int threads = default_threads();
};

void write_cli_benchmark_csv(std::ostream& os, const std::vector<rg::BenchmarkRecord>& records,
                             int threads) {
  os << "strategy,b,early_stop,threads,qps,ap,dist_comps\n";
  for (const auto& r : records) {
    os << r.strategy << ',' << r.beam_width << ',' << (r.early_stop ? 1 : 0) << ',' << threads
       << ',' << r.qps << ',' << r.avg_precision << ',' << r.distance_comps << '\n';
  }
}

int run_search(const SearchArgs& args) {
  const auto kind = parse_metric(args.metric);
  const auto points = rg::read_points(args.data, kind);
  const auto queries = rg::read_points(args.queries, kind);
  const auto graph = rg::load_graph(args.graph);
  auto gt = rg::read_gt(args.gt, args.radius);

  std::optional<rg::QuantizedPointSet> codes;
  if (args.use_quantized) codes = rg::quantize(points);

  std::vector<rg::RangeParams> sweep;
  for (std::size_t b : parse_size_list(args.beams)) {
    rg::RangeParams params;
    params.radius = args.radius;
    params.beam_width = b;
    params.lambda = args.lambda;
    params.strategy = rg::strategy_from_string(args.strategy);
    params.early_stop.enabled = args.early_stop;
    params.early_stop.radius = args.radius;
    params.early_stop.visit_limit = args.visit_limit;
    params.early_stop.stop_radius = args.esr;
    params.early_stop.metric = parse_stop_metric(args.stop_metric);
    sweep.push_back(params);
  }

  const auto records = rg::run_benchmark(queries, graph, points, gt, sweep, args.threads,
                                         codes ? &*codes : nullptr);
  const auto frontier = rg::pareto_frontier(records);

  auto out = open_out(args.out);
  write_cli_benchmark_csv(out, records, args.threads);
  auto pareto_out = open_out(args.out + ".pareto.csv");
  write_cli_benchmark_csv(pareto_out, frontier, args.threads);

  std::cout << "strategy=" << args.strategy << " radius=" << args.radius << " queries="
            << queries.size() << " threads=" << args.threads << "\n";
  for (const auto& r : records) {
    std::cout << "  b=" << r.beam_width << (r.early_stop ? " es" : "") << "  qps=" << r.qps
              << "  ap=" << r.avg_precision << "  dist_comps=" << r.distance_comps << "\n";
  }
  std::cout << "pareto frontier: " << frontier.size() << " of " << records.size()
            << " records\nwrote " << args.out << " and " << args.out << ".pareto.csv\n";
  return 0;
}

struct RadiusArgs {
  std::string data, queries, out, metric = "l2";
  std::string radii;
  std::size_t sample = 0;
  std::uint64_t seed = 42;
  int threads = default_threads();
};

int run_analyze_radius(const RadiusArgs& args) {
  const auto kind = parse_metric(args.metric);
  const auto points = rg::read_points(args.data, kind);
  const auto queries = rg::read_points(args.queries, kind);
  const auto radii = parse_double_list(args.radii);
  const auto curve =
      rg::percent_captured(points, queries, radii, args.sample, args.seed, args.threads);
  auto out = open_out(args.out);
  rg::write_capture_csv(out, curve);
  std::cout << "percent captured over " << radii.size() << " radii ("
            << (args.sample ? "sampled " + std::to_string(args.sample) + " points" : "exact")
            << ")\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    std::cout << "  r=" << curve.radii[i] << "  captured=" << curve.fraction_captured[i] << "\n";
  }
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

struct FreqArgs {
  std::string gt, out;
};

int run_analyze_freq(const FreqArgs& args) {
  const auto gt = rg::read_gt(args.gt);
  const auto table = rg::frequency_distribution(gt);
  auto out = open_out(args.out);
  rg::write_frequency_csv(out, table);
  std::cout << "result-size distribution over " << gt.query_count() << " queries\n";
  for (std::size_t k = 0; k < table.bucket_bounds.size(); ++k) {
    std::cout << "  <=" << table.bucket_bounds[k] << ": " << table.counts[k] << "\n";
  }
  if (table.overflowed) std::cout << "  overflow (>100000): " << table.overflow << "\n";
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

struct SynthArgs {
  std::string out_data, out_queries, out_meta;
  std::size_t n = 10000, d = 16, clusters = 20;
  double spread = 1.0;
  std::uint64_t seed = 42;
};

int run_synth(const SynthArgs& args) {
  const auto synth = rg::synth_clustered(args.n, args.d, args.clusters, args.spread, args.seed);
  rg::write_points(synth.points, args.out_data);
  rg::write_points(synth.queries, args.out_queries);
  std::cout << "synthetic dataset: " << synth.points.size() << " points, "
            << synth.queries.size() << " queries, " << args.clusters << " clusters\n"
            << "suggested radii (few/mid/dense): " << synth.radii[0] << " " << synth.radii[1]
            << " " << synth.radii[2] << "\n";
  if (!args.out_meta.empty()) {
    auto meta = open_out(args.out_meta);
    meta << "key,value\n";
    meta << "radius_few," << synth.radii[0] << "\n";
    meta << "radius_mid," << synth.radii[1] << "\n";
    meta << "radius_dense," << synth.radii[2] << "\n";
    std::size_t centers = 0, members = 0, far = 0;
    for (auto g : synth.query_groups) {
      if (g == rg::QueryGroup::center) ++centers;
      else if (g == rg::QueryGroup::member) ++members;
      else ++far;
    }
    meta << "queries_center," << centers << "\n";
    meta << "queries_member," << members << "\n";
    meta << "queries_far," << far << "\n";
    std::cout << "wrote " << args.out_meta << "\n";
  }
  std::cout << "wrote " << args.out_data << " and " << args.out_queries << "\n";
  return 0;
}

struct ParetoArgs {
  std::string in, out;
};

int run_pareto(const ParetoArgs& args) {
  std::ifstream in(args.in);
  if (!in) throw std::runtime_error("cannot open " + args.in);
  const auto records = rg::read_benchmark_csv(in);
  const auto frontier = rg::pareto_frontier(records);
  auto out = open_out(args.out);
  rg::write_benchmark_csv(out, frontier);
  std::cout << "kept " << frontier.size() << " of " << records.size()
            << " records\nwrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"range retrieval over graph-based vector indices"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "build a proximity graph from a point file");
  build->add_option("--data", build_args.data, "point file (.fbin/.u8bin/.i8bin)")->required();
  build->add_option("--out", build_args.out, "output graph file")->required();
  build->add_option("-R,--max-degree", build_args.params.max_degree, "max out-degree");
  build->add_option("-L,--build-beam", build_args.params.build_beam, "construction beam width");
  build->add_option("--alpha", build_args.params.alpha, "pruning slack (>= 1.0)");
  build->add_option("--seed", build_args.params.seed, "RNG seed");
  build->add_option("--metric", build_args.metric, "l2 or ip");
  build->add_option("--threads", build_args.threads, "worker threads");
  build->add_flag("--sequential{false}", build_args.params.parallel,
                  "insert points one at a time (deterministic reference mode)");

  GtArgs gt_args;
  auto* gt = app.add_subcommand("gt", "exact range ground truth by brute force");
  gt->add_option("--data", gt_args.data)->required();
  gt->add_option("--queries", gt_args.queries)->required();
  gt->add_option("--radius", gt_args.radius)->required();
  gt->add_option("--out", gt_args.out)->required();
  gt->add_option("--metric", gt_args.metric, "l2 or ip");
  gt->add_option("--threads", gt_args.threads);

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "benchmark a strategy over a beam-width sweep");
  search->add_option("--data", search_args.data)->required();
  search->add_option("--queries", search_args.queries)->required();
  search->add_option("--graph", search_args.graph)->required();
  search->add_option("--gt", search_args.gt)->required();
  search->add_option("--radius", search_args.radius)->required();
  search->add_option("--strategy", search_args.strategy, "baseline, greedy or doubling");
  search->add_option("--beams", search_args.beams, "comma-separated initial beam widths");
  search->add_option("--lambda", search_args.lambda, "continuation fraction in (0,1]");
  search->add_flag("--early-stop", search_args.early_stop, "enable early stopping");
  search->add_option("--vl", search_args.visit_limit, "early-stop visit limit");
  search->add_option("--esr", search_args.esr, "early-stopping radius");
  search->add_option("--stop-metric", search_args.stop_metric,
                     "d_visited, d_top1, d_top10, d_top10_over_d_start, "
                     "d_visited_outside_beam or never");
  search->add_flag("--quantize", search_args.use_quantized,
                   "search 8-bit quantized vectors, rerank exactly");
  search->add_option("--threads", search_args.threads);
  search->add_option("--out", search_args.out, "benchmark CSV path")->required();

  RadiusArgs radius_args;
  auto* analyze_radius =
      app.add_subcommand("analyze-radius", "fraction of the dataset captured per radius");
  analyze_radius->add_option("--data", radius_args.data)->required();
  analyze_radius->add_option("--queries", radius_args.queries)->required();
  analyze_radius->add_option("--radii", radius_args.radii, "comma-separated ascending radii")
      ->required();
  analyze_radius->add_option("--sample", radius_args.sample, "point sample size (0 = exact)");
  analyze_radius->add_option("--seed", radius_args.seed);
  analyze_radius->add_option("--metric", radius_args.metric, "l2 or ip");
  analyze_radius->add_option("--threads", radius_args.threads);
  analyze_radius->add_option("--out", radius_args.out)->required();

  FreqArgs freq_args;
  auto* analyze_freq =
      app.add_subcommand("analyze-freq", "result-size distribution of a ground-truth file");
  analyze_freq->add_option("--gt", freq_args.gt)->required();
  analyze_freq->add_option("--out", freq_args.out)->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a clustered synthetic dataset");
  synth->add_option("--n", synth_args.n, "number of points");
  synth->add_option("--d", synth_args.d, "dimension");
  synth->add_option("--clusters", synth_args.clusters);
  synth->add_option("--spread", synth_args.spread, "per-coordinate cluster stddev");
  synth->add_option("--seed", synth_args.seed);
  synth->add_option("--out-data", synth_args.out_data)->required();
  synth->add_option("--out-queries", synth_args.out_queries)->required();
  synth->add_option("--out-meta", synth_args.out_meta, "radii and query-group counts CSV");

  ParetoArgs pareto_args;
  auto* pareto = app.add_subcommand("pareto", "filter a benchmark CSV to its Pareto frontier");
  pareto->add_option("--in", pareto_args.in)->required();
  pareto->add_option("--out", pareto_args.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build) return run_build(build_args);
    if (*gt) return run_gt(gt_args);
    if (*search) return run_search(search_args);
    if (*analyze_radius) return run_analyze_radius(radius_args);
    if (*analyze_freq) return run_analyze_freq(freq_args);
    if (*synth) return run_synth(synth_args);
    if (*pareto) return run_pareto(pareto_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
