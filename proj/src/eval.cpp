#include "rangegraph/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rangegraph {

template <PointElem T>
RangeGroundTruth brute_force_range(const PointMatrix<T>& points, const PointMatrix<T>& queries,
                                   DistanceKind metric, double radius, int threads) {
  if (points.size() > 0 && queries.size() > 0 && points.dim() != queries.dim()) {
    throw std::invalid_argument("brute_force_range: dimension mismatch");
  }
  RangeGroundTruth gt;
  gt.radius = radius;
  gt.results.resize(queries.size());

  const std::int64_t nq = static_cast<std::int64_t>(queries.size());
#if defined(_OPENMP)
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
#endif
  for (std::int64_t q = 0; q < nq; ++q) {
    const auto query = queries[static_cast<std::size_t>(q)];
    auto& out = gt.results[static_cast<std::size_t>(q)];
    for (std::uint32_t id = 0; id < points.size(); ++id) {
      const double d = distance(query, points[id], metric);
      if (d <= radius) out.push_back({id, d});
    }
    std::sort(out.begin(), out.end());
  }
  return gt;
}

template RangeGroundTruth brute_force_range<float>(const PointMatrix<float>&,
                                                   const PointMatrix<float>&, DistanceKind,
                                                   double, int);
template RangeGroundTruth brute_force_range<std::uint8_t>(const PointMatrix<std::uint8_t>&,
                                                          const PointMatrix<std::uint8_t>&,
                                                          DistanceKind, double, int);
template RangeGroundTruth brute_force_range<std::int8_t>(const PointMatrix<std::int8_t>&,
                                                         const PointMatrix<std::int8_t>&,
                                                         DistanceKind, double, int);

RangeGroundTruth brute_force_range(const PointSet& points, const PointSet& queries,
                                   double radius, int threads) {
  return visit_points_pair(points, queries, [&](const auto& pm, const auto& qm) {
    return brute_force_range(pm, qm, points.metric, radius, threads);
  });
}

double average_precision(const RangeGroundTruth& gt, const RangeResult& results) {
  if (gt.query_count() != results.queries.size()) {
    throw std::invalid_argument("average_precision: query count mismatch");
  }

  std::uint64_t hits = 0;
  std::uint64_t truth = 0;
  for (std::size_t q = 0; q < gt.query_count(); ++q) {
    std::vector<std::uint32_t> gt_ids;
    gt_ids.reserve(gt.results[q].size());
    for (const Neighbor& nb : gt.results[q]) gt_ids.push_back(nb.id);
    std::sort(gt_ids.begin(), gt_ids.end());

    for (const Neighbor& nb : results.queries[q].matches) {
      if (!std::binary_search(gt_ids.begin(), gt_ids.end(), nb.id)) {
        throw std::invalid_argument("average_precision: query " + std::to_string(q) +
                                    " reports id " + std::to_string(nb.id) +
                                    " outside the ground-truth radius");
      }
    }
    hits += results.queries[q].matches.size();
    truth += gt.results[q].size();
  }
  if (truth == 0) return 1.0;
  return static_cast<double>(hits) / static_cast<double>(truth);
}

std::vector<BenchmarkRecord> run_benchmark(const PointSet& queries, const ProximityGraph& graph,
                                           const PointSet& points, const RangeGroundTruth& gt,
                                           const std::vector<RangeParams>& sweep, int threads,
                                           const QuantizedPointSet* codes) {
  std::vector<BenchmarkRecord> records;
  records.reserve(sweep.size());
  for (const RangeParams& params : sweep) {
    if (params.radius != gt.radius) {
      throw std::invalid_argument("run_benchmark: params radius does not match ground truth");
    }
    batch_range_search(queries, graph, points, params, threads, codes);  // warm-up

    const auto begin = std::chrono::steady_clock::now();
    RangeResult result = batch_range_search(queries, graph, points, params, threads, codes);
    const auto end = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(end - begin).count();

    BenchmarkRecord rec;
    rec.strategy = to_string(params.strategy);
    rec.beam_width = params.beam_width;
    rec.early_stop = params.early_stop.enabled && params.early_stop.metric != StopMetric::never;
    rec.wall_seconds = seconds;
    rec.qps = seconds > 0.0 ? static_cast<double>(queries.size()) / seconds : 0.0;
    rec.avg_precision = average_precision(gt, result);
    rec.distance_comps = result.total_distance_comps();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<BenchmarkRecord> pareto_frontier(std::vector<BenchmarkRecord> records) {
  // Sort by AP descending, QPS descending; sweep groups of equal AP keeping
  // anything that beats the best QPS seen at strictly higher AP. Records tied
  // on both axes do not dominate each other and are all kept.
  std::stable_sort(records.begin(), records.end(),
                   [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
                     if (a.avg_precision != b.avg_precision) {
                       return a.avg_precision > b.avg_precision;
                     }
                     return a.qps > b.qps;
                   });

  std::vector<BenchmarkRecord> frontier;
  double best_qps = -1.0;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].avg_precision == records[i].avg_precision) ++j;
    const double group_max_qps = records[i].qps;
    for (std::size_t k = i; k < j; ++k) {
      if (records[k].qps == group_max_qps && records[k].qps > best_qps) {
        frontier.push_back(records[k]);
      }
    }
    best_qps = std::max(best_qps, group_max_qps);
    i = j;
  }

  std::stable_sort(frontier.begin(), frontier.end(),
                   [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
                     if (a.avg_precision != b.avg_precision) {
                       return a.avg_precision < b.avg_precision;
                     }
                     return a.qps < b.qps;
                   });
  return frontier;
}

void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRecord>& records) {
  os << "strategy,b,early_stop,qps,ap,dist_comps\n";
  for (const BenchmarkRecord& r : records) {
    os << r.strategy << ',' << r.beam_width << ',' << (r.early_stop ? 1 : 0) << ',' << r.qps
       << ',' << r.avg_precision << ',' << r.distance_comps << '\n';
  }
}

std::vector<BenchmarkRecord> read_benchmark_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("benchmark csv: missing header");
  const bool has_threads = line.find(",threads,") != std::string::npos;

  std::vector<BenchmarkRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const std::size_t expected = has_threads ? 7 : 6;
    if (fields.size() != expected) {
      throw std::invalid_argument("benchmark csv: malformed row: " + line);
    }
    BenchmarkRecord rec;
    std::size_t f = 0;
    rec.strategy = fields[f++];
    rec.beam_width = static_cast<std::size_t>(std::stoull(fields[f++]));
    rec.early_stop = fields[f++] != "0";
    if (has_threads) ++f;
    rec.qps = std::stod(fields[f++]);
    rec.avg_precision = std::stod(fields[f++]);
    rec.distance_comps = std::stoull(fields[f++]);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace rangegraph
