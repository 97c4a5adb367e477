#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rangegraph/graph.hpp"
#include "rangegraph/points.hpp"
#include "rangegraph/quantization.hpp"
#include "rangegraph/range_search.hpp"

namespace rangegraph {

// Exact result sets for a query batch at a fixed radius. Each per-query list
// is sorted by (distance, id) with all distances <= radius.
struct RangeGroundTruth {
  double radius = 0.0;
  std::vector<std::vector<Neighbor>> results;

  std::size_t query_count() const { return results.size(); }
  std::uint64_t total_results() const {
    std::uint64_t total = 0;
    for (const auto& r : results) total += r.size();
    return total;
  }

  friend bool operator==(const RangeGroundTruth& a, const RangeGroundTruth& b) {
    return a.radius == b.radius && a.results == b.results;
  }
};

// One point of a beam-width sweep.
struct BenchmarkRecord {
  std::string strategy;
  std::size_t beam_width = 0;
  bool early_stop = false;
  double wall_seconds = 0.0;
  double qps = 0.0;
  double avg_precision = 0.0;
  std::uint64_t distance_comps = 0;
};

// Exhaustive scan; the oracle every approximate strategy is scored against.
RangeGroundTruth brute_force_range(const PointSet& points, const PointSet& queries,
                                   double radius, int threads = 0);

template <PointElem T>
RangeGroundTruth brute_force_range(const PointMatrix<T>& points, const PointMatrix<T>& queries,
                                   DistanceKind metric, double radius, int threads = 0);

// Micro-averaged recall: sum_q |K_q intersect K'_q| / sum_q |K_q|, defined as
// 1.0 when the ground truth is empty everywhere. Every reported id must be in
// the corresponding ground-truth list; a violation throws (identifying the
// query) rather than lowering the score.
double average_precision(const RangeGroundTruth& gt, const RangeResult& results);

// Runs each sweep configuration with one untimed warm-up pass followed by a
// timed batch; gt.radius must match every configuration's radius.
std::vector<BenchmarkRecord> run_benchmark(const PointSet& queries, const ProximityGraph& graph,
                                           const PointSet& points, const RangeGroundTruth& gt,
                                           const std::vector<RangeParams>& sweep, int threads,
                                           const QuantizedPointSet* codes = nullptr);

// Records not dominated by any other (higher-or-equal AP and QPS, one strict),
// sorted by AP ascending.
std::vector<BenchmarkRecord> pareto_frontier(std::vector<BenchmarkRecord> records);

// CSV rows: strategy,b,early_stop,qps,ap,dist_comps (header included).
void write_benchmark_csv(std::ostream& os, const std::vector<BenchmarkRecord>& records);

// Accepts the layout above, optionally with a `threads` column inserted
// after early_stop (the CLI writes that variant).
std::vector<BenchmarkRecord> read_benchmark_csv(std::istream& is);

}  // namespace rangegraph
