#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangegraph/beam_search.hpp"
#include "rangegraph/early_stop.hpp"
#include "rangegraph/graph.hpp"
#include "rangegraph/points.hpp"
#include "rangegraph/quantization.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rangegraph {

enum class Strategy { baseline, greedy, doubling };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct RangeParams {
  double radius = 0.0;
  std::size_t beam_width = 10;  // initial beam b
  double lambda = 1.0;          // continuation fraction in (0, 1]
  Strategy strategy = Strategy::baseline;
  EarlyStopConfig early_stop;

  void validate() const {
    if (beam_width < 1) throw std::invalid_argument("RangeParams: beam width must be >= 1");
    if (!(lambda > 0.0) || lambda > 1.0) {
      throw std::invalid_argument("RangeParams: lambda must be in (0, 1]");
    }
  }
};

struct QueryStats {
  std::uint64_t distance_comps = 0;
  std::uint64_t initial_visits = 0;       // visits in the first beam search
  std::uint64_t second_phase_visits = 0;  // greedy visits or later doubling rounds
  std::uint32_t rounds = 1;               // beam search rounds run
  std::uint64_t final_beam = 0;           // beam width of the last round
  bool early_stopped = false;
};

struct QueryResult {
  std::vector<Neighbor> matches;  // exact distance <= r, sorted by (distance, id)
  QueryStats stats;
};

struct RangeResult {
  std::vector<QueryResult> queries;

  std::uint64_t total_distance_comps() const {
    std::uint64_t total = 0;
    for (const auto& q : queries) total += q.stats.distance_comps;
    return total;
  }
  std::uint64_t total_matches() const {
    std::uint64_t total = 0;
    for (const auto& q : queries) total += q.matches.size();
    return total;
  }
};

namespace detail {

// In-range subset of a beam whose distances are exact: the beam is already
// sorted and duplicate-free, so this is rerank without the recomputation.
inline std::vector<Neighbor> filter_in_range(const std::vector<Neighbor>& beam, double radius) {
  std::vector<Neighbor> in;
  for (const Neighbor& nb : beam) {
    if (nb.dist <= radius) in.push_back(nb);
  }
  return in;
}

template <PointElem T>
std::vector<Neighbor> exact_in_range(std::span<const T> query, const std::vector<Neighbor>& beam,
                                     const PointMatrix<T>& points, DistanceKind metric,
                                     double radius, bool beam_is_quantized,
                                     std::uint64_t& distance_comps) {
  if (!beam_is_quantized) return filter_in_range(beam, radius);
  std::vector<std::uint32_t> ids;
  ids.reserve(beam.size());
  for (const Neighbor& nb : beam) ids.push_back(nb.id);
  distance_comps += ids.size();
  return rerank(query, std::span<const std::uint32_t>(ids), points, metric, radius);
}

inline std::size_t continuation_threshold(double lambda, std::size_t beam_width) {
  return static_cast<std::size_t>(std::ceil(lambda * static_cast<double>(beam_width)));
}

}  // namespace detail

struct GreedyOutcome {
  std::vector<Neighbor> visited;  // visit order, exact distances
  std::uint64_t distance_comps = 0;
};

// Unbounded best-first expansion that only admits in-range nodes (start
// points are admitted unconditionally). Distances are always exact: the
// admission test is the membership decision.
template <PointElem T>
GreedyOutcome greedy_search(std::span<const T> query, const ProximityGraph& graph,
                            const PointMatrix<T>& points, DistanceKind metric,
                            std::span<const std::uint32_t> starts, double radius) {
  const std::size_t n = graph.size();
  GreedyOutcome out;

  std::priority_queue<Neighbor, std::vector<Neighbor>, std::greater<Neighbor>> frontier;
  std::vector<std::uint8_t> enqueued(n, 0);
  for (std::uint32_t s : starts) {
    if (s >= n) throw std::invalid_argument("greedy_search: start id out of range");
    if (enqueued[s]) continue;
    enqueued[s] = 1;
    ++out.distance_comps;
    frontier.push({s, distance(query, points[s], metric)});
  }

  while (!frontier.empty()) {
    const Neighbor current = frontier.top();
    frontier.pop();
    out.visited.push_back(current);
    for (std::uint32_t f : graph.neighbors(current.id)) {
      if (enqueued[f]) continue;
      enqueued[f] = 1;
      ++out.distance_comps;
      const double d = distance(query, points[f], metric);
      if (d <= radius) frontier.push({f, d});
    }
  }
  return out;
}

// Repeated beam search with doubling width. A round keeps only the in-range
// beam members (by exact distance); the search escalates while at least
// ceil(lambda * b) of them are in range, reusing S plus everything visited as
// the next round's start points. The width is capped at n, and the capped
// round is final. Early stopping applies to the first round only.
template <PointElem T>
std::vector<Neighbor> doubling_search(std::span<const T> query, const ProximityGraph& graph,
                                      const PointMatrix<T>& points, DistanceKind metric,
                                      std::span<const std::uint32_t> starts,
                                      const RangeParams& params, QueryStats& stats,
                                      const QuantizedPointSet* codes = nullptr) {
  params.validate();
  const std::size_t n = graph.size();
  std::size_t beam_width = std::min(params.beam_width, n);
  bool capped = beam_width >= n;

  std::vector<std::uint32_t> current_starts(starts.begin(), starts.end());
  std::sort(current_starts.begin(), current_starts.end());
  current_starts.erase(std::unique(current_starts.begin(), current_starts.end()),
                       current_starts.end());

  EarlyStopConfig stop_cfg = params.early_stop;
  stop_cfg.radius = params.radius;

  std::uint32_t round = 0;
  while (true) {
    ++round;
    EarlyStopConfig round_cfg = stop_cfg;
    if (round > 1) round_cfg.enabled = false;

    auto res = beam_search<T>(query, graph, points, metric, current_starts, beam_width,
                              ConfiguredStop{round_cfg}, codes);
    stats.distance_comps += res.distance_comps;
    if (round == 1) {
      stats.initial_visits = res.visited.size();
      stats.early_stopped = res.early_stopped;
    } else {
      stats.second_phase_visits += res.visited.size();
    }
    stats.rounds = round;
    stats.final_beam = beam_width;

    auto in_range = detail::exact_in_range(query, res.beam, points, metric, params.radius,
                                           codes != nullptr, stats.distance_comps);
    if (in_range.size() < detail::continuation_threshold(params.lambda, beam_width) || capped) {
      return in_range;
    }

    for (const Neighbor& v : res.visited) current_starts.push_back(v.id);
    std::sort(current_starts.begin(), current_starts.end());
    current_starts.erase(std::unique(current_starts.begin(), current_starts.end()),
                         current_starts.end());
    beam_width = std::min(beam_width * 2, n);
    capped = beam_width >= n;
  }
}

// One range query against the index. baseline = single beam search + rerank;
// greedy = beam search, then unbounded in-range expansion seeded with the
// in-range beam when it saturates; doubling = doubling_search.
template <PointElem T>
QueryResult range_query(std::span<const T> query, const ProximityGraph& graph,
                        const PointMatrix<T>& points, DistanceKind metric,
                        const RangeParams& params, const QuantizedPointSet* codes = nullptr) {
  params.validate();
  QueryResult result;
  result.stats.final_beam = params.beam_width;

  if (params.strategy == Strategy::doubling) {
    result.matches = doubling_search(query, graph, points, metric, graph.start_points(), params,
                                     result.stats, codes);
    return result;
  }

  EarlyStopConfig stop_cfg = params.early_stop;
  stop_cfg.radius = params.radius;
  auto res = beam_search<T>(query, graph, points, metric, graph.start_points(),
                            params.beam_width, ConfiguredStop{stop_cfg}, codes);
  result.stats.distance_comps = res.distance_comps;
  result.stats.initial_visits = res.visited.size();
  result.stats.early_stopped = res.early_stopped;

  auto in_range = detail::exact_in_range(query, res.beam, points, metric, params.radius,
                                         codes != nullptr, result.stats.distance_comps);

  if (params.strategy == Strategy::greedy &&
      in_range.size() >= detail::continuation_threshold(params.lambda, params.beam_width)) {
    std::vector<std::uint32_t> seeds;
    seeds.reserve(in_range.size());
    for (const Neighbor& nb : in_range) seeds.push_back(nb.id);
    auto greedy = greedy_search(query, graph, points, metric,
                                std::span<const std::uint32_t>(seeds), params.radius);
    result.stats.second_phase_visits = greedy.visited.size();
    result.stats.distance_comps += greedy.distance_comps;

    std::sort(greedy.visited.begin(), greedy.visited.end());
    auto& v = greedy.visited;
    v.erase(std::unique(v.begin(), v.end(),
                        [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
            v.end());
    result.matches = detail::filter_in_range(v, params.radius);
  } else {
    result.matches = std::move(in_range);
  }
  return result;
}

// Applies range_query to every row of `queries`, in parallel. Queries share no
// mutable state, so per-query outputs are identical for any thread count.
template <PointElem T>
RangeResult batch_range_search(const PointMatrix<T>& queries, const ProximityGraph& graph,
                               const PointMatrix<T>& points, DistanceKind metric,
                               const RangeParams& params, int threads = 0,
                               const QuantizedPointSet* codes = nullptr) {
  if (queries.dim() != points.dim() && queries.size() > 0) {
    throw std::invalid_argument("batch_range_search: query dimension mismatch");
  }
  params.validate();

  RangeResult result;
  result.queries.resize(queries.size());
  const std::int64_t nq = static_cast<std::int64_t>(queries.size());
#if defined(_OPENMP)
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
#endif
  for (std::int64_t i = 0; i < nq; ++i) {
    result.queries[static_cast<std::size_t>(i)] =
        range_query(queries[static_cast<std::size_t>(i)], graph, points, metric, params, codes);
  }
  return result;
}

// Runtime-typed entry point; element kinds of queries and points must match.
RangeResult batch_range_search(const PointSet& queries, const ProximityGraph& graph,
                               const PointSet& points, const RangeParams& params,
                               int threads = 0, const QuantizedPointSet* codes = nullptr);

}  // namespace rangegraph
