#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangegraph/early_stop.hpp"
#include "rangegraph/graph.hpp"
#include "rangegraph/points.hpp"
#include "rangegraph/quantization.hpp"

namespace rangegraph {

struct BeamResult {
  std::vector<Neighbor> beam;     // final beam, sorted by (distance, id)
  std::vector<Neighbor> visited;  // visited points in visit order
  bool early_stopped = false;
  std::uint64_t distance_comps = 0;
};

struct NeverStop {
  bool operator()(const StopContext&) const { return false; }
};

// Stopping functor driven by an EarlyStopConfig.
struct ConfiguredStop {
  EarlyStopConfig cfg;
  bool operator()(const StopContext& ctx) const { return early_stop_example(ctx, cfg); }
};

// Best-first traversal of the proximity graph.
//
// The beam starts as the start points with computed distances. Each step
// selects the closest unvisited beam element p*, evaluates the stopping rule,
// and if it does not fire visits p*, merges its unseen out-neighbors into the
// beam, and trims the beam to the `beam_width` closest. A node that has ever
// entered the beam is never re-admitted; with the (distance, id) ordering the
// trim cutoff only tightens, so a trimmed node could never survive a second
// insertion.
//
// When `codes` is non-null (float32 data only) all beam distances come from
// the quantized codes; exact membership decisions are left to rerank().
template <PointElem T, class StopFn = NeverStop>
BeamResult beam_search(std::span<const T> query, const ProximityGraph& graph,
                       const PointMatrix<T>& points, DistanceKind metric,
                       std::span<const std::uint32_t> starts, std::size_t beam_width,
                       StopFn&& stop = {}, const QuantizedPointSet* codes = nullptr) {
  const std::size_t n = graph.size();
  if (beam_width < 1) throw std::invalid_argument("beam_search: beam width must be >= 1");
  if (starts.empty()) throw std::invalid_argument("beam_search: empty start set");
  for (std::uint32_t s : starts) {
    if (s >= n) {
      throw std::invalid_argument("beam_search: start id " + std::to_string(s) +
                                  " out of range");
    }
  }
  if constexpr (!std::is_same_v<T, float>) {
    if (codes != nullptr) {
      throw std::invalid_argument("beam_search: quantized codes require float32 data");
    }
  } else {
    if (codes != nullptr && !codes->matches(points.size(), points.dim())) {
      throw std::invalid_argument("beam_search: quantized codes do not match the point set");
    }
  }

  BeamResult res;
  const auto dist_to = [&](std::uint32_t id) -> double {
    ++res.distance_comps;
    if constexpr (std::is_same_v<T, float>) {
      if (codes != nullptr) return quantized_distance(query, id, *codes, metric);
    }
    return distance(query, points[id], metric);
  };

  std::vector<std::uint8_t> seen(n, 0);      // ever admitted to the beam
  std::vector<std::uint8_t> expanded(n, 0);  // visited

  std::vector<Neighbor> frontier;  // the beam B
  frontier.reserve(beam_width + graph.max_degree() + 1);
  double start_dist = 0.0;
  for (std::uint32_t s : starts) {
    if (seen[s]) continue;
    seen[s] = 1;
    const double d = dist_to(s);
    if (frontier.empty()) start_dist = d;  // starts[0] is processed first
    frontier.push_back({s, d});
  }
  std::sort(frontier.begin(), frontier.end());
  if (frontier.size() > beam_width) frontier.resize(beam_width);

  std::vector<Neighbor> unvisited = frontier;  // B \ V, sorted
  std::vector<Neighbor> fresh;                 // new candidates per visit
  std::vector<Neighbor> merged;
  fresh.reserve(graph.max_degree());
  merged.reserve(beam_width + graph.max_degree() + 1);

  while (!unvisited.empty()) {
    const Neighbor current = unvisited.front();

    StopContext ctx;
    ctx.beam = frontier;
    ctx.visited = res.visited;
    ctx.visit_count = res.visited.size();
    ctx.candidate_dist = current.dist;
    ctx.start_dist = start_dist;
    if (stop(ctx)) {
      res.early_stopped = true;
      break;
    }

    expanded[current.id] = 1;
    res.visited.push_back(current);

    fresh.clear();
    for (std::uint32_t v : graph.neighbors(current.id)) {
      if (seen[v]) continue;
      seen[v] = 1;
      fresh.push_back({v, dist_to(v)});
    }
    std::sort(fresh.begin(), fresh.end());

    merged.clear();
    std::merge(frontier.begin(), frontier.end(), fresh.begin(), fresh.end(),
               std::back_inserter(merged));
    if (merged.size() > beam_width) merged.resize(beam_width);
    frontier.swap(merged);

    unvisited.clear();
    for (const Neighbor& nb : frontier) {
      if (!expanded[nb.id]) unvisited.push_back(nb);
    }
  }

  res.beam = std::move(frontier);
  return res;
}

}  // namespace rangegraph
