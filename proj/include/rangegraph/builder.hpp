#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rangegraph/beam_search.hpp"
#include "rangegraph/graph.hpp"
#include "rangegraph/points.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rangegraph {

// Alpha-occlusion pruning: candidates are scanned in ascending distance from p
// and a candidate survives only if no already-kept neighbor occludes it, i.e.
// alpha * d(kept, c) > d(p, c) for every kept neighbor. Stops once max_degree
// neighbors are kept. Candidates must carry distances to p.
template <PointElem T>
std::vector<std::uint32_t> robust_prune(std::uint32_t p, std::vector<Neighbor> candidates,
                                        double alpha, std::uint32_t max_degree,
                                        const PointMatrix<T>& points, DistanceKind metric) {
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
                   candidates.end());

  std::vector<std::uint32_t> kept;
  kept.reserve(max_degree);
  for (const Neighbor& c : candidates) {
    if (c.id == p) continue;
    bool occluded = false;
    for (std::uint32_t k : kept) {
      const double d_kc = distance(points[k], points[c.id], metric);
      if (alpha * d_kc <= c.dist) {
        occluded = true;
        break;
      }
    }
    if (!occluded) {
      kept.push_back(c.id);
      if (kept.size() == max_degree) break;
    }
  }
  return kept;
}

namespace detail {

// Point minimizing total distance to a fixed seeded sample (the whole set
// when n <= sample_size).
template <PointElem T>
std::uint32_t sample_medoid(const PointMatrix<T>& points, DistanceKind metric,
                            std::uint64_t seed, std::size_t sample_size = 1000) {
  const std::size_t n = points.size();
  std::vector<std::uint32_t> sample;
  if (n <= sample_size) {
    sample.resize(n);
    std::iota(sample.begin(), sample.end(), 0);
  } else {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::mt19937_64 rng(seed);
    sample.resize(sample_size);
    std::sample(ids.begin(), ids.end(), sample.begin(), sample_size, rng);
  }

  const std::int64_t count = static_cast<std::int64_t>(n);
  std::vector<double> totals(n, 0.0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    double total = 0.0;
    for (std::uint32_t s : sample) {
      total += distance(points[static_cast<std::size_t>(i)], points[s], metric);
    }
    totals[static_cast<std::size_t>(i)] = total;
  }

  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    if (totals[i] < totals[best]) best = i;
  }
  return best;
}

template <PointElem T>
void add_reverse_edges(ProximityGraph& graph, const PointMatrix<T>& points, DistanceKind metric,
                       std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                       double alpha, std::uint32_t max_degree, bool parallel) {
  // Group additions by target so each node is touched by exactly one task.
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> group_begin;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i == 0 || edges[i].first != edges[i - 1].first) group_begin.push_back(i);
  }
  group_begin.push_back(edges.size());

  const std::int64_t groups = static_cast<std::int64_t>(group_begin.size()) - 1;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
  for (std::int64_t g = 0; g < groups; ++g) {
    const std::uint32_t target = edges[group_begin[g]].first;
    auto& nbrs = graph.mutable_neighbors(target);
    for (std::size_t i = group_begin[g]; i < group_begin[g + 1]; ++i) {
      const std::uint32_t source = edges[i].second;
      if (source == target) continue;
      if (std::find(nbrs.begin(), nbrs.end(), source) == nbrs.end()) {
        nbrs.push_back(source);
      }
    }
    if (nbrs.size() > max_degree) {
      std::vector<Neighbor> cands;
      cands.reserve(nbrs.size());
      for (std::uint32_t v : nbrs) {
        cands.push_back({v, distance(points[target], points[v], metric)});
      }
      nbrs = robust_prune(target, std::move(cands), alpha, max_degree, points, metric);
    }
  }
}

}  // namespace detail

// Two-pass incremental construction. Points are inserted in a seeded random
// order; each insertion beam-searches from the medoid with beam L, prunes the
// visited set down to at most R out-neighbors, and then adds reverse edges
// (re-pruning any neighbor list that overflows R). The first pass prunes with
// alpha = 1.0, the second with params.alpha. With parallel=true insertions run
// in prefix-doubling batches that search the pre-batch graph; updates are
// applied in a fixed order, so the result is deterministic in both modes.
template <PointElem T>
ProximityGraph build_index(const PointMatrix<T>& points, DistanceKind metric,
                           const BuildParams& params) {
  params.validate();
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("build_index: empty point set");

  const std::uint32_t medoid = detail::sample_medoid(points, metric, params.seed);
  ProximityGraph graph(params.max_degree, std::vector<std::vector<std::uint32_t>>(n),
                       {medoid});

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  {
    std::mt19937_64 rng(params.seed + 1);
    std::shuffle(order.begin(), order.end(), rng);
  }

  const std::array<double, 2> pass_alpha = {1.0, params.alpha};
  const std::uint32_t start[1] = {medoid};

  std::vector<std::vector<std::uint32_t>> pruned(n);
  for (double alpha : pass_alpha) {
    std::size_t lo = 0;
    std::size_t batch = 1;
    while (lo < n) {
      const std::size_t hi = std::min(n, lo + (params.parallel ? batch : 1));
      const std::int64_t begin = static_cast<std::int64_t>(lo);
      const std::int64_t end = static_cast<std::int64_t>(hi);

      // Phase 1: search + prune against the pre-batch graph (read-only).
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 8) if (params.parallel)
#endif
      for (std::int64_t k = begin; k < end; ++k) {
        const std::uint32_t id = order[static_cast<std::size_t>(k)];
        auto search = beam_search<T>(points[id], graph, points, metric, start,
                                     params.build_beam);
        pruned[id] = robust_prune(id, std::move(search.visited), alpha, params.max_degree,
                                  points, metric);
      }

      // Phase 2: install out-neighbor lists, then reverse edges.
      std::vector<std::pair<std::uint32_t, std::uint32_t>> reverse;
      for (std::int64_t k = begin; k < end; ++k) {
        const std::uint32_t id = order[static_cast<std::size_t>(k)];
        graph.mutable_neighbors(id) = std::move(pruned[id]);
        pruned[id].clear();
        for (std::uint32_t v : graph.neighbors(id)) reverse.emplace_back(v, id);
      }
      detail::add_reverse_edges(graph, points, metric, reverse, alpha, params.max_degree,
                                params.parallel);

      lo = hi;
      batch = std::min(batch * 2, std::size_t{32768});
    }
  }
  return graph;
}

template <PointElem T>
ProximityGraph build_index(const PointMatrix<T>& points, DistanceKind metric) {
  return build_index(points, metric, BuildParams{});
}

ProximityGraph build_index(const PointSet& points, const BuildParams& params);

}  // namespace rangegraph
