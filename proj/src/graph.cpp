#include "rangegraph/graph.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace rangegraph {

void BuildParams::validate() const {
  if (max_degree < 2) throw std::invalid_argument("BuildParams: R must be >= 2");
  if (build_beam < max_degree) throw std::invalid_argument("BuildParams: L must be >= R");
  if (alpha < 1.0) throw std::invalid_argument("BuildParams: alpha must be >= 1.0");
}

ProximityGraph::ProximityGraph(std::uint32_t max_degree,
                               std::vector<std::vector<std::uint32_t>> adjacency,
                               std::vector<std::uint32_t> start)
    : max_degree_(max_degree), adjacency_(std::move(adjacency)), start_(std::move(start)) {}

std::size_t ProximityGraph::edge_count() const {
  return std::accumulate(adjacency_.begin(), adjacency_.end(), std::size_t{0},
                         [](std::size_t acc, const auto& nbrs) { return acc + nbrs.size(); });
}

void ProximityGraph::validate() const {
  const std::size_t n = adjacency_.size();
  for (std::size_t u = 0; u < n; ++u) {
    const auto& nbrs = adjacency_[u];
    if (nbrs.size() > max_degree_) {
      throw std::invalid_argument("ProximityGraph: node " + std::to_string(u) +
                                  " exceeds max degree " + std::to_string(max_degree_));
    }
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t v : nbrs) {
      if (v >= n) {
        throw std::invalid_argument("ProximityGraph: neighbor id " + std::to_string(v) +
                                    " out of range");
      }
      if (v == u) {
        throw std::invalid_argument("ProximityGraph: self-loop at node " + std::to_string(u));
      }
      if (!seen.insert(v).second) {
        throw std::invalid_argument("ProximityGraph: duplicate neighbor " + std::to_string(v) +
                                    " at node " + std::to_string(u));
      }
    }
  }
  for (std::uint32_t s : start_) {
    if (s >= n) {
      throw std::invalid_argument("ProximityGraph: start id " + std::to_string(s) +
                                  " out of range");
    }
  }
}

}  // namespace rangegraph
