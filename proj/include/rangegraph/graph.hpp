#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rangegraph {

// Build parameters for the degree-bounded proximity graph.
struct BuildParams {
  std::uint32_t max_degree = 64;   // R
  std::uint32_t build_beam = 128;  // L, beam width used while inserting
  double alpha = 1.15;             // pruning slack, >= 1.0
  std::uint64_t seed = 42;
  bool parallel = true;

  void validate() const;
};

// Directed graph over point ids with bounded out-degree and a designated
// set of search start points.
class ProximityGraph {
 public:
  ProximityGraph() = default;
  ProximityGraph(std::uint32_t max_degree, std::vector<std::vector<std::uint32_t>> adjacency,
                 std::vector<std::uint32_t> start);

  std::size_t size() const { return adjacency_.size(); }
  std::uint32_t max_degree() const { return max_degree_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t id) const { return adjacency_[id]; }
  std::span<const std::uint32_t> start_points() const { return start_; }

  std::vector<std::uint32_t>& mutable_neighbors(std::uint32_t id) { return adjacency_[id]; }
  void set_start_points(std::vector<std::uint32_t> start) { start_ = std::move(start); }

  std::size_t edge_count() const;

  // Checks degree bounds, id ranges, self-loops and duplicate edges.
  // Throws std::invalid_argument on the first violation.
  void validate() const;

  friend bool operator==(const ProximityGraph& a, const ProximityGraph& b) {
    return a.max_degree_ == b.max_degree_ && a.adjacency_ == b.adjacency_ && a.start_ == b.start_;
  }

 private:
  std::uint32_t max_degree_ = 0;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<std::uint32_t> start_;
};

}  // namespace rangegraph
