#pragma once

#include <cstdint>
#include <span>

#include "rangegraph/points.hpp"

namespace rangegraph {

// Which beam-search quantity the early-stopping rule compares against the
// early-stopping radius. `d_visited` tests the candidate about to be visited;
// `d_visited_outside_beam` is an alternate reading that tests the closest
// visited point that has fallen out of the beam.
enum class StopMetric {
  d_visited,
  d_top1,
  d_top10,
  d_top10_over_d_start,
  d_visited_outside_beam,
  never,
};

const char* to_string(StopMetric m);

// Cutoff parameters for terminating a beam search that is unlikely to find
// any in-range result.
struct EarlyStopConfig {
  bool enabled = false;
  double radius = 0.0;          // query radius r, shared with the search
  std::uint32_t visit_limit = 20;  // vl: minimum completed visits before stopping
  double stop_radius = 0.0;     // esr (a unitless ratio for the ratio metric)
  StopMetric metric = StopMetric::d_visited;
};

// Snapshot of the search state at the moment the stopping rule is evaluated,
// i.e. after selecting the next candidate p* but before visiting it.
struct StopContext {
  std::span<const Neighbor> beam;     // current beam, sorted by (distance, id)
  std::span<const Neighbor> visited;  // visited points in visit order
  std::size_t visit_count = 0;        // completed visits so far
  double candidate_dist = 0.0;        // distance of p*, the closest unvisited beam element
  double start_dist = 0.0;            // distance from the query to the first start point
};

// True iff the search should terminate: no beam element is within the radius,
// at least `visit_limit` visits have completed, and the selected metric value
// exceeds the early-stopping radius.
bool early_stop_example(const StopContext& ctx, const EarlyStopConfig& cfg);

}  // namespace rangegraph
