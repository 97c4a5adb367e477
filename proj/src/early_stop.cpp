#include "rangegraph/early_stop.hpp"

#include <algorithm>
#include <limits>

namespace rangegraph {

const char* to_string(StopMetric m) {
  switch (m) {
    case StopMetric::d_visited: return "d_visited";
    case StopMetric::d_top1: return "d_top1";
    case StopMetric::d_top10: return "d_top10";
    case StopMetric::d_top10_over_d_start: return "d_top10_over_d_start";
    case StopMetric::d_visited_outside_beam: return "d_visited_outside_beam";
    default: return "never";
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tenth_smallest(std::span<const Neighbor> beam) {
  return beam.size() >= 10 ? beam[9].dist : kInf;
}

// Closest visited point currently outside the beam; +inf when none exists.
double min_visited_outside_beam(const StopContext& ctx) {
  double best = kInf;
  for (const Neighbor& v : ctx.visited) {
    if (!std::binary_search(ctx.beam.begin(), ctx.beam.end(), v)) {
      best = std::min(best, v.dist);
    }
  }
  return best;
}

}  // namespace

bool early_stop_example(const StopContext& ctx, const EarlyStopConfig& cfg) {
  if (!cfg.enabled || cfg.metric == StopMetric::never) return false;

  // The closest beam element is still outside the radius
  if (!ctx.beam.empty() && ctx.beam.front().dist <= cfg.radius) return false;
  // Enough of the search budget has been spent
  if (ctx.visit_count < cfg.visit_limit) return false;

  double value = 0.0;
  switch (cfg.metric) {
    case StopMetric::d_visited: value = ctx.candidate_dist; break;
    case StopMetric::d_top1: value = ctx.beam.empty() ? kInf : ctx.beam.front().dist; break;
    case StopMetric::d_top10: value = tenth_smallest(ctx.beam); break;
    case StopMetric::d_top10_over_d_start:
      value = tenth_smallest(ctx.beam) / ctx.start_dist;
      break;
    case StopMetric::d_visited_outside_beam: value = min_visited_outside_beam(ctx); break;
    default: return false;
  }
  return value > cfg.stop_radius;
}

}  // namespace rangegraph
