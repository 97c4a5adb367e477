#include "rangegraph/range_search.hpp"

namespace rangegraph {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::baseline: return "baseline";
    case Strategy::greedy: return "greedy";
    default: return "doubling";
  }
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "baseline") return Strategy::baseline;
  if (name == "greedy") return Strategy::greedy;
  if (name == "doubling") return Strategy::doubling;
  throw std::invalid_argument("unknown strategy: " + name);
}

RangeResult batch_range_search(const PointSet& queries, const ProximityGraph& graph,
                               const PointSet& points, const RangeParams& params, int threads,
                               const QuantizedPointSet* codes) {
  return visit_points_pair(points, queries, [&](const auto& pm, const auto& qm) {
    return batch_range_search(qm, graph, pm, points.metric, params, threads, codes);
  });
}

}  // namespace rangegraph
