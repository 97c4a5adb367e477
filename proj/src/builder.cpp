#include "rangegraph/builder.hpp"

namespace rangegraph {

ProximityGraph build_index(const PointSet& points, const BuildParams& params) {
  return visit_points(points,
                      [&](const auto& pm) { return build_index(pm, points.metric, params); });
}

}  // namespace rangegraph
