#pragma once

#include <filesystem>

#include "rangegraph/eval.hpp"
#include "rangegraph/graph.hpp"
#include "rangegraph/points.hpp"

namespace rangegraph {

// Binary interchange formats, all little-endian:
//
//   points  <n:u32> <d:u32> then n*d elements; the extension selects the
//           element kind: .fbin = float32, .u8bin = uint8, .i8bin = int8.
//           File size must be exactly 8 + n*d*sizeof(elem).
//   gt      <nq:i32> <total:i32> <counts:i32 x nq> <ids:i32 x total>
//           <distances:f32 x total>, with sum(counts) == total.
//   graph   magic "RGG1", <n:u32> <R:u32> <start_count:u32> <start ids:u32...>
//           then per node <degree:u32> <neighbor ids:u32 x degree>.

ElemKind elem_kind_from_extension(const std::filesystem::path& path);

PointSet read_points(const std::filesystem::path& path,
                     DistanceKind metric = DistanceKind::squared_l2);
void write_points(const PointSet& points, const std::filesystem::path& path);

RangeGroundTruth read_gt(const std::filesystem::path& path, double radius = 0.0);
void write_gt(const RangeGroundTruth& gt, const std::filesystem::path& path);

ProximityGraph load_graph(const std::filesystem::path& path);
void save_graph(const ProximityGraph& graph, const std::filesystem::path& path);

}  // namespace rangegraph
