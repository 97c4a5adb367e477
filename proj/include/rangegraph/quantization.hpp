#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rangegraph/points.hpp"

namespace rangegraph {

// 8-bit scalar quantization of a float32 point set.
//
// Each dimension j is mapped linearly from [lo[j], hi[j]] (the dataset min/max
// of that dimension) onto codes 0..255:
//
//   code   = round((x - lo) / (hi - lo) * 255), clamped to [0, 255]
//   decode = lo + code * (hi - lo) / 255
//
// Dimensions with hi == lo encode as 0 and decode back to lo. The per-coordinate
// round-trip error is at most (hi - lo) / 255 / 2 for in-range inputs.
struct QuantizedPointSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::uint8_t> codes;  // n x d row-major
  std::vector<float> lo;            // per-dimension minimum
  std::vector<float> hi;            // per-dimension maximum

  std::span<const std::uint8_t> code(std::size_t id) const {
    return std::span<const std::uint8_t>(codes.data() + id * d, d);
  }

  double decode(std::size_t id, std::size_t dim) const {
    const double step = (static_cast<double>(hi[dim]) - static_cast<double>(lo[dim])) / 255.0;
    return static_cast<double>(lo[dim]) + static_cast<double>(codes[id * d + dim]) * step;
  }

  // Largest possible |decoded - original| for coordinate `dim` of an in-range input.
  double step_error(std::size_t dim) const {
    return (static_cast<double>(hi[dim]) - static_cast<double>(lo[dim])) / 255.0 * 0.5;
  }

  bool matches(std::size_t points_n, std::size_t points_d) const {
    return n == points_n && d == points_d;
  }
};

// Builds the per-dimension code book from a float32 point set. Throws on an
// empty set or a non-float32 set.
QuantizedPointSet quantize(const PointSet& points);
QuantizedPointSet quantize(const PointMatrix<float>& points);

// Distance between a query and the decoded code of point `id`.
double quantized_distance(std::span<const float> query, std::uint32_t id,
                          const QuantizedPointSet& qp, DistanceKind kind);

}  // namespace rangegraph
