#include "rangegraph/quantization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rangegraph {

QuantizedPointSet quantize(const PointMatrix<float>& points) {
  if (points.empty()) throw std::invalid_argument("quantize: empty point set");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();

  QuantizedPointSet qp;
  qp.n = n;
  qp.d = d;
  qp.lo.assign(d, 0.0f);
  qp.hi.assign(d, 0.0f);
  for (std::size_t j = 0; j < d; ++j) {
    qp.lo[j] = qp.hi[j] = points[0][j];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto row = points[i];
    for (std::size_t j = 0; j < d; ++j) {
      qp.lo[j] = std::min(qp.lo[j], row[j]);
      qp.hi[j] = std::max(qp.hi[j], row[j]);
    }
  }

  qp.codes.assign(n * d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = points[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double range = static_cast<double>(qp.hi[j]) - static_cast<double>(qp.lo[j]);
      if (range <= 0.0) continue;  // constant dimension encodes as 0
      double code = std::round((static_cast<double>(row[j]) - qp.lo[j]) / range * 255.0);
      code = std::clamp(code, 0.0, 255.0);
      qp.codes[i * d + j] = static_cast<std::uint8_t>(code);
    }
  }
  return qp;
}

QuantizedPointSet quantize(const PointSet& points) {
  if (points.elem() != ElemKind::float32) {
    throw std::invalid_argument("quantize: only float32 point sets can be quantized");
  }
  return quantize(points.as<float>());
}

double quantized_distance(std::span<const float> query, std::uint32_t id,
                          const QuantizedPointSet& qp, DistanceKind kind) {
  if (query.size() != qp.d) throw std::invalid_argument("quantized_distance: dimension mismatch");
  if (id >= qp.n) {
    throw std::out_of_range("quantized_distance: point id " + std::to_string(id) +
                            " out of range");
  }
  const std::uint8_t* code = qp.codes.data() + static_cast<std::size_t>(id) * qp.d;
  double acc = 0.0;
  if (kind == DistanceKind::squared_l2) {
    for (std::size_t j = 0; j < qp.d; ++j) {
      const double range = static_cast<double>(qp.hi[j]) - static_cast<double>(qp.lo[j]);
      const double decoded = static_cast<double>(qp.lo[j]) + code[j] * (range / 255.0);
      const double diff = static_cast<double>(query[j]) - decoded;
      acc += diff * diff;
    }
    return acc;
  }
  for (std::size_t j = 0; j < qp.d; ++j) {
    const double range = static_cast<double>(qp.hi[j]) - static_cast<double>(qp.lo[j]);
    const double decoded = static_cast<double>(qp.lo[j]) + code[j] * (range / 255.0);
    acc += static_cast<double>(query[j]) * decoded;
  }
  return -acc;
}

}  // namespace rangegraph
