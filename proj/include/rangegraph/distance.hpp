#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace rangegraph {

enum class DistanceKind { squared_l2, neg_inner_product };

enum class ElemKind { float32, uint8, int8 };

template <class T>
concept PointElem =
    std::is_same_v<T, float> || std::is_same_v<T, std::uint8_t> || std::is_same_v<T, std::int8_t>;

template <PointElem T>
constexpr ElemKind elem_kind_of() {
  if constexpr (std::is_same_v<T, float>) return ElemKind::float32;
  if constexpr (std::is_same_v<T, std::uint8_t>) return ElemKind::uint8;
  return ElemKind::int8;
}

inline const char* to_string(DistanceKind k) {
  return k == DistanceKind::squared_l2 ? "squared_l2" : "neg_inner_product";
}

inline const char* to_string(ElemKind k) {
  switch (k) {
    case ElemKind::float32: return "float32";
    case ElemKind::uint8: return "uint8";
    default: return "int8";
  }
}

namespace detail {

inline void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("distance: dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

// Squared Euclidean or negative inner product between two vectors.
// Integer element types accumulate exactly in 64-bit; floats accumulate in double.
inline double distance(std::span<const float> a, std::span<const float> b, DistanceKind kind) {
  detail::check_same_dim(a.size(), b.size());
  double acc = 0.0;
  if (kind == DistanceKind::squared_l2) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double diff = static_cast<double>(a[j]) - static_cast<double>(b[j]);
      acc += diff * diff;
    }
  } else {
    for (std::size_t j = 0; j < a.size(); ++j) {
      acc += static_cast<double>(a[j]) * static_cast<double>(b[j]);
    }
    acc = -acc;
  }
  return acc;
}

inline double distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                       DistanceKind kind) {
  detail::check_same_dim(a.size(), b.size());
  std::int64_t acc = 0;
  if (kind == DistanceKind::squared_l2) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const std::int64_t diff = std::int64_t{a[j]} - std::int64_t{b[j]};
      acc += diff * diff;
    }
    return static_cast<double>(acc);
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += std::int64_t{a[j]} * std::int64_t{b[j]};
  }
  return -static_cast<double>(acc);
}

inline double distance(std::span<const std::int8_t> a, std::span<const std::int8_t> b,
                       DistanceKind kind) {
  detail::check_same_dim(a.size(), b.size());
  std::int64_t acc = 0;
  if (kind == DistanceKind::squared_l2) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const std::int64_t diff = std::int64_t{a[j]} - std::int64_t{b[j]};
      acc += diff * diff;
    }
    return static_cast<double>(acc);
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += std::int64_t{a[j]} * std::int64_t{b[j]};
  }
  return -static_cast<double>(acc);
}

}  // namespace rangegraph
