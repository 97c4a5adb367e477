#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rangegraph/distance.hpp"

namespace rangegraph {

// Candidate in a search structure: point id plus its distance to the query.
// Ordered by (distance, id) ascending; ties everywhere break toward the lower id.
struct Neighbor {
  std::uint32_t id = 0;
  double dist = 0.0;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.id < b.id;
  }
  friend bool operator>(const Neighbor& a, const Neighbor& b) { return b < a; }
  friend bool operator==(const Neighbor& a, const Neighbor& b) {
    return a.id == b.id && a.dist == b.dist;
  }
};

// Dense n x d row-major matrix of vectors.
template <PointElem T>
class PointMatrix {
 public:
  using value_type = T;

  PointMatrix() = default;
  PointMatrix(std::size_t n, std::size_t d, std::vector<T> data)
      : n_(n), d_(d), data_(std::move(data)) {
    if (d_ < 1) throw std::invalid_argument("PointMatrix: dimension must be >= 1");
    if (data_.size() != n_ * d_) {
      throw std::invalid_argument("PointMatrix: data length " + std::to_string(data_.size()) +
                                  " != n*d = " + std::to_string(n_ * d_));
    }
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  bool empty() const { return n_ == 0; }

  std::span<const T> operator[](std::size_t i) const {
    return std::span<const T>(data_.data() + i * d_, d_);
  }
  std::span<const T> row_checked(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("PointMatrix: point id " + std::to_string(i) + " out of range");
    return (*this)[i];
  }

  std::span<const T> raw() const { return data_; }

  friend bool operator==(const PointMatrix& a, const PointMatrix& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.data_ == b.data_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<T> data_;
};

// Runtime-typed point set: element storage plus the distance kind the
// dataset is searched under.
struct PointSet {
  using Storage =
      std::variant<PointMatrix<float>, PointMatrix<std::uint8_t>, PointMatrix<std::int8_t>>;

  Storage data;
  DistanceKind metric = DistanceKind::squared_l2;

  PointSet() = default;
  PointSet(Storage storage, DistanceKind kind) : data(std::move(storage)), metric(kind) {}

  std::size_t size() const {
    return std::visit([](const auto& m) { return m.size(); }, data);
  }
  std::size_t dim() const {
    return std::visit([](const auto& m) { return m.dim(); }, data);
  }
  ElemKind elem() const {
    return std::visit(
        [](const auto& m) {
          using T = typename std::decay_t<decltype(m)>;
          return elem_kind_of<typename T::value_type>();
        },
        data);
  }

  template <PointElem T>
  const PointMatrix<T>& as() const {
    const auto* m = std::get_if<PointMatrix<T>>(&data);
    if (!m) throw std::invalid_argument("PointSet: element kind mismatch");
    return *m;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.metric == b.metric && a.data == b.data;
  }
};

// Apply f to the typed matrix held by ps: f(const PointMatrix<T>&).
template <class F>
decltype(auto) visit_points(const PointSet& ps, F&& f) {
  return std::visit(std::forward<F>(f), ps.data);
}

// Apply f to two point sets of identical element kind: f(matrixA, matrixB).
template <class F>
decltype(auto) visit_points_pair(const PointSet& a, const PointSet& b, F&& f) {
  return std::visit(
      [&](const auto& ma, const auto& mb) -> decltype(f(ma, ma)) {
        if constexpr (std::is_same_v<std::decay_t<decltype(ma)>, std::decay_t<decltype(mb)>>) {
          return f(ma, mb);
        } else {
          throw std::invalid_argument("PointSet: element kinds differ");
        }
      },
      a.data, b.data);
}

template <PointElem T>
double point_distance(const PointMatrix<T>& points, std::uint32_t a, std::uint32_t b,
                      DistanceKind kind) {
  return distance(points.row_checked(a), points.row_checked(b), kind);
}

// Exact re-check of a candidate list against radius r: keeps the unique ids at
// exact distance <= r, sorted ascending by (distance, id).
template <PointElem T>
std::vector<Neighbor> rerank(std::span<const T> query, std::span<const std::uint32_t> candidates,
                             const PointMatrix<T>& points, DistanceKind kind, double radius) {
  std::vector<std::uint32_t> ids(candidates.begin(), candidates.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<Neighbor> kept;
  kept.reserve(ids.size());
  for (std::uint32_t id : ids) {
    const double d = distance(query, points.row_checked(id), kind);
    if (d <= radius) kept.push_back({id, d});
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace rangegraph
