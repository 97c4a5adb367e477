#include "rangegraph/datatools.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rangegraph {

std::vector<double> CaptureCurve::normalized_radii() const {
  std::vector<double> out(radii.size(), 0.0);
  if (radii.empty()) return out;
  const double lo = radii.front();
  const double hi = radii.back();
  if (hi == lo) return out;
  for (std::size_t i = 0; i < radii.size(); ++i) out[i] = (radii[i] - lo) / (hi - lo);
  return out;
}

std::uint64_t FrequencyTable::total() const {
  return std::accumulate(counts.begin(), counts.end(), overflow);
}

namespace {

template <PointElem T>
CaptureCurve percent_captured_impl(const PointMatrix<T>& points, const PointMatrix<T>& queries,
                                   DistanceKind metric, std::span<const double> radii,
                                   std::size_t sample, std::uint64_t seed, int threads) {
  if (radii.empty()) throw std::invalid_argument("percent_captured: empty radius list");
  if (!std::is_sorted(radii.begin(), radii.end())) {
    throw std::invalid_argument("percent_captured: radii must be ascending");
  }
  if (points.size() > 0 && queries.size() > 0 && points.dim() != queries.dim()) {
    throw std::invalid_argument("percent_captured: dimension mismatch");
  }

  std::vector<std::uint32_t> ids;
  if (sample > 0 && sample < points.size()) {
    std::vector<std::uint32_t> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    ids.resize(sample);
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), ids.begin(), sample, rng);
  } else {
    ids.resize(points.size());
    std::iota(ids.begin(), ids.end(), 0);
  }
  const double denom = static_cast<double>(ids.size());

  const std::size_t nr = radii.size();
  std::vector<double> fractions(nr, 0.0);
  const std::int64_t nq = static_cast<std::int64_t>(queries.size());

#if defined(_OPENMP)
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
#endif
  {
    std::vector<std::uint64_t> hist(nr + 1, 0);
    std::vector<double> local(nr, 0.0);
#if defined(_OPENMP)
#pragma omp for schedule(dynamic, 1)
#endif
    for (std::int64_t q = 0; q < nq; ++q) {
      std::fill(hist.begin(), hist.end(), 0);
      const auto query = queries[static_cast<std::size_t>(q)];
      for (std::uint32_t id : ids) {
        const double dist_q = distance(query, points[id], metric);
        // first radius that captures this point
        const auto it = std::lower_bound(radii.begin(), radii.end(), dist_q);
        ++hist[static_cast<std::size_t>(it - radii.begin())];
      }
      std::uint64_t captured = 0;
      for (std::size_t k = 0; k < nr; ++k) {
        captured += hist[k];
        local[k] += denom > 0.0 ? static_cast<double>(captured) / denom : 0.0;
      }
    }
#if defined(_OPENMP)
#pragma omp critical
#endif
    {
      for (std::size_t k = 0; k < nr; ++k) fractions[k] += local[k];
    }
  }

  CaptureCurve curve;
  curve.radii.assign(radii.begin(), radii.end());
  curve.fraction_captured.resize(nr, 0.0);
  for (std::size_t k = 0; k < nr; ++k) {
    curve.fraction_captured[k] = nq > 0 ? fractions[k] / static_cast<double>(nq) : 0.0;
  }
  return curve;
}

}  // namespace

CaptureCurve percent_captured(const PointSet& points, const PointSet& queries,
                              std::span<const double> radii, std::size_t sample,
                              std::uint64_t seed, int threads) {
  return visit_points_pair(points, queries, [&](const auto& pm, const auto& qm) {
    return percent_captured_impl(pm, qm, points.metric, radii, sample, seed, threads);
  });
}

FrequencyTable frequency_distribution(const RangeGroundTruth& gt) {
  FrequencyTable table;
  for (const auto& result : gt.results) {
    const std::uint64_t size = result.size();
    if (size == 0) {
      ++table.counts[0];
      continue;
    }
    bool bucketed = false;
    for (std::size_t k = 1; k < table.bucket_bounds.size(); ++k) {
      if (size <= table.bucket_bounds[k]) {
        ++table.counts[k];
        bucketed = true;
        break;
      }
    }
    if (!bucketed) {
      ++table.overflow;
      table.overflowed = true;
    }
  }
  return table;
}

namespace {

double squared_norm_diff(std::span<const float> a, std::span<const float> b) {
  return distance(a, b, DistanceKind::squared_l2);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

SynthDataset synth_clustered(std::size_t n, std::size_t d, std::size_t clusters, double spread,
                             std::uint64_t seed) {
  if (clusters < 1 || n < clusters) {
    throw std::invalid_argument("synth_clustered: need n >= clusters >= 1");
  }
  if (d < 1) throw std::invalid_argument("synth_clustered: dimension must be >= 1");
  if (spread < 0.0) throw std::invalid_argument("synth_clustered: spread must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double box = 40.0 * spread;
  std::uniform_real_distribution<double> uniform(0.0, box);

  // Cluster centers, kept at least 8*spread*sqrt(d) apart when the box allows.
  const double min_center_sep = 64.0 * spread * spread * static_cast<double>(d);
  std::vector<std::vector<float>> centers;
  centers.reserve(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    std::vector<float> center(d);
    for (int attempt = 0; attempt < 200; ++attempt) {
      for (std::size_t j = 0; j < d; ++j) center[j] = static_cast<float>(uniform(rng));
      bool ok = true;
      for (const auto& other : centers) {
        if (squared_norm_diff(center, other) < min_center_sep) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    centers.push_back(center);
  }

  // Points: balanced assignment, Gaussian noise around the cluster center.
  std::vector<float> data(n * d);
  std::vector<std::uint32_t> assignment(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % clusters;
    assignment[i] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j < d; ++j) {
      data[i * d + j] = static_cast<float>(centers[c][j] + spread * gauss(rng));
    }
  }
  PointMatrix<float> points(n, d, std::move(data));

  // Queries: one per center, one member per cluster, and 8x clusters far
  // midpoints, giving an 80% zero-result majority at any in-cluster radius.
  const std::size_t n_center = clusters;
  const std::size_t n_member = clusters;
  const std::size_t n_far = 8 * clusters;
  const std::size_t nq = n_center + n_member + n_far;
  std::vector<float> qdata;
  qdata.reserve(nq * d);
  std::vector<QueryGroup> groups;
  groups.reserve(nq);

  for (std::size_t c = 0; c < clusters; ++c) {
    qdata.insert(qdata.end(), centers[c].begin(), centers[c].end());
    groups.push_back(QueryGroup::center);
  }
  std::uniform_int_distribution<std::size_t> pick_point(0, n - 1);
  for (std::size_t m = 0; m < n_member; ++m) {
    const auto row = points[pick_point(rng)];
    qdata.insert(qdata.end(), row.begin(), row.end());
    groups.push_back(QueryGroup::member);
  }
  const double min_far_sep = 16.0 * spread * spread * static_cast<double>(d);
  std::uniform_int_distribution<std::size_t> pick_cluster(0, clusters - 1);
  for (std::size_t f = 0; f < n_far; ++f) {
    std::vector<float> far_q(d, 0.0f);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const std::size_t a = pick_cluster(rng);
      std::size_t b = pick_cluster(rng);
      if (clusters > 1 && b == a) b = (a + 1 + b) % clusters;
      for (std::size_t j = 0; j < d; ++j) far_q[j] = 0.5f * (centers[a][j] + centers[b][j]);
      bool ok = true;
      for (const auto& center : centers) {
        if (squared_norm_diff(far_q, center) < min_far_sep) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    qdata.insert(qdata.end(), far_q.begin(), far_q.end());
    groups.push_back(QueryGroup::far);
  }
  PointMatrix<float> queries(nq, d, std::move(qdata));

  // Suggested radii from empirical intra-cluster distance quantiles.
  std::vector<double> to_center(n);
  for (std::size_t i = 0; i < n; ++i) {
    to_center[i] = squared_norm_diff(points[i], centers[assignment[i]]);
  }
  const std::size_t pair_samples = std::min<std::size_t>(20000, n * 4);
  std::vector<double> pair_dists;
  pair_dists.reserve(pair_samples);
  const std::size_t cluster_size = n / clusters;
  for (std::size_t s = 0; s < pair_samples; ++s) {
    const std::size_t i = pick_point(rng);
    std::size_t k = pick_point(rng);
    // redraw within the same cluster
    k = (k / clusters) * clusters + (i % clusters);
    if (k >= n) k = i % clusters;
    if (k == i) k = (i + clusters < n) ? i + clusters : i % clusters;
    pair_dists.push_back(squared_norm_diff(points[i], points[k]));
  }
  const double few_quantile =
      std::min(0.5, 5.0 / std::max<double>(1.0, static_cast<double>(cluster_size)));

  SynthDataset out;
  out.radii[0] = quantile(pair_dists, few_quantile);
  out.radii[1] = quantile(to_center, 0.5);
  out.radii[2] = quantile(to_center, 0.99) * 1.02;
  std::sort(out.radii.begin(), out.radii.end());
  out.points = PointSet(std::move(points), DistanceKind::squared_l2);
  out.queries = PointSet(std::move(queries), DistanceKind::squared_l2);
  out.query_groups = std::move(groups);
  return out;
}

void write_capture_csv(std::ostream& os, const CaptureCurve& curve) {
  os << "radius,fraction\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    os << curve.radii[i] << ',' << curve.fraction_captured[i] << '\n';
  }
}

void write_frequency_csv(std::ostream& os, const FrequencyTable& table) {
  os << "bucket,count\n";
  for (std::size_t k = 0; k < table.bucket_bounds.size(); ++k) {
    os << table.bucket_bounds[k] << ',' << table.counts[k] << '\n';
  }
  if (table.overflowed) os << "overflow," << table.overflow << '\n';
}

}  // namespace rangegraph
