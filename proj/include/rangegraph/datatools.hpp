#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rangegraph/eval.hpp"
#include "rangegraph/points.hpp"

namespace rangegraph {

// Mean fraction of the dataset inside the radius-r ball around a query, for a
// set of ascending radii.
struct CaptureCurve {
  std::vector<double> radii;
  std::vector<double> fraction_captured;  // non-decreasing, in [0, 1]

  // Radius axis rescaled to [0, 1] for plotting several datasets together.
  std::vector<double> normalized_radii() const;
};

// Result-size histogram over powers of ten: bucket 0 counts queries with no
// results, bucket 10^k counts sizes in (10^(k-1), 10^k].
struct FrequencyTable {
  static constexpr std::array<std::uint64_t, 6> bucket_bounds = {0, 10, 100, 1000, 10000, 100000};
  std::array<std::uint64_t, 6> counts = {};
  std::uint64_t overflow = 0;  // queries with more than 10^5 results
  bool overflowed = false;

  std::uint64_t total() const;
};

enum class QueryGroup : std::uint8_t { center = 0, member = 1, far = 2 };

// Seeded Gaussian-mixture dataset with a query set skewed the way production
// range workloads are: a small slice of cluster-center queries with many
// results, a slice of member queries with a few, and a large majority of
// far-planted queries with none. Three suggested radii come out ascending:
// radii[0] captures a handful of same-cluster neighbors, radii[1] roughly half
// a cluster, radii[2] nearly all of one.
struct SynthDataset {
  PointSet points;
  PointSet queries;
  std::array<double, 3> radii = {};
  std::vector<QueryGroup> query_groups;  // one entry per query
};

// Exact when sample == 0, otherwise estimated over a seeded sample of points.
CaptureCurve percent_captured(const PointSet& points, const PointSet& queries,
                              std::span<const double> radii, std::size_t sample = 0,
                              std::uint64_t seed = 42, int threads = 0);

FrequencyTable frequency_distribution(const RangeGroundTruth& gt);

SynthDataset synth_clustered(std::size_t n, std::size_t d, std::size_t clusters, double spread,
                             std::uint64_t seed);

void write_capture_csv(std::ostream& os, const CaptureCurve& curve);
void write_frequency_csv(std::ostream& os, const FrequencyTable& table);

}  // namespace rangegraph
