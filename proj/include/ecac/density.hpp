#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ecac/dataset.hpp"
#include "ecac/detail/parallel.hpp"
#include "ecac/spatial_index.hpp"

namespace ecac {

/// Per-object count of objects inside the open delta-ball, self included.
struct DensityVector {
  std::vector<std::size_t> rho;
  double delta = 0.0;
};

inline DensityVector compute_densities(const Dataset& data,
                                       const SpatialIndex& index,
                                       double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidRadius("density radius must be a finite value > 0");
  DensityVector out;
  out.delta = delta;
  out.rho.resize(data.size());
  detail::parallel_for(data.size(), [&](std::size_t i) {
    out.rho[i] = index.count_in_radius(data.point(i), delta);
  });
  return out;
}

/// Nearest-rank percentile of a nonempty list: the value at sorted position
/// ceil(p * M) - 1, clamped to the valid range.
inline double nearest_rank_percentile(std::vector<double> values,
                                      double percentile) {
  const std::size_t m = values.size();
  const double rank = std::ceil(percentile * static_cast<double>(m));
  const std::size_t pos = static_cast<std::size_t>(
      std::clamp(rank - 1.0, 0.0, static_cast<double>(m - 1)));
  std::nth_element(values.begin(),
                   values.begin() + static_cast<std::ptrdiff_t>(pos),
                   values.end());
  return values[pos];
}

/// Returns the given percentile of positive pairwise distances, estimated
/// from min(N, sample_cap) objects. When N <= sample_cap every object is
/// used and the result does not depend on the seed.
inline double pairwise_distance_percentile(const Dataset& data,
                                           double percentile,
                                           std::size_t sample_cap = 1000,
                                           std::uint64_t seed = 0) {
  if (data.size() < 2)
    throw DegenerateDataset("need at least two objects for pairwise distances");
  if (!(percentile > 0.0 && percentile < 1.0))
    throw InvalidSpec("percentile must lie in (0, 1)");
  std::vector<ObjectId> sample(data.size());
  std::iota(sample.begin(), sample.end(), ObjectId{0});
  if (sample_cap >= 2 && data.size() > sample_cap) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < sample_cap; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, sample.size() - 1);
      std::swap(sample[i], sample[pick(rng)]);
    }
    sample.resize(sample_cap);
    std::sort(sample.begin(), sample.end());
  }
  std::vector<double> dists;
  dists.reserve(sample.size() * (sample.size() - 1) / 2);
  for (std::size_t a = 0; a < sample.size(); ++a)
    for (std::size_t b = a + 1; b < sample.size(); ++b) {
      const double d = distance(data, sample[a], sample[b]);
      if (d > 0.0) dists.push_back(d);
    }
  if (dists.empty())
    throw DegenerateDataset("all sampled objects coincide; no positive distance");
  return nearest_rank_percentile(std::move(dists), percentile);
}

inline constexpr double kDefaultDeltaPercentile = 0.02;

/// Default density radius: a low percentile of the pairwise distances.
inline double default_delta(const Dataset& data,
                            double percentile = kDefaultDeltaPercentile,
                            std::size_t sample_cap = 1000,
                            std::uint64_t seed = 0) {
  return pairwise_distance_percentile(data, percentile, sample_cap, seed);
}

}  // namespace ecac
