#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ecac/dataset.hpp"
#include "ecac/detail/parallel.hpp"

namespace ecac {

/// Output of a center process: distinct dataset object ids plus whatever
/// diagnostics the algorithm reports.
struct CenterSelection {
  std::vector<ObjectId> ids;
  std::vector<double> snap_distances;  // K-means only: centroid to chosen object
  std::size_t iterations = 0;
};

/// A center-based clustering algorithm split into its two phases. The
/// assignment process labels every object with a position in the center list
/// it is handed, so it can be run on any list of dataset objects, not only the
/// one the center process produced.
struct CenterBasedAlgorithm {
  std::string name;
  std::function<CenterSelection(const Dataset&, std::size_t k)> center_process;
  std::function<Labels(const Dataset&, std::span<const ObjectId>)>
      assignment_process;
};

inline void check_k(const Dataset& data, std::size_t k) {
  if (k < 1 || k > data.size())
    throw InvalidK("k = " + std::to_string(k) + " outside [1, " +
                   std::to_string(data.size()) + "]");
}

inline void check_centers(const Dataset& data,
                          std::span<const ObjectId> centers) {
  if (centers.empty()) throw EmptyCenters("center list is empty");
  std::vector<char> seen(data.size(), 0);
  for (ObjectId c : centers) {
    if (c >= data.size())
      throw InvalidSpec("center id " + std::to_string(c) + " out of range");
    if (seen[c]) throw InvalidSpec("duplicate center id " + std::to_string(c));
    seen[c] = 1;
  }
}

/// Labels each object with the list position of its nearest center; ties go to
/// the lower position. Each center is labeled with its own position.
inline Labels nearest_center_assignment(const Dataset& data,
                                        std::span<const ObjectId> centers) {
  check_centers(data, centers);
  Labels labels(data.size());
  detail::parallel_for(data.size(), [&](std::size_t i) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d2 = squared_distance(data.point(i), data.point(centers[j]));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    labels[i] = best;
  });
  for (std::size_t j = 0; j < centers.size(); ++j) labels[centers[j]] = j;
  return labels;
}

// ---------------------------------------------------------------------------
// K-means

struct KMeansParams {
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
};

namespace detail {

inline std::vector<ObjectId> sample_distinct(std::size_t n, std::size_t k,
                                             std::uint64_t seed) {
  std::vector<ObjectId> ids(n);
  std::iota(ids.begin(), ids.end(), ObjectId{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(k);
  return ids;
}

}  // namespace detail

/// Lloyd iteration from k distinct uniformly sampled objects, then each final
/// centroid is snapped to its nearest unused dataset object.
inline CenterSelection kmeans_center_process(const Dataset& data, std::size_t k,
                                             const KMeansParams& params = {}) {
  check_k(data, k);
  const std::size_t n = data.size(), d = data.dim();
  std::vector<double> centroids(k * d);
  {
    const auto seeds = detail::sample_distinct(n, k, params.seed);
    for (std::size_t j = 0; j < k; ++j) {
      auto p = data.point(seeds[j]);
      std::copy(p.begin(), p.end(), centroids.begin() + static_cast<std::ptrdiff_t>(j * d));
    }
  }
  auto centroid = [&](std::size_t j) {
    return std::span<const double>(centroids.data() + j * d, d);
  };

  Labels assign(n, k);  // k = unassigned sentinel
  Labels next(n);
  std::size_t iter = 0;
  while (iter < params.max_iter) {
    ++iter;
    detail::parallel_for(n, [&](std::size_t i) {
      std::size_t best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d2 = squared_distance(data.point(i), centroid(j));
        if (d2 < best_d2) {
          best_d2 = d2;
          best = j;
        }
      }
      next[i] = best;
    });
    if (next == assign) break;
    assign.swap(next);

    std::vector<double> sums(k * d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto p = data.point(i);
      ++counts[assign[i]];
      for (std::size_t c = 0; c < d; ++c) sums[assign[i] * d + c] += p[c];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t c = 0; c < d; ++c)
        centroids[j * d + c] = sums[j * d + c] / static_cast<double>(counts[j]);
    }
  }

  CenterSelection out;
  out.iterations = iter;
  std::vector<char> used(n, 0);
  for (std::size_t j = 0; j < k; ++j) {
    ObjectId best = n;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (ObjectId i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double d2 = squared_distance(data.point(i), centroid(j));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    used[best] = 1;
    out.ids.push_back(best);
    out.snap_distances.push_back(std::sqrt(best_d2));
  }
  return out;
}

inline CenterBasedAlgorithm make_kmeans(KMeansParams params = {}) {
  return {
      "kmeans",
      [params](const Dataset& data, std::size_t k) {
        return kmeans_center_process(data, k, params);
      },
      [](const Dataset& data, std::span<const ObjectId> centers) {
        return nearest_center_assignment(data, centers);
      },
  };
}

}  // namespace ecac
