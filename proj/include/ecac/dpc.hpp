#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ecac/algorithms.hpp"
#include "ecac/dataset.hpp"
#include "ecac/density.hpp"
#include "ecac/detail/parallel.hpp"
#include "ecac/spatial_index.hpp"

namespace ecac {

/// Density-peaks decision quantities under a cutoff kernel.
struct DpcQuantities {
  double cutoff = 0.0;
  std::vector<std::size_t> rho;        // neighbors strictly within cutoff, self excluded
  std::vector<double> delta;           // distance to nearest higher-density object
  std::vector<ObjectId> nearest_higher;  // npos for the density maximum
  std::vector<ObjectId> density_order;   // descending density, ties by lower id

  static constexpr ObjectId npos = std::numeric_limits<ObjectId>::max();

  /// True when a ranks above b: larger rho, or equal rho and lower id.
  bool higher(ObjectId a, ObjectId b) const {
    return rho[a] > rho[b] || (rho[a] == rho[b] && a < b);
  }

  double gamma(ObjectId i) const {
    return static_cast<double>(rho[i]) * delta[i];
  }
};

inline DpcQuantities compute_dpc_quantities(const Dataset& data,
                                            double cutoff) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff))
    throw InvalidRadius("DPC cutoff distance must be a finite value > 0");
  const std::size_t n = data.size();
  DpcQuantities q;
  q.cutoff = cutoff;
  q.rho.resize(n);
  q.delta.resize(n);
  q.nearest_higher.assign(n, DpcQuantities::npos);

  const KdTree tree(data);
  detail::parallel_for(n, [&](std::size_t i) {
    q.rho[i] = tree.count_in_radius(data.point(i), cutoff) - 1;
  });

  q.density_order.resize(n);
  std::iota(q.density_order.begin(), q.density_order.end(), ObjectId{0});
  std::sort(q.density_order.begin(), q.density_order.end(),
            [&](ObjectId a, ObjectId b) { return q.higher(a, b); });

  // Scanning in density order, every earlier object is a higher one.
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[q.density_order[r]] = r;
  detail::parallel_for(n, [&](std::size_t i) {
    const std::size_t r = rank[i];
    if (r == 0) {
      double far = 0.0;
      for (ObjectId j = 0; j < n; ++j) far = std::max(far, distance(data, i, j));
      q.delta[i] = far;
      return;
    }
    double best = std::numeric_limits<double>::infinity();
    ObjectId best_id = DpcQuantities::npos;
    for (std::size_t t = 0; t < r; ++t) {
      const ObjectId j = q.density_order[t];
      const double d = distance(data, i, j);
      if (d < best || (d == best && j < best_id)) {
        best = d;
        best_id = j;
      }
    }
    q.delta[i] = best;
    q.nearest_higher[i] = best_id;
  });
  return q;
}

/// Cutoff making the average neighbor count about 2% of N.
inline double default_dpc_cutoff(const Dataset& data, std::uint64_t seed = 0) {
  return pairwise_distance_percentile(data, 0.02, 1000, seed);
}

/// The k objects of largest gamma = rho * delta; ties by larger rho, then
/// lower id.
inline std::vector<ObjectId> select_dpc_centers(const DpcQuantities& q,
                                                std::size_t k) {
  const std::size_t n = q.rho.size();
  if (k < 1 || k > n)
    throw InvalidK("k = " + std::to_string(k) + " outside [1, " +
                   std::to_string(n) + "]");
  std::vector<ObjectId> ids(n);
  std::iota(ids.begin(), ids.end(), ObjectId{0});
  auto ranks_before = [&](ObjectId a, ObjectId b) {
    const double ga = q.gamma(a), gb = q.gamma(b);
    if (ga != gb) return ga > gb;
    if (q.rho[a] != q.rho[b]) return q.rho[a] > q.rho[b];
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                    ids.end(), ranks_before);
  ids.resize(k);
  return ids;
}

inline std::vector<ObjectId> dpc_center_process(
    const Dataset& data, std::size_t k, std::optional<double> cutoff = {}) {
  check_k(data, k);
  return select_dpc_centers(
      compute_dpc_quantities(data, cutoff ? *cutoff : default_dpc_cutoff(data)),
      k);
}

/// Labels objects along the density gradient. Objects denser than every
/// center have no labeled chain to follow and take their nearest center.
inline Labels dpc_assignment(const Dataset& data,
                             std::span<const ObjectId> centers,
                             const DpcQuantities& q) {
  check_centers(data, centers);
  const std::size_t n = data.size();
  constexpr std::size_t unlabeled = std::numeric_limits<std::size_t>::max();
  Labels labels(n, unlabeled);
  for (std::size_t j = 0; j < centers.size(); ++j) labels[centers[j]] = j;

  auto nearest_center = [&](ObjectId i) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d2 = squared_distance(data.point(i), data.point(centers[j]));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    return best;
  };

  bool passed_center = false;
  for (ObjectId i : q.density_order) {
    if (labels[i] != unlabeled) {
      passed_center = true;
      continue;
    }
    labels[i] = passed_center ? labels[q.nearest_higher[i]] : nearest_center(i);
  }
  return labels;
}

struct DpcParams {
  std::optional<double> cutoff;
};

/// DPC as a pluggable algorithm. Decision quantities are computed once per
/// dataset and reused by later assignment calls on the same dataset.
inline CenterBasedAlgorithm make_dpc(DpcParams params = {}) {
  struct Cache {
    std::mutex mutex;
    Dataset data;
    std::shared_ptr<const DpcQuantities> quantities;
  };
  auto cache = std::make_shared<Cache>();
  auto quantities_for = [cache, params](const Dataset& data) {
    std::lock_guard lock(cache->mutex);
    if (!cache->quantities || !(cache->data == data)) {
      const double dc = params.cutoff ? *params.cutoff : default_dpc_cutoff(data);
      cache->quantities =
          std::make_shared<const DpcQuantities>(compute_dpc_quantities(data, dc));
      cache->data = data;
    }
    return cache->quantities;
  };
  return {
      "dpc",
      [quantities_for](const Dataset& data, std::size_t k) {
        check_k(data, k);
        CenterSelection sel;
        sel.ids = select_dpc_centers(*quantities_for(data), k);
        return sel;
      },
      [quantities_for](const Dataset& data, std::span<const ObjectId> centers) {
        return dpc_assignment(data, centers, *quantities_for(data));
      },
  };
}

}  // namespace ecac
