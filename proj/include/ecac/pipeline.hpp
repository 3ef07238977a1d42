#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ecac/algorithms.hpp"
#include "ecac/dataset.hpp"
#include "ecac/density.hpp"
#include "ecac/extended_centers.hpp"
#include "ecac/spatial_index.hpp"

namespace ecac {

struct OptimizedRun {
  std::vector<ObjectId> centers;
  ExtendedSets ext;
  Labels initial_labels;  // positions in ext.all
  Labels labels;          // merged, one label per clustering center
  double delta = 0.0;
  double ecac_ms = 0.0;   // extended-center identification only
  double assign_ms = 0.0;
};

struct OptimizeOptions {
  std::optional<double> delta;  // absolute radius; wins over the percentile
  double delta_percentile = kDefaultDeltaPercentile;
  SelectionStrategy strategy;
  bool record_trace = false;
};

namespace detail {
inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}
}  // namespace detail

inline double resolve_delta(const Dataset& data, const OptimizeOptions& opts) {
  return opts.delta ? *opts.delta : default_delta(data, opts.delta_percentile);
}

/// Runs the extended-center stages on centers that were already chosen:
/// identification, assignment over the enlarged center list, and merge.
inline OptimizedRun optimize_centers(const Dataset& data,
                                     const SpatialIndex& index,
                                     const CenterBasedAlgorithm& algorithm,
                                     std::span<const ObjectId> centers,
                                     double delta,
                                     const SelectionStrategy& strategy,
                                     bool record_trace = false) {
  OptimizedRun run;
  run.centers.assign(centers.begin(), centers.end());
  run.delta = delta;
  auto t0 = std::chrono::steady_clock::now();
  const auto densities = compute_densities(data, index, delta);
  run.ext = identify_extended_centers(data, index, densities, centers, strategy,
                                      {record_trace});
  run.ecac_ms = detail::elapsed_ms(t0);
  t0 = std::chrono::steady_clock::now();
  run.initial_labels = algorithm.assignment_process(data, run.ext.all);
  run.labels = merge_clusters(run.initial_labels, run.ext);
  run.assign_ms = detail::elapsed_ms(t0);
  return run;
}

/// Full pipeline: center process, extended-centers, assignment, merge.
inline OptimizedRun run_optimized(const Dataset& data,
                                  const CenterBasedAlgorithm& algorithm,
                                  std::size_t k,
                                  const OptimizeOptions& opts = {}) {
  check_k(data, k);
  const auto selection = algorithm.center_process(data, k);
  const KdTree index(data);
  return optimize_centers(data, index, algorithm, selection.ids,
                          resolve_delta(data, opts), opts.strategy,
                          opts.record_trace);
}

}  // namespace ecac
