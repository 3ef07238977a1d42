#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "ecac/dataset.hpp"

namespace ecac {

struct LabeledData {
  Dataset dataset;
  GroundTruth truth;
};

struct GaussianMixtureSpec {
  std::vector<std::size_t> counts;         // objects per component
  std::vector<std::vector<double>> means;  // one mean per component
  std::vector<double> stddevs;             // isotropic sigma per component
};

/// Samples each component in turn; labels follow the generating component.
inline LabeledData generate_gaussian_mixture(const GaussianMixtureSpec& spec,
                                             std::uint64_t seed) {
  const std::size_t k = spec.counts.size();
  if (k == 0) throw InvalidSpec("mixture needs at least one component");
  if (spec.means.size() != k || spec.stddevs.size() != k)
    throw InvalidSpec("counts, means and stddevs must have one entry per component");
  const std::size_t d = spec.means.front().size();
  if (d == 0) throw InvalidSpec("means must have dimension >= 1");
  for (std::size_t j = 0; j < k; ++j) {
    if (spec.means[j].size() != d)
      throw InvalidSpec("component " + std::to_string(j) + " mean has wrong dimension");
    if (spec.counts[j] == 0)
      throw InvalidSpec("component " + std::to_string(j) + " has zero objects");
    if (!(spec.stddevs[j] > 0.0))
      throw InvalidSpec("component " + std::to_string(j) + " stddev must be > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> values;
  Labels labels;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < spec.counts[j]; ++i) {
      for (std::size_t c = 0; c < d; ++c)
        values.push_back(spec.means[j][c] + spec.stddevs[j] * unit(rng));
      labels.push_back(j);
    }
  }
  return {Dataset(std::move(values), d), GroundTruth{std::move(labels), k}};
}

// ---------------------------------------------------------------------------
// Two-dimensional stand-ins for the classic shape benchmarks. They mimic the
// object counts and cluster geometry of those files, not their coordinates.

namespace detail {

class ShapeBuilder {
 public:
  explicit ShapeBuilder(std::uint64_t seed) : rng_(seed) {}

  void add(double x, double y, std::size_t label) {
    values_.push_back(x);
    values_.push_back(y);
    labels_.push_back(label);
    k_ = std::max(k_, label + 1);
  }

  double normal(double sigma) { return sigma * unit_(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  /// Arc of a circle with radial jitter drawn uniformly in +-thickness/2.
  void arc(double cx, double cy, double radius, double from_deg, double to_deg,
           double thickness, std::size_t count, std::size_t label) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = uniform(from_deg, to_deg) * std::numbers::pi / 180.0;
      const double r = radius + uniform(-thickness / 2, thickness / 2);
      add(cx + r * std::cos(a), cy + r * std::sin(a), label);
    }
  }

  void blob(double cx, double cy, double sigma, std::size_t count,
            std::size_t label) {
    for (std::size_t i = 0; i < count; ++i)
      add(cx + normal(sigma), cy + normal(sigma), label);
  }

  LabeledData finish() {
    return {Dataset(std::move(values_), 2), GroundTruth{std::move(labels_), k_}};
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
  std::vector<double> values_;
  Labels labels_;
  std::size_t k_ = 0;
};

}  // namespace detail

/// Three interleaved spiral arms, 312 objects.
inline LabeledData make_spiral_like(std::uint64_t seed = 1) {
  detail::ShapeBuilder b(seed);
  const std::size_t counts[3] = {106, 101, 105};
  for (std::size_t arm = 0; arm < 3; ++arm) {
    const double offset = 2.0 * std::numbers::pi * static_cast<double>(arm) / 3.0;
    for (std::size_t i = 0; i < counts[arm]; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(counts[arm] - 1);
      const double theta = std::numbers::pi * (0.5 + 2.5 * t);
      const double r = theta;
      b.add(r * std::cos(theta + offset) + b.normal(0.08),
            r * std::sin(theta + offset) + b.normal(0.08), arm);
    }
  }
  return b.finish();
}

/// Two interlocking crescents of unequal density, 276 + 97 = 373 objects.
inline LabeledData make_crescents_like(std::uint64_t seed = 1) {
  detail::ShapeBuilder b(seed);
  b.arc(0.0, 0.0, 15.0, 0.0, 180.0, 3.0, 276, 0);
  b.arc(15.0, 6.0, 15.0, 180.0, 360.0, 3.0, 97, 1);
  return b.finish();
}

/// An open ring around two Gaussian blobs, 110 + 97 + 93 = 300 objects.
inline LabeledData make_ring_with_blobs(std::uint64_t seed = 1) {
  detail::ShapeBuilder b(seed);
  b.arc(0.0, 0.0, 14.0, -60.0, 240.0, 2.0, 110, 0);
  b.blob(-6.0, -1.0, 2.2, 97, 1);
  b.blob(6.0, -1.0, 2.2, 93, 2);
  return b.finish();
}

/// Isotropic Gaussian clusters in a 100 x 100 square whose means are at least
/// min_separation apart; sigma controls the overlap.
inline LabeledData make_overlapping_gaussians(std::size_t n, std::size_t k,
                                              double sigma,
                                              double min_separation,
                                              std::uint64_t seed) {
  if (k == 0 || n < k) throw InvalidSpec("need 1 <= k <= n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(10.0, 90.0);
  std::vector<std::vector<double>> means;
  std::size_t attempts = 0;
  while (means.size() < k) {
    std::vector<double> m = {coord(rng), coord(rng)};
    bool ok = true;
    for (const auto& other : means)
      if (distance(m, other) < min_separation) ok = false;
    if (ok || ++attempts > 100000) means.push_back(std::move(m));
  }
  GaussianMixtureSpec spec;
  spec.means = std::move(means);
  spec.stddevs.assign(k, sigma);
  for (std::size_t j = 0; j < k; ++j)
    spec.counts.push_back(n / k + (j < n % k ? 1 : 0));
  return generate_gaussian_mixture(spec, seed ^ 0x9e3779b97f4a7c15ULL);
}

/// Six shaped clusters at the 8,000-object scale: two crescents, a ring with
/// a blob inside it, a bar, and a spiral arm.
inline LabeledData make_mixed_shapes(std::size_t n = 8000, std::uint64_t seed = 1) {
  detail::ShapeBuilder b(seed);
  const std::size_t part = n / 6;
  const std::size_t last = n - 5 * part;
  b.arc(20.0, 70.0, 14.0, 190.0, 350.0, 4.0, part, 0);
  b.arc(34.0, 62.0, 14.0, 10.0, 170.0, 4.0, part, 1);
  b.arc(75.0, 70.0, 17.0, 0.0, 360.0, 3.0, part, 2);
  b.blob(75.0, 70.0, 3.0, part, 3);
  for (std::size_t i = 0; i < part; ++i)
    b.add(b.uniform(10.0, 55.0), b.uniform(18.0, 24.0), 4);
  for (std::size_t i = 0; i < last; ++i) {
    const double theta = std::numbers::pi * b.uniform(0.6, 2.6);
    const double r = 2.2 * theta;
    b.add(78.0 + r * std::cos(theta) + b.normal(0.8),
          28.0 + 0.6 * r * std::sin(theta) + b.normal(0.8), 5);
  }
  return b.finish();
}

}  // namespace ecac
