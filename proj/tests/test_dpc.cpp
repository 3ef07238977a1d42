#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ecac/dpc.hpp"
#include "ecac/generators.hpp"
#include "ecac/metrics.hpp"
#include "oracles.hpp"

using namespace ecac;

namespace {

struct BruteDpc {
  std::vector<std::size_t> rho;
  std::vector<double> delta;
  std::vector<ObjectId> nearest_higher;
};

BruteDpc brute_dpc(const Dataset& data, double dc) {
  const std::size_t n = data.size();
  BruteDpc b{std::vector<std::size_t>(n, 0), std::vector<double>(n, 0.0),
             std::vector<ObjectId>(n, DpcQuantities::npos)};
  for (ObjectId i = 0; i < n; ++i)
    for (ObjectId j = 0; j < n; ++j)
      if (i != j && oracle::dist(data, i, j) < dc) ++b.rho[i];
  for (ObjectId i = 0; i < n; ++i) {
    double best = INFINITY, far = 0.0;
    for (ObjectId j = 0; j < n; ++j) {
      const double d = oracle::dist(data, i, j);
      far = std::max(far, d);
      const bool higher = b.rho[j] > b.rho[i] || (b.rho[j] == b.rho[i] && j < i);
      if (higher && d < best) {
        best = d;
        b.nearest_higher[i] = j;
      }
    }
    b.delta[i] = b.nearest_higher[i] == DpcQuantities::npos ? far : best;
  }
  return b;
}

LabeledData blobs_with_noise(std::uint64_t seed) {
  auto g = generate_gaussian_mixture(
      {{60, 60, 12}, {{0.0, 0.0}, {40.0, 0.0}, {20.0, 20.0}}, {1.0, 1.0, 12.0}}, seed);
  return g;
}

}  // namespace

TEST(DpcQuantities, CollinearCounts) {
  const Dataset data({0.0, 1.0, 5.0}, 1);
  const auto q = compute_dpc_quantities(data, 2.0);
  EXPECT_EQ(q.rho, (std::vector<std::size_t>{1, 1, 0}));
  // Object 0 is the maximum (tie with 1 broken by lower id).
  EXPECT_EQ(q.nearest_higher[0], DpcQuantities::npos);
  EXPECT_DOUBLE_EQ(q.delta[0], 5.0);
  EXPECT_EQ(q.nearest_higher[1], 0u);
  EXPECT_EQ(q.nearest_higher[2], 1u);
}

TEST(DpcQuantities, MaximumTakesLargestDistance) {
  const Dataset data({0.0, 0.1, 0.2, 3.0, 9.0}, 1);
  const auto q = compute_dpc_quantities(data, 0.5);
  // Objects 0..2 tie on density; the lowest id ranks highest.
  EXPECT_EQ(q.density_order.front(), 0u);
  EXPECT_DOUBLE_EQ(q.delta[0], 9.0);
}

TEST(DpcQuantities, MatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto data = oracle::random_dataset(200, 2, seed);
    const auto q = compute_dpc_quantities(data, 1.1);
    const auto b = brute_dpc(data, 1.1);
    EXPECT_EQ(q.rho, b.rho);
    EXPECT_EQ(q.delta, b.delta);
    EXPECT_EQ(q.nearest_higher, b.nearest_higher);
  }
}

TEST(DpcQuantities, InvalidCutoff) {
  EXPECT_THROW(compute_dpc_quantities(Dataset({0.0, 1.0}, 1), 0.0), InvalidRadius);
}

TEST(DpcQuantities, DistinctPointsHavePositiveDelta) {
  const auto data = oracle::random_dataset(150, 2, 6);
  const auto q = compute_dpc_quantities(data, 0.9);
  for (double d : q.delta) EXPECT_GT(d, 0.0);
  for (ObjectId i = 0; i < data.size(); ++i)
    if (q.nearest_higher[i] != DpcQuantities::npos)
      EXPECT_TRUE(q.higher(q.nearest_higher[i], i));
}

TEST(DpcCenterProcess, OneCenterPerDenseBlob) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = blobs_with_noise(seed);
    const auto centers = dpc_center_process(g.dataset, 2);
    ASSERT_EQ(centers.size(), 2u);
    EXPECT_NE(g.truth.labels[centers[0]], g.truth.labels[centers[1]]);
    for (auto c : centers) EXPECT_NE(g.truth.labels[c], 2u);  // never the noise
  }
}

TEST(DpcCenterProcess, SingleCenterIsGammaMaximizer) {
  const auto data = oracle::random_dataset(120, 2, 13);
  const auto q = compute_dpc_quantities(data, 1.0);
  ObjectId best = 0;
  for (ObjectId i = 1; i < data.size(); ++i) {
    const double gi = q.gamma(i), gb = q.gamma(best);
    if (gi > gb || (gi == gb && q.rho[i] > q.rho[best])) best = i;
  }
  EXPECT_EQ(dpc_center_process(data, 1, 1.0), std::vector<ObjectId>{best});
}

TEST(DpcCenterProcess, RankingMatchesBruteForce) {
  const auto data = oracle::random_dataset(200, 2, 31);
  const auto b = brute_dpc(data, 1.2);
  std::vector<ObjectId> order(data.size());
  std::iota(order.begin(), order.end(), ObjectId{0});
  std::stable_sort(order.begin(), order.end(), [&](ObjectId x, ObjectId y) {
    const double gx = static_cast<double>(b.rho[x]) * b.delta[x];
    const double gy = static_cast<double>(b.rho[y]) * b.delta[y];
    if (gx != gy) return gx > gy;
    return b.rho[x] > b.rho[y];
  });
  order.resize(10);
  EXPECT_EQ(dpc_center_process(data, 10, 1.2), order);
}

TEST(DpcCenterProcess, InvalidK) {
  const auto data = oracle::random_dataset(10, 2, 1);
  EXPECT_THROW(dpc_center_process(data, 0, 1.0), InvalidK);
  EXPECT_THROW(dpc_center_process(data, 11, 1.0), InvalidK);
}

TEST(DpcAssignment, SingleRootLabelsEverything) {
  const auto data = oracle::random_dataset(100, 2, 8);
  const auto q = compute_dpc_quantities(data, 1.0);
  const std::vector<ObjectId> top{q.density_order.front()};
  EXPECT_EQ(dpc_assignment(data, top, q), Labels(100, 0));
}

TEST(DpcAssignment, TwoBlobsRecoverGroundTruth) {
  const auto g = generate_gaussian_mixture(
      {{80, 80}, {{0.0, 0.0}, {30.0, 0.0}}, {1.5, 1.5}}, 4);
  const auto q = compute_dpc_quantities(g.dataset, default_dpc_cutoff(g.dataset));
  const auto centers = select_dpc_centers(q, 2);
  const auto labels = dpc_assignment(g.dataset, centers, q);
  EXPECT_DOUBLE_EQ(nmi(g.truth.labels, labels), 1.0);
}

TEST(DpcAssignment, MatchesRecursiveChainOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = oracle::random_dataset(100, 2, 100 + seed);
    const auto q = compute_dpc_quantities(data, 1.3);
    // Arbitrary centers, including ones below denser objects.
    const std::vector<ObjectId> centers{5, 50, 77, q.density_order[10]};
    EXPECT_EQ(dpc_assignment(data, centers, q),
              oracle::dpc_labels_recursive(data, centers, q.rho, q.nearest_higher));
  }
}

TEST(DpcAssignmentProperties, FollowsDensityGradientBelowTopCenter) {
  const auto data = oracle::random_dataset(300, 2, 77);
  const auto q = compute_dpc_quantities(data, 0.9);
  const std::vector<ObjectId> centers{q.density_order[3], 120, 240};
  const auto labels = dpc_assignment(data, centers, q);
  ObjectId top = centers[0];
  for (auto c : centers)
    if (q.higher(c, top)) top = c;
  for (ObjectId i = 0; i < data.size(); ++i) {
    ASSERT_LT(labels[i], centers.size());
    if (std::find(centers.begin(), centers.end(), i) != centers.end()) continue;
    if (q.higher(top, i)) EXPECT_EQ(labels[i], labels[q.nearest_higher[i]]);
  }
  for (std::size_t j = 0; j < centers.size(); ++j) EXPECT_EQ(labels[centers[j]], j);
}

TEST(DpcAdapter, ReusesQuantitiesPerDataset) {
  const auto a = oracle::random_dataset(80, 2, 1);
  const auto b = oracle::random_dataset(80, 2, 2);
  const auto algo = make_dpc({1.0});
  const auto ca = algo.center_process(a, 3).ids;
  const auto cb = algo.center_process(b, 3).ids;
  EXPECT_EQ(ca, dpc_center_process(a, 3, 1.0));
  EXPECT_EQ(cb, dpc_center_process(b, 3, 1.0));
  EXPECT_EQ(algo.assignment_process(a, ca),
            dpc_assignment(a, ca, compute_dpc_quantities(a, 1.0)));
}
