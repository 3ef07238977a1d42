#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ecac/algorithms.hpp"
#include "ecac/generators.hpp"
#include "oracles.hpp"

using namespace ecac;

namespace {

LabeledData two_blobs(std::uint64_t seed) {
  return generate_gaussian_mixture({{50, 50}, {{0.0, 0.0}, {100.0, 0.0}}, {1.0, 1.0}},
                                   seed);
}

}  // namespace

TEST(KMeansCenterProcess, KEqualsNIsEveryObject) {
  const auto data = oracle::random_dataset(25, 2, 1);
  auto sel = kmeans_center_process(data, 25);
  std::set<ObjectId> ids(sel.ids.begin(), sel.ids.end());
  EXPECT_EQ(ids.size(), 25u);
  for (double snap : sel.snap_distances) EXPECT_DOUBLE_EQ(snap, 0.0);
}

TEST(KMeansCenterProcess, OneCenterPerBlob) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = two_blobs(seed);
    auto sel = kmeans_center_process(g.dataset, 2, {seed, 300});
    ASSERT_EQ(sel.ids.size(), 2u);
    EXPECT_NE(g.truth.labels[sel.ids[0]], g.truth.labels[sel.ids[1]]);
  }
}

TEST(KMeansCenterProcess, SingleCenterIsNearestToMean) {
  const auto data = oracle::random_dataset(80, 3, 12);
  std::vector<double> mean(3, 0.0);
  for (ObjectId i = 0; i < data.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) mean[c] += data.point(i)[c] / 80.0;
  ObjectId expected = 0;
  double best = INFINITY;
  for (ObjectId i = 0; i < data.size(); ++i) {
    const double d = oracle::dist_to(data, mean, i);
    if (d < best) {
      best = d;
      expected = i;
    }
  }
  auto sel = kmeans_center_process(data, 1);
  EXPECT_EQ(sel.ids, std::vector<ObjectId>{expected});
  EXPECT_NEAR(sel.snap_distances[0], best, 1e-9);
}

TEST(KMeansCenterProcess, DistinctIdsDespiteDuplicates) {
  // Ten copies of one point and one far point; three centroids can collide.
  std::vector<double> v(20, 0.0);
  v.push_back(9.0);
  v.push_back(9.0);
  const Dataset data(std::move(v), 2);
  auto sel = kmeans_center_process(data, 3, {4, 300});
  std::set<ObjectId> ids(sel.ids.begin(), sel.ids.end());
  EXPECT_EQ(ids.size(), 3u);
}

TEST(KMeansCenterProcess, DeterministicForSeedAndRejectsBadK) {
  const auto data = oracle::random_dataset(200, 2, 3);
  EXPECT_EQ(kmeans_center_process(data, 4, {7, 300}).ids,
            kmeans_center_process(data, 4, {7, 300}).ids);
  EXPECT_THROW(kmeans_center_process(data, 0), InvalidK);
  EXPECT_THROW(kmeans_center_process(data, 201), InvalidK);
}

TEST(NearestCenterAssignment, SingleCenter) {
  const auto data = oracle::random_dataset(30, 2, 2);
  const std::vector<ObjectId> centers{0};
  EXPECT_EQ(nearest_center_assignment(data, centers), Labels(30, 0));
}

TEST(NearestCenterAssignment, NearerCenterWins) {
  const Dataset data({0.0, 10.0, 4.0}, 1);
  const std::vector<ObjectId> centers{0, 1};
  EXPECT_EQ(nearest_center_assignment(data, centers), (Labels{0, 1, 0}));
}

TEST(NearestCenterAssignment, TieGoesToLowerPosition) {
  // Object 4 sits at 5, equidistant from objects 1 (at 0) and 3 (at 10).
  const Dataset data({-20.0, 0.0, 30.0, 10.0, 5.0}, 1);
  const std::vector<ObjectId> centers{0, 1, 2, 3};
  EXPECT_EQ(nearest_center_assignment(data, centers)[4], 1u);
}

TEST(NearestCenterAssignment, CentersLabelThemselvesEvenWhenDuplicated) {
  const Dataset data({1.0, 1.0, 1.0, 5.0}, 1);
  const std::vector<ObjectId> centers{0, 2};
  const auto labels = nearest_center_assignment(data, centers);
  EXPECT_EQ(labels[0], 0u);
  EXPECT_EQ(labels[2], 1u);
}

TEST(NearestCenterAssignment, RejectsBadCenters) {
  const Dataset data({1.0, 2.0}, 1);
  EXPECT_THROW(nearest_center_assignment(data, std::vector<ObjectId>{}), EmptyCenters);
  EXPECT_THROW(nearest_center_assignment(data, std::vector<ObjectId>{0, 0}), InvalidSpec);
  EXPECT_THROW(nearest_center_assignment(data, std::vector<ObjectId>{5}), InvalidSpec);
}

TEST(NearestCenterAssignmentProperties, TotalAndTranslationInvariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = oracle::random_dataset(100, 2, seed);
    const std::vector<ObjectId> centers{3, 17, 40, 99};
    const auto labels = nearest_center_assignment(data, centers);
    for (auto l : labels) EXPECT_LT(l, centers.size());
    for (std::size_t j = 0; j < centers.size(); ++j) EXPECT_EQ(labels[centers[j]], j);

    std::vector<double> moved(data.values().begin(), data.values().end());
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += (i % 2 ? 64.0 : -32.0);
    EXPECT_EQ(nearest_center_assignment(Dataset(moved, 2), centers), labels);
  }
}

TEST(CenterBasedAlgorithm, KMeansAdapter) {
  const auto g = two_blobs(9);
  const auto algo = make_kmeans({9, 300});
  EXPECT_EQ(algo.name, "kmeans");
  const auto sel = algo.center_process(g.dataset, 2);
  const auto labels = algo.assignment_process(g.dataset, sel.ids);
  EXPECT_EQ(labels, nearest_center_assignment(g.dataset, sel.ids));
}
