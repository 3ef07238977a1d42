#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ecac/dataset.hpp"
#include "ecac/generators.hpp"
#include "oracles.hpp"

using namespace ecac;

namespace {

LoadedData parse(const std::string& text, std::optional<ColumnSelector> col = {}) {
  std::istringstream in(text);
  return parse_csv(in, std::move(col));
}

}  // namespace

TEST(LoadCsv, LastColumnLabelsAreDenselyEncoded) {
  auto loaded = parse("1,2,a\n3,4,a\n5,6,b\n", ColumnSelector{-1L});
  EXPECT_EQ(loaded.dataset.size(), 3u);
  EXPECT_EQ(loaded.dataset.dim(), 2u);
  ASSERT_TRUE(loaded.truth);
  EXPECT_EQ(loaded.truth->labels, (Labels{0, 0, 1}));
  EXPECT_EQ(loaded.truth->k, 2u);
  EXPECT_DOUBLE_EQ(loaded.dataset.point(2)[1], 6.0);
}

TEST(LoadCsv, EncodingFollowsFirstAppearance) {
  auto loaded = parse("0,7\n1,3\n2,7\n3,9\n", ColumnSelector{1L});
  EXPECT_EQ(loaded.truth->labels, (Labels{0, 1, 0, 2}));
}

TEST(LoadCsv, NanCellIsRejected) {
  EXPECT_THROW(parse("1,2\nNaN,4\n"), ParseError);
  EXPECT_THROW(parse("1,inf\n"), ParseError);
}

TEST(LoadCsv, MalformedCellAndRaggedRows) {
  EXPECT_THROW(parse("1,2\n3,x\n"), ParseError);
  EXPECT_THROW(parse("1,2\n3\n"), ParseError);
}

TEST(LoadCsv, EmptyInput) {
  EXPECT_THROW(parse(""), EmptyDataset);
  EXPECT_THROW(parse("x,y\n"), EmptyDataset);
}

TEST(LoadCsv, HeaderAutoDetectedAndColumnByName) {
  auto loaded = parse("x,y,class\n1,2,p\n3,4,q\n", ColumnSelector{std::string("class")});
  EXPECT_EQ(loaded.dataset.size(), 2u);
  EXPECT_EQ(loaded.header, (std::vector<std::string>{"x", "y", "class"}));
  EXPECT_EQ(loaded.truth->k, 2u);

  auto unlabeled = parse("x,y\n1,2\n");
  EXPECT_EQ(unlabeled.dataset.size(), 1u);
  EXPECT_FALSE(unlabeled.truth);
}

TEST(LoadCsv, WhitespaceSeparatedFiles) {
  auto loaded = parse("1.5\t2\t1\n3 4 2\n", ColumnSelector{-1L});
  EXPECT_EQ(loaded.dataset.dim(), 2u);
  EXPECT_EQ(loaded.truth->labels, (Labels{0, 1}));
}

TEST(LoadCsv, MissingFile) {
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), ParseError);
}

TEST(LoadCsv, BundledSpiralFileWhenPresent) {
  const std::string path = std::string(ECAC_TEST_DATA_DIR) + "/spiral.txt";
  if (!std::ifstream(path)) GTEST_SKIP() << "spiral.txt not supplied";
  auto loaded = load_csv(path, ColumnSelector{-1L});
  EXPECT_EQ(loaded.dataset.size(), 312u);
  EXPECT_EQ(loaded.dataset.dim(), 2u);
  EXPECT_EQ(loaded.truth->k, 3u);
}

TEST(DatasetInvariants, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(Dataset({1.0, std::numeric_limits<double>::quiet_NaN()}, 2), ParseError);
  EXPECT_THROW(Dataset({}, 2), EmptyDataset);
  EXPECT_THROW(Dataset({1.0, 2.0, 3.0}, 2), DimensionMismatch);
}

TEST(MinMaxNormalize, MapsColumnsToUnitRange) {
  const Dataset data({0.0, 5.0, 10.0, 5.0, 5.0, 5.0}, 2);
  const auto norm = min_max_normalize(data);
  EXPECT_DOUBLE_EQ(norm.point(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(norm.point(2)[0], 0.5);
  EXPECT_DOUBLE_EQ(norm.point(0)[1], 0.0);  // constant column
}

TEST(GaussianMixture, SingleComponent) {
  auto g = generate_gaussian_mixture({{10}, {{0.0, 0.0}}, {1.0}}, 7);
  EXPECT_EQ(g.dataset.size(), 10u);
  EXPECT_EQ(g.truth.labels, Labels(10, 0));
  EXPECT_EQ(g.truth.k, 1u);
}

TEST(GaussianMixture, FarComponentsAreSeparated) {
  auto g = generate_gaussian_mixture({{50, 50}, {{0.0, 0.0}, {100.0, 0.0}}, {1.0, 1.0}}, 3);
  double min_inter = INFINITY, max_intra = 0.0;
  for (ObjectId i = 0; i < g.dataset.size(); ++i)
    for (ObjectId j = i + 1; j < g.dataset.size(); ++j) {
      const double d = oracle::dist(g.dataset, i, j);
      if (g.truth.labels[i] == g.truth.labels[j]) max_intra = std::max(max_intra, d);
      else min_inter = std::min(min_inter, d);
    }
  EXPECT_GT(min_inter, max_intra);
}

TEST(GaussianMixture, SameSeedIsBitwiseIdentical) {
  GaussianMixtureSpec spec{{20, 30}, {{0.0, 1.0}, {5.0, 5.0}}, {1.0, 2.0}};
  auto a = generate_gaussian_mixture(spec, 11);
  auto b = generate_gaussian_mixture(spec, 11);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.truth, b.truth);
}

TEST(GaussianMixture, InvalidSpecs) {
  EXPECT_THROW(generate_gaussian_mixture({{10, 10}, {{0.0, 0.0}, {1.0}}, {1.0, 1.0}}, 1),
               InvalidSpec);
  EXPECT_THROW(generate_gaussian_mixture({{10}, {{0.0}}, {0.0}}, 1), InvalidSpec);
  EXPECT_THROW(generate_gaussian_mixture({{0}, {{0.0}}, {1.0}}, 1), InvalidSpec);
}

TEST(ShapeGenerators, ObjectCountsAndClasses) {
  auto spiral = make_spiral_like();
  EXPECT_EQ(spiral.dataset.size(), 312u);
  EXPECT_EQ(spiral.truth.k, 3u);
  auto crescents = make_crescents_like();
  EXPECT_EQ(crescents.dataset.size(), 373u);
  EXPECT_EQ(crescents.truth.k, 2u);
  auto ring = make_ring_with_blobs();
  EXPECT_EQ(ring.dataset.size(), 300u);
  EXPECT_EQ(ring.truth.k, 3u);
  auto mixed = make_mixed_shapes(8000);
  EXPECT_EQ(mixed.dataset.size(), 8000u);
  EXPECT_EQ(mixed.truth.k, 6u);
  auto s_set = make_overlapping_gaussians(2000, 15, 5.0, 15.0, 3);
  EXPECT_EQ(s_set.dataset.size(), 2000u);
  EXPECT_EQ(s_set.truth.k, 15u);
}
