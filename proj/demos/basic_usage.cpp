// K-means on three interleaved spiral arms, with and without extended-centers.
#include <cstdio>

#include "ecac/ecac.hpp"

int main() {
  const auto spiral = ecac::make_spiral_like();
  const auto& data = spiral.dataset;
  const auto kmeans = ecac::make_kmeans({.seed = 1});

  const auto centers = kmeans.center_process(data, 3).ids;
  const auto plain = kmeans.assignment_process(data, centers);

  const ecac::KdTree index(data);
  for (double p : {0.01, 0.02, 0.05}) {
    const double delta = ecac::default_delta(data, p);
    const auto run = ecac::optimize_centers(data, index, kmeans, centers, delta,
                                            ecac::SelectionStrategy::local());
    std::printf("delta=%.3f  s=%zu  NMI %.4f -> %.4f\n", delta, run.ext.s(),
                ecac::nmi(spiral.truth.labels, plain),
                ecac::nmi(spiral.truth.labels, run.labels));
  }
}
