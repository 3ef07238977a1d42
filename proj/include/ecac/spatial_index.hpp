#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ecac/dataset.hpp"

namespace ecac {

/// Static k-d tree over a Dataset for fixed-radius queries.
///
/// Neighborhoods are open balls: a query with radius r reports exactly the
/// objects j with ||q - o_j|| < r. The tree keeps a pointer to the dataset,
/// which must outlive it.
class KdTree {
 public:
  explicit KdTree(const Dataset& data, std::size_t leaf_size = 16)
      : data_(&data), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    order_.resize(data.size());
    std::iota(order_.begin(), order_.end(), ObjectId{0});
    nodes_.reserve(2 * data.size() / leaf_size_ + 1);
    build(0, order_.size());
  }

  const Dataset& dataset() const { return *data_; }

  /// Calls visit(id) for every object strictly inside the ball.
  template <class Visit>
  void for_each_in_radius(std::span<const double> center, double radius,
                          Visit&& visit) const {
    check_query(center, radius);
    if (!nodes_.empty()) visit_node(0, center, radius, visit);
  }

  /// Ids strictly inside the ball, ascending.
  std::vector<ObjectId> range_query(std::span<const double> center,
                                    double radius) const {
    std::vector<ObjectId> out;
    for_each_in_radius(center, radius, [&](ObjectId id) { out.push_back(id); });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<ObjectId> range_query(ObjectId center, double radius) const {
    return range_query(data_->point(center), radius);
  }

  std::size_t count_in_radius(std::span<const double> center,
                              double radius) const {
    std::size_t count = 0;
    for_each_in_radius(center, radius, [&](ObjectId) { ++count; });
    return count;
  }

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;     // slice of order_
    std::uint32_t left = 0, right = 0;    // children; 0 means leaf
    std::uint32_t split_dim = 0;
    double split = 0.0;
  };

  void check_query(std::span<const double> center, double radius) const {
    if (center.size() != data_->dim())
      throw DimensionMismatch("query has dimension " +
                              std::to_string(center.size()) + ", index has " +
                              std::to_string(data_->dim()));
    if (!(radius > 0.0)) throw InvalidRadius("query radius must be > 0");
  }

  std::uint32_t build(std::size_t begin, std::size_t end) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({static_cast<std::uint32_t>(begin),
                      static_cast<std::uint32_t>(end), 0, 0, 0, 0.0});
    if (end - begin <= leaf_size_) return index;

    // Split on the dimension of largest spread.
    const std::size_t d = data_->dim();
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t c = 0; c < d; ++c) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t k = begin; k < end; ++k) {
        const double v = data_->point(order_[k])[c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = c;
      }
    }
    if (best_spread <= 0.0) return index;  // all coincident

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](ObjectId a, ObjectId b) {
                       return data_->point(a)[best_dim] <
                              data_->point(b)[best_dim];
                     });
    // Left holds coordinates <= split, right holds coordinates >= split.
    const double split = data_->point(order_[mid])[best_dim];
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    Node& node = nodes_[index];
    node.left = left;
    node.right = right;
    node.split_dim = static_cast<std::uint32_t>(best_dim);
    node.split = split;
    return index;
  }

  template <class Visit>
  void visit_node(std::uint32_t index, std::span<const double> q, double r,
                  Visit& visit) const {
    const Node& node = nodes_[index];
    if (node.left == 0) {
      for (std::uint32_t k = node.begin; k < node.end; ++k) {
        const ObjectId id = order_[k];
        if (distance(q, data_->point(id)) < r) visit(id);
      }
      return;
    }
    const double diff = q[node.split_dim] - node.split;
    // A point on the far side differs by at least |diff| in that coordinate,
    // so |diff| >= r rules the whole side out.
    if (diff <= 0.0) {
      visit_node(node.left, q, r, visit);
      if (-diff < r) visit_node(node.right, q, r, visit);
    } else {
      visit_node(node.right, q, r, visit);
      if (diff < r) visit_node(node.left, q, r, visit);
    }
  }

  const Dataset* data_;
  std::size_t leaf_size_;
  std::vector<ObjectId> order_;
  std::vector<Node> nodes_;
};

using SpatialIndex = KdTree;

/// Free-function form of KdTree::range_query.
inline std::vector<ObjectId> range_query(const SpatialIndex& index,
                                         std::span<const double> center,
                                         double radius) {
  return index.range_query(center, radius);
}

}  // namespace ecac
