#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ecac/dataset.hpp"
#include "ecac/error.hpp"

namespace ecac {

/// Co-occurrence counts of two labelings over the same objects. Label values
/// are re-encoded densely, so any integer labels are accepted.
class ContingencyTable {
 public:
  ContingencyTable(std::span<const std::size_t> u,
                   std::span<const std::size_t> v) {
    if (u.size() != v.size())
      throw DimensionMismatch("labelings have different lengths");
    if (u.empty()) throw EmptyDataset("labelings are empty");
    const auto ru = encode(u), rv = encode(v);
    rows_ = max_plus_one(ru);
    cols_ = max_plus_one(rv);
    counts_.assign(rows_ * cols_, 0);
    row_sums_.assign(rows_, 0);
    col_sums_.assign(cols_, 0);
    for (std::size_t i = 0; i < ru.size(); ++i) {
      ++counts_[ru[i] * cols_ + rv[i]];
      ++row_sums_[ru[i]];
      ++col_sums_[rv[i]];
    }
    total_ = u.size();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t count(std::size_t i, std::size_t j) const {
    return counts_[i * cols_ + j];
  }
  std::uint64_t row_sum(std::size_t i) const { return row_sums_[i]; }
  std::uint64_t col_sum(std::size_t j) const { return col_sums_[j]; }
  std::uint64_t total() const { return total_; }

 private:
  static std::vector<std::size_t> encode(std::span<const std::size_t> labels) {
    std::unordered_map<std::size_t, std::size_t> codes;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back(codes.try_emplace(l, codes.size()).first->second);
    return out;
  }
  static std::size_t max_plus_one(const std::vector<std::size_t>& v) {
    std::size_t m = 0;
    for (auto x : v) m = std::max(m, x + 1);
    return m;
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint64_t> counts_, row_sums_, col_sums_;
  std::uint64_t total_ = 0;
};

struct PairConfusion {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const PairConfusion&) const = default;
};

namespace detail {
inline std::uint64_t pairs(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
}  // namespace detail

/// Pair counts from contingency sums; u is the reference labeling.
inline PairConfusion pair_confusion(const ContingencyTable& t) {
  std::uint64_t same_both = 0, same_u = 0, same_v = 0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) same_both += detail::pairs(t.count(i, j));
  for (std::size_t i = 0; i < t.rows(); ++i) same_u += detail::pairs(t.row_sum(i));
  for (std::size_t j = 0; j < t.cols(); ++j) same_v += detail::pairs(t.col_sum(j));
  PairConfusion c;
  c.tp = same_both;
  c.fn = same_u - same_both;
  c.fp = same_v - same_both;
  c.tn = detail::pairs(t.total()) - c.tp - c.fn - c.fp;
  return c;
}

inline double rand_index(std::span<const std::size_t> u,
                         std::span<const std::size_t> v) {
  if (u.size() < 2) throw InvalidSpec("Rand index needs at least two objects");
  const auto c = pair_confusion(ContingencyTable(u, v));
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

struct NmiScore {
  double value = 0.0;
  bool degenerate = false;  // a labeling has one class, so its entropy is 0
};

/// Mutual information normalized by the geometric mean of the two entropies.
inline NmiScore nmi_score(std::span<const std::size_t> u,
                          std::span<const std::size_t> v) {
  const ContingencyTable t(u, v);
  const double n = static_cast<double>(t.total());
  auto entropy = [n](std::uint64_t count) {
    if (count == 0) return 0.0;
    const double p = static_cast<double>(count) / n;
    return -p * std::log(p);
  };
  double hu = 0.0, hv = 0.0, mi = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) hu += entropy(t.row_sum(i));
  for (std::size_t j = 0; j < t.cols(); ++j) hv += entropy(t.col_sum(j));
  if (t.rows() == 1 || t.cols() == 1) {
    // Identical partitions only when both are a single class.
    return {t.rows() == t.cols() ? 1.0 : 0.0, true};
  }
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const std::uint64_t c = t.count(i, j);
      if (c == 0) continue;
      const double pij = static_cast<double>(c) / n;
      const double pi = static_cast<double>(t.row_sum(i)) / n;
      const double pj = static_cast<double>(t.col_sum(j)) / n;
      mi += pij * std::log(pij / (pi * pj));
    }
  const double value = mi / std::sqrt(hu * hv);
  return {std::clamp(value, 0.0, 1.0), false};
}

inline double nmi(std::span<const std::size_t> u, std::span<const std::size_t> v) {
  return nmi_score(u, v).value;
}

/// Signed percentage change of a score; empty for a zero baseline.
inline std::optional<double> improvement_rate(double original, double optimized) {
  if (original == 0.0) return std::nullopt;
  return 100.0 * (optimized - original) / original;
}

}  // namespace ecac
