#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ecac/error.hpp"

namespace ecac {

using ObjectId = std::size_t;
using Labels = std::vector<std::size_t>;

/// Immutable N x d point matrix stored row-major. Object identity is the row
/// index.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<double> values, std::size_t dim)
      : values_(std::move(values)), dim_(dim) {
    if (dim_ == 0) throw InvalidSpec("dataset dimension must be >= 1");
    if (values_.empty()) throw EmptyDataset("dataset has no objects");
    if (values_.size() % dim_ != 0)
      throw DimensionMismatch("value count is not a multiple of the dimension");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw ParseError("non-finite coordinate at object " +
                         std::to_string(i / dim_));
    }
    size_ = values_.size() / dim_;
  }

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(ObjectId i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const { return values_; }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<double> values_;
  std::size_t dim_ = 0;
  std::size_t size_ = 0;
};

/// Ground-truth labels densely encoded in 0..k-1.
struct GroundTruth {
  Labels labels;
  std::size_t k = 0;

  bool operator==(const GroundTruth&) const = default;
};

/// Re-encodes arbitrary label values densely by order of first appearance.
template <class T>
GroundTruth encode_labels(std::span<const T> raw) {
  GroundTruth gt;
  gt.labels.reserve(raw.size());
  std::unordered_map<T, std::size_t> codes;
  for (const auto& value : raw) {
    auto [it, inserted] = codes.try_emplace(value, codes.size());
    gt.labels.push_back(it->second);
  }
  gt.k = codes.size();
  return gt;
}

template <class T>
GroundTruth encode_labels(const std::vector<T>& raw) {
  return encode_labels(std::span<const T>(raw));
}

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

inline double distance(const Dataset& data, ObjectId i, ObjectId j) {
  return distance(data.point(i), data.point(j));
}

/// Rescales every column to [0, 1]. Constant columns map to 0.
inline Dataset min_max_normalize(const Dataset& data) {
  const std::size_t n = data.size(), d = data.dim();
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = data.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  std::vector<double> out(data.values().begin(), data.values().end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      const double span = hi[c] - lo[c];
      double& v = out[i * d + c];
      v = span > 0 ? (v - lo[c]) / span : 0.0;
    }
  }
  return Dataset(std::move(out), d);
}

// ---------------------------------------------------------------------------
// CSV ingestion

/// Label column picked by zero-based index (negative counts from the end) or
/// by header name.
using ColumnSelector = std::variant<long, std::string>;

struct LoadedData {
  Dataset dataset;
  std::optional<GroundTruth> truth;
  std::vector<std::string> header;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

/// Splits on commas, or on runs of whitespace when the line holds no comma.
inline std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      cells.emplace_back(trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::istringstream in{std::string(line)};
    std::string cell;
    while (in >> cell) cells.push_back(cell);
  }
  return cells;
}

inline std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Parses CSV text. A first row with a non-numeric feature cell is taken as
/// the header.
inline LoadedData parse_csv(std::istream& in,
                            std::optional<ColumnSelector> label_column = {},
                            const std::string& source = "<stream>") {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    if (line.front() == '#' || line.front() == '@') continue;  // comments, ARFF/KEEL metadata
    rows.push_back(detail::split_row(line));
  }
  if (rows.empty()) throw EmptyDataset(source + ": no rows");

  const std::size_t width = rows.front().size();
  auto where = [&](std::size_t row) {
    return source + ": row " + std::to_string(row + 1);
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw ParseError(where(r) + " has " + std::to_string(rows[r].size()) +
                       " cells, expected " + std::to_string(width));
  }

  std::optional<std::size_t> label_idx;
  bool header_by_name = false;
  if (label_column) {
    if (auto* idx = std::get_if<long>(&*label_column)) {
      const long w = static_cast<long>(width);
      const long resolved = *idx < 0 ? w + *idx : *idx;
      if (resolved < 0 || resolved >= w)
        throw ParseError(source + ": label column " + std::to_string(*idx) +
                         " out of range");
      label_idx = static_cast<std::size_t>(resolved);
    } else {
      const auto& name = std::get<std::string>(*label_column);
      const auto& first = rows.front();
      auto it = std::find(first.begin(), first.end(), name);
      if (it == first.end())
        throw ParseError(source + ": no column named '" + name + "'");
      label_idx = static_cast<std::size_t>(it - first.begin());
      header_by_name = true;
    }
  }

  auto is_feature = [&](std::size_t c) { return !label_idx || c != *label_idx; };
  bool has_header = header_by_name;
  if (!has_header) {
    for (std::size_t c = 0; c < width; ++c) {
      if (is_feature(c) && !detail::parse_real(rows.front()[c])) {
        has_header = true;
        break;
      }
    }
  }

  LoadedData out;
  const std::size_t first_data = has_header ? 1 : 0;
  if (has_header) out.header = rows.front();
  if (rows.size() == first_data) throw EmptyDataset(source + ": no data rows");

  const std::size_t dim = width - (label_idx ? 1 : 0);
  if (dim == 0) throw ParseError(source + ": no feature columns");
  std::vector<double> values;
  values.reserve((rows.size() - first_data) * dim);
  std::vector<std::string> raw_labels;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const auto& cell = rows[r][c];
      if (!is_feature(c)) {
        raw_labels.push_back(cell);
        continue;
      }
      auto v = detail::parse_real(cell);
      if (!v || !std::isfinite(*v))
        throw ParseError(where(r) + ", column " + std::to_string(c + 1) +
                         ": cannot parse '" + cell + "' as a finite real");
      values.push_back(*v);
    }
  }
  out.dataset = Dataset(std::move(values), dim);
  if (label_idx) out.truth = encode_labels(raw_labels);
  return out;
}

inline LoadedData load_csv(const std::string& path,
                           std::optional<ColumnSelector> label_column = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_csv(in, std::move(label_column), path);
}

}  // namespace ecac
