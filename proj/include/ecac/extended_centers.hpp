#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ecac/algorithms.hpp"
#include "ecac/dataset.hpp"
#include "ecac/density.hpp"
#include "ecac/spatial_index.hpp"

namespace ecac {

enum class SearchKind {
  Local2Delta,  // candidates within 2*delta of the current members
  Global,       // every non-member is a candidate
  Random,       // uniform sampling, attached to the nearest clustering center
  NoDensity,    // Local2Delta scored by raw distance
};

inline std::string_view to_string(SearchKind kind) {
  switch (kind) {
    case SearchKind::Local2Delta: return "local";
    case SearchKind::Global: return "global";
    case SearchKind::Random: return "random";
    case SearchKind::NoDensity: return "nodensity";
  }
  return "?";
}

inline SearchKind parse_search_kind(std::string_view name) {
  if (name == "local") return SearchKind::Local2Delta;
  if (name == "global") return SearchKind::Global;
  if (name == "random") return SearchKind::Random;
  if (name == "nodensity") return SearchKind::NoDensity;
  throw InvalidSpec("unknown strategy '" + std::string(name) + "'");
}

struct SelectionStrategy {
  SearchKind kind = SearchKind::Local2Delta;
  std::uint64_t seed = 0;  // Random only
  /// Maximum number of extended-centers per set. A full set stops accepting
  /// members; the search ends once every set is full.
  std::optional<std::size_t> cap;

  bool uses_density() const { return kind != SearchKind::NoDensity; }
  bool local_pool() const {
    return kind == SearchKind::Local2Delta || kind == SearchKind::NoDensity;
  }

  static SelectionStrategy local() { return {SearchKind::Local2Delta, 0, {}}; }
  static SelectionStrategy global() { return {SearchKind::Global, 0, {}}; }
  static SelectionStrategy random(std::uint64_t seed) {
    return {SearchKind::Random, seed, {}};
  }
  static SelectionStrategy no_density() { return {SearchKind::NoDensity, 0, {}}; }

  SelectionStrategy with_cap(std::size_t c) const {
    auto s = *this;
    s.cap = c;
    return s;
  }
};

/// One greedy selection.
struct TraceStep {
  ObjectId object = 0;
  std::size_t set = 0;
  double dis = 0.0;              // score of the selected pair
  std::size_t covered = 0;       // coverage count after the step
  std::size_t members = 0;       // total members after the step
  bool fallback = false;         // taken from the global pool
};

/// Clustering centers plus the extended-centers derived from each of them.
struct ExtendedSets {
  std::vector<std::vector<ObjectId>> sets;  // sets[i] starts with center i
  std::vector<ObjectId> all;                // identification order; first k are centers
  std::vector<std::size_t> owner;           // owner[p] = set index of all[p]
  std::vector<bool> covered;                // union of delta-neighborhoods of all
  double delta = 0.0;
  std::size_t iterations = 0;
  std::size_t fallbacks = 0;
  std::vector<TraceStep> trace;

  std::size_t k() const { return sets.size(); }
  std::size_t s() const { return all.size(); }
  bool fully_covered() const {
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  }
};

/// Score of attaching object o to an extended-set: the distance to the
/// nearest member, divided by the density of o when use_density is set.
inline double set_distance(const Dataset& data, ObjectId o,
                           std::span<const ObjectId> set,
                           const DensityVector& densities, bool use_density) {
  if (set.empty()) throw EmptyCenters("extended-set is empty");
  double best = std::numeric_limits<double>::infinity();
  for (ObjectId x : set) best = std::min(best, distance(data, o, x));
  return use_density ? best / static_cast<double>(densities.rho[o]) : best;
}

namespace detail {

class GreedyExtender {
 public:
  GreedyExtender(const Dataset& data, const SpatialIndex& index,
                 const DensityVector& densities,
                 std::span<const ObjectId> centers,
                 const SelectionStrategy& strategy, bool record_trace)
      : data_(data),
        index_(index),
        rho_(densities.rho),
        n_(data.size()),
        k_(centers.size()),
        delta_(densities.delta),
        strategy_(strategy),
        record_trace_(record_trace),
        in_e_(n_, 0),
        covered_(n_, 0),
        uncovered_(n_),
        best_dist_(n_, kInf),
        best_set_(n_, kNone),
        full_(k_, 0) {
    if (strategy_.cap) per_set_.assign(n_ * k_, kInf);
    out_.delta = delta_;
    out_.sets.resize(k_);
    for (std::size_t j = 0; j < k_; ++j) add_member(centers[j], j);
  }

  ExtendedSets run() {
    if (strategy_.kind == SearchKind::Random) {
      run_random();
    } else {
      while (!done()) {
        auto pick = strategy_.local_pool() ? pop_local() : scan_global();
        bool fallback = false;
        if (!pick) {
          pick = scan_global();
          fallback = true;
          if (!pick) break;
          ++out_.fallbacks;
        }
        const auto [score, o, j] = *pick;
        add_member(o, j);
        note_step(o, j, score, fallback);
      }
    }
    out_.covered.assign(covered_.begin(), covered_.end());
    return std::move(out_);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  using Entry = std::tuple<double, ObjectId, std::size_t>;  // score, object, set

  bool done() const {
    return uncovered_ == 0 || out_.all.size() == n_ || full_count_ == k_;
  }

  double score(ObjectId o, double dist) const {
    return strategy_.uses_density() ? dist / static_cast<double>(rho_[o]) : dist;
  }

  void note_step(ObjectId o, std::size_t j, double dis, bool fallback) {
    ++out_.iterations;
    if (record_trace_)
      out_.trace.push_back({o, j, dis, n_ - uncovered_, out_.all.size(), fallback});
  }

  void add_member(ObjectId x, std::size_t j) {
    in_e_[x] = 1;
    out_.sets[j].push_back(x);
    out_.all.push_back(x);
    out_.owner.push_back(j);
    index_.for_each_in_radius(data_.point(x), delta_, [&](ObjectId o) {
      if (!covered_[o]) {
        covered_[o] = 1;
        --uncovered_;
      }
    });
    if (strategy_.cap && !full_[j] && out_.sets[j].size() - 1 >= *strategy_.cap) {
      full_[j] = 1;
      ++full_count_;
    }

    if (strategy_.kind == SearchKind::Random) return;
    if (strategy_.local_pool()) {
      index_.for_each_in_radius(data_.point(x), 2.0 * delta_, [&](ObjectId o) {
        if (!in_e_[o]) relax(o, j, distance(data_, o, x));
      });
    } else {
      for (ObjectId o = 0; o < n_; ++o)
        if (!in_e_[o]) relax(o, j, distance(data_, o, x));
    }
    if (full_[j] && strategy_.cap) reassign_from_full(j);
  }

  void relax(ObjectId o, std::size_t j, double d) {
    if (strategy_.cap) {
      double& slot = per_set_[o * k_ + j];
      slot = std::min(slot, d);
      if (full_[j]) return;
    }
    if (d < best_dist_[o] || (d == best_dist_[o] && j < best_set_[o])) {
      best_dist_[o] = d;
      best_set_[o] = j;
      if (strategy_.local_pool()) heap_.emplace(score(o, d), o, j);
    }
  }

  // Objects whose best set just filled fall back to their best open set.
  void reassign_from_full(std::size_t full_set) {
    for (ObjectId o = 0; o < n_; ++o) {
      if (in_e_[o] || best_set_[o] != full_set) continue;
      best_dist_[o] = kInf;
      best_set_[o] = kNone;
      for (std::size_t j = 0; j < k_; ++j) {
        const double d = per_set_[o * k_ + j];
        if (!full_[j] && d < best_dist_[o]) {
          best_dist_[o] = d;
          best_set_[o] = j;
        }
      }
      if (best_set_[o] != kNone && strategy_.local_pool())
        heap_.emplace(score(o, best_dist_[o]), o, best_set_[o]);
    }
  }

  std::optional<Entry> pop_local() {
    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      const auto [sc, o, j] = top;
      if (in_e_[o] || best_set_[o] != j || full_[j]) continue;
      if (score(o, best_dist_[o]) != sc) continue;
      return top;
    }
    return std::nullopt;
  }

  // Exact argmin over every non-member against every open set.
  std::optional<Entry> scan_global() {
    std::vector<ObjectId> open_members;
    if (strategy_.local_pool()) {
      for (std::size_t p = 0; p < out_.all.size(); ++p)
        if (!full_[out_.owner[p]]) open_members.push_back(p);
    }
    std::optional<Entry> best;
    for (ObjectId o = 0; o < n_; ++o) {
      if (in_e_[o]) continue;
      double d = best_dist_[o];
      std::size_t j = best_set_[o];
      if (strategy_.local_pool()) {
        // Local bookkeeping only tracks members within 2*delta.
        d = kInf;
        j = kNone;
        for (std::size_t p : open_members) {
          const double dist = distance(data_, o, out_.all[p]);
          const std::size_t set = out_.owner[p];
          if (dist < d || (dist == d && set < j)) {
            d = dist;
            j = set;
          }
        }
      }
      if (j == kNone) continue;
      const Entry e{score(o, d), o, j};
      if (!best || e < *best) best = e;
    }
    return best;
  }

  void run_random() {
    std::vector<ObjectId> pool;
    for (ObjectId o = 0; o < n_; ++o)
      if (!in_e_[o]) pool.push_back(o);
    std::mt19937_64 rng(strategy_.seed);
    while (!done() && !pool.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const std::size_t slot = pick(rng);
      const ObjectId o = pool[slot];
      pool[slot] = pool.back();
      pool.pop_back();
      std::size_t best = kNone;
      double best_d = kInf;
      for (std::size_t j = 0; j < k_; ++j) {
        if (full_[j]) continue;
        const double d = distance(data_, o, out_.sets[j].front());
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best == kNone) break;
      const double dis = score(o, set_min_distance(o, best));
      add_member(o, best);
      note_step(o, best, dis, false);
    }
  }

  double set_min_distance(ObjectId o, std::size_t j) const {
    double d = kInf;
    for (ObjectId x : out_.sets[j]) d = std::min(d, distance(data_, o, x));
    return d;
  }

  const Dataset& data_;
  const SpatialIndex& index_;
  const std::vector<std::size_t>& rho_;
  std::size_t n_, k_;
  double delta_;
  SelectionStrategy strategy_;
  bool record_trace_;

  std::vector<char> in_e_;
  std::vector<char> covered_;
  std::size_t uncovered_;
  std::vector<double> best_dist_;
  std::vector<std::size_t> best_set_;
  std::vector<double> per_set_;  // only with a cap: n x k nearest distances
  std::vector<char> full_;
  std::size_t full_count_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  ExtendedSets out_;
};

}  // namespace detail

struct ExtendOptions {
  bool record_trace = false;
};

/// Greedy identification of extended-centers.
///
/// Starting from the clustering centers, repeatedly attaches the candidate
/// object with the smallest set_distance to its nearest extended-set, until the
/// union of the members' delta-neighborhoods covers the dataset, every set is
/// full (when capped), or every object is a member. Ties go to the lower
/// object id, then the lower set index.
///
/// The local strategies only consider objects within 2*delta of a member.
/// When that pool is empty while objects remain uncovered, a single step is
/// taken over the global pool and counted in `fallbacks`.
inline ExtendedSets identify_extended_centers(const Dataset& data,
                                              const SpatialIndex& index,
                                              const DensityVector& densities,
                                              std::span<const ObjectId> centers,
                                              const SelectionStrategy& strategy,
                                              ExtendOptions options = {}) {
  if (centers.empty()) throw EmptyCenters("no clustering centers supplied");
  if (!(densities.delta > 0.0)) throw InvalidRadius("delta must be > 0");
  if (densities.rho.size() != data.size())
    throw DimensionMismatch("density vector does not match the dataset");
  check_centers(data, centers);
  return detail::GreedyExtender(data, index, densities, centers, strategy,
                                options.record_trace)
      .run();
}

/// Convenience overload that builds the index and densities itself.
inline ExtendedSets identify_extended_centers(const Dataset& data,
                                              std::span<const ObjectId> centers,
                                              double delta,
                                              const SelectionStrategy& strategy,
                                              ExtendOptions options = {}) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidRadius("delta must be a finite value > 0");
  if (centers.empty()) throw EmptyCenters("no clustering centers supplied");
  const KdTree index(data);
  const auto densities = compute_densities(data, index, delta);
  return identify_extended_centers(data, index, densities, centers, strategy,
                                   options);
}

/// Maps labels over the s initial-clusters (positions in ext.all) to labels
/// over the k extended-sets.
inline Labels merge_clusters(std::span<const std::size_t> initial_labels,
                             const ExtendedSets& ext) {
  Labels out(initial_labels.size());
  for (std::size_t i = 0; i < initial_labels.size(); ++i) {
    const std::size_t l = initial_labels[i];
    if (l >= ext.owner.size())
      throw LabelOutOfRange("initial label " + std::to_string(l) +
                            " but only " + std::to_string(ext.owner.size()) +
                            " initial-clusters");
    out[i] = ext.owner[l];
  }
  return out;
}

}  // namespace ecac
