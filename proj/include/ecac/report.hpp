#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecac/dataset.hpp"
#include "ecac/error.hpp"

namespace ecac {

inline constexpr int kSchemaVersion = 1;

struct Scores {
  double nmi = 0.0;
  double ri = 0.0;
  bool nmi_degenerate = false;

  bool operator==(const Scores&) const = default;
};

/// One clustering pass. For a baseline run the extended-centers are just the
/// clustering centers and delta is empty.
struct PipelineRecord {
  Labels labels;
  std::vector<ObjectId> centers;
  std::vector<ObjectId> extended_centers;  // all members, selection order
  std::vector<std::size_t> owner;          // extended-set of each member
  std::vector<std::size_t> set_sizes;
  std::size_t s = 0;
  std::optional<double> delta;
  std::size_t fallbacks = 0;
  std::optional<Scores> scores;  // present iff ground truth is known
  double wall_ms = 0.0;

  bool operator==(const PipelineRecord&) const = default;
};

struct SweepPoint {
  std::optional<double> percentile;  // empty for an absolute delta
  double delta = 0.0;
  std::size_t s = 0;
  std::size_t fallbacks = 0;
  std::optional<Scores> scores;
  double ecac_ms = 0.0;

  bool operator==(const SweepPoint&) const = default;
};

struct ClusteringResult {
  int schema_version = kSchemaVersion;
  nlohmann::json config;
  std::string algorithm;
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<double> points;  // row-major copy of the data, for plotting
  std::optional<Labels> truth;
  double center_ms = 0.0;
  PipelineRecord baseline;
  PipelineRecord optimized;
  std::vector<SweepPoint> sweep;
  std::size_t best_sweep = 0;
  std::optional<double> nmi_improvement;
  std::optional<double> ri_improvement;

  bool operator==(const ClusteringResult&) const = default;
};

struct AblationRow {
  std::string variant;
  std::optional<std::size_t> cap;
  PipelineRecord record;
  double ecac_ms = 0.0;

  bool operator==(const AblationRow&) const = default;
};

struct AblationReport {
  int schema_version = kSchemaVersion;
  nlohmann::json config;
  std::string algorithm;
  std::size_t k = 0;
  double delta = 0.0;
  std::vector<ObjectId> centers;
  std::optional<std::size_t> parity_cap;
  std::optional<Scores> baseline_scores;
  std::vector<AblationRow> rows;

  bool operator==(const AblationReport&) const = default;
};

// ---------------------------------------------------------------------------
// JSON mapping. Optionals are written as null.

namespace detail {

template <class T>
void put_opt(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
void get_opt(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) v.reset();
  else v = it->get<T>();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const Scores& s) {
  j = {{"nmi", s.nmi}, {"ri", s.ri}, {"nmi_degenerate", s.nmi_degenerate}};
}
inline void from_json(const nlohmann::json& j, Scores& s) {
  j.at("nmi").get_to(s.nmi);
  j.at("ri").get_to(s.ri);
  j.at("nmi_degenerate").get_to(s.nmi_degenerate);
}

inline void to_json(nlohmann::json& j, const PipelineRecord& r) {
  j = {{"labels", r.labels},
       {"centers", r.centers},
       {"extended_centers", r.extended_centers},
       {"owner", r.owner},
       {"set_sizes", r.set_sizes},
       {"s", r.s},
       {"fallbacks", r.fallbacks},
       {"wall_ms", r.wall_ms}};
  detail::put_opt(j, "delta", r.delta);
  detail::put_opt(j, "scores", r.scores);
}
inline void from_json(const nlohmann::json& j, PipelineRecord& r) {
  j.at("labels").get_to(r.labels);
  j.at("centers").get_to(r.centers);
  j.at("extended_centers").get_to(r.extended_centers);
  j.at("owner").get_to(r.owner);
  j.at("set_sizes").get_to(r.set_sizes);
  j.at("s").get_to(r.s);
  j.at("fallbacks").get_to(r.fallbacks);
  j.at("wall_ms").get_to(r.wall_ms);
  detail::get_opt(j, "delta", r.delta);
  detail::get_opt(j, "scores", r.scores);
}

inline void to_json(nlohmann::json& j, const SweepPoint& p) {
  j = {{"delta", p.delta}, {"s", p.s}, {"fallbacks", p.fallbacks},
       {"ecac_ms", p.ecac_ms}};
  detail::put_opt(j, "percentile", p.percentile);
  detail::put_opt(j, "scores", p.scores);
}
inline void from_json(const nlohmann::json& j, SweepPoint& p) {
  j.at("delta").get_to(p.delta);
  j.at("s").get_to(p.s);
  j.at("fallbacks").get_to(p.fallbacks);
  j.at("ecac_ms").get_to(p.ecac_ms);
  detail::get_opt(j, "percentile", p.percentile);
  detail::get_opt(j, "scores", p.scores);
}

inline void to_json(nlohmann::json& j, const ClusteringResult& r) {
  j = {{"schema_version", r.schema_version},
       {"kind", "run"},
       {"config", r.config},
       {"algorithm", r.algorithm},
       {"k", r.k},
       {"dim", r.dim},
       {"points", r.points},
       {"center_ms", r.center_ms},
       {"baseline", r.baseline},
       {"optimized", r.optimized},
       {"sweep", r.sweep},
       {"best_sweep", r.best_sweep}};
  detail::put_opt(j, "truth", r.truth);
  detail::put_opt(j, "nmi_improvement", r.nmi_improvement);
  detail::put_opt(j, "ri_improvement", r.ri_improvement);
}
inline void from_json(const nlohmann::json& j, ClusteringResult& r) {
  j.at("schema_version").get_to(r.schema_version);
  r.config = j.at("config");
  j.at("algorithm").get_to(r.algorithm);
  j.at("k").get_to(r.k);
  j.at("dim").get_to(r.dim);
  j.at("points").get_to(r.points);
  j.at("center_ms").get_to(r.center_ms);
  j.at("baseline").get_to(r.baseline);
  j.at("optimized").get_to(r.optimized);
  j.at("sweep").get_to(r.sweep);
  j.at("best_sweep").get_to(r.best_sweep);
  detail::get_opt(j, "truth", r.truth);
  detail::get_opt(j, "nmi_improvement", r.nmi_improvement);
  detail::get_opt(j, "ri_improvement", r.ri_improvement);
}

inline void to_json(nlohmann::json& j, const AblationRow& r) {
  j = {{"variant", r.variant}, {"record", r.record}, {"ecac_ms", r.ecac_ms}};
  detail::put_opt(j, "cap", r.cap);
}
inline void from_json(const nlohmann::json& j, AblationRow& r) {
  j.at("variant").get_to(r.variant);
  j.at("record").get_to(r.record);
  j.at("ecac_ms").get_to(r.ecac_ms);
  detail::get_opt(j, "cap", r.cap);
}

inline void to_json(nlohmann::json& j, const AblationReport& r) {
  j = {{"schema_version", r.schema_version},
       {"kind", "ablation"},
       {"config", r.config},
       {"algorithm", r.algorithm},
       {"k", r.k},
       {"delta", r.delta},
       {"centers", r.centers},
       {"rows", r.rows}};
  detail::put_opt(j, "parity_cap", r.parity_cap);
  detail::put_opt(j, "baseline_scores", r.baseline_scores);
}
inline void from_json(const nlohmann::json& j, AblationReport& r) {
  j.at("schema_version").get_to(r.schema_version);
  r.config = j.at("config");
  j.at("algorithm").get_to(r.algorithm);
  j.at("k").get_to(r.k);
  j.at("delta").get_to(r.delta);
  j.at("centers").get_to(r.centers);
  j.at("rows").get_to(r.rows);
  detail::get_opt(j, "parity_cap", r.parity_cap);
  detail::get_opt(j, "baseline_scores", r.baseline_scores);
}

/// Removes wall-time fields (keys ending in "_ms") at every depth, leaving
/// what a fixed-seed rerun must reproduce exactly.
inline nlohmann::json without_timings(nlohmann::json j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      const std::string& key = it.key();
      if (key.size() >= 3 && key.compare(key.size() - 3, 3, "_ms") == 0) {
        it = j.erase(it);
      } else {
        *it = without_timings(std::move(*it));
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& e : j) e = without_timings(std::move(e));
  }
  return j;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path);
}

/// Reads a JSON document; a missing file is a MissingResult.
inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResult("cannot open result file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace ecac
