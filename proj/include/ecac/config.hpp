#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ecac/dataset.hpp"
#include "ecac/error.hpp"
#include "ecac/extended_centers.hpp"

namespace ecac {

/// Percentiles of the pairwise-distance distribution tried when no delta is
/// given.
inline const std::vector<double> kDefaultSweep = {0.005, 0.01, 0.02, 0.03, 0.05, 0.08};

struct GeneratorConfig {
  std::string kind = "gaussian";  // gaussian | spiral | crescents | ring | mixed
  std::size_t n = 2000;
  std::size_t k = 15;
  double sigma = 4.0;
  double separation = 12.0;
  std::uint64_t seed = 1;

  bool operator==(const GeneratorConfig&) const = default;
};

struct RunConfig {
  std::optional<std::string> data;
  std::optional<GeneratorConfig> generator;
  std::optional<ColumnSelector> label_col;
  bool normalize = false;

  std::string algo = "kmeans";
  std::optional<std::size_t> k;  // defaults to the ground-truth class count
  std::size_t max_iter = 300;
  std::optional<double> dpc_cutoff;

  std::optional<double> delta;
  std::optional<double> delta_percentile;
  std::optional<std::vector<double>> delta_sweep;

  std::string strategy = "local";
  std::optional<std::size_t> cap;
  std::uint64_t seed = 0;
  std::string out = "out";
  bool trace = false;

  std::vector<std::string> variants;  // ablate only

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

inline std::string unquote(std::string_view v, const std::string& where) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return std::string(v.substr(1, v.size() - 2));
  if (v.empty()) throw ConfigError(where + ": empty value");
  return std::string(v);
}

inline double config_real(std::string_view v, const std::string& where) {
  auto r = parse_real(trim(v));
  if (!r) throw ConfigError(where + ": expected a number, got '" + std::string(v) + "'");
  return *r;
}

inline std::uint64_t config_uint(std::string_view v, const std::string& where) {
  const double r = config_real(v, where);
  if (r < 0 || r != static_cast<double>(static_cast<std::uint64_t>(r)))
    throw ConfigError(where + ": expected a non-negative integer");
  return static_cast<std::uint64_t>(r);
}

inline bool config_bool(std::string_view v, const std::string& where) {
  v = trim(v);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(where + ": expected true or false");
}

inline std::vector<std::string> config_list(std::string_view v, const std::string& where) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError(where + ": expected a [list]");
  std::vector<std::string> out;
  std::string_view body = v.substr(1, v.size() - 2);
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    auto item = trim(body.substr(start, comma == std::string_view::npos ? body.npos
                                                                         : comma - start));
    if (!item.empty()) out.push_back(unquote(item, where));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<double> config_real_list(std::string_view v, const std::string& where) {
  std::vector<double> out;
  for (const auto& s : config_list(v, where)) out.push_back(config_real(s, where));
  return out;
}

}  // namespace detail

/// Parses a flat key = value file. A [generator] section describes a
/// synthetic dataset instead of a file.
inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>") {
  RunConfig cfg;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section header");
      section = std::string(detail::trim(t.substr(1, t.size() - 2)));
      if (section != "generator")
        throw ConfigError(where + ": unknown section [" + section + "]");
      if (!cfg.generator) cfg.generator = GeneratorConfig{};
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(detail::trim(t.substr(0, eq)));
    const std::string_view value = detail::trim(t.substr(eq + 1));
    const std::string at = where + " (" + key + ")";

    if (section == "generator") {
      auto& g = *cfg.generator;
      if (key == "kind") g.kind = detail::unquote(value, at);
      else if (key == "n") g.n = detail::config_uint(value, at);
      else if (key == "k") g.k = detail::config_uint(value, at);
      else if (key == "sigma") g.sigma = detail::config_real(value, at);
      else if (key == "separation") g.separation = detail::config_real(value, at);
      else if (key == "seed") g.seed = detail::config_uint(value, at);
      else throw ConfigError(where + ": unknown generator key '" + key + "'");
      continue;
    }

    if (key == "data") cfg.data = detail::unquote(value, at);
    else if (key == "label_col") {
      const auto s = detail::unquote(value, at);
      if (auto r = detail::parse_real(s); r && *r == static_cast<double>(static_cast<long>(*r)))
        cfg.label_col = static_cast<long>(*r);
      else
        cfg.label_col = s;
    }
    else if (key == "normalize") cfg.normalize = detail::config_bool(value, at);
    else if (key == "algo") cfg.algo = detail::unquote(value, at);
    else if (key == "k") cfg.k = detail::config_uint(value, at);
    else if (key == "max_iter") cfg.max_iter = detail::config_uint(value, at);
    else if (key == "dpc_cutoff") cfg.dpc_cutoff = detail::config_real(value, at);
    else if (key == "delta") cfg.delta = detail::config_real(value, at);
    else if (key == "delta_percentile") cfg.delta_percentile = detail::config_real(value, at);
    else if (key == "delta_sweep") cfg.delta_sweep = detail::config_real_list(value, at);
    else if (key == "strategy") cfg.strategy = detail::unquote(value, at);
    else if (key == "cap") cfg.cap = detail::config_uint(value, at);
    else if (key == "seed") cfg.seed = detail::config_uint(value, at);
    else if (key == "out") cfg.out = detail::unquote(value, at);
    else if (key == "trace") cfg.trace = detail::config_bool(value, at);
    else if (key == "variants") cfg.variants = detail::config_list(value, at);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path);
}

/// Checks the invariants a run relies on; the dataset file must exist.
inline void validate(const RunConfig& cfg) {
  if (cfg.data.has_value() == cfg.generator.has_value())
    throw ConfigError("exactly one dataset source (data file or [generator]) is required");
  if (cfg.data && !std::filesystem::is_regular_file(*cfg.data))
    throw ConfigError("dataset file not found: " + *cfg.data);
  if (cfg.generator) {
    const auto& g = *cfg.generator;
    static const char* kinds[] = {"gaussian", "spiral", "crescents", "ring", "mixed"};
    if (std::find(std::begin(kinds), std::end(kinds), g.kind) == std::end(kinds))
      throw ConfigError("unknown generator kind '" + g.kind + "'");
    if (g.kind == "gaussian" && (g.k == 0 || g.n < g.k || !(g.sigma > 0.0)))
      throw ConfigError("gaussian generator needs 1 <= k <= n and sigma > 0");
    if (g.kind == "mixed" && g.n < 6) throw ConfigError("mixed generator needs n >= 6");
  }
  if (cfg.algo != "kmeans" && cfg.algo != "dpc")
    throw ConfigError("unknown algorithm '" + cfg.algo + "' (kmeans, dpc)");
  if (cfg.k && *cfg.k == 0) throw ConfigError("k must be >= 1");
  if (cfg.max_iter == 0) throw ConfigError("max_iter must be >= 1");
  if (cfg.dpc_cutoff && !(*cfg.dpc_cutoff > 0.0)) throw ConfigError("dpc_cutoff must be > 0");
  const int delta_sources = cfg.delta.has_value() + cfg.delta_percentile.has_value() +
                            cfg.delta_sweep.has_value();
  if (delta_sources > 1)
    throw ConfigError("give at most one of delta, delta_percentile, delta_sweep");
  if (cfg.delta && !(*cfg.delta > 0.0 && std::isfinite(*cfg.delta)))
    throw ConfigError("delta must be a finite value > 0");
  auto check_percentile = [](double p) {
    if (!(p > 0.0 && p <= 1.0))
      throw ConfigError("delta percentiles must lie in (0, 1], got " + std::to_string(p));
  };
  if (cfg.delta_percentile) check_percentile(*cfg.delta_percentile);
  if (cfg.delta_sweep) {
    if (cfg.delta_sweep->empty()) throw ConfigError("delta_sweep must not be empty");
    for (double p : *cfg.delta_sweep) check_percentile(p);
  }
  try {
    (void)parse_search_kind(cfg.strategy);
    for (const auto& v : cfg.variants) (void)parse_search_kind(v);
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }
}

inline SelectionStrategy make_strategy(std::string_view name, std::uint64_t seed,
                                       std::optional<std::size_t> cap) {
  SelectionStrategy s{parse_search_kind(name), seed, cap};
  return s;
}

inline void to_json(nlohmann::json& j, const GeneratorConfig& g) {
  j = {{"kind", g.kind}, {"n", g.n}, {"k", g.k}, {"sigma", g.sigma},
       {"separation", g.separation}, {"seed", g.seed}};
}

/// Config echo stored in result files.
inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json::object();
  j["data"] = c.data ? nlohmann::json(*c.data) : nlohmann::json(nullptr);
  j["generator"] = c.generator ? nlohmann::json(*c.generator) : nlohmann::json(nullptr);
  if (!c.label_col) j["label_col"] = nullptr;
  else if (auto* i = std::get_if<long>(&*c.label_col)) j["label_col"] = *i;
  else j["label_col"] = std::get<std::string>(*c.label_col);
  j["normalize"] = c.normalize;
  j["algo"] = c.algo;
  j["k"] = c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr);
  j["max_iter"] = c.max_iter;
  j["dpc_cutoff"] = c.dpc_cutoff ? nlohmann::json(*c.dpc_cutoff) : nlohmann::json(nullptr);
  j["delta"] = c.delta ? nlohmann::json(*c.delta) : nlohmann::json(nullptr);
  j["delta_percentile"] =
      c.delta_percentile ? nlohmann::json(*c.delta_percentile) : nlohmann::json(nullptr);
  j["delta_sweep"] = c.delta_sweep ? nlohmann::json(*c.delta_sweep) : nlohmann::json(nullptr);
  j["strategy"] = c.strategy;
  j["cap"] = c.cap ? nlohmann::json(*c.cap) : nlohmann::json(nullptr);
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["variants"] = c.variants;
}

}  // namespace ecac
