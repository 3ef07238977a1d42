#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecac/algorithms.hpp"
#include "ecac/config.hpp"
#include "ecac/dataset.hpp"
#include "ecac/density.hpp"
#include "ecac/detail/parallel.hpp"
#include "ecac/dpc.hpp"
#include "ecac/extended_centers.hpp"
#include "ecac/generators.hpp"
#include "ecac/metrics.hpp"
#include "ecac/pipeline.hpp"
#include "ecac/report.hpp"
#include "ecac/spatial_index.hpp"
#include "ecac/svg.hpp"

namespace ecac {

struct InputData {
  Dataset dataset;
  std::optional<GroundTruth> truth;
};

inline InputData load_input(const RunConfig& cfg) {
  InputData in;
  if (cfg.data) {
    auto loaded = load_csv(*cfg.data, cfg.label_col);
    in.dataset = std::move(loaded.dataset);
    in.truth = std::move(loaded.truth);
  } else {
    const auto& g = *cfg.generator;
    LabeledData made;
    if (g.kind == "gaussian")
      made = make_overlapping_gaussians(g.n, g.k, g.sigma, g.separation, g.seed);
    else if (g.kind == "spiral") made = make_spiral_like(g.seed);
    else if (g.kind == "crescents") made = make_crescents_like(g.seed);
    else if (g.kind == "ring") made = make_ring_with_blobs(g.seed);
    else if (g.kind == "mixed") made = make_mixed_shapes(g.n, g.seed);
    else throw ConfigError("unknown generator kind '" + g.kind + "'");
    in.dataset = std::move(made.dataset);
    in.truth = std::move(made.truth);
  }
  if (cfg.normalize) in.dataset = min_max_normalize(in.dataset);
  return in;
}

inline CenterBasedAlgorithm make_algorithm(const RunConfig& cfg) {
  if (cfg.algo == "kmeans") return make_kmeans({cfg.seed, cfg.max_iter});
  if (cfg.algo == "dpc") return make_dpc({cfg.dpc_cutoff});
  throw ConfigError("unknown algorithm '" + cfg.algo + "'");
}

inline std::size_t resolve_k(const RunConfig& cfg, const InputData& in) {
  if (cfg.k) return *cfg.k;
  if (in.truth) return in.truth->k;
  throw ConfigError("k is required when the dataset has no labels");
}

struct DeltaPoint {
  std::optional<double> percentile;
  double delta = 0.0;
};

/// The delta values a run tries: one absolute value, one percentile, an
/// explicit percentile sweep, or the default sweep.
inline std::vector<DeltaPoint> delta_points(const RunConfig& cfg, const Dataset& data) {
  if (cfg.delta) return {{std::nullopt, *cfg.delta}};
  std::vector<double> ps;
  if (cfg.delta_percentile) ps = {*cfg.delta_percentile};
  else if (cfg.delta_sweep) ps = *cfg.delta_sweep;
  else ps = kDefaultSweep;
  std::vector<DeltaPoint> out;
  for (double p : ps) out.push_back({p, default_delta(data, p, 1000, cfg.seed)});
  return out;
}

inline std::optional<Scores> score_labels(const Labels& labels,
                                          const std::optional<GroundTruth>& truth) {
  if (!truth) return std::nullopt;
  const auto n = nmi_score(truth->labels, labels);
  return Scores{n.value, rand_index(truth->labels, labels), n.degenerate};
}

inline PipelineRecord baseline_record(std::span<const ObjectId> centers, Labels labels,
                                      const std::optional<GroundTruth>& truth,
                                      double wall_ms) {
  PipelineRecord r;
  r.scores = score_labels(labels, truth);
  r.labels = std::move(labels);
  r.centers.assign(centers.begin(), centers.end());
  r.extended_centers = r.centers;
  for (std::size_t j = 0; j < centers.size(); ++j) r.owner.push_back(j);
  r.set_sizes.assign(centers.size(), 1);
  r.s = centers.size();
  r.wall_ms = wall_ms;
  return r;
}

inline PipelineRecord optimized_record(const OptimizedRun& run,
                                       const std::optional<GroundTruth>& truth) {
  PipelineRecord r;
  r.labels = run.labels;
  r.centers = run.centers;
  r.extended_centers = run.ext.all;
  r.owner = run.ext.owner;
  for (const auto& set : run.ext.sets) r.set_sizes.push_back(set.size());
  r.s = run.ext.s();
  r.delta = run.delta;
  r.fallbacks = run.ext.fallbacks;
  r.scores = score_labels(run.labels, truth);
  r.wall_ms = run.ecac_ms + run.assign_ms;
  return r;
}

namespace detail {

inline std::string fixed4(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

inline std::string percent(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.1f%%", *v);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

inline std::optional<double> nmi_of(const std::optional<Scores>& s) {
  return s ? std::optional<double>(s->nmi) : std::nullopt;
}
inline std::optional<double> ri_of(const std::optional<Scores>& s) {
  return s ? std::optional<double>(s->ri) : std::nullopt;
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return elapsed_ms(t0);
}

inline void write_trace(const std::string& path, const ExtendedSets& ext) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  for (const auto& step : ext.trace) {
    nlohmann::json j = {{"object", step.object},   {"set", step.set},
                        {"dis", step.dis},         {"covered", step.covered},
                        {"members", step.members}, {"fallback", step.fallback}};
    out << j.dump() << '\n';
  }
}

}  // namespace detail

inline void print_run_table(const ClusteringResult& r, std::ostream& os) {
  using detail::fixed4;
  using detail::pad;
  os << "delta sweep (" << r.algorithm << ", k=" << r.k << ")\n";
  os << "   percentile      delta       s  fallbacks     NMI      RI\n";
  for (std::size_t i = 0; i < r.sweep.size(); ++i) {
    const auto& p = r.sweep[i];
    os << (i == r.best_sweep ? " *" : "  ") << pad(fixed4(p.percentile), 11)
       << pad(fixed4(p.delta), 11) << pad(std::to_string(p.s), 8)
       << pad(std::to_string(p.fallbacks), 11) << pad(fixed4(detail::nmi_of(p.scores)), 8)
       << pad(fixed4(detail::ri_of(p.scores)), 8) << '\n';
  }
  os << "\n              NMI      RI\n";
  os << "baseline " << pad(fixed4(detail::nmi_of(r.baseline.scores)), 8)
     << pad(fixed4(detail::ri_of(r.baseline.scores)), 8) << '\n';
  os << "ecac     " << pad(fixed4(detail::nmi_of(r.optimized.scores)), 8)
     << pad(fixed4(detail::ri_of(r.optimized.scores)), 8) << '\n';
  if (r.truth)
    os << "change   " << pad(detail::percent(r.nmi_improvement), 8)
       << pad(detail::percent(r.ri_improvement), 8) << '\n';
}

/// Baseline and optimized runs on shared centers, over every delta point.
/// The point with the highest optimized NMI (earliest on ties) is reported as
/// the optimized run; without labels the default percentile is used when
/// present, else the first point.
inline ClusteringResult run_experiment(const RunConfig& cfg, const InputData& in) {
  const Dataset& data = in.dataset;
  const auto algorithm = make_algorithm(cfg);
  const std::size_t k = resolve_k(cfg, in);
  check_k(data, k);

  ClusteringResult r;
  r.config = cfg;
  r.algorithm = cfg.algo;
  r.k = k;
  r.dim = data.dim();
  r.points.assign(data.values().begin(), data.values().end());
  if (in.truth) r.truth = in.truth->labels;

  auto t0 = std::chrono::steady_clock::now();
  const auto selection = algorithm.center_process(data, k);
  r.center_ms = detail::ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  auto base_labels = algorithm.assignment_process(data, selection.ids);
  r.baseline = baseline_record(selection.ids, std::move(base_labels), in.truth,
                               detail::ms_since(t0));

  const auto points = delta_points(cfg, data);
  const auto strategy = make_strategy(cfg.strategy, cfg.seed, cfg.cap);
  const KdTree index(data);
  std::vector<std::optional<OptimizedRun>> runs(points.size());
  detail::parallel_for(
      points.size(),
      [&](std::size_t i) {
        runs[i] = optimize_centers(data, index, algorithm, selection.ids, points[i].delta,
                                   strategy, cfg.trace);
      },
      1);

  std::vector<PipelineRecord> records;
  for (std::size_t i = 0; i < points.size(); ++i) {
    records.push_back(optimized_record(*runs[i], in.truth));
    SweepPoint p;
    p.percentile = points[i].percentile;
    p.delta = points[i].delta;
    p.s = runs[i]->ext.s();
    p.fallbacks = runs[i]->ext.fallbacks;
    p.scores = records.back().scores;
    p.ecac_ms = runs[i]->ecac_ms;
    r.sweep.push_back(p);
  }
  r.best_sweep = 0;
  if (in.truth) {
    for (std::size_t i = 1; i < r.sweep.size(); ++i)
      if (r.sweep[i].scores->nmi > r.sweep[r.best_sweep].scores->nmi) r.best_sweep = i;
  } else {
    for (std::size_t i = 0; i < r.sweep.size(); ++i)
      if (r.sweep[i].percentile == kDefaultDeltaPercentile) {
        r.best_sweep = i;
        break;
      }
  }
  r.optimized = records[r.best_sweep];
  if (in.truth) {
    r.nmi_improvement = improvement_rate(r.baseline.scores->nmi, r.optimized.scores->nmi);
    r.ri_improvement = improvement_rate(r.baseline.scores->ri, r.optimized.scores->ri);
  }
  if (cfg.trace) {
    std::filesystem::create_directories(cfg.out);
    detail::write_trace((std::filesystem::path(cfg.out) / "trace.jsonl").string(),
                        runs[r.best_sweep]->ext);
  }
  return r;
}

/// `run` subcommand: writes <out>/result.json and prints the metric table.
inline ClusteringResult cmd_run(const RunConfig& cfg, std::ostream& os) {
  validate(cfg);
  const auto in = load_input(cfg);
  auto r = run_experiment(cfg, in);
  std::filesystem::create_directories(cfg.out);
  write_json((std::filesystem::path(cfg.out) / "result.json").string(), r);
  print_run_table(r, os);
  return r;
}

/// Runs each strategy on the same centers and delta. When NoDensity is among
/// the variants the local-pool variants share a per-set cap: the explicit
/// one, or the smallest per-set extended-center count seen in uncapped
/// density and no-density searches, so that both fill every set and end
/// with equal counts per cluster.
inline AblationReport run_ablation(const RunConfig& cfg, const InputData& in) {
  if (cfg.variants.size() < 2)
    throw ConfigError("ablate needs at least two variants");
  for (std::size_t i = 0; i < cfg.variants.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.variants.size(); ++j)
      if (cfg.variants[i] == cfg.variants[j])
        throw ConfigError("variant '" + cfg.variants[i] + "' listed twice");
  if (cfg.delta_sweep) throw ConfigError("ablate takes a single delta, not a sweep");

  const Dataset& data = in.dataset;
  const auto algorithm = make_algorithm(cfg);
  const std::size_t k = resolve_k(cfg, in);
  check_k(data, k);

  AblationReport rep;
  rep.config = cfg;
  rep.algorithm = cfg.algo;
  rep.k = k;
  rep.delta = cfg.delta ? *cfg.delta
                        : default_delta(data,
                                        cfg.delta_percentile.value_or(kDefaultDeltaPercentile),
                                        1000, cfg.seed);
  const auto selection = algorithm.center_process(data, k);
  rep.centers = selection.ids;
  rep.baseline_scores =
      score_labels(algorithm.assignment_process(data, selection.ids), in.truth);

  const KdTree index(data);
  const auto densities = compute_densities(data, index, rep.delta);

  std::vector<SelectionStrategy> strategies;
  for (const auto& v : cfg.variants)
    strategies.push_back(make_strategy(v, cfg.seed, cfg.cap));
  const bool parity = std::any_of(strategies.begin(), strategies.end(), [](const auto& s) {
    return s.kind == SearchKind::NoDensity;
  });
  if (parity) {
    if (cfg.cap) {
      rep.parity_cap = cfg.cap;
    } else {
      std::size_t fewest = data.size();
      for (const auto& free : {SelectionStrategy::local(), SelectionStrategy::no_density()}) {
        const auto ext = identify_extended_centers(data, index, densities, rep.centers, free);
        for (const auto& set : ext.sets) fewest = std::min(fewest, set.size() - 1);
      }
      rep.parity_cap = fewest;
    }
    for (auto& s : strategies)
      if (s.local_pool()) s.cap = rep.parity_cap;
  }

  // Sequential so the identification timings do not compete for cores.
  for (std::size_t v = 0; v < strategies.size(); ++v) {
    AblationRow row;
    row.variant = cfg.variants[v];
    row.cap = strategies[v].cap;
    auto t0 = std::chrono::steady_clock::now();
    const auto ext =
        identify_extended_centers(data, index, densities, rep.centers, strategies[v]);
    row.ecac_ms = detail::ms_since(t0);
    OptimizedRun run;
    run.centers = rep.centers;
    run.delta = rep.delta;
    run.ext = ext;
    run.ecac_ms = row.ecac_ms;
    t0 = std::chrono::steady_clock::now();
    run.initial_labels = algorithm.assignment_process(data, ext.all);
    run.labels = merge_clusters(run.initial_labels, ext);
    run.assign_ms = detail::ms_since(t0);
    row.record = optimized_record(run, in.truth);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline void print_ablation_table(const AblationReport& rep, std::ostream& os) {
  using detail::fixed4;
  using detail::pad;
  os << "ablation (" << rep.algorithm << ", k=" << rep.k << ", delta=" << fixed4(rep.delta)
     << ")\n";
  os << "  variant       cap       s     NMI      RI   ecac ms\n";
  os << "  " << std::string("baseline").append(6, ' ') << pad("-", 4)
     << pad(std::to_string(rep.k), 8) << pad(fixed4(detail::nmi_of(rep.baseline_scores)), 8)
     << pad(fixed4(detail::ri_of(rep.baseline_scores)), 8) << pad("-", 10) << '\n';
  for (const auto& row : rep.rows) {
    std::string name = row.variant;
    if (name.size() < 14) name.append(14 - name.size(), ' ');
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.2f", row.ecac_ms);
    os << "  " << name << pad(row.cap ? std::to_string(*row.cap) : "-", 4)
       << pad(std::to_string(row.record.s), 8)
       << pad(fixed4(detail::nmi_of(row.record.scores)), 8)
       << pad(fixed4(detail::ri_of(row.record.scores)), 8) << pad(ms, 10) << '\n';
  }
}

/// `ablate` subcommand: writes <out>/ablation.json and prints the table.
inline AblationReport cmd_ablate(const RunConfig& cfg, std::ostream& os) {
  validate(cfg);
  if (cfg.variants.size() < 2)
    throw ConfigError("ablate needs at least two variants");
  const auto in = load_input(cfg);
  auto rep = run_ablation(cfg, in);
  std::filesystem::create_directories(cfg.out);
  write_json((std::filesystem::path(cfg.out) / "ablation.json").string(), rep);
  print_ablation_table(rep, os);
  return rep;
}

enum class PlotMode { Clusters, ExtendedSets };

inline PlotMode parse_plot_mode(std::string_view s) {
  if (s == "clusters") return PlotMode::Clusters;
  if (s == "extended-sets") return PlotMode::ExtendedSets;
  throw ConfigError("unknown plot mode '" + std::string(s) + "' (clusters, extended-sets)");
}

/// Scatter plot of a run result's optimized pipeline.
inline std::string render_result_svg(const ClusteringResult& r, PlotMode mode) {
  if (r.dim < 2) throw NotPlottable("result data is one-dimensional");
  const std::size_t n = r.points.size() / r.dim;
  const auto& rec = r.optimized;
  if (rec.labels.size() != n) throw NotPlottable("labels do not match the stored points");
  ScatterSpec spec;
  spec.dim = r.dim;
  spec.points = r.points;
  spec.group.assign(n, std::nullopt);
  if (mode == PlotMode::Clusters) {
    for (std::size_t i = 0; i < n; ++i) spec.group[i] = rec.labels[i];
    spec.title = r.algorithm + " + ECAC clusters";
  } else {
    for (std::size_t p = 0; p < rec.extended_centers.size(); ++p)
      spec.group[rec.extended_centers[p]] = rec.owner[p];
    spec.title = r.algorithm + " extended-sets";
  }
  spec.markers = rec.centers;
  for (std::size_t j = 0; j < rec.centers.size(); ++j) spec.marker_group.push_back(j);
  return render_scatter_svg(spec);
}

/// `plot` subcommand: reads a result.json and writes an SVG.
inline std::string cmd_plot(const std::string& result_path, PlotMode mode,
                            const std::string& svg_path, std::ostream& warn) {
  const auto j = read_json(result_path);
  if (!j.is_object() || j.value("kind", "") != "run")
    throw NotPlottable(result_path + " is not a run result");
  ClusteringResult r;
  try {
    r = j.get<ClusteringResult>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(result_path + ": " + e.what());
  }
  if (r.dim > 2)
    warn << "warning: data has " << r.dim << " dimensions; plotting the first two\n";
  const auto svg = render_result_svg(r, mode);
  const auto parent = std::filesystem::path(svg_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw Error("cannot write " + svg_path);
  out << svg;
  return svg;
}

}  // namespace ecac
