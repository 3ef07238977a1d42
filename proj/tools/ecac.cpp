// Command-line runner: baseline vs extended-center runs, ablations, plots.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecac/commands.hpp"

namespace {

// Flags shared by `run` and `ablate`. Values set on the command line replace
// the ones from --config.
struct Flags {
  std::string config;
  std::string data;
  std::string label_col;
  std::string algo;
  std::optional<std::size_t> k;
  std::optional<double> delta;
  std::optional<double> delta_percentile;
  std::vector<double> delta_sweep;
  std::string strategy;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> seed;
  std::optional<double> dpc_cutoff;
  std::string out;
  bool normalize = false;
  bool trace = false;
  std::vector<std::string> variants;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--data", f.data, "CSV or whitespace-separated data file");
  cmd->add_option("--label-col", f.label_col,
                  "label column: index (negative counts from the end) or header name");
  cmd->add_option("--algo", f.algo, "center-based algorithm")
      ->check(CLI::IsMember({"kmeans", "dpc"}));
  cmd->add_option("--k", f.k, "number of clusters (default: label count)");
  cmd->add_option("--delta", f.delta, "absolute delta");
  cmd->add_option("--delta-percentile", f.delta_percentile,
                  "delta as a pairwise-distance percentile in (0, 1]");
  cmd->add_option("--delta-sweep", f.delta_sweep, "percentiles to sweep")
      ->delimiter(',');
  cmd->add_option("--strategy", f.strategy, "extended-center search")
      ->check(CLI::IsMember({"local", "global", "random", "nodensity"}));
  cmd->add_option("--cap", f.cap, "maximum extended-centers per set");
  cmd->add_option("--seed", f.seed, "seed for k-means and the random strategy");
  cmd->add_option("--dpc-cutoff", f.dpc_cutoff, "DPC cutoff distance");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--normalize", f.normalize, "min-max scale every feature to [0, 1]");
}

ecac::RunConfig build_config(const Flags& f) {
  ecac::RunConfig cfg = f.config.empty() ? ecac::RunConfig{} : ecac::load_config(f.config);
  if (!f.data.empty()) {
    cfg.data = f.data;
    cfg.generator.reset();
  }
  if (!f.label_col.empty()) {
    if (auto v = ecac::detail::parse_real(f.label_col);
        v && *v == static_cast<double>(static_cast<long>(*v)))
      cfg.label_col = static_cast<long>(*v);
    else
      cfg.label_col = f.label_col;
  }
  if (!f.algo.empty()) cfg.algo = f.algo;
  if (f.k) cfg.k = f.k;
  // A delta flag replaces whatever delta form the file used.
  if (f.delta || f.delta_percentile || !f.delta_sweep.empty()) {
    cfg.delta.reset();
    cfg.delta_percentile.reset();
    cfg.delta_sweep.reset();
  }
  if (f.delta) cfg.delta = f.delta;
  if (f.delta_percentile) cfg.delta_percentile = f.delta_percentile;
  if (!f.delta_sweep.empty()) cfg.delta_sweep = f.delta_sweep;
  if (!f.strategy.empty()) cfg.strategy = f.strategy;
  if (f.cap) cfg.cap = f.cap;
  if (f.seed) cfg.seed = *f.seed;
  if (f.dpc_cutoff) cfg.dpc_cutoff = f.dpc_cutoff;
  if (!f.out.empty()) cfg.out = f.out;
  if (f.normalize) cfg.normalize = true;
  if (f.trace) cfg.trace = true;
  if (!f.variants.empty()) cfg.variants = f.variants;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extended-center optimization for center-based clustering"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "baseline and optimized clustering with a delta sweep");
  add_common(run, run_flags);
  run->add_flag("--trace", run_flags.trace,
                "write trace.jsonl for the selected delta");

  Flags ablate_flags;
  auto* ablate = app.add_subcommand("ablate", "compare extended-center strategies");
  add_common(ablate, ablate_flags);
  ablate->add_option("--variants", ablate_flags.variants, "strategies to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"local", "global", "random", "nodensity"}));

  std::string result_path, mode = "clusters", svg_path;
  auto* plot = app.add_subcommand("plot", "SVG scatter plot of a run result");
  plot->add_option("--result", result_path, "result.json from `run`")->required();
  plot->add_option("--mode", mode, "clusters or extended-sets")
      ->check(CLI::IsMember({"clusters", "extended-sets"}));
  plot->add_option("--out", svg_path, "SVG file (default: next to the result)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ecac::cmd_run(build_config(run_flags), std::cout);
    } else if (*ablate) {
      ecac::cmd_ablate(build_config(ablate_flags), std::cout);
    } else if (*plot) {
      if (svg_path.empty())
        svg_path = (std::filesystem::path(result_path).parent_path() / (mode + ".svg")).string();
      ecac::cmd_plot(result_path, ecac::parse_plot_mode(mode), svg_path, std::cerr);
      std::cout << "wrote " << svg_path << '\n';
    }
  } catch (const ecac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
