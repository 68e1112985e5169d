// Command-line driver for the experiment runs.
#include "edlab/config.hpp"
#include "edlab/errors.hpp"
#include "edlab/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>

namespace {

struct RawFlags {
  std::string preset = "main";
  std::optional<double> g, h, J;
  std::string lengths = "8,10,12";
  std::size_t ensemble = 200;
  std::uint64_t seed = 1;
  std::string grid = "0.1:200:60:log";
  std::string sampling = "sphere";
  std::string linear_fit = "1:4";
  std::string power_fit = "1:5";
  std::string saturation = "100:200";
  std::size_t saturation_samples = 21;
  std::size_t ratio_bins = 250;
  std::size_t eigenvalue_bins = 50;
  bool profile = false;
  std::string cache_dir;
  std::string out_dir = "results";
  unsigned workers = 1;
  std::size_t memory_budget_mb = 4096;
};

edlab::ExperimentConfig to_config(const RawFlags& f, edlab::ExperimentKind kind) {
  edlab::ExperimentConfig c;
  c.kind = kind;
  c.preset = f.preset;
  c.g = f.g;
  c.h = f.h;
  c.J = f.J;
  c.lengths = edlab::parse_lengths(f.lengths);
  c.ensemble = f.ensemble;
  c.seed = f.seed;
  c.grid = edlab::TimeGrid::parse(f.grid);
  c.sampling = edlab::parse_sampling_mode(f.sampling);
  c.linear_fit = edlab::parse_window(f.linear_fit);
  c.power_fit = edlab::parse_window(f.power_fit);
  c.saturation = edlab::parse_window(f.saturation);
  c.saturation_samples = f.saturation_samples;
  c.ratio_bins = f.ratio_bins;
  c.eigenvalue_bins = f.eigenvalue_bins;
  c.profile_dump = f.profile;
  c.cache_dir = f.cache_dir;
  c.out_dir = f.out_dir;
  c.workers = f.workers;
  c.memory_budget_mb = f.memory_budget_mb;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-diagonalization experiments on the mixed-field Ising chain"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  RawFlags f;
  app.add_option("--preset", f.preset, "Coupling preset")->capture_default_str();
  app.add_option("--g", f.g, "Transverse field, overrides the preset");
  app.add_option("--h", f.h, "Longitudinal field, overrides the preset");
  app.add_option("--J", f.J, "Ising coupling, overrides the preset");
  app.add_option("--L", f.lengths, "Comma-separated chain lengths")->capture_default_str();
  app.add_option("--ensemble", f.ensemble, "Random product states per length")->capture_default_str();
  app.add_option("--seed", f.seed, "Base seed")->capture_default_str();
  app.add_option("--grid", f.grid, "Time grid start:stop:points[:log|lin]")->capture_default_str();
  app.add_option("--sampling", f.sampling, "Bloch angle sampling")
      ->check(CLI::IsMember({"sphere", "literal"}))
      ->capture_default_str();
  app.add_option("--linear-fit", f.linear_fit, "Entropy fit window a:b")->capture_default_str();
  app.add_option("--power-fit", f.power_fit, "Energy spread fit window a:b")->capture_default_str();
  app.add_option("--saturation", f.saturation, "Long-time averaging window a:b")->capture_default_str();
  app.add_option("--saturation-samples", f.saturation_samples, "Samples in the averaging window")
      ->capture_default_str();
  app.add_option("--ratio-bins", f.ratio_bins, "Gap-ratio histogram bins")->capture_default_str();
  app.add_option("--eigenvalue-bins", f.eigenvalue_bins, "Eigenvalue histogram bins")->capture_default_str();
  app.add_flag("--profile", f.profile, "Also dump the per-site energy profile (diffusion)");
  app.add_option("--cache-dir", f.cache_dir, "Eigendecomposition cache directory (empty disables)");
  app.add_option("--out-dir", f.out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--memory-budget-mb", f.memory_budget_mb, "Budget for concurrent eigendecompositions")
      ->capture_default_str();

  const std::pair<const char*, const char*> commands[] = {
      {"entanglement", "Entanglement entropy growth from random product states"},
      {"diffusion", "Energy spreading R(t) from the trace formula"},
      {"levelstats", "Gap-ratio and eigenvalue statistics per parity sector"},
      {"collapse", "Entropy curves rescaled by their saturation values"},
      {"saturation", "Long-time entropy and energy spread against reference values"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto kind = edlab::parse_experiment_kind(app.get_subcommands().front()->get_name());
    const auto cfg = to_config(f, kind);
    cfg.validate();
    std::set<std::string> warnings;
    for (int L : cfg.lengths) {
      for (const auto& w : edlab::regime_warnings(cfg.params(L))) {
        if (warnings.insert(w).second) std::cerr << "warning: " << w << '\n';
      }
    }
    const int failed = edlab::run_experiment(cfg);
    if (failed > 0) {
      std::cerr << failed << " task(s) failed; see the manifest in " << cfg.out_dir << '\n';
      return 1;
    }
    std::cout << "wrote results to " << cfg.out_dir.string() << '\n';
  } catch (const edlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
