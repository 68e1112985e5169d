#pragma once

#include "edlab/dynamics.hpp"
#include "edlab/hamiltonian.hpp"
#include "edlab/observables.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edlab {

/// start:stop:points[:log]
struct TimeGrid {
  double start = 0.1;
  double stop = 200.0;
  std::size_t points = 60;
  bool logarithmic = true;

  static TimeGrid parse(const std::string& spec);
  std::string to_string() const;
  std::vector<double> values() const;
};

enum class ExperimentKind { entanglement, diffusion, levelstats, collapse, saturation };

ExperimentKind parse_experiment_kind(std::string_view s);
std::string_view to_string(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::entanglement;
  std::string preset = "main";
  // explicit couplings override the preset's
  std::optional<double> g, h, J;
  std::vector<int> lengths = {8, 10, 12};
  TimeGrid grid;
  std::size_t ensemble = 200;
  std::uint64_t seed = 1;
  SamplingMode sampling = SamplingMode::sphere_uniform;
  TimeWindow linear_fit{1.0, 4.0};
  TimeWindow power_fit{1.0, 5.0};
  TimeWindow saturation{100.0, 200.0};
  std::size_t saturation_samples = 21;
  std::size_t ratio_bins = 250;
  std::size_t eigenvalue_bins = 50;
  bool profile_dump = false;
  std::filesystem::path cache_dir;
  std::filesystem::path out_dir;
  unsigned workers = 1;
  std::size_t memory_budget_mb = 4096;

  /// Couplings for chain length L.
  CouplingParams params(int L) const;
  /// Preset name, or "custom" when any coupling is given explicitly.
  std::string label() const;
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// "a:b" -> window
TimeWindow parse_window(const std::string& spec);
/// "8,10,12" -> lengths
std::vector<int> parse_lengths(const std::string& spec);

}  // namespace edlab
