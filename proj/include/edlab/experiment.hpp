#pragma once

#include "edlab/config.hpp"
#include "edlab/dynamics.hpp"
#include "edlab/eigensolver.hpp"
#include "edlab/observables.hpp"
#include "edlab/spectral_stats.hpp"

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace edlab {

/// Caps the bytes held by concurrent eigendecompositions. A request larger
/// than the whole budget is admitted once nothing else is running.
class MemoryGate {
 public:
  explicit MemoryGate(std::size_t budget_bytes) : budget_(budget_bytes) {}

  class Lease {
   public:
    Lease(MemoryGate& gate, std::size_t bytes);
    ~Lease();
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;

   private:
    MemoryGate& gate_;
    std::size_t bytes_;
  };

  std::size_t in_use() const;

 private:
  std::size_t budget_;
  std::size_t used_ = 0;
  mutable std::mutex mu_;
  std::condition_variable cv_;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are
/// rethrown (lowest index first) after all workers finish.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

struct TaskRecord {
  std::string name;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
};

/// Shared run context: eigendecomposition cache, worker count, memory gate,
/// and the manifest bookkeeping.
class Workbench {
 public:
  explicit Workbench(const ExperimentConfig& cfg);

  const ExperimentConfig& config() const { return cfg_; }

  /// Even and odd parity blocks of H, from cache when available.
  EigenSystem eigensystem(const CouplingParams& p);
  /// Single parity block.
  SpectralDecomposition sector_spectrum(const CouplingParams& p, Parity which);

  /// Runs `fn`, timing it; failures are recorded and reported as false.
  bool task(const std::string& name, const std::function<void()>& fn);

  const std::vector<TaskRecord>& tasks() const { return tasks_; }
  std::vector<std::uint64_t>& seeds() { return seeds_; }
  const EigenCache& cache() const { return *cache_; }
  MemoryGate& gate() { return gate_; }

  /// Writes manifest_<experiment>_<label>.json into the output directory.
  void write_manifest() const;

 private:
  std::shared_ptr<const ParitySectors> sectors_for(int L);

  ExperimentConfig cfg_;
  std::unique_ptr<EigenCache> cache_;
  MemoryGate gate_;
  std::map<int, std::shared_ptr<const ParitySectors>> sectors_;
  std::vector<TaskRecord> tasks_;
  std::vector<std::uint64_t> seeds_;
};

/// Central-cut entropy of `ensemble` random product states on the time grid.
EnsembleSeries entanglement_series(const EigenSystem& sys, std::span<const double> times,
                                   std::size_t ensemble, std::uint64_t seed, SamplingMode mode,
                                   unsigned workers);

/// Window average over both the ensemble and the saturation sample times.
struct EntropySaturation {
  SaturationEstimate estimate;
  double standard_error = 0.0;
};

EntropySaturation entanglement_saturation(const EigenSystem& sys, const ExperimentConfig& cfg);

struct EntanglementRun {
  std::map<int, EnsembleSeries> series;
  std::map<int, FitResult> fits;
};

struct DiffusionRun {
  std::vector<double> times;
  std::map<int, std::vector<double>> spread;
  std::map<int, FitResult> fits;
};

struct SectorStatistics {
  int L = 0;
  Parity sector = Parity::even;
  std::size_t levels = 0;
  GapRatioSet ratios;
  double r_tilde = 0.0;
  Histogram ratio_hist;
  Histogram eigen_hist;
};

struct LevelStatsRun {
  std::vector<SectorStatistics> sectors;
};

struct CollapseRun {
  std::map<int, EnsembleSeries> series;
  std::map<int, EntropySaturation> saturation;
  CollapseResult collapse;
};

struct SaturationRow {
  int L = 0;
  double s_inf = 0.0;
  double s_inf_stderr = 0.0;
  double page = 0.0;
  double deviation = 0.0;  // page - s_inf
  double r_inf = 0.0;
  double r_formula = 0.0;
};

struct SaturationRun {
  std::vector<SaturationRow> rows;
};

EntanglementRun run_entanglement(Workbench& wb);
DiffusionRun run_diffusion(Workbench& wb);
LevelStatsRun run_levelstats(Workbench& wb);
CollapseRun run_collapse(Workbench& wb);
SaturationRun run_saturation(Workbench& wb);

/// Dispatches on cfg.kind, writes outputs and the manifest. Returns the
/// number of failed tasks.
int run_experiment(const ExperimentConfig& cfg);

/// Shortest round-trip decimal form; CSV cells use it.
std::string format_number(double v);

}  // namespace edlab
