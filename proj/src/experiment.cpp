#include "edlab/experiment.hpp"

#include "edlab/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <thread>

#ifndef EDLAB_VERSION
#define EDLAB_VERSION "unknown"
#endif

namespace edlab {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

MemoryGate::Lease::Lease(MemoryGate& gate, std::size_t bytes) : gate_(gate), bytes_(bytes) {
  std::unique_lock lock(gate_.mu_);
  gate_.cv_.wait(lock, [&] { return gate_.used_ == 0 || gate_.used_ + bytes_ <= gate_.budget_; });
  gate_.used_ += bytes_;
}

MemoryGate::Lease::~Lease() {
  {
    std::lock_guard lock(gate_.mu_);
    gate_.used_ -= bytes_;
  }
  gate_.cv_.notify_all();
}

std::size_t MemoryGate::in_use() const {
  std::lock_guard lock(mu_);
  return used_;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::size_t decomposition_bytes(std::size_t d) { return 4 * d * d * sizeof(double); }

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : path_(path), os_(path) {
    if (!os_) throw IoError("cannot open output file: " + path.string());
    os_ << header << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
    if (!os_) throw IoError("failed writing output file: " + path_.string());
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(std::string_view v) { return std::string(v); }

  fs::path path_;
  std::ofstream os_;
};

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open output file: " + path.string());
  os << j.dump(2) << '\n';
}

ordered_json window_json(TimeWindow w) { return ordered_json::array({w.start, w.stop}); }

ordered_json fit_json(const FitResult& f) {
  ordered_json j;
  j["kind"] = std::string(to_string(f.kind));
  j["coefficient"] = f.coefficient;
  j["exponent"] = f.exponent;
  j["window"] = window_json(f.window);
  j["points"] = f.points;
  j["rms_residual"] = f.rms_residual;
  return j;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment"] = std::string(to_string(c.kind));
  j["preset"] = c.preset;
  j["label"] = c.label();
  const auto p = c.params(c.lengths.front());
  j["g"] = p.g;
  j["h"] = p.h;
  j["J"] = p.J;
  j["L"] = c.lengths;
  j["grid"] = c.grid.to_string();
  j["ensemble"] = c.ensemble;
  j["seed"] = c.seed;
  j["sampling"] = std::string(to_string(c.sampling));
  j["linear_fit"] = window_json(c.linear_fit);
  j["power_fit"] = window_json(c.power_fit);
  j["saturation_window"] = window_json(c.saturation);
  j["saturation_samples"] = c.saturation_samples;
  j["ratio_bins"] = c.ratio_bins;
  j["eigenvalue_bins"] = c.eigenvalue_bins;
  j["profile"] = c.profile_dump;
  j["cache_dir"] = c.cache_dir.string();
  j["out_dir"] = c.out_dir.string();
  j["workers"] = c.workers;
  j["memory_budget_mb"] = c.memory_budget_mb;
  return j;
}

fs::path output_path(const ExperimentConfig& cfg, const std::string& suffix) {
  return cfg.out_dir / (std::string(to_string(cfg.kind)) + "_" + cfg.label() + suffix);
}

std::vector<std::vector<double>> entropy_samples(const EigenSystem& sys,
                                                 std::span<const double> times,
                                                 std::size_t ensemble, std::uint64_t seed,
                                                 SamplingMode mode, unsigned workers) {
  std::vector<std::vector<double>> samples(ensemble);
  const int L = sys.length();
  parallel_for(ensemble, workers, [&](std::size_t i) {
    auto rng = member_stream(seed, L, i);
    const auto draw = sample_product_state(rng, L, mode);
    const auto states = evolve_series(sys, draw.state, times);
    auto& row = samples[i];
    row.reserve(states.size());
    for (const auto& s : states) row.push_back(entanglement_entropy(s).bits);
  });
  return samples;
}

}  // namespace

Workbench::Workbench(const ExperimentConfig& cfg)
    : cfg_(cfg),
      cache_(std::make_unique<EigenCache>(cfg.cache_dir)),
      gate_(cfg.memory_budget_mb * std::size_t{1} << 20) {
  if (!cfg_.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(cfg_.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg_.out_dir.string() + ": " + ec.message());
  }
  seeds_.push_back(cfg_.seed);
}

std::shared_ptr<const ParitySectors> Workbench::sectors_for(int L) {
  auto& slot = sectors_[L];
  if (!slot) slot = std::make_shared<const ParitySectors>(build_parity_sectors(build_basis(L)));
  return slot;
}

SpectralDecomposition Workbench::sector_spectrum(const CouplingParams& p, Parity which) {
  const CacheKey key{p, std::string(to_string(which))};
  if (auto hit = cache_->load(key)) return std::move(*hit);
  const auto sectors = sectors_for(p.L);
  MemoryGate::Lease lease(gate_, decomposition_bytes(sectors->dimension(which)));
  auto d = eigendecompose(hamiltonian_operator(p).block(*sectors, which));
  cache_->store(key, d);
  return d;
}

EigenSystem Workbench::eigensystem(const CouplingParams& p) {
  const auto sectors = sectors_for(p.L);
  SpectralDecomposition blocks[2];
  const Parity order[2] = {Parity::even, Parity::odd};
  // sectors_ is populated above, so the workers only read it
  parallel_for(2, cfg_.workers, [&](std::size_t k) { blocks[k] = sector_spectrum(p, order[k]); });
  return EigenSystem::blocked(sectors, std::move(blocks[0]), std::move(blocks[1]));
}

bool Workbench::task(const std::string& name, const std::function<void()>& fn) {
  TaskRecord rec{name, 0.0, true, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  tasks_.push_back(rec);
  return rec.ok;
}

void Workbench::write_manifest() const {
  if (cfg_.out_dir.empty()) return;
  ordered_json j;
  j["code_version"] = EDLAB_VERSION;
  j["config"] = config_json(cfg_);
  j["time_grid"] = cfg_.grid.values();
  ordered_json tasks = ordered_json::array();
  for (const auto& t : tasks_) {
    ordered_json tj;
    tj["name"] = t.name;
    tj["seconds"] = t.seconds;
    tj["ok"] = t.ok;
    if (!t.ok) tj["error"] = t.error;
    tasks.push_back(tj);
  }
  j["tasks"] = tasks;
  j["cache"] = {{"directory", cache_->directory().string()},
                {"hits", cache_->hits()},
                {"misses", cache_->misses()}};
  j["rng"] = {{"engine", "mt19937_64"},
              {"base_seeds", seeds_},
              {"stream", "seed_seq(seed_lo, seed_hi, L, member_lo, member_hi)"}};
  ordered_json warnings = ordered_json::array();
  for (int L : cfg_.lengths) {
    for (const auto& w : regime_warnings(cfg_.params(L))) warnings.push_back(w);
  }
  j["warnings"] = warnings;
  write_json(cfg_.out_dir / ("manifest_" + std::string(to_string(cfg_.kind)) + "_" + cfg_.label() + ".json"), j);
}

EnsembleSeries entanglement_series(const EigenSystem& sys, std::span<const double> times,
                                   std::size_t ensemble, std::uint64_t seed, SamplingMode mode,
                                   unsigned workers) {
  return summarize_ensemble(times, entropy_samples(sys, times, ensemble, seed, mode, workers));
}

EntropySaturation entanglement_saturation(const EigenSystem& sys, const ExperimentConfig& cfg) {
  const auto ts = saturation_times(cfg.saturation, cfg.saturation_samples);
  const auto samples =
      entropy_samples(sys, ts, cfg.ensemble, cfg.seed, cfg.sampling, cfg.workers);
  // time-average each member first; members are independent
  std::vector<std::vector<double>> per_member;
  for (const auto& row : samples) {
    double s = 0.0;
    for (double v : row) s += v;
    per_member.push_back({s / static_cast<double>(row.size())});
  }
  const double zero[1] = {0.0};
  const auto summary = summarize_ensemble(zero, per_member);
  return {{summary.mean[0], cfg.saturation, cfg.saturation_samples}, summary.standard_error[0]};
}

EntanglementRun run_entanglement(Workbench& wb) {
  const auto& cfg = wb.config();
  const auto ts = cfg.grid.values();
  EntanglementRun run;
  for (int L : cfg.lengths) {
    wb.task("entanglement L=" + std::to_string(L), [&] {
      const auto sys = wb.eigensystem(cfg.params(L));
      run.series[L] = entanglement_series(sys, ts, cfg.ensemble, cfg.seed, cfg.sampling, cfg.workers);
      run.fits[L] = fit_growth(ts, run.series[L].mean, cfg.linear_fit, FitKind::linear);
    });
  }
  if (cfg.out_dir.empty()) return run;
  CsvFile csv(output_path(cfg, ".csv"), "t,mean_S,stderr,L");
  for (const auto& [L, s] : run.series) {
    for (std::size_t j = 0; j < s.times.size(); ++j) csv.row(s.times[j], s.mean[j], s.standard_error[j], L);
  }
  for (const auto& [L, f] : run.fits) {
    ordered_json j = fit_json(f);
    j["L"] = L;
    j["speed"] = f.coefficient;
    j["ensemble"] = cfg.ensemble;
    write_json(output_path(cfg, "_fit_L" + std::to_string(L) + ".json"), j);
  }
  return run;
}

DiffusionRun run_diffusion(Workbench& wb) {
  const auto& cfg = wb.config();
  DiffusionRun run;
  run.times = cfg.grid.values();
  std::map<int, std::vector<EnergyProfile>> profiles;
  for (int L : cfg.lengths) {
    wb.task("diffusion L=" + std::to_string(L), [&] {
      const auto p = cfg.params(L);
      const auto sys = wb.eigensystem(p);
      const EnergySpread spread(sys, p);
      std::vector<double> rs(run.times.size());
      parallel_for(run.times.size(), cfg.workers, [&](std::size_t j) { rs[j] = spread(run.times[j]); });
      run.spread[L] = rs;
      if (cfg.profile_dump) {
        auto& prof = profiles[L];
        prof.resize(run.times.size());
        parallel_for(run.times.size(), cfg.workers,
                     [&](std::size_t j) { prof[j] = energy_profile(sys, p, run.times[j]); });
      }
      run.fits[L] = fit_growth(run.times, rs, cfg.power_fit, FitKind::power_law);
    });
  }
  if (cfg.out_dir.empty()) return run;
  CsvFile csv(output_path(cfg, ".csv"), "t,R,L");
  for (const auto& [L, rs] : run.spread) {
    for (std::size_t j = 0; j < rs.size(); ++j) csv.row(run.times[j], rs[j], L);
  }
  if (cfg.profile_dump) {
    CsvFile prof(output_path(cfg, "_profile.csv"), "t,r,energy,L");
    for (const auto& [L, list] : profiles) {
      for (std::size_t j = 0; j < list.size(); ++j) {
        for (std::size_t k = 0; k < list[j].positions.size(); ++k) {
          prof.row(run.times[j], list[j].positions[k].position(), list[j].values[k], L);
        }
      }
    }
  }
  for (const auto& [L, f] : run.fits) {
    ordered_json j = fit_json(f);
    j["L"] = L;
    j["diffusivity"] = diffusivity_from_prefactor(f.coefficient);
    write_json(output_path(cfg, "_fit_L" + std::to_string(L) + ".json"), j);
  }
  return run;
}

LevelStatsRun run_levelstats(Workbench& wb) {
  const auto& cfg = wb.config();
  LevelStatsRun run;
  for (int L : cfg.lengths) {
    for (Parity par : {Parity::even, Parity::odd}) {
      wb.task("levelstats L=" + std::to_string(L) + " " + std::string(to_string(par)), [&] {
        const auto d = wb.sector_spectrum(cfg.params(L), par);
        const std::span<const double> ev(d.eigenvalues.data(), static_cast<std::size_t>(d.eigenvalues.size()));
        SectorStatistics st;
        st.L = L;
        st.sector = par;
        st.levels = ev.size();
        st.ratios = gap_ratios(ev, std::string(to_string(par)));
        st.r_tilde = r_tilde_mean(st.ratios);
        st.ratio_hist = ratio_histogram(st.ratios, cfg.ratio_bins, default_keep_count(st.ratios.ratios.size()));
        st.eigen_hist = eigenvalue_histogram(ev, cfg.eigenvalue_bins);
        run.sectors.push_back(std::move(st));
      });
    }
  }
  if (cfg.out_dir.empty()) return run;
  CsvFile csv(output_path(cfg, ".csv"),
              "L,sector,levels,ratios,degenerate,r_tilde,goe_reference,poisson_reference,empty_interior_bins");
  for (const auto& st : run.sectors) {
    const std::string tag = "_L" + std::to_string(st.L) + "_" + std::string(to_string(st.sector));
    csv.row(st.L, to_string(st.sector), st.levels, st.ratios.ratios.size(), st.ratios.degenerate,
            st.r_tilde, r_tilde_reference(RatioEnsemble::goe),
            r_tilde_reference(RatioEnsemble::poisson), st.eigen_hist.empty_interior_bins());
    CsvFile rh(output_path(cfg, tag + "_ratios.csv"), "bin_left,bin_right,density,goe,poisson");
    for (std::size_t b = 0; b < st.ratio_hist.bins(); ++b) {
      const double mid = 0.5 * (st.ratio_hist.left(b) + st.ratio_hist.right(b));
      rh.row(st.ratio_hist.left(b), st.ratio_hist.right(b), st.ratio_hist.density[b],
             surmise_pdf(mid, RatioEnsemble::goe), surmise_pdf(mid, RatioEnsemble::poisson));
    }
    CsvFile eh(output_path(cfg, tag + "_eigenvalues.csv"), "bin_left,bin_right,count");
    for (std::size_t b = 0; b < st.eigen_hist.bins(); ++b) {
      eh.row(st.eigen_hist.left(b), st.eigen_hist.right(b), st.eigen_hist.counts[b]);
    }
  }
  return run;
}

CollapseRun run_collapse(Workbench& wb) {
  const auto& cfg = wb.config();
  if (cfg.lengths.size() < 2) throw ConfigError("collapse needs at least two chain lengths");
  const auto ts = cfg.grid.values();
  CollapseRun run;
  for (int L : cfg.lengths) {
    wb.task("collapse L=" + std::to_string(L), [&] {
      const auto sys = wb.eigensystem(cfg.params(L));
      auto series = entanglement_series(sys, ts, cfg.ensemble, cfg.seed, cfg.sampling, cfg.workers);
      auto sat = entanglement_saturation(sys, cfg);
      run.series[L] = std::move(series);
      run.saturation[L] = sat;
    });
  }
  std::vector<CollapseInput> inputs;
  for (const auto& [L, s] : run.series) {
    inputs.push_back({L, s.times, s.mean, run.saturation.at(L).estimate.value});
  }
  wb.task("collapse score", [&] { run.collapse = scaling_collapse(inputs); });
  if (cfg.out_dir.empty()) return run;
  CsvFile csv(output_path(cfg, ".csv"), "x,y,L");
  for (const auto& c : run.collapse.curves) {
    for (std::size_t k = 0; k < c.x.size(); ++k) csv.row(c.x[k], c.y[k], c.L);
  }
  ordered_json report;
  report["score"] = run.collapse.score;
  report["x_range"] = window_json(run.collapse.x_range);
  ordered_json sat = ordered_json::array();
  for (const auto& [L, s] : run.saturation) {
    sat.push_back({{"L", L}, {"S_inf", s.estimate.value}, {"stderr", s.standard_error}});
  }
  report["saturation"] = sat;
  write_json(output_path(cfg, "_report.json"), report);
  return run;
}

SaturationRun run_saturation(Workbench& wb) {
  const auto& cfg = wb.config();
  SaturationRun run;
  for (int L : cfg.lengths) {
    wb.task("saturation L=" + std::to_string(L), [&] {
      const auto p = cfg.params(L);
      const auto sys = wb.eigensystem(p);
      const auto s = entanglement_saturation(sys, cfg);
      const EnergySpread spread(sys, p);
      const auto r = saturation_estimate([&](double t) { return spread(t); }, cfg.saturation,
                                         cfg.saturation_samples);
      SaturationRow row;
      row.L = L;
      row.s_inf = s.estimate.value;
      row.s_inf_stderr = s.standard_error;
      row.page = page_value(L, L / 2);
      row.deviation = row.page - row.s_inf;
      row.r_inf = r.value;
      row.r_formula = equipartition_spread(L);
      run.rows.push_back(row);
    });
  }
  if (cfg.out_dir.empty()) return run;
  CsvFile csv(output_path(cfg, ".csv"),
              "L,S_inf_estimate,S_inf_stderr,page_value,deviation,R_inf_estimate,R_formula");
  for (const auto& r : run.rows) {
    csv.row(r.L, r.s_inf, r.s_inf_stderr, r.page, r.deviation, r.r_inf, r.r_formula);
  }
  return run;
}

int run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Workbench wb(cfg);
  switch (cfg.kind) {
    case ExperimentKind::entanglement: run_entanglement(wb); break;
    case ExperimentKind::diffusion: run_diffusion(wb); break;
    case ExperimentKind::levelstats: run_levelstats(wb); break;
    case ExperimentKind::collapse: run_collapse(wb); break;
    case ExperimentKind::saturation: run_saturation(wb); break;
  }
  wb.write_manifest();
  int failed = 0;
  for (const auto& t : wb.tasks()) failed += t.ok ? 0 : 1;
  return failed;
}

}  // namespace edlab
