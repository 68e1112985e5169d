// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance [cache-dir] [scratch-dir]
#include "edlab/config.hpp"
#include "edlab/errors.hpp"
#include "edlab/experiment.hpp"
#include "oracle/series_propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace edlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  %-3s %-34s %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void note(const std::string& what, const std::string& detail) {
  std::printf("INFO      %-34s %s\n", what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

PureState draw(int L, std::size_t member, std::uint64_t seed = 99) {
  auto rng = member_stream(seed, L, member);
  return sample_product_state(rng, L, SamplingMode::sphere_uniform).state;
}

double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Everything that needs the L=12 main-preset dynamics shares this.
struct Shared {
  ExperimentConfig cfg;
  std::vector<double> grid;
  std::map<int, EnsembleSeries> series;
  std::map<int, EntropySaturation> saturation;
};

void criterion_1() {
  const auto sectors = build_parity_sectors(build_basis(16));
  report("1", sectors.even_dim() == 32896, "sector dimension L=16",
         "even_dim=" + std::to_string(sectors.even_dim()) + " (expected 32896)");
}

void criterion_2(Workbench& wb, Shared& s) {
  const auto sys = wb.eigensystem(s.cfg.params(12));
  const auto& series = s.series.at(12);
  const auto fit = fit_growth(series.times, series.mean, s.cfg.linear_fit, FitKind::linear);
  const double worst = *std::max_element(series.standard_error.begin(), series.standard_error.end());
  const bool slope_ok = std::abs(fit.coefficient - 0.70) <= 0.07;
  report("2", slope_ok && worst < 0.04, "ballistic slope L=12",
         fmt("v=%.4f over %g points in [1,4] (0.70 +/- 0.07); ", fit.coefficient, fit.points) +
             fmt("max stderr=%.4f (< 0.04)", worst));

  const auto literal = entanglement_series(sys, s.grid, s.cfg.ensemble, s.cfg.seed,
                                           SamplingMode::literal_ranges, s.cfg.workers);
  const auto lit = fit_growth(literal.times, literal.mean, s.cfg.linear_fit, FitKind::linear);
  const double lit_worst = *std::max_element(literal.standard_error.begin(), literal.standard_error.end());
  report("2b", std::abs(lit.coefficient - 0.70) <= 0.07 && lit_worst < 0.04, "ballistic slope, literal sampling",
         fmt("v=%.4f (0.70 +/- 0.07); max stderr=%.4f (< 0.04)", lit.coefficient, lit_worst));
}

void criterion_3(Shared& s) {
  const auto& sat = s.saturation.at(8);
  const double page = page_value(8, 4);
  const double dev = page - sat.estimate.value;
  report("3", std::abs(dev - 0.19) <= 0.10 && std::abs(sat.estimate.value - page) < 0.3,
         "saturation deviation L=8",
         fmt("S_inf=%.4f +/- %.4f, page=%.4f, ", sat.estimate.value, sat.standard_error, page) +
             fmt("deviation=%.4f (0.19 +/- 0.10)", dev));
}

void criterion_4(Shared& s) {
  std::vector<CollapseInput> inputs;
  for (int L : {8, 10, 12}) {
    const auto& ser = s.series.at(L);
    inputs.push_back({L, ser.times, ser.mean, s.saturation.at(L).estimate.value});
  }
  const auto res = scaling_collapse(inputs, 0.2, 0.8);
  report("4", res.score < 0.05, "scaling collapse L=8,10,12",
         fmt("rms spread=%.4f over x in [%.3f, %.3f] (< 0.05)", res.score, res.x_range.start, res.x_range.stop));
}

void criterion_5_6(Workbench& wb, Shared& s) {
  const auto p12 = s.cfg.params(12);
  const EnergySpread r12(wb.eigensystem(p12), p12);
  const auto p10 = s.cfg.params(10);
  const EnergySpread r10(wb.eigensystem(p10), p10);

  std::vector<double> rs;
  for (double t : s.grid) rs.push_back(r12(t));
  const auto fit = fit_growth(s.grid, rs, s.cfg.power_fit, FitKind::power_law);
  const double r0 = std::abs(r12(0.0));
  double gap = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double t = 0.05 * k;
    gap = std::max(gap, std::abs(r12(t) - r10(t)));
  }
  report("5", std::abs(fit.exponent - 0.5) <= 0.1 && r0 <= 1e-10 && gap <= 0.05, "diffusive exponent L=12",
         fmt("exponent=%.4f (0.5 +/- 0.1); |R(0)|=%.1e; ", fit.exponent, r0) +
             fmt("max |R10-R12| for t<=3: %.4f (<= 0.05)", gap));

  // onset: first grid time where the ensemble entropy reaches 90% of its long-time value
  const auto& ser = s.series.at(12);
  const double s_inf = s.saturation.at(12).estimate.value;
  double onset = s.grid.back();
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    if (ser.mean[j] >= 0.9 * s_inf) {
      onset = s.grid[j];
      break;
    }
  }
  int changes = 0, prev = 0;
  bool upward = true;
  double cross = 0.0;
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    const double t = s.grid[j];
    if (t < 0.2 || t > onset) continue;
    const double diff = ser.mean[j] - rs[j];
    const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev != 0 && sign != prev) {
      ++changes;
      upward = upward && sign > 0;
      cross = t;
    }
    prev = sign;
  }
  report("6", changes == 1 && upward, "entropy overtakes energy spread",
         std::to_string(changes) + fmt(" sign change(s), upward, near t=%.2f; window [0.2, %.2f]", cross, onset));
}

void criterion_7(Workbench& wb) {
  auto ratio_mean = [&](const CouplingParams& p) {
    const auto d = wb.sector_spectrum(p, Parity::even);
    const std::span<const double> ev(d.eigenvalues.data(), static_cast<std::size_t>(d.eigenvalues.size()));
    return r_tilde_mean(gap_ratios(ev, "even"));
  };
  const double chaotic = ratio_mean(preset("main", 12));
  auto integrable_p = preset("main", 12);
  integrable_p.h = 0.0;
  const double integrable = ratio_mean(integrable_p);
  report("7", chaotic >= 0.50 && chaotic <= 0.56 && integrable >= 0.35 && integrable <= 0.45,
         "level statistics L=12 even",
         fmt("main r=%.4f in [0.50,0.56] (GOE %.4f); ", chaotic, r_tilde_reference(RatioEnsemble::goe)) +
             fmt("h=0 r=%.4f in [0.35,0.45] (Poisson %.4f)", integrable, r_tilde_reference(RatioEnsemble::poisson)));
}

void criterion_8() {
  double worst_state = 0.0, worst_profile = 0.0;
  for (int L : {2, 4, 6}) {
    for (const char* name : {"main", "supp-A", "supp-B"}) {
      const auto p = preset(name, L);
      const auto basis = build_basis(L);
      const auto full = EigenSystem::full(L, eigendecompose(build_hamiltonian(p, basis)));
      auto sectors = std::make_shared<const ParitySectors>(build_parity_sectors(basis));
      const auto op = hamiltonian_operator(p);
      const auto blocked = EigenSystem::blocked(sectors, eigendecompose(op.block(*sectors, Parity::even)),
                                                eigendecompose(op.block(*sectors, Parity::odd)));
      const auto Href = oracle::hamiltonian(p.g, p.h, p.J, L);
      const auto A = oracle::central_bond(L);
      for (double t : {0.3, 1.7, 6.0}) {
        const auto U = oracle::series_propagator(Href, t);
        for (std::size_t m = 0; m < 3; ++m) {
          const auto psi = draw(L, m);
          const Eigen::VectorXcd ref = U * psi.amplitudes();
          worst_state = std::max({worst_state, max_abs_diff(evolve_state(full, psi, t).amplitudes(), ref),
                                  max_abs_diff(evolve_state(blocked, psi, t).amplitudes(), ref)});
        }
        const auto pf = energy_profile(full, p, t);
        const auto pb = energy_profile(blocked, p, t);
        for (std::size_t r = 0; r < pf.positions.size(); ++r) {
          const auto Hr = oracle::local_term(pf.positions[r].doubled(), p.g, p.h, p.J, L);
          const double ref = oracle::evolved_expectation(Hr, A, U);
          worst_profile = std::max({worst_profile, std::abs(pf.values[r] - ref), std::abs(pb.values[r] - ref)});
        }
      }
    }
  }
  report("8", worst_state <= 1e-8 && worst_profile <= 1e-8, "oracle equivalence L<=6",
         fmt("max state error=%.2e, max profile error=%.2e (<= 1e-8)", worst_state, worst_profile));
}

void criterion_9(Workbench& wb) {
  const std::vector<double> late = {1.0, 10.0, 57.3, 123.4, 200.0};
  double drift = 0.0;
  for (int L : {2, 4, 6, 8, 10, 12}) {
    const auto sys = wb.eigensystem(preset("main", L));
    for (std::size_t m = 0; m < 2; ++m) {
      for (const auto& s : evolve_series(sys, draw(L, m), late)) drift = std::max(drift, std::abs(s.norm() - 1.0));
    }
  }
  report("9a", drift < 1e-10, "unitarity to t=200, L<=12", fmt("max |norm-1|=%.2e (< 1e-10)", drift));

  double profile_err = 0.0;
  for (int L : {4, 8, 10}) {
    for (const char* name : {"main", "supp-A", "supp-B"}) {
      const auto p = preset(name, L);
      const auto sys = wb.eigensystem(p);
      const double eps = p.J;  // tr(H A)/D for the central bond
      for (double t : {0.0, 0.37, 2.0, 15.0, 200.0}) {
        profile_err = std::max(profile_err, std::abs(energy_profile(sys, p, t).total() / eps - 1.0));
      }
    }
  }
  report("9b", profile_err <= 1e-10, "energy profile sums to one", fmt("max error=%.2e (<= 1e-10)", profile_err));

  double cut_err = 0.0;
  for (int L : {4, 6, 8, 10}) {
    const auto sys = wb.eigensystem(preset("main", L));
    for (std::size_t m = 0; m < 2; ++m) {
      const auto psi = evolve_state(sys, draw(L, m), 3.1);
      for (int cut = 1; cut < L; ++cut) {
        const double a = entanglement_entropy(psi, cut).bits;
        const double b = oracle::complement_entropy(psi.amplitudes(), L, cut);
        cut_err = std::max(cut_err, std::abs(a - b));
      }
    }
  }
  report("9c", cut_err <= 1e-10, "entropy cut symmetry", fmt("max |S_A - S_B|=%.2e (<= 1e-10)", cut_err));

  double part_err = 0.0;
  for (int L : {2, 4, 6, 8}) {
    for (const char* name : {"main", "supp-A", "supp-B"}) {
      const auto p = preset(name, L);
      const auto basis = build_basis(L);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(basis.dimension, basis.dimension);
      for (const auto& r : local_positions(L)) sum += build_local_term(r, p, basis).dense();
      part_err = std::max(part_err, (sum - build_hamiltonian(p, basis).dense()).cwiseAbs().maxCoeff());
    }
  }
  report("9d", part_err <= 1e-12, "local terms partition H, L<=8", fmt("max entry error=%.2e", part_err));

  double spec_err = 0.0;
  for (int L : {2, 4, 6, 8, 10}) {
    for (const char* name : {"main", "supp-A", "supp-B"}) {
      const auto p = preset(name, L);
      const auto full = eigendecompose(build_hamiltonian(p, build_basis(L)));
      const auto ev = wb.eigensystem(p).eigenvalues();
      const Eigen::Map<const Eigen::VectorXd> blocked(ev.data(), static_cast<Eigen::Index>(ev.size()));
      spec_err = std::max(spec_err, (full.eigenvalues - blocked).cwiseAbs().maxCoeff());
    }
  }
  report("9e", spec_err <= 1e-9, "full vs parity-block spectra, L<=10", fmt("max difference=%.2e (<= 1e-9)", spec_err));
}

void criterion_10(const fs::path& scratch) {
  ExperimentConfig cfg;
  cfg.lengths = {8, 10};
  cfg.ensemble = 20;
  cfg.saturation_samples = 7;
  bool same = true;
  std::string detail;
  for (auto kind : {ExperimentKind::entanglement, ExperimentKind::diffusion, ExperimentKind::collapse,
                    ExperimentKind::saturation, ExperimentKind::levelstats}) {
    cfg.kind = kind;
    std::string csv[2];
    for (int run = 0; run < 2; ++run) {
      cfg.out_dir = scratch / ("determinism_" + std::to_string(run));
      fs::remove_all(cfg.out_dir);
      run_experiment(cfg);
      csv[run] = slurp(cfg.out_dir / (std::string(to_string(kind)) + "_main.csv"));
    }
    const bool ok = !csv[0].empty() && csv[0] == csv[1];
    same = same && ok;
    detail += std::string(to_string(kind)) + (ok ? "=identical " : "=DIFFERENT ");
  }
  report("10", same, "byte-identical reruns", detail);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path cache = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "edlab_acceptance_cache";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "edlab_acceptance_out";
  const auto t0 = std::chrono::steady_clock::now();

  Shared s;
  s.cfg.cache_dir = cache;
  s.grid = s.cfg.grid.values();
  Workbench wb(s.cfg);

  auto guarded = [](const char* id, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, "raised", e.what());
    }
  };

  guarded("1", [] { criterion_1(); });
  guarded("8", [] { criterion_8(); });
  guarded("9", [&] { criterion_9(wb); });
  guarded("pre", [&] {
    for (int L : {8, 10, 12}) {
      const auto sys = wb.eigensystem(s.cfg.params(L));
      s.series[L] = entanglement_series(sys, s.grid, s.cfg.ensemble, s.cfg.seed, s.cfg.sampling, s.cfg.workers);
      s.saturation[L] = entanglement_saturation(sys, s.cfg);
    }
  });
  guarded("2", [&] { criterion_2(wb, s); });
  guarded("3", [&] { criterion_3(s); });
  guarded("4", [&] { criterion_4(s); });
  guarded("5", [&] { criterion_5_6(wb, s); });
  guarded("7", [&] { criterion_7(wb); });
  guarded("10", [&] { criterion_10(scratch); });

  guarded("-", [&] {
    const auto p = s.cfg.params(8);
    const EnergySpread r8(wb.eigensystem(p), p);
    const auto est = saturation_estimate([&](double t) { return r8(t); }, s.cfg.saturation, s.cfg.saturation_samples);
    note("long-time R, L=8", fmt("R_inf=%.4f vs %.4f; gap %.3f (target within 0.3, not gating)",
                                 est.value, equipartition_spread(8), equipartition_spread(8) - est.value));
    std::string growth;
    for (int L : {8, 10, 12}) growth += fmt("%.3f ", s.saturation.at(L).estimate.value);
    note("S_inf for L=8,10,12", growth);
  });

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d failing criteria, %.0f s\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures, secs);
  return failures == 0 ? 0 : 1;
}
