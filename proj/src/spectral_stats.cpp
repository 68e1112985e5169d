#include "edlab/spectral_stats.hpp"

#include "edlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edlab {

GapRatioSet gap_ratios(std::span<const double> eigenvalues, std::string sector, double zero_gap) {
  if (eigenvalues.size() < 3) throw DomainError("gap_ratios: at least 3 eigenvalues required");
  if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end())) {
    throw DomainError("gap_ratios: eigenvalues must be sorted ascending");
  }
  double scale = 1.0;
  for (double v : eigenvalues) scale = std::max(scale, std::abs(v));
  const double tiny = zero_gap * scale;
  GapRatioSet out;
  out.sector = std::move(sector);
  out.ratios.reserve(eigenvalues.size() - 2);
  for (std::size_t i = 0; i + 2 < eigenvalues.size(); ++i) {
    const double lower = eigenvalues[i + 1] - eigenvalues[i];
    const double upper = eigenvalues[i + 2] - eigenvalues[i + 1];
    if (lower <= tiny) {
      ++out.degenerate;
      continue;
    }
    out.ratios.push_back(upper / lower);
  }
  return out;
}

double r_tilde_mean(const GapRatioSet& rs) {
  if (rs.ratios.empty()) throw DomainError("r_tilde_mean: empty ratio set");
  double sum = 0.0;
  for (double r : rs.ratios) sum += r > 1.0 ? 1.0 / r : r;
  return sum / static_cast<double>(rs.ratios.size());
}

double surmise_pdf(double r, RatioEnsemble ensemble) {
  if (r < 0.0) throw DomainError("surmise_pdf: r must be nonnegative");
  if (ensemble == RatioEnsemble::poisson) return 1.0 / ((1.0 + r) * (1.0 + r));
  const double q = 1.0 + r + r * r;
  return 27.0 / 8.0 * (r + r * r) / std::pow(q, 2.5);
}

double r_tilde_reference(RatioEnsemble ensemble) {
  return ensemble == RatioEnsemble::goe ? 4.0 - 2.0 * std::sqrt(3.0)
                                        : 2.0 * std::numbers::ln2 - 1.0;
}

std::size_t Histogram::empty_interior_bins() const {
  std::size_t first = counts.size(), last = 0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] > 0) {
      first = std::min(first, b);
      last = b;
    }
  }
  if (first >= last) return 0;
  std::size_t empty = 0;
  for (std::size_t b = first + 1; b < last; ++b) empty += counts[b] == 0 ? 1 : 0;
  return empty;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) throw DomainError("histogram: no values");
  if (bins == 0) throw DomainError("histogram: bin count must be positive");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn;
  const double width = *mx > lo ? (*mx - lo) / static_cast<double>(bins) : 1.0;
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = *mx > lo ? *mx : lo + width * static_cast<double>(bins);
  h.counts.assign(bins, 0.0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(b, bins - 1)] += 1.0;
  }
  const auto n = static_cast<double>(values.size());
  h.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.density[b] = h.counts[b] / (n * (h.edges[b + 1] - h.edges[b]));
  }
  return h;
}

Histogram ratio_histogram(const GapRatioSet& rs, std::size_t bins, std::size_t keep_lowest) {
  if (keep_lowest > rs.ratios.size()) {
    throw DomainError("ratio_histogram: keep_lowest " + std::to_string(keep_lowest) +
                      " exceeds the " + std::to_string(rs.ratios.size()) + " available ratios");
  }
  if (keep_lowest == 0) throw DomainError("ratio_histogram: nothing to keep");
  std::vector<double> sorted = rs.ratios;
  std::sort(sorted.begin(), sorted.end());
  sorted.resize(keep_lowest);
  return make_histogram(sorted, bins);
}

std::size_t default_keep_count(std::size_t available) {
  const double frac = 32000.0 / 32894.0;
  return std::min(available,
                  static_cast<std::size_t>(std::llround(frac * static_cast<double>(available))));
}

Histogram eigenvalue_histogram(std::span<const double> eigenvalues, std::size_t bins) {
  return make_histogram(eigenvalues, bins);
}

}  // namespace edlab
