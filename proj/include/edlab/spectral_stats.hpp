#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edlab {

/// Consecutive level-spacing ratios r_i = (l_{i+2} - l_{i+1}) / (l_{i+1} - l_i).
struct GapRatioSet {
  std::vector<double> ratios;
  std::string sector;
  /// Ratios dropped because their denominator gap was zero.
  std::size_t degenerate = 0;

  std::size_t total() const { return ratios.size() + degenerate; }
};

/// Gaps no larger than `zero_gap` times max(1, max|l|) count as exact
/// degeneracies. Throws DomainError for fewer than 3 or unsorted eigenvalues.
GapRatioSet gap_ratios(std::span<const double> eigenvalues, std::string sector = {},
                       double zero_gap = 1e-13);

/// Mean of min(r, 1/r).
double r_tilde_mean(const GapRatioSet& rs);

enum class RatioEnsemble { goe, poisson };

/// GOE: (27/8)(r + r^2)/(1 + r + r^2)^{5/2}; Poisson: 1/(1+r)^2.
double surmise_pdf(double r, RatioEnsemble ensemble);

/// <min(r, 1/r)> of the reference laws: 4 - 2 sqrt3 and 2 ln2 - 1.
double r_tilde_reference(RatioEnsemble ensemble);

struct Histogram {
  std::vector<double> edges;   // bins + 1 entries
  std::vector<double> counts;
  std::vector<double> density;  // counts / (total * width)

  std::size_t bins() const { return counts.size(); }
  double left(std::size_t b) const { return edges[b]; }
  double right(std::size_t b) const { return edges[b + 1]; }
  /// Empty bins strictly between the first and last occupied bins.
  std::size_t empty_interior_bins() const;
};

/// Equal-width bins over [min, max]; the top edge is inclusive.
Histogram make_histogram(std::span<const double> values, std::size_t bins);

/// Sorts the ratios, keeps the lowest `keep_lowest`, and bins them over their
/// own range as a probability density.
Histogram ratio_histogram(const GapRatioSet& rs, std::size_t bins, std::size_t keep_lowest);

/// Keep count at the 32000-of-32894 fraction used for the L=16 even sector.
std::size_t default_keep_count(std::size_t available);

Histogram eigenvalue_histogram(std::span<const double> eigenvalues, std::size_t bins);

}  // namespace edlab
