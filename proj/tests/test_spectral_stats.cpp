#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edlab/errors.hpp"
#include "edlab/spectral_stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

using namespace edlab;

namespace {

// Ratio of two independent exponential spacings: the Poisson ratio law.
double poisson_ratio(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  return e(rng) / e(rng);
}

// Spacing ratio of a 3x3 GOE matrix, whose distribution the surmise is.
double goe3_ratio(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    m(i, i) = n(rng) * std::sqrt(2.0);
    for (int j = i + 1; j < 3; ++j) m(i, j) = m(j, i) = n(rng);
  }
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return (ev[2] - ev[1]) / (ev[1] - ev[0]);
}

double integrate(RatioEnsemble e, double hi) {
  // composite Simpson on a log-stretched grid t = log(1 + r)
  const int n = 200000;
  const double a = 0.0, b = std::log1p(hi), h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = a + h * i;
    const double r = std::expm1(t);
    const double f = surmise_pdf(r, e) * std::exp(t);
    s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gap ratios by hand") {
  const std::vector<double> equal = {0.0, 1.0, 2.0, 3.0, 4.0};
  const auto a = gap_ratios(equal);
  CHECK(a.ratios.size() == 3);
  for (double r : a.ratios) CHECK(r == doctest::Approx(1.0));
  CHECK(r_tilde_mean(a) == doctest::Approx(1.0));

  const std::vector<double> spaced = {0.0, 1.0, 3.0, 7.0};  // spacings 1, 2, 4
  const auto b = gap_ratios(spaced);
  REQUIRE(b.ratios.size() == 2);
  CHECK(b.ratios[0] == doctest::Approx(2.0));
  CHECK(b.ratios[1] == doctest::Approx(2.0));
  CHECK(r_tilde_mean(b) == doctest::Approx(0.5));
}

TEST_CASE("gap ratio errors and degeneracies") {
  const std::vector<double> unsorted = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(gap_ratios(unsorted), DomainError);
  const std::vector<double> short_list = {0.0, 1.0};
  CHECK_THROWS_AS(gap_ratios(short_list), DomainError);
  const std::vector<double> degenerate = {0.0, 1.0, 1.0, 2.0, 3.5};
  const auto rs = gap_ratios(degenerate);
  CHECK(rs.degenerate == 1);
  CHECK(rs.total() == 3);
  CHECK_THROWS_AS(r_tilde_mean(GapRatioSet{}), DomainError);
}

TEST_CASE("gap ratios are invariant under affine maps") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> ev(300);
  for (auto& v : ev) v = u(rng);
  std::sort(ev.begin(), ev.end());
  const auto base = gap_ratios(ev);
  for (auto [a, b] : {std::pair{2.5, -1.0}, std::pair{0.01, 7.0}}) {
    std::vector<double> mapped;
    for (double v : ev) mapped.push_back(a * v + b);
    const auto m = gap_ratios(mapped);
    REQUIRE(m.ratios.size() == base.ratios.size());
    for (std::size_t i = 0; i < m.ratios.size(); ++i) {
      CHECK(std::abs(std::min(m.ratios[i], 1 / m.ratios[i]) -
                     std::min(base.ratios[i], 1 / base.ratios[i])) <= 1e-9);
    }
  }
}

TEST_CASE("surmise densities") {
  CHECK(surmise_pdf(0.0, RatioEnsemble::poisson) == 1.0);
  CHECK(surmise_pdf(0.0, RatioEnsemble::goe) == 0.0);
  CHECK_THROWS_AS(surmise_pdf(-0.1, RatioEnsemble::goe), DomainError);
  CHECK(std::abs(integrate(RatioEnsemble::poisson, 1e4) - 1.0) <= 1e-3);
  CHECK(std::abs(integrate(RatioEnsemble::goe, 1e4) - 1.0) <= 1e-3);
}

TEST_CASE("reference r-tilde values from Monte Carlo") {
  CHECK(r_tilde_reference(RatioEnsemble::poisson) == doctest::Approx(0.3863).epsilon(1e-4));
  CHECK(r_tilde_reference(RatioEnsemble::goe) == doctest::Approx(0.5359).epsilon(1e-4));
  std::mt19937_64 rng(99);
  GapRatioSet poisson, goe;
  for (int k = 0; k < 1000000; ++k) {
    poisson.ratios.push_back(poisson_ratio(rng));
    goe.ratios.push_back(goe3_ratio(rng));
  }
  CHECK(std::abs(r_tilde_mean(poisson) - 0.3863) <= 0.005);
  CHECK(std::abs(r_tilde_mean(goe) - 0.5359) <= 0.005);
}

TEST_CASE("ratio histogram") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GapRatioSet rs;
  for (int k = 0; k < 200000; ++k) rs.ratios.push_back(u(rng));
  const auto h = ratio_histogram(rs, 20, rs.ratios.size());
  double integral = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    CHECK(h.density[b] == doctest::Approx(1.0).epsilon(0.05));
    integral += h.density[b] * (h.right(b) - h.left(b));
  }
  CHECK(std::abs(integral - 1.0) <= 1e-9);

  const auto kept = ratio_histogram(rs, 250, 1000);
  double total = 0.0;
  for (double c : kept.counts) total += c;
  CHECK(total == 1000.0);
  CHECK(kept.edges.back() <= 0.01);
  CHECK_THROWS_AS(ratio_histogram(rs, 10, rs.ratios.size() + 1), DomainError);

  CHECK(default_keep_count(32894) == 32000);
  CHECK(default_keep_count(2078) == 2022);
}

TEST_CASE("eigenvalue histogram") {
  const std::vector<double> same(7, 1.25);
  const auto h = eigenvalue_histogram(same, 50);
  CHECK(std::count_if(h.counts.begin(), h.counts.end(), [](double c) { return c > 0; }) == 1);
  CHECK(h.empty_interior_bins() == 0);

  const std::vector<double> gappy = {0.0, 0.1, 0.2, 5.0, 9.9, 10.0};
  const auto g = eigenvalue_histogram(gappy, 10);
  double total = 0.0;
  for (double c : g.counts) total += c;
  CHECK(total == gappy.size());
  CHECK(g.empty_interior_bins() == 7);
}
