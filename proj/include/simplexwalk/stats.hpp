#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "simplexwalk/distributions.hpp"
#include "simplexwalk/geometry.hpp"

namespace swalk {

using Cdf = std::function<double(double)>;

/// Verdict of one goodness-of-fit test; pass iff statistic < threshold.
struct GofReport {
  std::string kind;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;  // second sample size (two-sample KS) or cell count (chi-square)
  bool pass = false;
  std::vector<std::string> notes;
};

GofReport make_report(std::string kind, double statistic, double threshold, std::size_t n, std::size_t m = 0);

/// Fraction of the sample <= x.
double ecdf(std::span<const double> sorted_sample, double x);

/// max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n). Throws InvalidParameter on
/// an empty sample.
double ks_one_sample(std::span<const double> sample, const Cdf& cdf);
/// sup |F_a - F_b| over the pooled sample.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic KS coefficient: 1.36 (alpha 0.05), 1.63 (0.01), 1.95 (0.001).
/// Throws InvalidParameter for any other alpha.
double ks_coefficient(double alpha);
/// ks_coefficient(alpha) / sqrt(n).
double ks_critical(double alpha, std::size_t n);
/// ks_coefficient(alpha) * sqrt((n + m) / (n m)).
double ks_critical_two(double alpha, std::size_t n, std::size_t m);

GofReport ks_one_sample_test(std::span<const double> sample, const Cdf& cdf, double alpha);
GofReport ks_two_sample_test(std::span<const double> a, std::span<const double> b, double alpha);
/// One-sample KS against a fixed threshold instead of a tabulated alpha.
GofReport ks_threshold_test(std::span<const double> sample, const Cdf& cdf, double threshold);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  std::size_t cells = 0;
  std::size_t coarsenings = 0;  // number of merge passes forced by small expected counts
  std::size_t dropped = 0;      // samples on the boundary where the pullback is singular
  double probability_sum = 0.0;
  std::vector<double> observed;
  std::vector<double> expected;
};

/// Chi-square over `bins` equal-width cells of [0, 1] with probabilities
/// from `cdf`. Adjacent cells are merged until every expected count is >= 5.
ChiSquareResult chi_square_1d(std::span<const double> sample, const Cdf& cdf, std::size_t bins);

/// Chi-square over the T-pullback of the grid with `bins` cells per axis of
/// [0, 1]^d. Under Dirichlet(alpha) the stick-breaking coordinates are
/// independent, x_j ~ Beta(alpha_j, alpha_{d+1} + sum_{l<j} alpha_l), so each
/// cell probability is a product of Beta increments. `bins` is halved while
/// some expected count is below 5.
ChiSquareResult chi_square_simplex(std::span<const SimplexPoint> samples, const DirichletParams& params,
                                   std::size_t bins);

/// Pass iff statistic < chi-square quantile at 1 - alpha.
GofReport chi_square_test(const ChiSquareResult& result, double alpha);

struct MomentReport {
  std::vector<double> mean;
  std::vector<double> mean_dev;  // (sample mean - mean) / (sigma / sqrt n)
  std::vector<std::vector<double>> cov;
  std::vector<std::vector<double>> cov_dev;  // standardized by the sample spread of the products
  double max_dev = 0.0;
};

/// Sample means and covariances against dirichlet_moments.
MomentReport moment_compare(std::span<const SimplexPoint> samples, const DirichletParams& params);

struct TvResult {
  double estimate = 0.0;  // (1/2) sum over cells |empirical - model|
  std::size_t cells = 0;
  double model_mass = 0.0;  // integral of the pdf over all cells (should be ~1)
};

/// Total-variation estimate between the sample histogram and pdf over the
/// T-pullback grid with `bins` cells per axis; cell masses by nested
/// tanh-sinh quadrature of pdf(T(x)) det DT(x). d <= 3.
TvResult tv_histogram(std::span<const SimplexPoint> samples, const std::function<double(const SimplexPoint&)>& pdf,
                      std::size_t bins);

}  // namespace swalk
