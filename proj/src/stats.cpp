#include "simplexwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplexwalk/errors.hpp"
#include "simplexwalk/quadrature.hpp"
#include "simplexwalk/special.hpp"

namespace swalk {

GofReport make_report(std::string kind, double statistic, double threshold, std::size_t n, std::size_t m) {
  GofReport r;
  r.kind = std::move(kind);
  r.statistic = statistic;
  r.threshold = threshold;
  r.n = n;
  r.m = m;
  r.pass = statistic < threshold;
  return r;
}

double ecdf(std::span<const double> sorted_sample, double x) {
  if (sorted_sample.empty()) throw InvalidParameter("ecdf: empty sample");
  const auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), x);
  return static_cast<double>(it - sorted_sample.begin()) / static_cast<double>(sorted_sample.size());
}

double ks_one_sample(std::span<const double> sample, const Cdf& cdf) {
  if (sample.empty()) throw InvalidParameter("ks_one_sample: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_coefficient(double alpha) {
  if (alpha == 0.05) return 1.36;
  if (alpha == 0.01) return 1.63;
  if (alpha == 0.001) return 1.95;
  throw InvalidParameter("ks: alpha must be 0.05, 0.01 or 0.001");
}

double ks_critical(double alpha, std::size_t n) {
  if (n == 0) throw InvalidParameter("ks: empty sample");
  return ks_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two(double alpha, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidParameter("ks: empty sample");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return ks_coefficient(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

GofReport ks_one_sample_test(std::span<const double> sample, const Cdf& cdf, double alpha) {
  return make_report("ks_one_sample", ks_one_sample(sample, cdf), ks_critical(alpha, sample.size()), sample.size());
}

GofReport ks_two_sample_test(std::span<const double> a, std::span<const double> b, double alpha) {
  return make_report("ks_two_sample", ks_two_sample(a, b), ks_critical_two(alpha, a.size(), b.size()), a.size(),
                     b.size());
}

GofReport ks_threshold_test(std::span<const double> sample, const Cdf& cdf, double threshold) {
  return make_report("ks_one_sample", ks_one_sample(sample, cdf), threshold, sample.size());
}

namespace {

constexpr double kMinExpected = 5.0;

void finish(ChiSquareResult& r) {
  r.cells = r.observed.size();
  r.statistic = 0.0;
  for (std::size_t i = 0; i < r.cells; ++i) {
    const double e = r.expected[i];
    const double o = r.observed[i];
    if (e > 0.0) r.statistic += (o - e) * (o - e) / e;
  }
  r.dof = r.cells > 1 ? r.cells - 1 : 0;
}

}  // namespace

ChiSquareResult chi_square_1d(std::span<const double> sample, const Cdf& cdf, std::size_t bins) {
  if (sample.empty()) throw InvalidParameter("chi_square_1d: empty sample");
  if (bins == 0) throw InvalidParameter("chi_square_1d: bins must be >= 1");
  const double n = static_cast<double>(sample.size());
  std::vector<double> obs(bins, 0.0), expct(bins, 0.0);
  for (double x : sample) {
    const auto k = static_cast<std::size_t>(std::clamp(x, 0.0, 1.0) * static_cast<double>(bins));
    obs[std::min(k, bins - 1)] += 1.0;
  }
  double prev = cdf(0.0);
  ChiSquareResult r;
  for (std::size_t k = 0; k < bins; ++k) {
    const double next = k + 1 == bins ? cdf(1.0) : cdf(static_cast<double>(k + 1) / static_cast<double>(bins));
    expct[k] = (next - prev) * n;
    r.probability_sum += next - prev;
    prev = next;
  }
  // Greedy left-to-right merge; a short final run joins its neighbour.
  std::vector<double> mo, me;
  double ao = 0.0, ae = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    ao += obs[k];
    ae += expct[k];
    if (ae >= kMinExpected) {
      mo.push_back(ao);
      me.push_back(ae);
      ao = ae = 0.0;
    }
  }
  if (ae > 0.0 || ao > 0.0) {
    if (me.empty()) {
      mo.push_back(ao);
      me.push_back(ae);
    } else {
      mo.back() += ao;
      me.back() += ae;
    }
  }
  if (me.size() < bins) r.coarsenings = 1;
  r.observed = std::move(mo);
  r.expected = std::move(me);
  finish(r);
  return r;
}

ChiSquareResult chi_square_simplex(std::span<const SimplexPoint> samples, const DirichletParams& params,
                                   std::size_t bins) {
  if (samples.empty()) throw InvalidParameter("chi_square_simplex: empty sample");
  if (bins == 0) throw InvalidParameter("chi_square_simplex: bins must be >= 1");
  const std::size_t d = params.dim();
  ChiSquareResult r;
  std::vector<std::vector<double>> xs;
  xs.reserve(samples.size());
  for (const auto& z : samples) {
    if (z.dim() != d) throw InvalidParameter("chi_square_simplex: sample dimension differs from params");
    try {
      const CubePoint x = inverse_T(z);
      xs.emplace_back(x.coords().begin(), x.coords().end());
    } catch (const SingularityError&) {
      ++r.dropped;
    }
  }
  if (xs.empty()) throw InvalidParameter("chi_square_simplex: every sample lies on the singular boundary");
  const double n = static_cast<double>(xs.size());

  // Shapes of the independent stick-breaking factors.
  std::vector<double> sa(d), sb(d);
  double below = params.alpha().back();
  for (std::size_t j = 0; j < d; ++j) {
    sa[j] = params.alpha()[j];
    sb[j] = below;
    below += params.alpha()[j];
  }

  std::size_t b = bins;
  while (true) {
    std::size_t cells = 1;
    for (std::size_t j = 0; j < d; ++j) cells *= b;
    std::vector<std::vector<double>> inc(d, std::vector<double>(b));
    for (std::size_t j = 0; j < d; ++j) {
      double prev = 0.0;
      for (std::size_t k = 0; k < b; ++k) {
        const double next =
            k + 1 == b ? 1.0 : special::incomplete_beta(sa[j], sb[j], static_cast<double>(k + 1) / static_cast<double>(b));
        inc[j][k] = next - prev;
        prev = next;
      }
    }
    std::vector<double> expct(cells, 1.0);
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      for (std::size_t j = 0; j < d; ++j) {
        expct[c] *= inc[j][rest % b];
        rest /= b;
      }
    }
    const double psum = std::accumulate(expct.begin(), expct.end(), 0.0);
    const double min_p = *std::min_element(expct.begin(), expct.end());
    if (min_p * n >= kMinExpected || b == 1) {
      std::vector<double> obs(cells, 0.0);
      for (const auto& x : xs) {
        std::size_t c = 0, stride = 1;
        for (std::size_t j = 0; j < d; ++j) {
          const auto k = static_cast<std::size_t>(std::clamp(x[j], 0.0, 1.0) * static_cast<double>(b));
          c += std::min(k, b - 1) * stride;
          stride *= b;
        }
        obs[c] += 1.0;
      }
      for (double& e : expct) e *= n;
      r.observed = std::move(obs);
      r.expected = std::move(expct);
      r.probability_sum = psum;
      finish(r);
      return r;
    }
    b = std::max<std::size_t>(1, b / 2);
    ++r.coarsenings;
  }
}

GofReport chi_square_test(const ChiSquareResult& result, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("chi_square_test: alpha must lie in (0,1)");
  if (result.dof == 0) throw InvalidParameter("chi_square_test: need at least two cells");
  const double threshold = special::chi_square_quantile(static_cast<double>(result.dof), 1.0 - alpha);
  GofReport r = make_report("chi_square", result.statistic, threshold,
                            static_cast<std::size_t>(std::accumulate(result.observed.begin(), result.observed.end(), 0.0)),
                            result.cells);
  if (result.coarsenings > 0) r.notes.push_back("cells coarsened " + std::to_string(result.coarsenings) + " time(s)");
  if (result.dropped > 0) r.notes.push_back(std::to_string(result.dropped) + " boundary samples dropped");
  return r;
}

MomentReport moment_compare(std::span<const SimplexPoint> samples, const DirichletParams& params) {
  if (samples.size() < 2) throw InvalidParameter("moment_compare: need at least two samples");
  const std::size_t d = params.dim();
  const Moments target = dirichlet_moments(params);
  const double n = static_cast<double>(samples.size());
  MomentReport r;
  r.mean.assign(d, 0.0);
  for (const auto& z : samples) {
    if (z.dim() != d) throw InvalidParameter("moment_compare: sample dimension differs from params");
    for (std::size_t i = 0; i < d; ++i) r.mean[i] += z.coords()[i];
  }
  for (double& m : r.mean) m /= n;
  r.mean_dev.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double se = std::sqrt(target.covariance[i][i] / n);
    r.mean_dev[i] = (r.mean[i] - target.mean[i]) / se;
    r.max_dev = std::max(r.max_dev, std::fabs(r.mean_dev[i]));
  }
  // Products centred at the model mean, so their mean estimates the covariance.
  r.cov.assign(d, std::vector<double>(d, 0.0));
  r.cov_dev.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (const auto& z : samples) {
        const double p = (z.coords()[i] - target.mean[i]) * (z.coords()[j] - target.mean[j]);
        s1 += p;
        s2 += p * p;
      }
      const double mean = s1 / n;
      const double var = std::max(s2 / n - mean * mean, 0.0) * n / (n - 1.0);
      const double dev = var > 0.0 ? (mean - target.covariance[i][j]) / std::sqrt(var / n) : 0.0;
      r.cov[i][j] = r.cov[j][i] = mean;
      r.cov_dev[i][j] = r.cov_dev[j][i] = dev;
      r.max_dev = std::max(r.max_dev, std::fabs(dev));
    }
  }
  return r;
}

TvResult tv_histogram(std::span<const SimplexPoint> samples, const std::function<double(const SimplexPoint&)>& pdf,
                      std::size_t bins) {
  if (samples.empty()) throw InvalidParameter("tv_histogram: empty sample");
  if (bins == 0) throw InvalidParameter("tv_histogram: bins must be >= 1");
  const std::size_t d = samples.front().dim();
  if (d == 0 || d > 3) throw InvalidParameter("tv_histogram: supports 1 <= d <= 3");
  std::size_t cells = 1;
  for (std::size_t j = 0; j < d; ++j) cells *= bins;

  std::vector<double> emp(cells, 0.0);
  std::size_t used = 0;
  for (const auto& z : samples) {
    try {
      const CubePoint x = inverse_T(z);
      std::size_t c = 0, stride = 1;
      for (std::size_t j = 1; j <= d; ++j) {
        const auto k = static_cast<std::size_t>(std::clamp(x.coord(j), 0.0, 1.0) * static_cast<double>(bins));
        c += std::min(k, bins - 1) * stride;
        stride *= bins;
      }
      emp[c] += 1.0;
      ++used;
    } catch (const SingularityError&) {
    }
  }
  if (used == 0) throw InvalidParameter("tv_histogram: every sample lies on the singular boundary");

  const quad::Tolerance tol{1e-9, 1e-7};
  std::vector<double> x(d);
  std::vector<double> lo(d), hi(d);
  // Integrates pdf(T(x)) det DT(x) over the box [lo, hi], innermost axis last.
  std::function<double(std::size_t)> nest = [&](std::size_t axis) -> double {
    auto f = [&, axis](double v) {
      x[axis] = v;
      if (axis + 1 < d) return nest(axis + 1);
      const CubePoint cp(x);
      return pdf(forward_T(cp)) * jacobian_det_T(cp);
    };
    return quad::tanh_sinh(f, lo[axis], hi[axis], tol, 10).value;
  };

  TvResult out;
  out.cells = cells;
  double tv = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t k = rest % bins;
      rest /= bins;
      lo[j] = static_cast<double>(k) / static_cast<double>(bins);
      hi[j] = static_cast<double>(k + 1) / static_cast<double>(bins);
    }
    const double mass = nest(0);
    out.model_mass += mass;
    tv += std::fabs(emp[c] / static_cast<double>(used) - mass);
  }
  out.estimate = 0.5 * tv;
  return out;
}

}  // namespace swalk
