#include "simplexwalk/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "simplexwalk/errors.hpp"

namespace swalk {

TailCheck check_tail(const JumpLaw& jump, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("check_tail: delta must lie in (0,1)");
  TailCheck out;
  out.eta = jump_tail(jump, 1.0 - delta);
  out.pass = out.eta > 0.0;
  return out;
}

namespace {

// All lattice points of the simplex {w in Z^m_{>=0} : sum w = r}, as weights w / r.
std::vector<std::vector<double>> bary_lattice(std::size_t m, std::size_t r) {
  std::vector<std::vector<double>> out;
  if (m == 1) {
    out.push_back({1.0});
    return out;
  }
  std::vector<std::size_t> idx(m - 1, 0);
  while (true) {
    std::size_t used = 0;
    for (std::size_t v : idx) used += v;
    if (used <= r) {
      std::vector<double> w(m);
      for (std::size_t i = 0; i + 1 < m; ++i) w[i] = static_cast<double>(idx[i]) / static_cast<double>(r);
      w[m - 1] = static_cast<double>(r - used) / static_cast<double>(r);
      out.push_back(std::move(w));
    }
    std::size_t k = 0;
    while (k < m - 1 && ++idx[k] > r) idx[k++] = 0;
    if (k == m - 1) break;
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

// Lattice size of a simplex with m weights at resolution r.
double lattice_count(std::size_t m, std::size_t r) { return binomial(r + m - 1, m - 1); }

std::vector<double> random_bary(std::size_t m, RngStream& rng) {
  std::vector<double> w(m);
  double total = 0.0;
  for (double& x : w) {
    x = rng.exponential();
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

// Index sets of size k in {0..n-1}, lexicographic.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

constexpr double kLatticeBudget = 2e5;

}  // namespace

ChoiceInfResult check_choice_inf(const ChoiceFunction& cf, double delta, std::size_t resolution,
                                 std::uint64_t seed, std::size_t random_samples) {
  const std::size_t d = cf.dim();
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameter("check_choice_inf: delta must lie in (0,1)");
  if (resolution < 1) throw InvalidParameter("check_choice_inf: resolution must be >= 1");

  ChoiceInfResult out;
  out.resolution = resolution;
  out.exact = cf.is_affine();
  out.epsilon = std::numeric_limits<double>::infinity();
  RngStream rng(seed, 0);
  std::vector<double> probs(d + 1);
  std::vector<double> bary(d + 1);

  for (std::size_t k = 1; k <= d; ++k) {
    const std::size_t rest = d + 1 - k;
    // Shrink the barycentric resolution until one slab fits the budget.
    std::size_t r = resolution;
    while (r > 1 && static_cast<double>(resolution + 1) * lattice_count(k, r) * lattice_count(rest, r) > kLatticeBudget) {
      r = std::max<std::size_t>(1, r * 3 / 4);
    }
    const auto la = bary_lattice(k, r);
    const auto lb = bary_lattice(rest, r);

    for (const auto& J : subsets(d + 1, k)) {
      std::vector<std::size_t> Jc;
      for (std::size_t i = 0, p = 0; i <= d; ++i) {
        if (p < J.size() && J[p] == i) {
          ++p;
        } else {
          Jc.push_back(i);
        }
      }
      auto value = [&](double m, const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < k; ++i) bary[J[i]] = m * a[i];
        for (std::size_t i = 0; i < rest; ++i) bary[Jc[i]] = (1.0 - m) * b[i];
        std::vector<double> z(bary.begin() + 1, bary.end());
        const SimplexPoint pt(std::move(z));
        cf.probs_into(pt, probs);
        ++out.evaluations;
        double sum = 0.0;
        for (std::size_t j : J) sum += probs[j];
        if (sum < out.epsilon) {
          out.epsilon = sum;
          out.worst_subset = J;
          out.worst_point.assign(pt.coords().begin(), pt.coords().end());
        }
        return sum;
      };

      // Lattice sweep; the modulus compares each point with its successor
      // along the mass axis and along the first lattice direction of a and b.
      std::vector<double> prev_m(la.size() * lb.size(), std::nan(""));
      for (std::size_t im = 0; im <= resolution; ++im) {
        const double m = delta * static_cast<double>(im) / static_cast<double>(resolution);
        for (std::size_t ia = 0; ia < la.size(); ++ia) {
          double prev_b = std::nan("");
          for (std::size_t ib = 0; ib < lb.size(); ++ib) {
            const double v = value(m, la[ia], lb[ib]);
            double& pm = prev_m[ia * lb.size() + ib];
            if (!out.exact) {
              if (!std::isnan(pm)) out.modulus = std::max(out.modulus, std::fabs(v - pm));
              if (!std::isnan(prev_b)) out.modulus = std::max(out.modulus, std::fabs(v - prev_b));
            }
            pm = v;
            prev_b = v;
          }
        }
        if (!out.exact && k > 1 && la.size() > 1) {
          for (std::size_t ib = 0; ib < lb.size(); ++ib) {
            for (std::size_t ia = 1; ia < la.size(); ++ia) {
              const double diff = prev_m[ia * lb.size() + ib] - prev_m[(ia - 1) * lb.size() + ib];
              out.modulus = std::max(out.modulus, std::fabs(diff));
            }
          }
        }
      }
      for (std::size_t i = 0; i < random_samples; ++i) {
        const double m = delta * rng.uniform();
        value(m, random_bary(k, rng), random_bary(rest, rng));
      }
    }
  }

  if (out.exact) {
    out.certified = out.epsilon > 0.0;
    out.note = "affine choice: minimum over slab vertices is exact";
  } else {
    out.certified = out.epsilon > 2.0 * out.modulus;
    out.note = "non-affine choice: sampled infimum, not exhaustive between lattice points";
  }
  return out;
}

DensityLowerResult check_density_lower(const JumpLaw& jump, std::size_t d, double delta, double s, double t,
                                       std::size_t resolution) {
  if (!jump.has_density()) throw InvalidParameter("check_density_lower: jump law must have a density");
  if (resolution < 1) throw InvalidParameter("check_density_lower: resolution must be >= 1");
  DensityLowerResult out;
  const double dd = static_cast<double>(d);
  out.lo1 = s * std::pow(1.0 - t, dd - 1.0) - delta;
  out.hi1 = t;
  out.lo2 = std::pow(1.0 - t, dd) - delta;
  out.hi2 = 1.0 - s;
  out.empty1 = !(out.lo1 < out.hi1);
  out.empty2 = !(out.lo2 < out.hi2);
  out.min_density = std::numeric_limits<double>::infinity();

  auto sweep = [&](double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    for (std::size_t i = 0; i <= resolution; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution);
      const double g = jump_pdf(jump, x);
      if (g < out.min_density) {
        out.min_density = g;
        out.argmin = x;
      }
    }
  };
  if (!out.empty1) sweep(out.lo1, out.hi1);
  if (!out.empty2) sweep(out.lo2, out.hi2);

  if (out.empty1 && out.empty2) {
    out.vacuous = true;
    out.c = 1.0;
    out.min_density = 0.0;
    out.pass = true;
    return out;
  }
  out.c = std::clamp((1.0 - kDensityMargin) * out.min_density, 0.0, 1.0);
  out.pass = out.c > 0.0;
  return out;
}

std::size_t Lemma1Report::total_violations() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.violations;
  return n;
}

Lemma1Report verify_lemma1(std::size_t d, double delta, double s, double t, std::size_t n_samples, RngStream& rng,
                           std::optional<double> target_t) {
  if (!admissible(d, delta, s, t)) throw InvalidParameter("verify_lemma1: parameters are not admissible");
  Lemma1Report rep;
  rep.d = d;
  rep.delta = delta;
  rep.s = s;
  rep.t = t;
  rep.target_t = target_t.value_or(t);
  rep.admissible = true;

  const double tt = rep.target_t;
  const double dd = static_cast<double>(d);
  const double lo = s * std::pow(1.0 - tt, dd - 1.0) - delta;
  const double first_lo = std::pow(1.0 - tt, dd) - delta;
  const double first_hi = 1.0 - s;

  // Margin of x inside the target box; negative means outside.
  auto box_margin = [&](const CubePoint& x, bool part_b) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= d; ++j) {
      const double xj = x.coord(j);
      if (part_b && j == 1) {
        m = std::min({m, xj - first_lo, first_hi - xj});
      } else {
        m = std::min({m, xj - lo, tt - xj});
      }
    }
    return m;
  };

  for (std::size_t k = 0; k <= d; ++k) {
    InclusionPart part;
    part.label = k == 0 ? "a" : "b";
    part.k = k;
    part.samples = n_samples;
    part.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_samples; ++i) {
      const SimplexPoint u = sample_K(d, s, t, rng);
      const SimplexPoint z = sample_V(d, k, delta, rng);
      double margin = 0.0;
      try {
        const SimplexPoint v = k == 0 ? invert_G(z, u) : invert_G(rotate_R(k, z), rotate_R(k, u));
        margin = box_margin(inverse_T(v), k != 0);
      } catch (const DomainError&) {
        margin = -1.0;
      } catch (const SingularityError&) {
        margin = -1.0;
      }
      if (margin < part.worst_margin) part.worst_margin = margin;
      if (margin < -kTol) {
        if (part.violations == 0) {
          part.witness_u.assign(u.coords().begin(), u.coords().end());
          part.witness_z.assign(z.coords().begin(), z.coords().end());
        }
        ++part.violations;
      }
    }
    if (n_samples == 0) part.worst_margin = 0.0;
    rep.parts.push_back(std::move(part));
  }
  return rep;
}

AssumptionReport check_assumptions(const ChoiceFunction& cf, const JumpLaw& jump, double delta, double s, double t,
                                   const AssumptionOptions& opts) {
  AssumptionReport rep;
  const std::size_t d = cf.dim();
  rep.d = d;
  rep.delta = delta;
  rep.s = s;
  rep.t = t;
  rep.admissible = admissible(d, delta, s, t);
  if (!rep.admissible) {
    rep.witnesses.push_back("parameters (delta, s, t) are not admissible");
    return rep;
  }

  rep.tail = check_tail(jump, delta);
  rep.eta = rep.tail.eta;
  if (!rep.tail.pass) rep.witnesses.push_back("no jump mass in [1 - delta, 1]");

  rep.choice = check_choice_inf(cf, delta, opts.grid_resolution, opts.seed, opts.random_samples);
  rep.epsilon = rep.choice.epsilon;
  if (!rep.choice.certified) {
    std::ostringstream os;
    os.precision(17);
    os << "choice infimum " << rep.choice.epsilon << " not certified (modulus " << rep.choice.modulus
       << ") on subset {";
    for (std::size_t i = 0; i < rep.choice.worst_subset.size(); ++i) os << (i ? "," : "") << rep.choice.worst_subset[i];
    os << "} at z = (";
    for (std::size_t i = 0; i < rep.choice.worst_point.size(); ++i) os << (i ? "," : "") << rep.choice.worst_point[i];
    os << ")";
    rep.witnesses.push_back(os.str());
  }

  if (jump.has_density()) {
    rep.density = check_density_lower(jump, d, delta, s, t, opts.grid_resolution);
    rep.c = rep.density.c;
    if (!rep.density.pass) {
      std::ostringstream os;
      os.precision(17);
      os << "jump density vanishes at x = " << rep.density.argmin;
      rep.witnesses.push_back(os.str());
    }
  } else {
    rep.witnesses.push_back("jump law has no density");
  }

  if (opts.lemma1_samples > 0) {
    RngStream rng(opts.seed, 1);
    rep.lemma1 = verify_lemma1(d, delta, s, t, opts.lemma1_samples, rng);
    for (const auto& part : rep.lemma1->parts) {
      if (part.violations > 0) {
        rep.witnesses.push_back("inclusion part " + part.label + " k=" + std::to_string(part.k) + ": " +
                                std::to_string(part.violations) + " violations");
      }
    }
  }

  rep.certified = rep.tail.pass && rep.choice.certified && rep.density.pass &&
                  (!rep.lemma1 || rep.lemma1->total_violations() == 0);
  return rep;
}

std::optional<AssumptionReport> search_parameters(const ChoiceFunction& cf, const JumpLaw& jump,
                                                  const AssumptionOptions& opts) {
  const std::size_t d = cf.dim();
  const double cap = std::ldexp(1.0, -static_cast<int>(d));
  for (int k = 1; k <= 8; ++k) {
    const double delta = std::pow(10.0, -k);
    if (!(delta < cap)) continue;
    const double root = std::pow(delta, 1.0 / static_cast<double>(d));
    const double width = 1.0 - 2.0 * root;
    if (!(width > 0.0)) continue;
    // Tail and choice checks do not involve (s, t).
    if (!check_tail(jump, delta).pass) continue;
    if (!check_choice_inf(cf, delta, opts.grid_resolution, opts.seed, opts.random_samples).certified) continue;
    for (int i = 1; i <= 9; ++i) {
      for (int j = i + 1; j <= 9; ++j) {
        const double s = root + width * i / 10.0;
        const double t = root + width * j / 10.0;
        if (!admissible(d, delta, s, t)) continue;
        AssumptionReport rep = check_assumptions(cf, jump, delta, s, t, opts);
        if (rep.certified) return rep;
      }
    }
  }
  return std::nullopt;
}

}  // namespace swalk
