#include "simplexwalk/urn.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "simplexwalk/errors.hpp"

namespace swalk {

UrnState urn_initial(double z1) {
  if (!(z1 >= 0.0 && z1 <= 1.0)) throw DomainError("urn: initial z must lie in [0,1]");
  return UrnState{z1, 1.0, 1.0, 1};
}

namespace {

// Shared by the main walk and the frozen-threshold walks.
inline double move(double z, bool left, double xi) { return left ? xi * z : (1.0 - xi) * z + xi; }

}  // namespace

UrnState urn_step(const UrnState& s, RngStream& rng) {
  const double u = rng.uniform();
  const double xi = rng.uniform();
  UrnState next = s;
  const bool left = u < s.zeta();
  if (left) {
    next.L += s.z;
  } else {
    next.R += 1.0 - s.z;
  }
  next.z = move(s.z, left, xi);
  ++next.n;
  return next;
}

double lyapunov_W(const UrnState& s) {
  const double S = s.L + s.R;
  const double a = 0.5 - (s.L + s.z) / S;
  return a * a + 1.0 / S;
}

DriftPolys drift_polynomials(double zeta, double z) {
  const double x = zeta;
  const double x2 = x * x, x3 = x2 * x;
  const double z2 = z * z, z3 = z2 * z, z4 = z3 * z;
  DriftPolys out;
  auto& r = out.r;
  r[0] = -24 * z * x3 + 36 * z * x2 + 12 * x3 - 18 * z * x - 24 * x2 + 3 * z + 15 * x - 3;
  r[1] = -30 * z2 * x2 - 12 * z * x3 + 30 * z2 * x + 24 * z * x2 + 6 * x3 - 7 * z2 - 38 * z * x - 12 * x2 + 14 * z +
         13 * x - 7;
  r[2] = 10 * z3 * x - 12 * z2 * x2 - 5 * z3 - 9 * z2 * x + 7 * z2 - 19 * z * x + 4 * z + 6 * x - 6;
  r[3] = -z * (6 * z3 * x2 - 6 * z3 * x - 12 * z2 * x2 - 17 * z3 - 12 * z2 * x + 6 * z * x2 + 28 * z2 + 30 * z * x -
               23 * z - 6 * x + 12);
  r[4] = -6 * z2 * (1 - z) * (z2 + 2 * z * x * (1 - z) + 1);
  r[5] = -6 * z4 * (1 - z) * (1 - z);
  const double b = 2 * x - 1;
  out.r0_factored = -3 * b * b * (x * z + (1 - z) * (1 - x));
  return out;
}

double drift_closed_form(double zeta, double z, double eps) {
  const auto polys = drift_polynomials(zeta, z);
  double num = 0.0;
  for (int i = 5; i >= 0; --i) num = num * eps + polys.r[static_cast<std::size_t>(i)];
  const double a = eps * z + 1.0;
  const double b = 1.0 + eps * (1.0 - z);
  return eps * num / (6.0 * a * a * b * b);
}

namespace {

DriftBranches branches_unchecked(double zeta, double z, double eps) {
  // W_n = a0^2 + eps. Each branch moves the quadratic's argument linearly
  // in the uniform jump, so its mean is (centre)^2 + slope^2 width^2 / 12.
  // Differences against a0 are formed first to avoid cancellation.
  const double a0 = 0.5 - zeta - eps * z;
  DriftBranches out;
  if (z > 0.0) {
    const double den = 1.0 + eps * z;
    const double k = eps / den;
    const double dc = eps * z * (zeta + eps * z - 0.5) / den;
    out.left = dc * (dc + 2.0 * a0) + k * k * z * z / 12.0 - eps * eps * z / den;
  }
  const double w = 1.0 - z;
  if (w > 0.0) {
    const double den = 1.0 + eps * w;
    const double k = eps / den;
    const double dc = zeta * eps * w / den + eps * z - eps * (1.0 + z) / (2.0 * den);
    out.right = dc * (dc + 2.0 * a0) + k * k * w * w / 12.0 - eps * eps * w / den;
  }
  out.drift = zeta * out.left + (1.0 - zeta) * out.right;
  return out;
}

}  // namespace

DriftBranches drift_branches(double zeta, double z, double eps) {
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw DomainError("drift: zeta must lie in [0,1]");
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("drift: z must lie in [0,1]");
  if (!(eps > 0.0)) throw DomainError("drift: eps must be positive");
  return branches_unchecked(zeta, z, eps);
}

double drift_oracle(double zeta, double z, double eps) { return drift_branches(zeta, z, eps).drift; }

double r5_from_oracle(double zeta, double z) {
  // N(eps) = 6 (eps z + 1)^2 (1 + eps (1 - z))^2 drift / eps is a quintic
  // in eps; its leading coefficient is the fifth divided difference.
  constexpr int kNodes = 6;
  double x[kNodes];
  double f[kNodes];
  for (int i = 0; i < kNodes; ++i) {
    const double e = static_cast<double>(i + 1);
    const double a = e * z + 1.0;
    const double b = 1.0 + e * (1.0 - z);
    x[i] = e;
    f[i] = 6.0 * a * a * b * b * branches_unchecked(zeta, z, e).drift / e;
  }
  for (int level = 1; level < kNodes; ++level) {
    for (int i = kNodes - 1; i >= level; --i) f[i] = (f[i] - f[i - 1]) / (x[i] - x[i - level]);
  }
  return f[kNodes - 1];
}

UrnRow urn_row(const UrnState& s) { return {s.n, s.z, s.L, s.R, s.zeta(), lyapunov_W(s)}; }

std::vector<UrnRow> run_urn(std::size_t n_steps, std::uint64_t seed, std::size_t record_every, double z1,
                            std::uint64_t stream) {
  if (n_steps < 1) throw InvalidParameter("run_urn: n must be >= 1");
  if (record_every == 0) throw InvalidParameter("run_urn: record_every must be >= 1");
  RngStream rng(seed, stream);
  UrnState s = urn_initial(z1);
  std::vector<UrnRow> out{urn_row(s)};
  while (s.n < n_steps) {
    s = urn_step(s, rng);
    if (s.n % record_every == 0 || s.n == n_steps) out.push_back(urn_row(s));
  }
  return out;
}

std::vector<std::vector<UrnState>> urn_ensemble(std::size_t runs, std::vector<std::size_t> checkpoints,
                                                std::uint64_t seed, unsigned threads, double z1) {
  if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end()) || checkpoints.front() < 1) {
    throw InvalidParameter("urn_ensemble: checkpoints must be ascending and >= 1");
  }
  std::vector<std::vector<UrnState>> out(runs);
  detail::parallel_for(runs, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    UrnState s = urn_initial(z1);
    auto& rec = out[i];
    rec.reserve(checkpoints.size());
    for (std::size_t target : checkpoints) {
      while (s.n < target) s = urn_step(s, rng);
      rec.push_back(s);
    }
  });
  return out;
}

void CouplingConfig::validate() const {
  if (!(eps_band >= 0.0 && eps_band < 0.5)) throw InvalidParameter("coupling: eps_band must lie in [0, 1/2)");
  if (!(N0 >= 1 && N0 < n_total)) throw InvalidParameter("coupling: need 1 <= N0 < n_total");
  if (record_every == 0) throw InvalidParameter("coupling: record_every must be >= 1");
}

CouplingResult coupled_run(const CouplingConfig& config, std::uint64_t stream) {
  config.validate();
  RngStream rng(config.seed, stream);
  const double lo = 0.5 - config.eps_band;
  const double hi = 0.5 + config.eps_band;
  CouplingResult out;
  UrnState s = urn_initial(config.z1);
  double zt = s.z;
  double zh = s.z;

  auto check = [&]() {
    bool ok = true;
    if (s.n >= config.N0) {
      const double zeta = s.zeta();
      if (zeta < lo || zeta > hi) out.event_A = false;
      ok = zh <= s.z && s.z <= zt;
      if (!ok) {
        if (out.sandwich_failures == 0) out.first_failure = s.n;
        ++out.sandwich_failures;
      }
    }
    if (s.n == 1 || s.n % config.record_every == 0 || s.n == config.n_total) {
      out.rows.push_back({urn_row(s), zt, zh, ok});
    }
  };

  check();
  while (s.n < config.n_total) {
    const bool frozen = s.n >= config.N0;
    const double u = rng.uniform();
    const double xi = rng.uniform();
    const bool left = u < s.zeta();
    if (left) {
      s.L += s.z;
    } else {
      s.R += 1.0 - s.z;
    }
    s.z = move(s.z, left, xi);
    if (frozen) {
      zt = move(zt, u < lo, xi);
      zh = move(zh, u < hi, xi);
    } else {
      zt = s.z;
      zh = s.z;
    }
    ++s.n;
    check();
  }
  return out;
}

double frozen_walk(double threshold, std::size_t steps, RngStream& rng, double z1) {
  double z = z1;
  for (std::size_t i = 0; i < steps; ++i) {
    const double u = rng.uniform();
    const double xi = rng.uniform();
    z = move(z, u < threshold, xi);
  }
  return z;
}

std::vector<double> frozen_ensemble(double threshold, std::size_t steps, std::size_t chains, std::uint64_t seed,
                                    unsigned threads, double z1) {
  std::vector<double> out(chains);
  detail::parallel_for(chains, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = frozen_walk(threshold, steps, rng, z1);
  });
  return out;
}

}  // namespace swalk
