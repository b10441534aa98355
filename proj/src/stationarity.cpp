#include "simplexwalk/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplexwalk/errors.hpp"
#include "simplexwalk/special.hpp"

namespace swalk {

DensityCandidate dirichlet_candidate(const DirichletParams& params) {
  std::string label = "dirichlet(";
  for (std::size_t i = 0; i < params.alpha().size(); ++i) {
    label += (i ? "," : "") + std::to_string(params.alpha()[i]);
  }
  label += ")";
  return {[params](const SimplexPoint& z) { return dirichlet_pdf(params, z); }, label};
}

DensityCandidate uniform_candidate(std::size_t d) {
  const double value = std::exp(std::lgamma(static_cast<double>(d) + 1.0));
  return {[value](const SimplexPoint&) { return value; }, "uniform"};
}

DensityCandidate beta_candidate(double a, double b) {
  return {[a, b](const SimplexPoint& z) { return beta_pdf(a, b, z.coord(1)); },
          "beta(" + std::to_string(a) + "," + std::to_string(b) + ")"};
}

DensityCandidate arcsine_candidate() {
  return {[](const SimplexPoint& z) { return arcsine_pdf(z.coord(1)); }, "arcsine"};
}

namespace {

// u-values in (lo, 1) where the pulled-back argument crosses a breakpoint
// of a one-dimensional piecewise choice.
std::vector<double> split_points(std::size_t j, const ChoiceFunction& cf, const SimplexPoint& z, double lo) {
  std::vector<double> cuts;
  if (cf.dim() != 1) return cuts;
  const double z1 = z.coord(1);
  for (double b : cf.breakpoints()) {
    double u = 0.0;
    if (j == 0) {
      if (b <= 0.0) continue;
      u = z1 / b;  // y = z / u
    } else {
      if (b >= 1.0) continue;
      u = (1.0 - z1) / (1.0 - b);  // y = 1 - (1 - z) / u
    }
    if (u > lo && u < 1.0) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

double operator_Tj(std::size_t j, const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                   const SimplexPoint& z, const StationarityOptions& opts) {
  const std::size_t d = z.dim();
  if (j > d) throw IndexError("operator_Tj: vertex index outside 0..d");
  if (!g.has_density()) throw InvalidParameter("operator_Tj: jump law must have a density");
  if (cf.dim() != d) throw InvalidParameter("operator_Tj: choice dimension mismatch");

  std::vector<double> bary(d + 1);
  for (std::size_t i = 0; i <= d; ++i) bary[i] = z.bary(i);
  const double lo = 1.0 - bary[j];
  if (lo >= 1.0) return 0.0;

  std::vector<double> probs(d + 1);
  std::vector<double> y(d);
  const double dd = static_cast<double>(d);
  auto integrand = [&](double u) {
    const double inv = 1.0 / u;
    double y0 = bary[0] * inv;
    for (std::size_t i = 1; i <= d; ++i) y[i - 1] = bary[i] * inv;
    const double moved = (u - lo) * inv;
    if (j == 0) {
      y0 = moved;
    } else {
      y[j - 1] = moved;
    }
    if (!(moved > 0.0) || !(y0 > 0.0)) return 0.0;
    for (double yi : y) {
      if (!(yi > 0.0)) return 0.0;
    }
    const SimplexPoint pt(y);
    if (!(pt.z0() > 0.0)) return 0.0;
    cf.probs_into(pt, probs);
    if (probs[j] == 0.0) return 0.0;
    const double fy = f(pt);
    if (fy == 0.0) return 0.0;
    return std::pow(u, -dd) * fy * probs[j] * jump_pdf(g, 1.0 - u);
  };

  std::vector<double> edges{lo};
  for (double c : split_points(j, cf, z, lo)) edges.push_back(c);
  edges.push_back(1.0);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    total += quad::tanh_sinh(integrand, edges[k], edges[k + 1], opts.tol, opts.max_level).value;
  }
  return total;
}

ResidualDetail residual_detail(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                               const SimplexPoint& z, const StationarityOptions& opts) {
  ResidualDetail out;
  out.f_value = f(z);
  if (!(out.f_value > 0.0)) throw DomainError("residual: candidate density must be positive at z");
  double sum = 0.0;
  for (std::size_t j = 0; j <= z.dim(); ++j) {
    out.terms.push_back(operator_Tj(j, f, cf, g, z, opts));
    sum += out.terms.back();
  }
  out.residual = std::fabs(sum - out.f_value) / out.f_value;
  return out;
}

double residual(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g, const SimplexPoint& z,
                const StationarityOptions& opts) {
  return residual_detail(f, cf, g, z, opts).residual;
}

std::vector<SimplexPoint> interior_grid(std::size_t d, std::size_t n, double margin) {
  if (d == 0 || n < 2) throw InvalidParameter("interior_grid: need d >= 1 and n >= 2");
  const double span = 1.0 - static_cast<double>(d + 1) * margin;
  if (!(margin >= 0.0) || !(span > 0.0)) throw InvalidParameter("interior_grid: margin too large");
  const double h = span / static_cast<double>(n - 1);
  std::vector<SimplexPoint> out;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    const std::size_t used = std::accumulate(idx.begin(), idx.end(), std::size_t{0});
    if (used <= n - 1) {
      std::vector<double> c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = margin + h * static_cast<double>(idx[i]);
      out.emplace_back(std::move(c));
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

ResidualReport residual_report(const DensityCandidate& f, const ChoiceFunction& cf, const JumpLaw& g,
                               std::span<const SimplexPoint> grid, const StationarityOptions& opts) {
  ResidualReport report;
  for (const auto& z : grid) {
    ResidualRow row{z, 0.0, false, {}};
    try {
      row.residual = residual(f, cf, g, z, opts);
      report.max_residual = std::max(report.max_residual, row.residual);
    } catch (const QuadratureError& e) {
      row.failed = true;
      row.residual = std::nan("");
      row.note = e.what();
      ++report.failures;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

IdentitySides beta_integral_identity(double a, double b, double z) {
  if (!(a > 0.0)) throw InvalidParameter("beta identity: need a > 0");
  if (!(b >= 0.0)) throw InvalidParameter("beta identity: need b >= 0");
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("beta identity: need z in [0,1)");
  IdentitySides out;
  out.rhs = std::pow(1.0 - z, a);
  constexpr std::size_t kNodes = 40;

  if (z == 0.0) {
    // Integrand collapses to (a - b) u^{a-b-1}.
    if (!(a > b)) throw QuadratureError("beta identity: integral diverges at z = 0 unless a > b");
    out.lhs = (a - b) * quad::power_weight_integral([](double) { return 1.0; }, a - b - 1.0, kNodes);
    return out;
  }

  // u = z + (1 - z) w turns the integral into (1 - z)^a * int_0^1 w^{a-1} h(w) dw.
  const double span = 1.0 - z;
  auto h = [a, b, z, span](double w) {
    const double u = z + span * w;
    return std::pow(u, -b - 1.0) * (a * u - b * span * w);
  };
  // h is analytic on a disc of radius z / (1 - z) about w = 0; the
  // Gauss-Jacobi panel stays inside half of it.
  const double c = std::min(1.0, 0.5 * z / span);
  double inner = std::pow(c, a) * quad::power_weight_integral([&](double t) { return h(c * t); }, a - 1.0, kNodes);
  if (c < 1.0) {
    auto tail = [&](double w) { return std::pow(w, a - 1.0) * h(w); };
    inner += quad::gauss_kronrod(tail, c, 1.0, {1e-11, 1e-11}, 4000).value;
  }
  out.lhs = out.rhs * inner;
  return out;
}

SimplexPoint sethuraman_onestep(const DirichletParams& params, std::span<const double> p, const JumpLaw& jump,
                                RngStream& rng) {
  const std::size_t d = params.dim();
  if (p.size() != d) throw InvalidParameter("sethuraman_onestep: choice length differs from d");
  const SimplexPoint z = sample_dirichlet(params, rng);
  std::vector<double> probs(d + 1);
  probs[0] = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  std::copy(p.begin(), p.end(), probs.begin() + 1);
  const std::size_t vertex = select_vertex(probs, rng.uniform());
  const double xi = sample_jump(jump, rng);
  return move_toward(z, vertex, xi);
}

SimplexPoint sethuraman_onestep(const DirichletParams& params, std::span<const double> p, double gamma,
                                RngStream& rng) {
  if (!(gamma > 0.0)) throw InvalidParameter("sethuraman_onestep: gamma must be positive");
  const std::size_t d = params.dim();
  if (p.size() != d) throw InvalidParameter("sethuraman_onestep: choice length differs from d");
  const double p0 = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(1.0, std::fabs(y)); };
  for (std::size_t j = 0; j < d; ++j) {
    if (!close(params.alpha()[j], p[j] * gamma)) {
      throw InvalidParameter("sethuraman_onestep: params must equal (p_1 gamma, ..., p_0 gamma)");
    }
  }
  if (!close(params.alpha().back(), p0 * gamma)) {
    throw InvalidParameter("sethuraman_onestep: params must equal (p_1 gamma, ..., p_0 gamma)");
  }
  return sethuraman_onestep(params, p, JumpLaw::beta(1.0, gamma), rng);
}

}  // namespace swalk
