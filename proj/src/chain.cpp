#include "simplexwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "simplexwalk/errors.hpp"
#include "parallel.hpp"

namespace swalk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double piecewise_value(const Piecewise1DChoice& pw, double z) {
  const auto& x = pw.x;
  if (z <= x.front()) return pw.v.front();
  if (z >= x.back()) return pw.v.back();
  // Last knot with x_i <= z, so the right-hand value wins at a jump.
  const auto it = std::upper_bound(x.begin(), x.end(), z);
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double w = (z - x[lo]) / (x[hi] - x[lo]);
  return pw.v[lo] + w * (pw.v[hi] - pw.v[lo]);
}

}  // namespace

ChoiceFunction ChoiceFunction::constant(std::vector<double> p) {
  if (p.empty()) throw InvalidParameter("constant choice needs d >= 1 probabilities");
  double total = 0.0;
  for (double pj : p) {
    if (!(pj >= 0.0)) throw InvalidParameter("constant choice: negative probability");
    total += pj;
  }
  if (total > 1.0 + kTol) throw InvalidParameter("constant choice: probabilities sum above one");
  return ChoiceFunction(ConstantChoice{std::move(p)});
}

ChoiceFunction ChoiceFunction::linear(std::vector<double> beta) {
  if (beta.size() < 2) throw InvalidParameter("linear choice needs d + 1 >= 2 coefficients");
  const double total = std::accumulate(beta.begin(), beta.end(), 0.0);
  for (double b : beta) {
    if (!(b > 0.0)) throw InvalidParameter("linear choice: coefficients must be positive");
    if (!(total - b < 1.0)) throw InvalidParameter("linear choice: need sum(beta) - beta_k < 1");
  }
  return ChoiceFunction(LinearChoice{std::move(beta)});
}

ChoiceFunction ChoiceFunction::piecewise1d(std::vector<double> x, std::vector<double> v) {
  if (x.size() < 2 || x.size() != v.size()) throw InvalidParameter("piecewise choice needs matching knots");
  if (x.front() != 0.0 || x.back() != 1.0) throw InvalidParameter("piecewise knots must span [0,1]");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && x[i] < x[i - 1]) throw InvalidParameter("piecewise knots must be nondecreasing");
    if (i > 1 && x[i] == x[i - 2]) throw InvalidParameter("piecewise knot repeated more than twice");
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) throw InvalidParameter("piecewise values must lie in [0,1]");
  }
  return ChoiceFunction(Piecewise1DChoice{std::move(x), std::move(v)});
}

ChoiceFunction ChoiceFunction::custom(std::size_t d, std::function<std::vector<double>(const SimplexPoint&)> fn,
                                      std::string label) {
  if (d == 0 || !fn) throw InvalidParameter("custom choice needs d >= 1 and a callable");
  return ChoiceFunction(CustomChoice{d, std::move(fn), std::move(label)});
}

std::size_t ChoiceFunction::dim() const {
  return std::visit(overloaded{[](const ConstantChoice& c) { return c.p.size(); },
                               [](const LinearChoice& c) { return c.beta.size() - 1; },
                               [](const Piecewise1DChoice&) { return std::size_t{1}; },
                               [](const CustomChoice& c) { return c.dim; }},
                    impl_);
}

bool ChoiceFunction::is_affine() const {
  return std::holds_alternative<ConstantChoice>(impl_) || std::holds_alternative<LinearChoice>(impl_);
}

std::vector<double> ChoiceFunction::breakpoints() const {
  const auto* pw = std::get_if<Piecewise1DChoice>(&impl_);
  if (pw == nullptr) return {};
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < pw->x.size(); ++i) {
    if (out.empty() || out.back() != pw->x[i]) out.push_back(pw->x[i]);
  }
  return out;
}

std::string ChoiceFunction::describe() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  std::visit(overloaded{[&](const ConstantChoice& c) {
                          os << "constant(";
                          list(c.p);
                          os << ")";
                        },
                        [&](const LinearChoice& c) {
                          os << "linear(";
                          list(c.beta);
                          os << ")";
                        },
                        [&](const Piecewise1DChoice& c) { os << "piecewise1d(" << c.x.size() << " knots)"; },
                        [&](const CustomChoice& c) { os << c.label; }},
             impl_);
  return os.str();
}

void ChoiceFunction::probs_into(const SimplexPoint& z, std::span<double> out) const {
  const std::size_t d = dim();
  if (z.dim() != d || out.size() != d + 1) throw InvalidParameter("choice_probs: dimension mismatch");
  std::visit(overloaded{[&](const ConstantChoice& c) {
                          for (std::size_t k = 1; k <= d; ++k) out[k] = c.p[k - 1];
                        },
                        [&](const LinearChoice& c) {
                          const double total = std::accumulate(c.beta.begin(), c.beta.end(), 0.0);
                          for (std::size_t k = 1; k <= d; ++k) {
                            const double bk = c.beta[k - 1];
                            const double zk = z.coord(k);
                            out[k] = bk * (1.0 - zk) + (1.0 - total + bk) * zk;
                          }
                        },
                        [&](const Piecewise1DChoice& c) { out[1] = piecewise_value(c, z.coord(1)); },
                        [&](const CustomChoice& c) {
                          const std::vector<double> p = c.fn(z);
                          if (p.size() != d) throw InvalidParameter("custom choice returned wrong length");
                          for (std::size_t k = 1; k <= d; ++k) out[k] = p[k - 1];
                        }},
             impl_);
  double rest = 1.0;
  for (std::size_t k = 1; k <= d; ++k) rest -= out[k];
  out[0] = rest;
  for (double& p : out) {
    if (!(p >= -kTol && p <= 1.0 + kTol)) throw InvalidParameter("choice probabilities leave [0,1]");
    p = std::clamp(p, 0.0, 1.0);
  }
}

std::vector<double> choice_probs(const ChoiceFunction& cf, const SimplexPoint& z) {
  std::vector<double> out(cf.dim() + 1);
  cf.probs_into(z, out);
  return out;
}

std::size_t select_vertex(std::span<const double> probs, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_positive;
}

SimplexPoint move_toward(const SimplexPoint& z, std::size_t vertex, double xi) {
  const double keep = 1.0 - xi;
  std::vector<double> next(z.coords().begin(), z.coords().end());
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = keep * next[j] + (j + 1 == vertex ? xi : 0.0);
  }
  return SimplexPoint(std::move(next));
}

SimplexPoint ChainConfig::start() const { return initial ? *initial : SimplexPoint::barycenter(d); }

void ChainConfig::validate() const {
  if (d == 0) throw InvalidParameter("chain dimension must be >= 1");
  if (choice.dim() != d) throw InvalidParameter("choice function dimension differs from d");
  if (initial && initial->dim() != d) throw InvalidParameter("initial point dimension differs from d");
  if (thinning == 0) throw InvalidParameter("thinning must be >= 1");
  if (ensemble == 0) throw InvalidParameter("ensemble must be >= 1");
  if (burn_in > 0 && steps <= burn_in) throw InvalidParameter("steps must exceed burn_in");
}

ChainState step(const ChainState& state, const ChoiceFunction& cf, const JumpLaw& jump, RngStream& rng) {
  std::vector<double> probs(cf.dim() + 1);
  cf.probs_into(state.z, probs);
  const std::size_t vertex = select_vertex(probs, rng.uniform());
  const double xi = sample_jump(jump, rng);
  return ChainState{move_toward(state.z, vertex, xi), state.n + 1, vertex};
}

std::vector<ChainState> run_chain(const ChainConfig& config) {
  config.validate();
  RngStream rng(config.seed, 0);
  std::vector<ChainState> out;
  ChainState state{config.start(), 0, 0};
  auto keep = [&](const ChainState& s) {
    return s.n >= config.burn_in && (s.n - config.burn_in) % config.thinning == 0;
  };
  if (keep(state)) out.push_back(state);
  for (std::size_t i = 0; i < config.steps; ++i) {
    state = step(state, config.choice, config.jump, rng);
    if (keep(state)) out.push_back(state);
  }
  return out;
}

std::vector<SimplexPoint> run_ensemble(const ChainConfig& config, unsigned threads) {
  config.validate();
  const std::size_t m = config.ensemble;
  std::vector<SimplexPoint> out(m);
  auto run_one = [&config](std::size_t i) {
    RngStream rng(config.seed, i);
    ChainState state{config.start(), 0, 0};
    for (std::size_t k = 0; k < config.steps; ++k) state = step(state, config.choice, config.jump, rng);
    return state.z;
  };
  detail::parallel_for(m, threads, [&](std::size_t i) { out[i] = run_one(i); });
  return out;
}

std::vector<double> marginal(std::span<const SimplexPoint> samples, std::size_t j) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.coord(j));
  return out;
}

}  // namespace swalk
