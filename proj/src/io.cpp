#include "simplexwalk/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "simplexwalk/errors.hpp"

namespace swalk::io {

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

Fields::Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
  if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
}

bool Fields::has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

const Json& Fields::raw(const std::string& key) {
  seen_.push_back(key);
  if (!obj_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
  return obj_.at(key);
}

double Fields::number(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
  return v.get<double>();
}

double Fields::number(const std::string& key, double fallback) {
  seen_.push_back(key);
  return has(key) ? number(key) : fallback;
}

std::uint64_t Fields::count(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number_unsigned()) {
    // 1e5 style integers arrive as floats.
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    throw ConfigError(where_ + "." + key + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t Fields::count(const std::string& key, std::uint64_t fallback) {
  seen_.push_back(key);
  return has(key) ? count(key) : fallback;
}

bool Fields::flag(const std::string& key, bool fallback) {
  seen_.push_back(key);
  if (!has(key)) return fallback;
  const Json& v = obj_.at(key);
  if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::string Fields::text(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> Fields::numbers(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_array()) throw ConfigError(where_ + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where_ + "." + key + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void Fields::finish() const {
  for (const auto& item : obj_.items()) {
    if (item.value().is_null()) continue;
    if (std::find(seen_.begin(), seen_.end(), item.key()) == seen_.end()) {
      throw ConfigError(where_ + ": unknown key '" + item.key() + "'");
    }
  }
}

void check_schema(Fields& f) {
  if (!f.has("schema_version")) throw ConfigError("config: missing schema_version");
  const auto v = f.count("schema_version");
  if (v != static_cast<std::uint64_t>(kSchemaVersion)) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(v));
  }
}

namespace {

template <class F>
auto rethrow_as_config(const std::string& where, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

ChoiceFunction parse_choice(const Json& j) {
  Fields f(j, "choice");
  const std::string type = f.text("type");
  ChoiceFunction out = rethrow_as_config("choice", [&] {
    if (type == "constant") return ChoiceFunction::constant(f.numbers("p"));
    if (type == "linear") return ChoiceFunction::linear(f.numbers("beta"));
    if (type == "piecewise1d") {
      auto x = f.numbers("x");
      return ChoiceFunction::piecewise1d(std::move(x), f.numbers("v"));
    }
    throw ConfigError("choice: unknown type '" + type + "'");
  });
  f.finish();
  return out;
}

JumpLaw parse_jump(const Json& j) {
  Fields f(j, "jump");
  const std::string type = f.text("type");
  JumpLaw out = rethrow_as_config("jump", [&] {
    if (type == "uniform") return JumpLaw::uniform();
    if (type == "beta") {
      const double a = f.number("a");
      return JumpLaw::beta(a, f.number("b"));
    }
    if (type == "point_mass") return JumpLaw::point_mass(f.number("value"));
    throw ConfigError("jump: unknown type '" + type + "'");
  });
  f.finish();
  return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Json choice_json(const ChoiceFunction& cf) {
  return std::visit(overloaded{[](const ConstantChoice& c) { return Json{{"type", "constant"}, {"p", c.p}}; },
                               [](const LinearChoice& c) { return Json{{"type", "linear"}, {"beta", c.beta}}; },
                               [](const Piecewise1DChoice& c) {
                                 return Json{{"type", "piecewise1d"}, {"x", c.x}, {"v", c.v}};
                               },
                               [](const CustomChoice& c) {
                                 return Json{{"type", "custom"}, {"d", c.dim}, {"label", c.label}};
                               }},
                    cf.variant());
}

Json jump_json(const JumpLaw& law) {
  return std::visit(overloaded{[](const BetaLaw& b) { return Json{{"type", "beta"}, {"a", b.a}, {"b", b.b}}; },
                               [](const UniformLaw&) { return Json{{"type", "uniform"}}; },
                               [](const PointMassLaw& p) { return Json{{"type", "point_mass"}, {"value", p.value}}; }},
                    law.variant());
}

namespace {

// Validates a target/candidate description for dimension d.
void check_law_description(const Json& j, std::size_t d, const std::string& where) {
  Fields f(j, where);
  const std::string type = f.text("type");
  if (type == "dirichlet") {
    const auto alpha = f.numbers("alpha");
    if (alpha.size() != d + 1) throw ConfigError(where + ": dirichlet needs d + 1 shapes");
    rethrow_as_config(where, [&] { return DirichletParams(alpha).dim(); });
  } else if (type == "beta") {
    const double a = f.number("a");
    const double b = f.number("b");
    if (d != 1) throw ConfigError(where + ": beta target needs d = 1");
    if (!(a > 0.0 && b > 0.0)) throw ConfigError(where + ": beta shapes must be positive");
  } else if (type == "arcsine") {
    if (d != 1) throw ConfigError(where + ": arcsine target needs d = 1");
  } else if (type != "uniform") {
    throw ConfigError(where + ": unknown type '" + type + "'");
  }
  f.finish();
}

std::size_t as_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

}  // namespace

SimulateConfig parse_simulate(const Json& j) {
  Fields f(j, "config");
  check_schema(f);
  SimulateConfig c;
  auto& ch = c.chain;
  ch.d = as_size(f.count("d"));
  ch.choice = parse_choice(f.raw("choice"));
  ch.jump = parse_jump(f.raw("jump"));
  if (f.has("initial")) {
    const auto init = f.numbers("initial");
    ch.initial = rethrow_as_config("config.initial", [&] { return SimplexPoint(init); });
  }
  ch.steps = as_size(f.count("steps"));
  ch.burn_in = as_size(f.count("burn_in", 0));
  ch.thinning = as_size(f.count("thinning", 1));
  ch.ensemble = as_size(f.count("ensemble", 1));
  ch.seed = f.count("seed", 0);
  if (f.has("target")) {
    c.target = f.raw("target");
    check_law_description(*c.target, ch.d, "config.target");
  }
  c.alpha = f.number("alpha", 0.01);
  rethrow_as_config("config.alpha", [&] { return ks_coefficient(c.alpha); });
  c.trajectory = f.flag("trajectory", false);
  f.finish();
  rethrow_as_config("config", [&] {
    ch.validate();
    return 0;
  });
  return c;
}

VerifyConfig parse_verify(const Json& j) {
  Fields f(j, "config");
  check_schema(f);
  VerifyConfig c;
  const auto d = as_size(f.count("d"));
  c.choice = parse_choice(f.raw("choice"));
  c.jump = parse_jump(f.raw("jump"));
  if (c.choice.dim() != d) throw ConfigError("config: choice dimension differs from d");
  if (!c.jump.has_density()) throw ConfigError("config.jump: verification needs a jump density");
  c.candidate = f.raw("candidate");
  check_law_description(c.candidate, d, "config.candidate");
  if (f.has("grid")) {
    Fields g(f.raw("grid"), "config.grid");
    c.points_per_axis = as_size(g.count("points_per_axis", 50));
    c.margin = g.number("margin", 0.05);
    g.finish();
  }
  if (c.points_per_axis < 2) throw ConfigError("config.grid: points_per_axis must be >= 2");
  if (!(c.margin >= 0.0) || !(1.0 - static_cast<double>(d + 1) * c.margin > 0.0)) {
    throw ConfigError("config.grid: margin too large");
  }
  c.threshold = f.number("threshold", 1e-6);
  if (f.has("tol")) {
    Fields t(f.raw("tol"), "config.tol");
    c.options.tol.abs = t.number("abs", c.options.tol.abs);
    c.options.tol.rel = t.number("rel", c.options.tol.rel);
    t.finish();
  }
  c.options.max_level = static_cast<int>(f.count("max_level", static_cast<std::uint64_t>(c.options.max_level)));
  f.finish();
  return c;
}

AssumptionsConfig parse_assumptions(const Json& j) {
  Fields f(j, "config");
  check_schema(f);
  AssumptionsConfig c;
  const auto d = as_size(f.count("d"));
  c.choice = parse_choice(f.raw("choice"));
  c.jump = parse_jump(f.raw("jump"));
  if (c.choice.dim() != d) throw ConfigError("config: choice dimension differs from d");
  c.search = f.flag("search", false);
  if (!c.search) {
    c.delta = f.number("delta");
    c.s = f.number("s");
    c.t = f.number("t");
    if (!admissible(d, c.delta, c.s, c.t)) throw ConfigError("config: (delta, s, t) not admissible");
  } else {
    for (const char* k : {"delta", "s", "t"}) {
      if (f.has(k)) throw ConfigError(std::string("config: '") + k + "' conflicts with search");
    }
  }
  c.options.grid_resolution = as_size(f.count("grid_resolution", 200));
  c.options.random_samples = as_size(f.count("random_samples", 2000));
  c.options.lemma1_samples = as_size(f.count("lemma1_samples", 0));
  c.options.seed = f.count("seed", 0);
  if (c.options.grid_resolution < 1) throw ConfigError("config: grid_resolution must be >= 1");
  f.finish();
  return c;
}

GeometryConfig parse_geometry(const Json& j) {
  Fields f(j, "config");
  check_schema(f);
  GeometryConfig c;
  c.d = as_size(f.count("d"));
  c.delta = f.number("delta");
  c.s = f.number("s");
  c.t = f.number("t");
  if (c.d == 0) throw ConfigError("config: d must be >= 1");
  if (!admissible(c.d, c.delta, c.s, c.t)) throw ConfigError("config: (delta, s, t) not admissible");
  c.samples = as_size(f.count("samples", 100000));
  if (f.has("target_t")) {
    c.target_t = f.number("target_t");
  }
  c.roundtrip_samples = as_size(f.count("roundtrip_samples", 10000));
  c.jacobian_samples = as_size(f.count("jacobian_samples", 10000));
  c.seed = f.count("seed", 0);
  f.finish();
  return c;
}

UrnConfig parse_urn(const Json& j) {
  Fields f(j, "config");
  check_schema(f);
  UrnConfig c;
  c.n = as_size(f.count("n"));
  c.runs = as_size(f.count("runs", 1));
  c.record_every = as_size(f.count("record_every", 1000));
  c.z1 = f.number("z1", 0.5);
  c.ks_threshold = f.number("ks_threshold", 0.05);
  c.seed = f.count("seed", 0);
  if (c.n < 1) throw ConfigError("config: n must be >= 1");
  if (c.runs < 1) throw ConfigError("config: runs must be >= 1");
  if (c.record_every < 1) throw ConfigError("config: record_every must be >= 1");
  if (!(c.z1 >= 0.0 && c.z1 <= 1.0)) throw ConfigError("config: z1 must lie in [0,1]");
  if (f.has("coupling")) {
    c.coupling = true;
    Fields g(f.raw("coupling"), "config.coupling");
    auto& cc = c.coupling_config;
    cc.n_total = c.n;
    cc.N0 = as_size(g.count("N0"));
    cc.eps_band = g.number("eps_band");
    cc.record_every = c.record_every;
    cc.z1 = c.z1;
    c.coupling_runs = as_size(g.count("runs", 1));
    c.frozen_chains = as_size(g.count("frozen_chains", 0));
    c.frozen_steps = as_size(g.count("frozen_steps", 1000));
    g.finish();
    rethrow_as_config("config.coupling", [&] {
      cc.validate();
      return 0;
    });
    if (c.coupling_runs < 1) throw ConfigError("config.coupling: runs must be >= 1");
  }
  f.finish();
  c.coupling_config.seed = c.seed;
  return c;
}

Json to_json(const SimulateConfig& c) {
  const auto& ch = c.chain;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = ch.d;
  j["choice"] = choice_json(ch.choice);
  j["jump"] = jump_json(ch.jump);
  const SimplexPoint start = ch.start();
  j["initial"] = std::vector<double>(start.coords().begin(), start.coords().end());
  j["steps"] = ch.steps;
  j["burn_in"] = ch.burn_in;
  j["thinning"] = ch.thinning;
  j["ensemble"] = ch.ensemble;
  j["seed"] = ch.seed;
  j["target"] = c.target ? *c.target : Json(nullptr);
  j["alpha"] = c.alpha;
  j["trajectory"] = c.trajectory;
  return j;
}

Json to_json(const VerifyConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = c.choice.dim();
  j["choice"] = choice_json(c.choice);
  j["jump"] = jump_json(c.jump);
  j["candidate"] = c.candidate;
  j["grid"] = Json{{"points_per_axis", c.points_per_axis}, {"margin", c.margin}};
  j["threshold"] = c.threshold;
  j["tol"] = Json{{"abs", c.options.tol.abs}, {"rel", c.options.tol.rel}};
  j["max_level"] = c.options.max_level;
  return j;
}

Json to_json(const AssumptionsConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = c.choice.dim();
  j["choice"] = choice_json(c.choice);
  j["jump"] = jump_json(c.jump);
  j["search"] = c.search;
  if (!c.search) {
    j["delta"] = c.delta;
    j["s"] = c.s;
    j["t"] = c.t;
  }
  j["grid_resolution"] = c.options.grid_resolution;
  j["random_samples"] = c.options.random_samples;
  j["lemma1_samples"] = c.options.lemma1_samples;
  j["seed"] = c.options.seed;
  return j;
}

Json to_json(const GeometryConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = c.d;
  j["delta"] = c.delta;
  j["s"] = c.s;
  j["t"] = c.t;
  j["samples"] = c.samples;
  j["target_t"] = c.target_t ? Json(*c.target_t) : Json(nullptr);
  j["roundtrip_samples"] = c.roundtrip_samples;
  j["jacobian_samples"] = c.jacobian_samples;
  j["seed"] = c.seed;
  return j;
}

Json to_json(const UrnConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = c.n;
  j["runs"] = c.runs;
  j["record_every"] = c.record_every;
  j["z1"] = c.z1;
  j["ks_threshold"] = c.ks_threshold;
  j["seed"] = c.seed;
  if (c.coupling) {
    j["coupling"] = Json{{"N0", c.coupling_config.N0}, {"eps_band", c.coupling_config.eps_band},
                          {"runs", c.coupling_runs},  {"frozen_chains", c.frozen_chains},
                          {"frozen_steps", c.frozen_steps}};
  } else {
    j["coupling"] = nullptr;
  }
  return j;
}

DensityCandidate parse_candidate(const Json& j, std::size_t d) {
  check_law_description(j, d, "candidate");
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirichlet") return dirichlet_candidate(DirichletParams(j.at("alpha").get<std::vector<double>>()));
  if (type == "beta") return beta_candidate(j.at("a").get<double>(), j.at("b").get<double>());
  if (type == "arcsine") return arcsine_candidate();
  return uniform_candidate(d);
}

Cdf target_marginal_cdf(const Json& target, std::size_t d, std::size_t jdx) {
  check_law_description(target, d, "target");
  const std::string type = target.at("type").get<std::string>();
  if (type == "arcsine") return [](double x) { return arcsine_cdf(x); };
  double a = 1.0, b = static_cast<double>(d);
  if (type == "dirichlet") {
    const BetaLaw m = dirichlet_marginal(DirichletParams(target.at("alpha").get<std::vector<double>>()), jdx);
    a = m.a;
    b = m.b;
  } else if (type == "beta") {
    a = target.at("a").get<double>();
    b = target.at("b").get<double>();
  }
  return [a, b](double x) { return beta_cdf(a, b, x); };
}

Json to_json(const GofReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["n"] = r.n;
  if (r.m > 0) j["m"] = r.m;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json to_json(const ChiSquareResult& r) {
  return Json{{"statistic", r.statistic}, {"dof", r.dof},       {"cells", r.cells},
              {"coarsenings", r.coarsenings}, {"dropped", r.dropped}, {"probability_sum", r.probability_sum}};
}

Json to_json(const MomentReport& r) {
  return Json{{"mean", r.mean}, {"mean_dev", r.mean_dev}, {"cov", r.cov}, {"cov_dev", r.cov_dev}, {"max_dev", r.max_dev}};
}

Json to_json(const TailCheck& r) { return Json{{"eta", r.eta}, {"pass", r.pass}}; }

Json to_json(const ChoiceInfResult& r) {
  return Json{{"epsilon", r.epsilon},
              {"modulus", r.modulus},
              {"resolution", r.resolution},
              {"evaluations", r.evaluations},
              {"worst_subset", r.worst_subset},
              {"worst_point", r.worst_point},
              {"exact", r.exact},
              {"certified", r.certified},
              {"note", r.note}};
}

Json to_json(const DensityLowerResult& r) {
  return Json{{"c", r.c},
              {"min_density", r.min_density},
              {"argmin", r.argmin},
              {"interval1", {r.lo1, r.hi1}},
              {"interval2", {r.lo2, r.hi2}},
              {"empty1", r.empty1},
              {"empty2", r.empty2},
              {"vacuous", r.vacuous},
              {"pass", r.pass}};
}

Json to_json(const Lemma1Report& r) {
  Json parts = Json::array();
  for (const auto& p : r.parts) {
    Json q{{"part", p.label}, {"k", p.k}, {"samples", p.samples}, {"violations", p.violations},
           {"worst_margin", p.worst_margin}};
    if (p.violations > 0) q["witness"] = Json{{"u", p.witness_u}, {"z", p.witness_z}};
    parts.push_back(std::move(q));
  }
  return Json{{"d", r.d},
              {"delta", r.delta},
              {"s", r.s},
              {"t", r.t},
              {"target_t", r.target_t},
              {"admissible", r.admissible},
              {"total_violations", r.total_violations()},
              {"parts", parts}};
}

Json to_json(const AssumptionReport& r) {
  Json j;
  j["eta"] = r.eta;
  j["epsilon"] = r.epsilon;
  j["c"] = r.c;
  j["admissible"] = r.admissible;
  j["witnesses"] = r.witnesses;
  j["certified"] = r.certified;
  j["d"] = r.d;
  j["delta"] = r.delta;
  j["s"] = r.s;
  j["t"] = r.t;
  if (r.admissible) {
    j["tail"] = to_json(r.tail);
    j["choice"] = to_json(r.choice);
    j["density"] = to_json(r.density);
  }
  j["lemma1"] = r.lemma1 ? to_json(*r.lemma1) : Json(nullptr);
  return j;
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const Json& provenance,
                     const std::vector<std::string>& header) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (file_ == nullptr) throw Error("cannot write " + path.string());
  std::fprintf(file_, "# %s\n", provenance.dump().c_str());
  row_text(header);
}

CsvWriter::~CsvWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::fputs(i ? "," : "", file_);
    std::fputs(fmt17(values[i]).c_str(), file_);
  }
  std::fputc('\n', file_);
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::fputs(i ? "," : "", file_);
    std::fputs(cells[i].c_str(), file_);
  }
  std::fputc('\n', file_);
}

}  // namespace swalk::io
