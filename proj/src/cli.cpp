#include "simplexwalk/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>

#include "parallel.hpp"
#include "simplexwalk/errors.hpp"
#include "simplexwalk/io.hpp"

namespace swalk::cli {

namespace {

using io::Json;

constexpr const char* kVersion = "0.1.0";

Json provenance(const std::string& command, const Json& config) {
  return Json{{"tool", "swalk"}, {"version", kVersion}, {"command", command}, {"config", config}};
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  const std::size_t h = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h), v.end());
  const double hi = v[h];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h)));
}

// ---------------------------------------------------------------- simulate

int simulate(const io::SimulateConfig& cfg, const Options& opts) {
  const auto& chain = cfg.chain;
  const std::size_t d = chain.d;
  const Json prov = provenance("simulate", io::to_json(cfg));
  std::filesystem::create_directories(opts.out);

  const auto samples = run_ensemble(chain, opts.threads);
  {
    std::vector<std::string> header{"chain"};
    for (std::size_t j = 1; j <= d; ++j) header.push_back("z" + std::to_string(j));
    io::CsvWriter csv(opts.out / "samples.csv", prov, header);
    std::vector<double> row(d + 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      row[0] = static_cast<double>(i);
      for (std::size_t j = 0; j < d; ++j) row[j + 1] = samples[i].coords()[j];
      csv.row(row);
    }
  }
  if (cfg.trajectory) {
    std::vector<std::string> header{"n", "vertex"};
    for (std::size_t j = 1; j <= d; ++j) header.push_back("z" + std::to_string(j));
    io::CsvWriter csv(opts.out / "trajectory.csv", prov, header);
    std::vector<double> row(d + 2);
    for (const auto& s : run_chain(chain)) {
      row[0] = static_cast<double>(s.n);
      row[1] = static_cast<double>(s.last_vertex);
      for (std::size_t j = 0; j < d; ++j) row[j + 2] = s.z.coords()[j];
      csv.row(row);
    }
  }

  Json summary = prov;
  std::vector<double> mean(d, 0.0);
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += s.coords()[j];
  }
  for (double& m : mean) m /= static_cast<double>(samples.size());
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& s : samples) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) cov[a][b] += (s.coords()[a] - mean[a]) * (s.coords()[b] - mean[b]);
    }
  }
  const double denom = samples.size() > 1 ? static_cast<double>(samples.size() - 1) : 1.0;
  for (auto& r : cov) {
    for (double& v : r) v /= denom;
  }
  summary["moments"] = Json{{"n", samples.size()}, {"mean", mean}, {"covariance", cov}};

  bool pass = true;
  Json gof = Json::array();
  if (cfg.target) {
    for (std::size_t j = 1; j <= d; ++j) {
      const auto xs = marginal(samples, j);
      GofReport r = ks_one_sample_test(xs, io::target_marginal_cdf(*cfg.target, d, j), cfg.alpha);
      r.kind = "ks_one_sample z" + std::to_string(j);
      pass = pass && r.pass;
      gof.push_back(io::to_json(r));
    }
    const std::string type = (*cfg.target)["type"].get<std::string>();
    if (type == "dirichlet" || type == "uniform") {
      const DirichletParams params = type == "dirichlet"
                                         ? DirichletParams((*cfg.target)["alpha"].get<std::vector<double>>())
                                         : DirichletParams(std::vector<double>(d + 1, 1.0));
      const MomentReport mr = moment_compare(samples, params);
      GofReport r = make_report("moments", mr.max_dev, 4.0, samples.size());
      pass = pass && r.pass;
      gof.push_back(io::to_json(r));
      summary["moment_compare"] = io::to_json(mr);
      const ChiSquareResult cs = chi_square_simplex(samples, params, 10);
      Json diag = io::to_json(cs);
      diag["report"] = io::to_json(chi_square_test(cs, 0.001));
      summary["chi_square"] = diag;  // diagnostic, not part of the verdict
    }
  }
  summary["gof"] = gof;
  summary["pass"] = pass;
  io::write_json(opts.out / "summary.json", summary);
  std::cerr << "simulate: " << samples.size() << " chains, " << chain.steps << " steps, verdict "
            << (pass ? "pass" : "fail") << "\n";
  return opts.assert_mode && !pass ? kAssertFailed : kOk;
}

// ------------------------------------------------------------------ verify

int verify(const io::VerifyConfig& cfg, const Options& opts) {
  const std::size_t d = cfg.choice.dim();
  const Json prov = provenance("verify", io::to_json(cfg));
  const DensityCandidate f = io::parse_candidate(cfg.candidate, d);
  const auto grid = interior_grid(d, cfg.points_per_axis, cfg.margin);
  std::filesystem::create_directories(opts.out);

  std::vector<double> res(grid.size());
  std::vector<std::string> notes(grid.size());
  detail::parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    try {
      res[i] = residual(f, cfg.choice, cfg.jump, grid[i], cfg.options);
    } catch (const QuadratureError& e) {
      res[i] = std::nan("");
      notes[i] = e.what();
    }
  });

  double worst = 0.0;
  std::size_t failures = 0;
  {
    std::vector<std::string> header;
    for (std::size_t j = 1; j <= d; ++j) header.push_back("z" + std::to_string(j));
    header.push_back("residual");
    io::CsvWriter csv(opts.out / "residuals.csv", prov, header);
    std::vector<double> row(d + 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) row[j] = grid[i].coords()[j];
      row[d] = res[i];
      csv.row(row);
      if (std::isnan(res[i])) {
        ++failures;
      } else {
        worst = std::max(worst, res[i]);
      }
    }
  }
  const bool pass = failures == 0 && worst < cfg.threshold;
  Json report = prov;
  report["candidate"] = f.label;
  report["points"] = grid.size();
  report["max_residual"] = worst;
  report["threshold"] = cfg.threshold;
  report["quadrature_failures"] = failures;
  report["pass"] = pass;
  io::write_json(opts.out / "report.json", report);
  std::cerr << "verify: " << grid.size() << " points, max residual " << worst << ", " << failures
            << " quadrature failures\n";
  return opts.assert_mode && !pass ? kAssertFailed : kOk;
}

// ------------------------------------------------------------- assumptions

int assumptions(const io::AssumptionsConfig& cfg, const Options& opts) {
  const Json prov = provenance("assumptions", io::to_json(cfg));
  std::filesystem::create_directories(opts.out);
  Json report = prov;
  bool pass = false;
  if (cfg.search) {
    const auto found = search_parameters(cfg.choice, cfg.jump, cfg.options);
    if (found) {
      report["report"] = io::to_json(*found);
      pass = found->certified;
    } else {
      report["report"] = Json{{"eta", 0.0},       {"epsilon", 0.0}, {"c", 0.0}, {"admissible", false},
                              {"certified", false}, {"witnesses", {"parameter search found no certified (delta, s, t)"}}};
    }
  } else {
    const AssumptionReport r = check_assumptions(cfg.choice, cfg.jump, cfg.delta, cfg.s, cfg.t, cfg.options);
    report["report"] = io::to_json(r);
    pass = r.certified;
  }
  report["pass"] = pass;
  io::write_json(opts.out / "report.json", report);
  std::cerr << "assumptions: " << (pass ? "certified" : "not certified") << "\n";
  return opts.assert_mode && !pass ? kAssertFailed : kOk;
}

// ---------------------------------------------------------------- geometry

SimplexPoint interior_point(std::size_t d, double floor, RngStream& rng) {
  while (true) {
    const SimplexPoint z = sample_uniform_simplex(d, rng);
    bool ok = true;
    for (std::size_t j = 0; j <= d; ++j) ok = ok && z.bary(j) >= floor;
    if (ok) return z;
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

// Central-difference determinant of a map R^d -> R^d.
template <class Map>
double fd_det(const std::vector<double>& at, Map&& map, double h) {
  const std::size_t d = at.size();
  Eigen::MatrixXd J(d, d);
  std::vector<double> p = at;
  for (std::size_t c = 0; c < d; ++c) {
    p[c] = at[c] + h;
    const std::vector<double> up = map(p);
    p[c] = at[c] - h;
    const std::vector<double> dn = map(p);
    p[c] = at[c];
    for (std::size_t r = 0; r < d; ++r) J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (up[r] - dn[r]) / (2 * h);
  }
  return J.determinant();
}

int geometry(const io::GeometryConfig& cfg, const Options& opts) {
  const Json prov = provenance("geometry", io::to_json(cfg));
  std::filesystem::create_directories(opts.out);
  const std::size_t d = cfg.d;
  RngStream rng(cfg.seed, 0);

  // Uniform points over the whole domain, both composition orders. Near the
  // boundary x -> T -> T^-1 and u -> G -> G^-1 lose digits with the
  // conditioning of the map, so these are reported rather than asserted.
  double err_tx = 0.0, err_tz = 0.0, err_gu = 0.0, err_gv = 0.0, err_r = 0.0;
  for (std::size_t i = 0; i < cfg.roundtrip_samples; ++i) {
    std::vector<double> x(d);
    for (double& v : x) v = rng.uniform_open();
    err_tx = std::max(err_tx, max_abs_diff(inverse_T(forward_T(CubePoint(x))).coords(), x));
    const SimplexPoint w = sample_uniform_simplex(d, rng);
    err_tz = std::max(err_tz, max_abs_diff(forward_T(inverse_T(w)).coords(), w.coords()));
    const SimplexPoint z = sample_uniform_simplex(d, rng);
    const SimplexPoint u = sample_uniform_simplex(d, rng);
    const SimplexPoint v = apply_G(z, u);
    err_gu = std::max(err_gu, max_abs_diff(invert_G(z, v).coords(), u.coords()));
    err_gv = std::max(err_gv, max_abs_diff(apply_G(z, invert_G(z, v)).coords(), v.coords()));
    for (std::size_t j = 0; j <= d; ++j) err_r = std::max(err_r, max_abs_diff(unrotate_R(j, rotate_R(j, u)).coords(), u.coords()));
  }

  constexpr double kH = 1e-6;
  double err_ginv = 0.0, err_tinv = 0.0;
  for (std::size_t i = 0; i < cfg.jacobian_samples; ++i) {
    const SimplexPoint z = interior_point(d, 0.01, rng);
    const SimplexPoint u = interior_point(d, 0.01, rng);
    const std::vector<double> uc(u.coords().begin(), u.coords().end());
    const double fd_g = fd_det(uc, [&](const std::vector<double>& p) {
      std::vector<double> out(d);
      const double p0 = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
      for (std::size_t j = 0; j < d; ++j) out[j] = p[j] - z.coords()[j] * p0 / z.z0();
      return out;
    }, kH);
    err_ginv = std::max(err_ginv, std::fabs(fd_g - jacobian_det_Ginv(z)) / std::fabs(jacobian_det_Ginv(z)));
    const double fd_t = fd_det(uc, [&](const std::vector<double>& p) {
      const CubePoint x = inverse_T(SimplexPoint(p));
      return std::vector<double>(x.coords().begin(), x.coords().end());
    }, kH);
    err_tinv = std::max(err_tinv, std::fabs(fd_t - jacobian_det_Tinv(u)) / std::fabs(jacobian_det_Tinv(u)));
  }

  RngStream lemma_rng(cfg.seed, 1);
  const Lemma1Report lemma = verify_lemma1(d, cfg.delta, cfg.s, cfg.t, cfg.samples, lemma_rng, cfg.target_t);

  const bool rt_ok = std::max({err_tx, err_tz, err_gu, err_gv, err_r}) < 1e-12;
  const bool jac_ok = err_ginv < 1e-6 && err_tinv < 1e-6;
  const bool pass = jac_ok && lemma.total_violations() == 0;
  Json report = prov;
  report["roundtrip"] = Json{{"samples", cfg.roundtrip_samples},
                             {"T_inverse_of_T", err_tx},
                             {"T_of_T_inverse", err_tz},
                             {"G_inverse_of_G", err_gu},
                             {"G_of_G_inverse", err_gv},
                             {"R", err_r},
                             {"threshold", 1e-12},
                             {"within_threshold", rt_ok}};
  report["jacobian"] = Json{{"samples", cfg.jacobian_samples}, {"G_inverse", err_ginv}, {"T_inverse", err_tinv},
                            {"threshold", 1e-6}, {"pass", jac_ok}};
  report["lemma1"] = io::to_json(lemma);
  report["pass"] = pass;
  io::write_json(opts.out / "report.json", report);
  std::cerr << "geometry: d=" << d << ", inclusion violations " << lemma.total_violations() << "\n";
  return opts.assert_mode && !pass ? kAssertFailed : kOk;
}

// --------------------------------------------------------------------- urn

int urn(const io::UrnConfig& cfg, const Options& opts) {
  const Json prov = provenance("urn", io::to_json(cfg));
  std::filesystem::create_directories(opts.out);
  const std::vector<std::string> traj_header{"n", "z", "L", "R", "zeta", "W"};
  {
    io::CsvWriter csv(opts.out / "trajectory.csv", prov, traj_header);
    for (const auto& r : run_urn(cfg.n, cfg.seed, cfg.record_every, cfg.z1, 0)) {
      csv.row({static_cast<double>(r.n), r.z, r.L, r.R, r.zeta, r.W});
    }
  }

  Json report = prov;
  bool pass = true;
  if (cfg.runs > 1) {
    const std::size_t early = std::min<std::size_t>(1000, cfg.n);
    const auto ens = urn_ensemble(cfg.runs, {early, cfg.n}, cfg.seed, opts.threads, cfg.z1);
    std::vector<double> z_end, dev_early, dev_end;
    std::size_t in_band = 0;
    {
      io::CsvWriter csv(opts.out / "samples.csv", prov, {"run", "z", "L", "R", "zeta"});
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const UrnState& s = ens[i].back();
        csv.row({static_cast<double>(i), s.z, s.L, s.R, s.zeta()});
        z_end.push_back(s.z);
        dev_early.push_back(std::fabs(ens[i].front().zeta() - 0.5));
        dev_end.push_back(std::fabs(s.zeta() - 0.5));
        if (s.zeta() >= 1.0 / 13.0 && s.zeta() <= 12.0 / 13.0) ++in_band;
      }
    }
    const GofReport ks = ks_threshold_test(z_end, [](double x) { return arcsine_cdf(x); }, cfg.ks_threshold);
    const double med_early = median(dev_early), med_end = median(dev_end);
    const bool band_ok = in_band == ens.size();
    const bool shrink_ok = cfg.n > early ? med_end < med_early : true;
    report["ensemble"] = Json{{"runs", cfg.runs},
                              {"ks_arcsine", io::to_json(ks)},
                              {"band_fraction", static_cast<double>(in_band) / static_cast<double>(ens.size())},
                              {"median_dev_early", med_early},
                              {"early_n", early},
                              {"median_dev_final", med_end},
                              {"median_shrinks", shrink_ok}};
    pass = pass && ks.pass && band_ok && shrink_ok;
    std::cerr << "urn: " << cfg.runs << " runs, KS vs arcsine " << ks.statistic << "\n";
  }

  if (cfg.coupling) {
    std::vector<CouplingResult> results(cfg.coupling_runs);
    detail::parallel_for(cfg.coupling_runs, opts.threads,
                         [&](std::size_t i) { results[i] = coupled_run(cfg.coupling_config, i); });
    std::size_t a_count = 0, a_failures = 0, all_failures = 0;
    for (const auto& r : results) {
      all_failures += r.sandwich_failures;
      if (r.event_A) {
        ++a_count;
        a_failures += r.sandwich_failures;
      }
    }
    {
      std::vector<std::string> header = traj_header;
      for (const char* h : {"z_tilde", "z_hat", "sandwich_ok"}) header.emplace_back(h);
      io::CsvWriter csv(opts.out / "coupling.csv", prov, header);
      for (const auto& row : results.front().rows) {
        const auto& m = row.main;
        csv.row({static_cast<double>(m.n), m.z, m.L, m.R, m.zeta, m.W, row.z_tilde, row.z_hat,
                 row.sandwich_ok ? 1.0 : 0.0});
      }
    }
    Json coupling{{"runs", cfg.coupling_runs},
                  {"event_A_runs", a_count},
                  {"sandwich_failures_on_A", a_failures},
                  {"sandwich_failures_total", all_failures}};
    pass = pass && a_failures == 0;
    if (cfg.frozen_chains > 0) {
      const double eps = cfg.coupling_config.eps_band;
      const auto z = frozen_ensemble(0.5 - eps, cfg.frozen_steps, cfg.frozen_chains, cfg.seed, opts.threads, cfg.z1);
      GofReport ks = ks_one_sample_test(z, [eps](double x) { return beta_cdf(0.5 + eps, 0.5 - eps, x); }, 0.01);
      ks.kind = "ks_one_sample frozen tilde walk";
      coupling["frozen"] = io::to_json(ks);
      pass = pass && ks.pass;
    }
    report["coupling"] = coupling;
    std::cerr << "urn: coupling " << a_count << "/" << cfg.coupling_runs << " runs on the band event, "
              << a_failures << " sandwich failures\n";
  }
  report["pass"] = pass;
  io::write_json(opts.out / "report.json", report);
  return opts.assert_mode && !pass ? kAssertFailed : kOk;
}

}  // namespace

int run_command(const Options& opts) {
  // Parse and validate first so a config error writes nothing.
  io::Json doc;
  try {
    if (!opts.config.empty()) {
      doc = io::load_json(opts.config);
    } else if (opts.command != "geometry") {
      throw ConfigError("--config is required for " + opts.command);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (opts.command == "simulate") {
      auto cfg = io::parse_simulate(doc);
      if (opts.seed) cfg.chain.seed = *opts.seed;
      return simulate(cfg, opts);
    }
    if (opts.command == "verify") return verify(io::parse_verify(doc), opts);
    if (opts.command == "assumptions") {
      auto cfg = io::parse_assumptions(doc);
      if (opts.seed) cfg.options.seed = *opts.seed;
      return assumptions(cfg, opts);
    }
    if (opts.command == "geometry") {
      auto cfg = doc.is_null() ? io::GeometryConfig{} : io::parse_geometry(doc);
      if (opts.seed) cfg.seed = *opts.seed;
      return geometry(cfg, opts);
    }
    if (opts.command == "urn") {
      auto cfg = io::parse_urn(doc);
      if (opts.seed) {
        cfg.seed = *opts.seed;
        cfg.coupling_config.seed = *opts.seed;
      }
      return urn(cfg, opts);
    }
    throw ConfigError("unknown command '" + opts.command + "'");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Simplex random walks: simulation and verification"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;
  for (const char* name : {"simulate", "verify", "assumptions", "geometry", "urn"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "JSON config file");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--assert", opts.assert_mode, "exit 3 when a check fails");
    sub->add_option("--out", opts.out, "output directory");
    sub->callback([&opts, name] { opts.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) opts.seed = seed;
  }
  return run_command(opts);
}

}  // namespace swalk::cli
