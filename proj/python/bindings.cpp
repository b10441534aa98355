#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simplexwalk/assumptions.hpp"
#include "simplexwalk/chain.hpp"
#include "simplexwalk/cli.hpp"
#include "simplexwalk/errors.hpp"
#include "simplexwalk/geometry.hpp"
#include "simplexwalk/stationarity.hpp"
#include "simplexwalk/stats.hpp"
#include "simplexwalk/urn.hpp"

namespace py = pybind11;
using namespace swalk;

namespace {

std::vector<double> coords(const SimplexPoint& z) { return {z.coords().begin(), z.coords().end()}; }
std::vector<double> coords(const CubePoint& x) { return {x.coords().begin(), x.coords().end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random walks on the standard simplex";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  // Geometry works on plain coordinate lists.
  m.def("forward_T", [](const std::vector<double>& x) { return coords(forward_T(CubePoint(x))); });
  m.def("inverse_T", [](const std::vector<double>& z) { return coords(inverse_T(SimplexPoint(z))); });
  m.def("apply_G", [](const std::vector<double>& z, const std::vector<double>& u) {
    return coords(apply_G(SimplexPoint(z), SimplexPoint(u)));
  });
  m.def("invert_G", [](const std::vector<double>& z, const std::vector<double>& u) {
    return coords(invert_G(SimplexPoint(z), SimplexPoint(u)));
  });
  m.def("rotate_R", [](std::size_t j, const std::vector<double>& u) { return coords(rotate_R(j, SimplexPoint(u))); });
  m.def("unrotate_R", [](std::size_t j, const std::vector<double>& y) { return coords(unrotate_R(j, SimplexPoint(y))); });
  m.def("jacobian_det_Ginv", [](const std::vector<double>& z) { return jacobian_det_Ginv(SimplexPoint(z)); });
  m.def("jacobian_det_Tinv", [](const std::vector<double>& v) { return jacobian_det_Tinv(SimplexPoint(v)); });
  m.def("admissible", &admissible, py::arg("d"), py::arg("delta"), py::arg("s"), py::arg("t"));

  py::class_<JumpLaw>(m, "JumpLaw")
      .def_static("beta", &JumpLaw::beta)
      .def_static("uniform", &JumpLaw::uniform)
      .def_static("point_mass", &JumpLaw::point_mass)
      .def("describe", &JumpLaw::describe)
      .def("tail", [](const JumpLaw& j, double x) { return jump_tail(j, x); })
      .def("pdf", [](const JumpLaw& j, double x) { return jump_pdf(j, x); })
      .def("cdf", [](const JumpLaw& j, double x) { return jump_cdf(j, x); });

  py::class_<ChoiceFunction>(m, "ChoiceFunction")
      .def_static("constant", &ChoiceFunction::constant)
      .def_static("linear", &ChoiceFunction::linear)
      .def_static("piecewise1d", &ChoiceFunction::piecewise1d)
      .def_property_readonly("dim", &ChoiceFunction::dim)
      .def("describe", &ChoiceFunction::describe)
      .def("probs", [](const ChoiceFunction& cf, const std::vector<double>& z) {
        return choice_probs(cf, SimplexPoint(z));
      });

  m.def("sample_dirichlet",
        [](const std::vector<double>& alpha, std::size_t n, std::uint64_t seed) {
          const DirichletParams params(alpha);
          RngStream rng(seed, 0);
          std::vector<std::vector<double>> out;
          out.reserve(n);
          for (std::size_t i = 0; i < n; ++i) out.push_back(coords(sample_dirichlet(params, rng)));
          return out;
        },
        py::arg("alpha"), py::arg("n"), py::arg("seed") = 0);

  m.def("run_ensemble",
        [](const ChoiceFunction& cf, const JumpLaw& jump, std::size_t steps, std::size_t ensemble,
           std::uint64_t seed, unsigned threads) {
          ChainConfig cfg;
          cfg.d = cf.dim();
          cfg.choice = cf;
          cfg.jump = jump;
          cfg.steps = steps;
          cfg.ensemble = ensemble;
          cfg.seed = seed;
          std::vector<std::vector<double>> out;
          for (const auto& z : run_ensemble(cfg, threads)) out.push_back(coords(z));
          return out;
        },
        py::arg("choice"), py::arg("jump"), py::arg("steps"), py::arg("ensemble"), py::arg("seed") = 0,
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("dirichlet_residual",
        [](const std::vector<double>& alpha, const ChoiceFunction& cf, const JumpLaw& jump,
           const std::vector<double>& z) {
          return residual(dirichlet_candidate(DirichletParams(alpha)), cf, jump, SimplexPoint(z));
        },
        "Relative residual of the stationary equation for a Dirichlet candidate at z.");
  m.def("beta_integral_identity", [](double a, double b, double z) {
    const IdentitySides s = beta_integral_identity(a, b, z);
    return py::make_tuple(s.lhs, s.rhs);
  });

  m.def("lyapunov_W", [](double z, double L, double R) { return lyapunov_W(UrnState{z, L, R, 1}); });
  m.def("drift_polynomials", [](double zeta, double z) {
    const DriftPolys p = drift_polynomials(zeta, z);
    return std::vector<double>(p.r.begin(), p.r.end());
  });
  m.def("drift_closed_form", &drift_closed_form);
  m.def("drift_oracle", &drift_oracle);
  m.def("run_urn",
        [](std::size_t n, std::uint64_t seed, std::size_t record_every) {
          std::vector<py::dict> rows;
          for (const auto& r : run_urn(n, seed, record_every)) {
            py::dict d;
            d["n"] = r.n;
            d["z"] = r.z;
            d["L"] = r.L;
            d["R"] = r.R;
            d["zeta"] = r.zeta;
            d["W"] = r.W;
            rows.push_back(std::move(d));
          }
          return rows;
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("record_every") = 1);

  m.def("ks_one_sample", [](const std::vector<double>& x, const std::function<double(double)>& cdf) {
    return ks_one_sample(x, cdf);
  });
  m.def("ks_two_sample", [](const std::vector<double>& a, const std::vector<double>& b) { return ks_two_sample(a, b); });
  m.def("ks_critical", &ks_critical);
  m.def("arcsine_cdf", &arcsine_cdf);
  m.def("beta_cdf", &beta_cdf);

  m.def("check_tail", [](const JumpLaw& jump, double delta) { return check_tail(jump, delta).eta; });
  m.def("lemma1_violations",
        [](std::size_t d, double delta, double s, double t, std::size_t n, std::uint64_t seed) {
          RngStream rng(seed, 0);
          return verify_lemma1(d, delta, s, t, n, rng).total_violations();
        },
        py::arg("d"), py::arg("delta"), py::arg("s"), py::arg("t"), py::arg("n"), py::arg("seed") = 0);

  m.def("cli",
        [](const std::vector<std::string>& args) {
          std::vector<std::string> storage{"swalk"};
          storage.insert(storage.end(), args.begin(), args.end());
          std::vector<char*> argv;
          for (auto& s : storage) argv.push_back(s.data());
          return cli::run_cli(static_cast<int>(argv.size()), argv.data());
        },
        "Run the swalk command line with the given arguments; returns the exit code.");
}
