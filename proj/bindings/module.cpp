// Python bindings for the simulation core. The module mirrors the C++ API
// closely: structs become classes with read-only data members, vectors become
// lists, and ConfigError / GuardError map onto ValueError / RuntimeError
// subclasses so callers can branch on the failure class.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riesz_star/checks.hpp"
#include "riesz_star/diagnostics.hpp"
#include "riesz_star/kernel.hpp"
#include "riesz_star/params.hpp"
#include "riesz_star/scheme.hpp"
#include "riesz_star/steady.hpp"

namespace py = pybind11;
using namespace riesz;

PYBIND11_MODULE(_riesz_star, m) {
    m.doc() = "vacuum free-boundary Riesz-interaction gas: steady states, "
              "Lagrangian dynamics, and verification sweeps";

    static py::exception<ConfigError> config_error(m, "ConfigError",
                                                   PyExc_ValueError);
    static py::exception<GuardError> guard_error(m, "GuardError",
                                                 PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const GuardError& e) {
            py::set_error(guard_error, e.what());
        }
    });

    py::class_<RieszParams>(m, "RieszParams")
        .def(py::init<>())
        .def(py::init([](double s, double gamma) {
                 RieszParams p{s, gamma};
                 p.validate();
                 return p;
             }),
             py::arg("s"), py::arg("gamma"))
        .def_readwrite("s", &RieszParams::s)
        .def_readwrite("gamma", &RieszParams::gamma)
        .def("k", &RieszParams::k)
        .def("in_supercritical_regime", &RieszParams::in_supercritical_regime)
        .def("in_strict_regime", &RieszParams::in_strict_regime)
        .def("validate", &RieszParams::validate,
             py::arg("require_strict") = false)
        .def("__repr__", [](const RieszParams& p) {
            return "RieszParams(s=" + std::to_string(p.s) +
                   ", gamma=" + std::to_string(p.gamma) + ")";
        });

    m.def("kernel_value", &riesz_w, py::arg("x"), py::arg("params"));
    m.def("kernel_gradient", &riesz_w_prime, py::arg("x"), py::arg("params"));
    m.def("beta_fn", &beta_fn, py::arg("a"), py::arg("b"));

    py::class_<SteadyProfile>(m, "SteadyProfile")
        .def_readonly("params", &SteadyProfile::params)
        .def_readonly("radius", &SteadyProfile::radius)
        .def_readonly("h", &SteadyProfile::h)
        .def_readonly("n_half", &SteadyProfile::n_half)
        .def_readonly("rho", &SteadyProfile::rho)
        .def_readonly("mass", &SteadyProfile::mass)
        .def_readonly("fixed_point_residual",
                      &SteadyProfile::fixed_point_residual)
        .def_readonly("iterations", &SteadyProfile::iterations)
        .def("x_of", &SteadyProfile::x_of, py::arg("k"))
        .def("rho_of", &SteadyProfile::rho_of, py::arg("k"))
        .def("sup_rho", &SteadyProfile::sup_rho);

    m.def("solve_steady", &solve_steady, py::arg("params"), py::arg("n_grid"),
          py::arg("tol") = 1e-6, py::arg("relax") = 0.5,
          py::arg("max_iter") = 20000);
    m.def("rescale_profile", &rescale_profile, py::arg("profile"),
          py::arg("target_mass"));
    m.def("rescale_to_radius", &rescale_to_radius, py::arg("profile"),
          py::arg("target_radius"));
    m.def("steady_residual", &steady_residual, py::arg("profile"));
    m.def("free_energy",
          py::overload_cast<const SteadyProfile&>(&free_energy),
          py::arg("profile"));
    m.def("boundary_slope", &boundary_slope, py::arg("profile"),
          py::arg("lo_fraction") = 0.02, py::arg("hi_fraction") = 0.10);

    py::class_<GridState>(m, "GridState")
        .def_readonly("t", &GridState::t)
        .def_readonly("eta", &GridState::eta)
        .def_readonly("v", &GridState::v)
        .def("n", &GridState::n);

    py::class_<SchemeConfig>(m, "SchemeConfig")
        .def(py::init<>())
        .def_readwrite("n", &SchemeConfig::n)
        .def_readwrite("dt", &SchemeConfig::dt)
        .def_readwrite("integrator", &SchemeConfig::integrator)
        .def_readwrite("t_end", &SchemeConfig::t_end)
        .def_readwrite("snapshot_every", &SchemeConfig::snapshot_every)
        .def_readwrite("eps0", &SchemeConfig::eps0)
        .def("validate", &SchemeConfig::validate);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("snapshots", &Trajectory::snapshots)
        .def_readonly("status", &Trajectory::status)
        .def_readonly("guard_time", &Trajectory::guard_time)
        .def_readonly("dt_used", &Trajectory::dt_used)
        .def_readonly("steps", &Trajectory::steps);

    m.def("simulate", &simulate, py::arg("config"), py::arg("profile"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<EulerianView>(m, "EulerianView")
        .def_readonly("xi", &EulerianView::xi)
        .def_readonly("rho", &EulerianView::rho)
        .def_readonly("u", &EulerianView::u)
        .def_readonly("a", &EulerianView::a);

    m.def("eulerian_reconstruct", &eulerian_reconstruct, py::arg("state"),
          py::arg("profile"));

    py::class_<SchemeCache>(m, "SchemeCache")
        .def_readonly("theta", &SchemeCache::theta)
        .def_readonly("phi_static", &SchemeCache::phi_static);
    m.def("make_cache", &make_cache, py::arg("profile"));

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("t", &EnergyReport::t)
        .def_readonly("e_n", &EnergyReport::e_n)
        .def_readonly("sup_stretch_dev", &EnergyReport::sup_stretch_dev)
        .def_readonly("norm_stretch", &EnergyReport::norm_stretch)
        .def_readonly("norm_v", &EnergyReport::norm_v)
        .def_readonly("jac_min", &EnergyReport::jac_min)
        .def_readonly("jac_max", &EnergyReport::jac_max)
        .def_readonly("boundary_a", &EnergyReport::boundary_a);

    m.def("energy_series", &energy_series, py::arg("trajectory"),
          py::arg("profile"), py::arg("cache"),
          py::call_guard<py::gil_scoped_release>());
    m.def("physical_energy", &physical_energy, py::arg("state"),
          py::arg("profile"), py::arg("cache"));

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("slope", &FitResult::slope)
        .def_readonly("r2", &FitResult::r2)
        .def_readonly("n_samples", &FitResult::n_samples)
        .def_readonly("degenerate", &FitResult::degenerate);

    m.def("decay_fit", &decay_fit, py::arg("series"), py::arg("t_lo"),
          py::arg("t_hi"));

    py::class_<CoercivityReport>(m, "CoercivityReport")
        .def_readonly("lhs", &CoercivityReport::lhs)
        .def_readonly("rhs", &CoercivityReport::rhs)
        .def_readonly("ratio", &CoercivityReport::ratio)
        // `pass` is a python keyword
        .def_readonly("passed", &CoercivityReport::pass);

    m.def("coercivity_check", &coercivity_check, py::arg("w_nodes"),
          py::arg("profile"));
    m.def("quadratic_form", &quadratic_form, py::arg("w_nodes"),
          py::arg("profile"));
    m.def("interaction_form", &interaction_form, py::arg("w_nodes"),
          py::arg("profile"));

    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("name", &SweepReport::name)
        .def_readonly("trials", &SweepReport::trials)
        .def_readonly("failures", &SweepReport::failures)
        .def_readonly("worst_margin", &SweepReport::worst_margin)
        .def("__repr__", [](const SweepReport& r) {
            return "SweepReport(name='" + r.name +
                   "', trials=" + std::to_string(r.trials) +
                   ", failures=" + std::to_string(r.failures) +
                   ", worst_margin=" + std::to_string(r.worst_margin) + ")";
        });

    py::class_<SweepOptions>(m, "SweepOptions")
        .def(py::init<>())
        .def_readwrite("seed", &SweepOptions::seed)
        .def_readwrite("identity_functions", &SweepOptions::identity_functions)
        .def_readwrite("coercivity_functions",
                       &SweepOptions::coercivity_functions)
        .def_readwrite("remainder_triples", &SweepOptions::remainder_triples)
        .def_readwrite("remainder_amplitude",
                       &SweepOptions::remainder_amplitude)
        .def_readwrite("scaling_triples", &SweepOptions::scaling_triples)
        .def_readwrite("hardy_functions", &SweepOptions::hardy_functions)
        .def_readwrite("beta_probe_points", &SweepOptions::beta_probe_points)
        .def_readwrite("mutate_kernel_sign", &SweepOptions::mutate_kernel_sign);

    m.def("run_verification_sweeps", &run_verification_sweeps,
          py::arg("profile"), py::arg("options") = SweepOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("sweeps_all_pass", &sweeps_all_pass, py::arg("reports"));
    m.def("sweep_reports_to_json", &sweep_reports_to_json, py::arg("reports"));
}
