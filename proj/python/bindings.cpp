#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "eclbm/commands.hpp"
#include "eclbm/config.hpp"
#include "eclbm/constraints.hpp"
#include "eclbm/linear_analysis.hpp"
#include "eclbm/simulator.hpp"

namespace py = pybind11;
using namespace eclbm;

namespace {

FreeParameters free_from_config(const std::string& text) { return parse_config(text).params; }

py::dict params_dict(const ParameterSet& p) {
    py::dict d;
    d["c0"] = p.c0;
    d["c1"] = p.c1;
    d["c2"] = p.c2;
    d["c3"] = p.c3;
    d["alpha2"] = p.alpha2;
    d["beta2"] = p.beta2;
    d["alpha3"] = p.alpha3;
    d["beta3"] = p.beta3;
    d["alpha4"] = p.alpha4;
    d["beta4"] = p.beta4;
    d["s"] = p.s;
    return d;
}

}  // namespace

PYBIND11_MODULE(_eclbm, m) {
    m.doc() = "Energy-conserving MRT lattice Boltzmann schemes: constraints, linear analysis, simulation";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConstraintViolation>(m, "ConstraintViolation", PyExc_ValueError);
    py::register_exception<Instability>(m, "Instability", PyExc_RuntimeError);

    py::class_<SchemeDescriptor>(m, "Scheme")
        .def_readonly("q", &SchemeDescriptor::q)
        .def_readonly("xi", &SchemeDescriptor::xi)
        .def_readonly("M", &SchemeDescriptor::M)
        .def_readonly("Minv", &SchemeDescriptor::Minv)
        .def_readonly("moment_labels", &SchemeDescriptor::moment_labels)
        .def_property_readonly("name", [](const SchemeDescriptor& s) { return to_string(s.name); });

    m.def("build_scheme", [](const std::string& name, double lambda, double dx) {
        return build_scheme(parse_scheme_name(name), lambda, dx);
    }, py::arg("name"), py::arg("lambda_") = 1.0, py::arg("dx") = 1.0);

    py::class_<ParameterSet>(m, "ParameterSet")
        .def_readonly("c0", &ParameterSet::c0)
        .def_readonly("s", &ParameterSet::s)
        .def("sigma", &ParameterSet::sigma)
        .def("as_dict", &params_dict);

    py::class_<FreeParameters>(m, "FreeParameters");

    m.def("free_parameters", &free_from_config, py::arg("config_text"),
          "FreeParameters from the [scheme] section of a config text");
    m.def("derive_parameters", &derive_parameters);
    m.def("derive", [](const std::string& text) { return derive_parameters(free_from_config(text)); },
          py::arg("config_text"));

    m.def("predicted_transport", [](const ParameterSet& p, const SchemeDescriptor& sc) {
        const auto t = predicted_transport(p, sc);
        py::dict d;
        d["nu"] = t.nu;
        d["kappa"] = t.kappa;
        d["prandtl"] = t.prandtl;
        d["kappa_nonpositive"] = t.kappa_nonpositive;
        return d;
    });

    m.def("validate", [](const ParameterSet& p, const SchemeDescriptor& sc, const std::string& level) {
        py::list out;
        for (const auto& c : validate(p, sc, parse_isotropy_level(level)).checks)
            out.append(py::make_tuple(c.name, c.residual, c.pass));
        return out;
    }, py::arg("params"), py::arg("scheme"), py::arg("level") = "full");

    m.def("amplification_matrix",
          [](const SchemeDescriptor& sc, const ParameterSet& p, double k, double theta, double u0, double v0) {
              return amplification_matrix(sc, p, ReferenceState::from_sound_speed(1.0, u0, v0, p.c0 * sc.lambda),
                                          {k, theta});
          },
          py::arg("scheme"), py::arg("params"), py::arg("k"), py::arg("theta"), py::arg("u0") = 0.0,
          py::arg("v0") = 0.0);

    m.def("eigenvalues", [](const CMat& A) { return spectrum(A, false).values; });

    m.def("small_k_damping", [](const SchemeDescriptor& sc, const ParameterSet& p, double theta) {
        return small_k_damping(sc, p, ReferenceState::from_sound_speed(1.0, 0.0, 0.0, p.c0 * sc.lambda), theta);
    }, py::arg("scheme"), py::arg("params"), py::arg("theta") = 0.0);

    m.def("relax_shear_wave",
          [](const SchemeDescriptor& sc, const ParameterSet& p, int nx, int ny, int px, int py, long steps,
             double u0, double v0) {
              Grid g;
              g.nx = nx;
              g.ny = ny;
              WaveInit w;
              w.nx_periods = px;
              w.ny_periods = py;
              w.amplitude = 1e-4;
              w.background = ReferenceState::from_sound_speed(1.0, u0, v0, p.c0 * sc.lambda);
              std::vector<std::complex<double>> amps;
              for (const auto& s : run_relaxation(g, sc, p, w, steps, 1)) amps.push_back(s.amp);
              return amps;
          },
          py::arg("scheme"), py::arg("params"), py::arg("nx"), py::arg("ny"), py::arg("px"), py::arg("py"),
          py::arg("steps"), py::arg("u0") = 0.0, py::arg("v0") = 0.0);

    m.def("run_command", [](const std::string& command, const std::string& config_text) {
        std::ostringstream out, err;
        const int rc = run_command_text(command, config_text, {}, out, err);
        return py::make_tuple(rc, out.str(), err.str());
    }, py::arg("command"), py::arg("config_text"), "Run a CLI command on config text; returns (exit_code, stdout, stderr)");
}
