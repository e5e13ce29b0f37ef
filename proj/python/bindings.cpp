#include <algorithm>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arrival/errors.hpp"
#include "arrival/measurement.hpp"
#include "arrival/numerics.hpp"
#include "arrival/operators.hpp"
#include "arrival/states.hpp"
#include "arrival/verify.hpp"

namespace py = pybind11;
using namespace arrival;

namespace {

template <class T>
py::array_t<T> as_array(const std::vector<T>& v) {
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_arrival, m) {
    m.doc() = "Arrival-time operators, distributions and measurement models";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<PhysConsts>(m, "PhysConsts")
        .def(py::init([](double mass, double hbar) { return PhysConsts{mass, hbar}; }), py::arg("mass") = 1.0,
             py::arg("hbar") = 1.0)
        .def_readwrite("mass", &PhysConsts::mass)
        .def_readwrite("hbar", &PhysConsts::hbar);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("p_max"))
        .def_property_readonly("n", &GridSpec::n)
        .def_property_readonly("p_max", &GridSpec::p_max)
        .def_property_readonly("dp", &GridSpec::dp)
        .def("x_max", &GridSpec::x_max, py::arg("hbar") = 1.0)
        .def("momenta", [](const GridSpec& g) { return as_array(g.momenta()); });

    py::class_<GaussianSpec>(m, "GaussianSpec")
        .def(py::init([](double p0, double x0, double sigma_p, PhysConsts consts) {
                 return GaussianSpec{p0, x0, sigma_p, consts};
             }),
             py::arg("p0") = 10.0, py::arg("x0") = -5.0, py::arg("sigma_p") = 1.0, py::arg("consts") = PhysConsts{})
        .def_readwrite("p0", &GaussianSpec::p0)
        .def_readwrite("x0", &GaussianSpec::x0)
        .def_readwrite("sigma_p", &GaussianSpec::sigma_p)
        .def_readwrite("consts", &GaussianSpec::consts)
        .def_property_readonly("sigma_x", &GaussianSpec::sigma_x);

    py::class_<WaveFunction>(m, "WaveFunction")
        .def_property_readonly("in_momentum", [](const WaveFunction& w) { return w.rep == Representation::momentum; })
        .def_readonly("grid", &WaveFunction::grid)
        .def_readonly("consts", &WaveFunction::consts)
        .def_property_readonly("abscissae", [](const WaveFunction& w) { return as_array(w.abscissae); })
        .def_property_readonly("values", [](const WaveFunction& w) { return as_array(w.values); });

    m.def("make_gaussian", &make_gaussian, py::arg("spec"), py::arg("grid"));
    m.def("make_reflected_state", &make_reflected_state, py::arg("base"), py::arg("grid"), py::arg("t") = 0.0);
    m.def("evolve_free", &evolve_free, py::arg("psi"), py::arg("t"));
    m.def("to_position", py::overload_cast<const WaveFunction&>(&to_position), py::arg("psi"));
    m.def("to_momentum", &to_momentum, py::arg("psi"));
    m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));
    m.def("mean_momentum", &mean_momentum, py::arg("psi"));
    m.def("mean_position", &mean_position, py::arg("psi"));

    m.def("bessel_j", &numerics::bessel_j, py::arg("nu"), py::arg("z"));
    m.def("gamma", &numerics::gamma_fn, py::arg("x"));

    m.def("family_names", [] {
        std::vector<std::string> out;
        for (auto f : {EigenFamily::ab, EigenFamily::kdm, EigenFamily::mi, EigenFamily::t3, EigenFamily::new_op})
            out.emplace_back(family_name(f));
        return out;
    });
    m.def(
        "eigenstate",
        [](const std::string& family, double tau, double p, const PhysConsts& consts) {
            return eigenstate(parse_family(family), tau, p, consts);
        },
        py::arg("family"), py::arg("tau"), py::arg("p"), py::arg("consts") = PhysConsts{});
    m.def(
        "distribution",
        [](const WaveFunction& psi, const std::string& family,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& taus) {
            const auto t = as_vector(taus);
            return as_array(distribution(psi, parse_family(family), t).values);
        },
        py::arg("psi"), py::arg("family"), py::arg("tau"));
    m.def("kijowski_distribution", &kijowski_distribution, py::arg("psi"), py::arg("t"));
    m.def("current_expectation", &current_expectation, py::arg("psi"), py::arg("t"));
    m.def("low_momentum_coefficient", &low_momentum_coefficient, py::arg("consts") = PhysConsts{});

    py::class_<CrossingResult>(m, "CrossingResult")
        .def_readonly("projector_form", &CrossingResult::projector_form)
        .def_readonly("current_form", &CrossingResult::current_form);
    m.def("crossing_probability", &crossing_probability, py::arg("psi"), py::arg("tau"), py::arg("n_t") = 0);

    m.def("classical_arrival", &classical_arrival, py::arg("x"), py::arg("p"), py::arg("mass") = 1.0);
    m.def("classical_stopwatch", &classical_stopwatch, py::arg("x"), py::arg("p"), py::arg("horizon"),
          py::arg("mass") = 1.0);
    m.def("classical_current_moment", &classical_current_moment, py::arg("x"), py::arg("p"), py::arg("mass") = 1.0);

    m.def(
        "run_verification",
        [](std::size_t n, double p_max, const PhysConsts& consts) {
            VerifySettings s;
            s.grid = GridSpec(n, p_max);
            s.consts = consts;
            s.packet.consts = consts;
            py::list out;
            for (const auto& r : run_verification(s)) {
                py::dict d;
                d["name"] = r.name;
                d["value"] = r.value;
                d["tolerance"] = r.tolerance;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("n") = 1024, py::arg("p_max") = 40.0, py::arg("consts") = PhysConsts{});
}
