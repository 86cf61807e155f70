#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotaflow/artifacts.hpp"
#include "rotaflow/cell_problem.hpp"
#include "rotaflow/config.hpp"
#include "rotaflow/diagnostics.hpp"
#include "rotaflow/duhamel.hpp"
#include "rotaflow/geometry_io.hpp"
#include "rotaflow/spectral_solver.hpp"
#include "rotaflow/transport.hpp"
#include "rotaflow/verify.hpp"

namespace py = pybind11;
using namespace rotaflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> shape_of(const PeriodicGrid& g) {
    std::vector<py::ssize_t> s;
    for (auto n : g.resolutions()) s.push_back(static_cast<py::ssize_t>(n));
    return s;
}

// Numpy array shaped like the grid -> ScalarField (row-major, last axis fastest).
ScalarField to_scalar(const PeriodicGrid& g, const Array& a) {
    if (static_cast<std::size_t>(a.size()) != g.size()) throw std::invalid_argument("array size does not match the grid");
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ScalarField& f) {
    Array out(shape_of(f.grid()));
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

Array directions_array(const DirectionField& P) {
    auto s = shape_of(P.grid());
    s.push_back(static_cast<py::ssize_t>(P.ambient_dim()));
    Array out(s);
    std::copy(P.data().begin(), P.data().end(), out.mutable_data());
    return out;
}

DirectionField to_directions(const PeriodicGrid& g, const Array& a) {
    if (a.ndim() < 1 || static_cast<std::size_t>(a.size()) % g.size() != 0) {
        throw std::invalid_argument("direction array does not match the grid");
    }
    const std::size_t d = static_cast<std::size_t>(a.size()) / g.size();
    return DirectionField(g, d, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict out;
    out["times"] = t.times;
    py::list radii;
    for (const auto& r : t.radii) radii.append(to_array(r));
    out["radii"] = radii;
    py::list dirs;
    for (const auto& P : t.directions) dirs.append(directions_array(P));
    out["directions"] = dirs;
    out["max_principle_ok"] = t.max_principle_ok;
    out["max_principle_excess"] = t.max_principle_excess;
    out["positivity_ok"] = t.positivity_ok;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Polar-split geometric flow solvers";

    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NewtonStagnation>(m, "NewtonStagnation", PyExc_RuntimeError);

    py::class_<PeriodicGrid>(m, "PeriodicGrid")
        .def(py::init([](std::vector<double> lengths, std::vector<std::size_t> resolution) {
                 const std::size_t m = lengths.size();
                 return make_grid(m, std::move(lengths), std::move(resolution));
             }),
             py::arg("lengths"), py::arg("resolution"))
        .def_property_readonly("dim", &PeriodicGrid::dim)
        .def_property_readonly("size", &PeriodicGrid::size)
        .def_property_readonly("lengths", &PeriodicGrid::lengths)
        .def_property_readonly("resolution", &PeriodicGrid::resolutions)
        .def("nodes", [](const PeriodicGrid& g, std::size_t axis) {
            std::vector<double> x(g.resolution(axis));
            for (std::size_t j = 0; j < x.size(); ++j) x[j] = g.coordinate(axis, j);
            return x;
        });

    py::class_<FluxSpec>(m, "FluxSpec")
        .def_static("zero", &FluxSpec::zero, py::arg("m"))
        .def_static("constant", &FluxSpec::constant, py::arg("speeds"))
        .def_static("burgers", &FluxSpec::burgers, py::arg("m"))
        .def_static("polynomial", &FluxSpec::polynomial, py::arg("m"), py::arg("coeffs"))
        .def("with_modulation",
             [](const FluxSpec& s, std::size_t i, double offset, std::vector<std::vector<int>> modes,
                std::vector<double> cos_c, std::vector<double> sin_c) {
                 if (cos_c.size() != modes.size() || sin_c.size() != modes.size()) {
                     throw std::invalid_argument("one cos and one sin coefficient per mode");
                 }
                 Modulation a;
                 a.offset = offset;
                 for (std::size_t k = 0; k < modes.size(); ++k) a.terms.push_back({modes[k], cos_c[k], sin_c[k]});
                 return s.with_modulation(i, a);
             },
             py::arg("component"), py::arg("offset"), py::arg("modes"), py::arg("cos"), py::arg("sin"))
        .def_property_readonly("components", &FluxSpec::components)
        .def("f", &FluxSpec::f)
        .def("g", &FluxSpec::g)
        .def("g_prime", &FluxSpec::g_prime);

    m.def("flux_bound_H", &flux_bound_H, py::arg("spec"), py::arg("M"), py::arg("m"));

    m.def("mean", [](const PeriodicGrid& g, const Array& a) { return mean(to_scalar(g, a)); });
    m.def("sup_norm", [](const PeriodicGrid& g, const Array& a) { return sup_norm(to_scalar(g, a)); });
    m.def("l1_norm", [](const PeriodicGrid& g, const Array& a) { return l1_norm(to_scalar(g, a)); });

    m.def("heat_propagate", [](const PeriodicGrid& g, const Array& a, double t) {
        return to_array(heat_propagate(to_scalar(g, a), t));
    });
    m.def("galilean_shift", [](const PeriodicGrid& g, const Array& a, std::vector<double> c, double t) {
        return to_array(galilean_shift(to_scalar(g, a), c, t));
    });
    m.def("step", [](const PeriodicGrid& g, const Array& a, const FluxSpec& spec, double dt, bool dealias) {
        return to_array(step(to_scalar(g, a), spec, dt, dealias));
    }, py::arg("grid"), py::arg("r"), py::arg("spec"), py::arg("dt"), py::arg("dealias") = true);
    m.def("evolve",
          [](const PeriodicGrid& g, const Array& a, const FluxSpec& spec, double dt, double t_end,
             std::size_t record_every) {
              SolveConfig cfg;
              cfg.dt = dt;
              cfg.t_end = t_end;
              cfg.record_every = record_every;
              Trajectory t;
              {
                  py::gil_scoped_release release;
                  t = evolve(to_scalar(g, a), spec, cfg);
              }
              return trajectory_dict(t);
          },
          py::arg("grid"), py::arg("r0"), py::arg("spec"), py::arg("dt"), py::arg("t_end"), py::arg("record_every") = 1);
    m.def("evolve_coupled",
          [](const PeriodicGrid& g, const Array& r0, const Array& P0, const FluxSpec& spec, double dt, double t_end,
             std::size_t record_every) {
              SolveConfig cfg;
              cfg.dt = dt;
              cfg.t_end = t_end;
              cfg.record_every = record_every;
              return trajectory_dict(evolve_coupled(RadialField(to_scalar(g, r0)), to_directions(g, P0), spec, cfg));
          },
          py::arg("grid"), py::arg("r0"), py::arg("P0"), py::arg("spec"), py::arg("dt"), py::arg("t_end"),
          py::arg("record_every") = 1);

    m.def("contraction_horizon", &contraction_horizon, py::arg("M"), py::arg("H"), py::arg("m"), py::arg("cap") = 1.0);
    m.def("kernel_gradient_l1", &kernel_gradient_l1, py::arg("t"), py::arg("m") = 1);
    m.def("heat_kernel_convolve", [](const PeriodicGrid& g, const Array& a, double t) {
        return to_array(heat_kernel_convolve(to_scalar(g, a), t));
    });
    m.def("picard_solve",
          [](const PeriodicGrid& g, const Array& a, const FluxSpec& spec, std::size_t k_max, double tol) {
              const auto rep = picard_solve(to_scalar(g, a), spec, k_max, tol);
              py::dict out;
              out["T"] = rep.T_used;
              out["M"] = rep.M;
              out["H"] = rep.H;
              out["iterates"] = rep.iterates;
              out["converged"] = rep.converged;
              out["sup_deltas"] = rep.sup_deltas;
              out["final"] = to_array(rep.final);
              out["diagnostic"] = rep.diagnostic;
              return out;
          },
          py::arg("grid"), py::arg("r0"), py::arg("spec"), py::arg("k_max") = 60, py::arg("tol") = 1e-10);

    m.def("solve_cell",
          [](const FluxSpec& spec, const PeriodicGrid& g, double p) {
              const auto sol = solve_cell(spec, g, p);
              py::dict out;
              out["p"] = sol.p;
              out["v"] = to_array(sol.v);
              out["residual"] = sol.residual;
              out["newton_iters"] = sol.newton_iters;
              return out;
          },
          py::arg("spec"), py::arg("grid"), py::arg("p"));

    m.def("ellipse", [](const PeriodicGrid& g, double a, double b) {
        const auto st = make_initial(EllipsePreset{a, b}, g, 2);
        return py::make_tuple(to_array(st.r.field()), directions_array(st.P));
    });
    m.def("reconstruct", [](const PeriodicGrid& g, const Array& r, const Array& P) {
        const auto x = reconstruct(RadialField(to_scalar(g, r)), to_directions(g, P));
        Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(g.size()), static_cast<py::ssize_t>(x.d)});
        std::copy(x.points.begin(), x.points.end(), out.mutable_data());
        return out;
    });

    m.def("config_hash", [](const std::string& text) { return parse_config(text).hash(); });
    m.def("run_verify", [](const std::string& suite) {
        SuiteResult res;
        {
            py::gil_scoped_release release;
            res = run_suite(suite);
        }
        py::list checks;
        for (const auto& c : res.checks) {
            py::dict d;
            d["criterion"] = c.criterion;
            d["name"] = c.name;
            d["passed"] = c.passed;
            d["measured"] = c.measured;
            d["threshold"] = c.threshold;
            checks.append(d);
        }
        py::dict out;
        out["suite"] = res.suite;
        out["passed"] = res.passed();
        out["checks"] = checks;
        return out;
    });
}
