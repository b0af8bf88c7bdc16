#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphereivp/experiments.hpp"

namespace py = pybind11;
using namespace sphereivp;

namespace {

using Triple = std::array<double, 3>;

Triple out(const Vec3& v) { return {v.x, v.y, v.z}; }
Vec3 in(const Triple& a) { return {a[0], a[1], a[2]}; }

py::list matrix_out(const SmallMatrix& m) {
    py::list rows;
    for (int i = 0; i < 3; ++i) {
        py::list row;
        for (int j = 0; j < 3; ++j) row.append(m(i, j));
        rows.append(row);
    }
    return rows;
}

/// Thin handle the python layer passes around instead of raw callables.
struct Field {
    VectorFieldSpec spec;
};

py::dict step_dict(const StepResult& r) {
    py::dict d;
    d["next_state"] = out(r.next_state.vec());
    d["velocity"] = out(r.velocity);
    d["midpoint"] = r.midpoint ? py::object(py::cast(out(r.midpoint->vec()))) : py::none();
    d["newton_iters"] = r.newton ? r.newton->iterations : 0;
    d["residual"] = r.newton ? r.newton->final_residual_norm : 0.0;
    d["norm_defect"] = r.norm_defect;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometric integrators for initial value problems on the unit sphere";

    py::register_exception<StepTooLargeError>(m, "StepTooLargeError", PyExc_RuntimeError);
    py::register_exception<NewtonDivergenceError>(m, "NewtonDivergenceError", PyExc_RuntimeError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
    py::register_exception<AntipodalError>(m, "AntipodalError", PyExc_ValueError);

    // ---- geometry -----------------------------------------------------------
    m.def("project", [](const Triple& v) { return out(project(in(v)).vec()); },
          py::arg("v"), "Normalize a nonzero 3-vector onto the unit sphere.");
    m.def("exp_map",
          [](const Triple& p, const Triple& v, double h) {
              return out(exp_map(project(in(p)), in(v), h).vec());
          },
          py::arg("p"), py::arg("v"), py::arg("h"),
          "Follow the great circle leaving p with velocity v for time h.");
    m.def("slerp",
          [](const Triple& a, const Triple& b, double t) {
              return out(slerp(project(in(a)), project(in(b)), t).vec());
          },
          py::arg("a"), py::arg("b"), py::arg("t"),
          "Constant-speed interpolation along the minor great-circle arc.");
    m.def("geodesic_midpoint",
          [](const Triple& a, const Triple& b) {
              return out(geodesic_midpoint(project(in(a)), project(in(b))).vec());
          },
          py::arg("a"), py::arg("b"));

    // ---- fields -------------------------------------------------------------
    py::class_<Field>(m, "Field", "A tangent vector field on the sphere.")
        .def_property_readonly("name", [](const Field& f) { return f.spec.name; })
        .def_property_readonly("has_observable",
                               [](const Field& f) { return f.spec.has_observable(); })
        .def("evaluate",
             [](const Field& f, const Triple& p, double t) { return out(f.spec.evaluate(in(p), t)); },
             py::arg("p"), py::arg("t") = 0.0)
        .def("jacobian",
             [](const Field& f, const Triple& p, double t) {
                 return matrix_out(field_jacobian(f.spec, in(p), t));
             },
             py::arg("p"), py::arg("t") = 0.0,
             "Analytic Jacobian when the field carries one, else central differences.")
        .def("observable",
             [](const Field& f, const Triple& p) {
                 if (!f.spec.has_observable())
                     throw std::invalid_argument("field has no observable");
                 return f.spec.observable(in(p));
             },
             py::arg("p"));

    m.def("problems", [] { return problem_names(); },
          "Names of the built-in benchmark problems.");
    m.def("make_problem", [](const std::string& name) { return Field{make_problem(name)}; },
          py::arg("name"));
    m.def("default_start",
          [](const std::string& name) { return out(default_start(name).vec()); },
          py::arg("name"), "Documented benchmark start state of a built-in problem.");
    m.def("make_field",
          [](const std::string& name, std::function<Triple(Triple, double)> evaluate,
             std::optional<std::function<double(Triple)>> observable) {
              VectorFieldSpec spec;
              spec.name = name;
              spec.evaluate = [evaluate](const Vec3& p, double t) { return in(evaluate(out(p), t)); };
              if (observable) {
                  auto fn = *observable;
                  spec.observable = [fn](const Vec3& p) { return fn(out(p)); };
              }
              return Field{spec};
          },
          py::arg("name"), py::arg("evaluate"), py::arg("observable") = py::none(),
          "Wrap python callables as a field; Jacobians fall back to finite differences.");

    // ---- integration --------------------------------------------------------
    m.def("methods", [] {
        std::vector<std::string> names;
        for (MethodKind k : all_methods()) names.push_back(to_string(k));
        return names;
    });
    m.def("step",
          [](const std::string& method, const Field& f, const Triple& p, double t, double h) {
              return step_dict(step(parse_method(method), f.spec, project(in(p)), t, h));
          },
          py::arg("method"), py::arg("field"), py::arg("p"), py::arg("t"), py::arg("h"),
          "One step; returns a dict with next_state, velocity, midpoint, "
          "newton_iters, residual and norm_defect.");

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("times", [](const Trajectory& t) { return t.times; })
        .def_property_readonly("states",
                               [](const Trajectory& t) {
                                   std::vector<Triple> out_states;
                                   out_states.reserve(t.size());
                                   for (const auto& p : t.states) out_states.push_back(out(p.vec()));
                                   return out_states;
                               })
        .def_property_readonly("norm_defects", [](const Trajectory& t) { return t.norm_defects; })
        .def_property_readonly("newton_iters", [](const Trajectory& t) { return t.newton_iters; })
        .def_property_readonly("observable", [](const Trajectory& t) { return t.observable; })
        .def("__len__", [](const Trajectory& t) { return t.size(); });

    m.def("integrate",
          [](const std::string& method, const Field& f, const Triple& p0, double t0,
             double t_final, double h) {
              return integrate(parse_method(method), f.spec, project(in(p0)), t0, t_final, h);
          },
          py::arg("method"), py::arg("field"), py::arg("p0"), py::arg("t0"), py::arg("t_final"),
          py::arg("h"));
    m.def("hamiltonian_trace",
          [](const Trajectory& traj, const Field& f) { return hamiltonian_trace(traj, f.spec); },
          py::arg("trajectory"), py::arg("field"),
          "Relative observable error per state against the initial value.");
}
