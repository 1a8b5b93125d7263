// Python bindings: the manifold type, pointwise operations, and the JSON
// report runners behind the CLI commands.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cosym/builtins.hpp"
#include "cosym/config.hpp"
#include "cosym/dynamics.hpp"
#include "cosym/flux.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"
#include "cosym/reports.hpp"

namespace py = pybind11;
using namespace cosym;

namespace {

std::vector<double> point_list(const Point& p) { return to_coords(p); }

std::string run_json(const std::string& command, const std::string& config_text,
                     std::optional<std::uint64_t> seed, std::optional<double> tolerance,
                     std::optional<int> steps) {
    RunOverrides overrides;
    overrides.seed = seed;
    overrides.tolerance = tolerance;
    overrides.steps = steps;
    const RunOutcome outcome =
        run_command(command, KeyValueConfig::parse(config_text), overrides);
    return outcome.report.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cosymplectic geometry laboratory (C++ core)";

    py::class_<Manifold>(m, "Manifold")
        .def_static("product_torus", &Manifold::product_torus, py::arg("n"), py::arg("weights"),
                    py::arg("reeb_period") = 1.0)
        .def_static(
            "mapping_torus",
            [](const std::vector<std::vector<std::int64_t>>& rows, double period) {
                if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
                    throw std::invalid_argument("monodromy must be a 2x2 integer matrix");
                return Manifold::mapping_torus(
                    MonodromyMatrix{{{rows[0][0], rows[0][1]}, {rows[1][0], rows[1][1]}}}, period);
            },
            py::arg("monodromy"), py::arg("reeb_period") = 1.0)
        .def_static("from_config",
                    [](const std::string& text) { return Manifold::from_config(text); })
        .def_property_readonly("kind",
                               [](const Manifold& m) {
                                   return m.kind() == ManifoldKind::ProductTorus
                                              ? "product_torus"
                                              : "mapping_torus";
                               })
        .def_property_readonly("n", &Manifold::n)
        .def_property_readonly("dim", &Manifold::dim)
        .def_property_readonly("reeb_period", &Manifold::period)
        .def_property_readonly("weights", &Manifold::weights)
        .def("to_config", &Manifold::to_config)
        .def("__repr__", [](const Manifold& m) {
            return "<cosymlab.Manifold dim=" + std::to_string(m.dim()) + ">";
        });

    m.def(
        "canonicalize",
        [](const Manifold& m, const std::vector<double>& raw) {
            return point_list(m.canonicalize(raw));
        },
        py::arg("manifold"), py::arg("coords"),
        "Reduce raw coordinates to the fundamental domain.");

    m.def(
        "reeb_flow",
        [](const Manifold& m, const std::vector<double>& raw, double s) {
            return point_list(m.reeb_flow(m.canonicalize(raw), s));
        },
        py::arg("manifold"), py::arg("coords"), py::arg("s"),
        "Exact Reeb flow for time s.");

    m.def(
        "volume_pairing",
        [](const Manifold& m, const std::vector<double>& raw) {
            return volume_pairing(m, m.canonicalize(raw));
        },
        py::arg("manifold"), py::arg("coords"),
        "eta ^ omega^n on the coordinate frame at the given point.");

    m.def("builtin_field_names", &builtin_field_names);

    m.def(
        "evaluate_field",
        [](const Manifold& m, const std::string& name, double t, const std::vector<double>& raw) {
            return builtin_field(m, name).value(t, m.canonicalize(raw));
        },
        py::arg("manifold"), py::arg("name"), py::arg("t"), py::arg("coords"));

    m.def(
        "poisson_bracket_value",
        [](const Manifold& m, const std::string& h, const std::string& k, double t,
           const std::vector<double>& raw) {
            return poisson_bracket(m, builtin_field(m, h), builtin_field(m, k))
                .value(t, m.canonicalize(raw));
        },
        py::arg("manifold"), py::arg("h"), py::arg("k"), py::arg("t"), py::arg("coords"),
        "Leafwise Poisson bracket of two builtin fields at a point.");

    m.def(
        "hamiltonian_velocity",
        [](const Manifold& m, const std::string& h, double t, const std::vector<double>& raw) {
            const VectorField x = hamiltonian_vector_field(m, builtin_field(m, h));
            const Tangent v = x.evaluator(t, m.canonicalize(raw));
            std::vector<double> out{v.d_theta};
            out.insert(out.end(), v.d_base.begin(), v.d_base.end());
            return out;
        },
        py::arg("manifold"), py::arg("h"), py::arg("t"), py::arg("coords"));

    m.def(
        "flux_of_loop",
        [](const Manifold& m, int axis, double step) {
            const FluxClass flux =
                flux_class(m, translation_loop(m, axis, step), coordinate_cycle_basis(m));
            py::dict out;
            out["h1_pairings"] = flux.h1_pairings;
            out["eta_component"] = flux.eta_component;
            out["basis_labels"] = flux.basis_labels;
            return out;
        },
        py::arg("manifold"), py::arg("axis"), py::arg("step") = 0.01,
        "Flux class of the coordinate translation loop along the given axis.");

    m.def("run_json", &run_json, py::arg("command"), py::arg("config"),
          py::arg("seed") = py::none(), py::arg("tolerance") = py::none(),
          py::arg("steps") = py::none(),
          "Run a named check and return its JSON report as a string.");

    m.def("command_names", &command_names);
}
