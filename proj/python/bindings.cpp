#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpdiscrim/repro.hpp"
#include "lpdiscrim/serialize.hpp"

namespace py = pybind11;
using namespace lpdiscrim;

namespace {

FamilySpec family_spec(const std::string& id, const std::map<std::string, double>& params, bool coincident) {
    FamilySpec spec;
    spec.family = parse_family(id);
    spec.params = params;
    spec.allow_coincident_coefficients = coincident;
    return spec;
}

ResourceSpec resource_of(const std::string& kind, double a) {
    if (kind == "none") return ResourceSpec::none();
    if (kind == "mes") return ResourceSpec::mes();
    if (kind == "nmes") return ResourceSpec::nmes(a);
    throw std::invalid_argument("unknown resource kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_lpdiscrim, m) {
    m.doc() = "Exact evaluation of local protocols for distinguishing orthogonal states.";

    py::register_exception<SearchFailure>(m, "SearchFailure", PyExc_RuntimeError);

    m.def("case_ids", &case_ids);

    m.def(
        "family",
        [](const std::string& id, const std::map<std::string, double>& params, bool allow_coincident) {
            return to_json(build_family(family_spec(id, params, allow_coincident))).dump();
        },
        py::arg("family"), py::arg("params") = std::map<std::string, double>{},
        py::arg("allow_coincident") = false);

    m.def(
        "protocol",
        [](const std::string& name, const std::string& resource, double a, double alpha_prime, double theta) {
            const auto r = resource_of(resource, a);
            if (name == "bell-measurement") return to_json(build_groisman_protocol(r)).dump();
            if (name == "alpha-prime") return to_json(build_alpha_prime_protocol(alpha_prime, theta, r)).dump();
            if (name == "parity-then-bell") return to_json(build_parity_then_bell(r)).dump();
            if (name == "bell-bell") return to_json(build_bell_bell(r)).dump();
            throw std::invalid_argument("unknown protocol: " + name);
        },
        py::arg("name"), py::arg("resource") = "mes", py::arg("a") = 0.0, py::arg("alpha_prime") = 0.0,
        py::arg("theta") = 0.0);

    m.def(
        "evaluate",
        [](const std::string& ensemble, const std::string& protocol) {
            return to_json(evaluate(ensemble_from_json(Json::parse(ensemble)), protocol_from_json(Json::parse(protocol))))
                .dump();
        },
        py::arg("ensemble"), py::arg("protocol"));

    m.def(
        "grid_search",
        [](const std::string& ensemble, int copies, double resolution, std::uint64_t seed) {
            SearchConfig config;
            config.resolution = resolution;
            config.seed = seed;
            config = config.with_env_budget();
            py::gil_scoped_release release;
            const auto result = grid_search_lp(ensemble_from_json(Json::parse(ensemble)), copies, config);
            return to_json(result, config).dump();
        },
        py::arg("ensemble"), py::arg("copies") = 1, py::arg("resolution") = 1e-3, py::arg("seed") = 0);

    m.def(
        "construct_schedule",
        [](const std::string& ensemble) {
            const auto config = SearchConfig{}.with_env_budget();
            return to_json(construct_multicopy_schedule(ensemble_from_json(Json::parse(ensemble)), config)).dump();
        },
        py::arg("ensemble"));

    m.def("copy_bound", [](const std::vector<int>& dims) { return copy_bound({dims}); }, py::arg("dims"));

    m.def(
        "negativity",
        [](const std::vector<Complex>& amps, const std::vector<int>& dims, const std::set<int>& left) {
            Vector v(static_cast<Eigen::Index>(amps.size()));
            for (std::size_t k = 0; k < amps.size(); ++k) v[static_cast<Eigen::Index>(k)] = amps[k];
            const PureState state(dims, v, Ownership(dims.size(), "A"));
            return negativity(state, BipartitionSplit::of(left, dims.size()));
        },
        py::arg("amplitudes"), py::arg("dims"), py::arg("left"));

    m.def(
        "run_case",
        [](const std::string& case_id, std::optional<double> a2, std::optional<double> ab, std::optional<double> c2,
           std::optional<double> alpha, std::optional<double> alpha_prime, std::optional<int> copies,
           std::optional<double> resolution, std::optional<std::vector<int>> triple, bool allow_coincident,
           std::uint64_t seed) {
            ReproOptions o;
            o.case_id = case_id;
            o.a2 = a2;
            o.ab = ab;
            o.c2 = c2;
            o.alpha = alpha;
            o.alpha_prime = alpha_prime;
            o.copies = copies;
            o.resolution = resolution;
            o.triple = triple;
            o.allow_coincident = allow_coincident;
            o.seed = seed;
            py::gil_scoped_release release;
            return render_json(run_case(o), 0.0);
        },
        py::arg("case_id"), py::kw_only(), py::arg("a2") = py::none(), py::arg("ab") = py::none(),
        py::arg("c2") = py::none(), py::arg("alpha") = py::none(), py::arg("alpha_prime") = py::none(),
        py::arg("copies") = py::none(), py::arg("resolution") = py::none(), py::arg("triple") = py::none(),
        py::arg("allow_coincident") = false, py::arg("seed") = 0);
}
