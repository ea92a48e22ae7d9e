#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evactree/evalcheck.hpp"
#include "evactree/export.hpp"
#include "evactree/search.hpp"

namespace py = pybind11;
using namespace evactree;

namespace {

SearchConfig config_from(const std::string& document) {
    return document.empty() ? SearchConfig{} : load_config(document);
}

std::string solve_document(const std::string& scenario_doc, const std::string& base_dir,
                           const std::string& config_doc) {
    const Scenario scenario = load_scenario(scenario_doc, base_dir);
    const SearchConfig config = config_from(config_doc);
    Solution sol;
    {
        py::gil_scoped_release release;
        sol = solve(scenario, config);
    }
    return solution_to_json(sol);
}

std::string validate_document(const std::string& solution_doc, const std::string& scenario_doc,
                              const std::string& base_dir) {
    const Scenario scenario = load_scenario(scenario_doc, base_dir);
    return validate_solution(solution_from_json(solution_doc), scenario).to_json();
}

std::string oracle_document(const std::string& scenario_doc, const std::string& base_dir) {
    const Scenario scenario = load_scenario(scenario_doc, base_dir);
    Solution sol;
    {
        py::gil_scoped_release release;
        sol = oracle_solve(scenario);
    }
    return solution_to_json(sol);
}

std::string export_document(const std::string& solution_doc, const std::string& format) {
    const Solution sol = solution_from_json(solution_doc);
    if (format == "graph") return export_graph(sol);
    if (format == "table") return export_table(sol);
    throw std::invalid_argument("unknown export format: " + format);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Evacuation tree solver core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<OracleRefusal>(m, "OracleRefusal", PyExc_ValueError);

    m.def("normalize_scenario",
          [](const std::string& doc, const std::string& base_dir) {
              return serialize_scenario(load_scenario(doc, base_dir));
          },
          py::arg("scenario"), py::arg("base_dir") = ".");
    m.def("solve", &solve_document, py::arg("scenario"), py::arg("base_dir") = ".", py::arg("config") = "");
    m.def("validate", &validate_document, py::arg("solution"), py::arg("scenario"), py::arg("base_dir") = ".");
    m.def("oracle", &oracle_document, py::arg("scenario"), py::arg("base_dir") = ".");
    m.def("export", &export_document, py::arg("solution"), py::arg("format") = "graph");
    m.def("default_config", [] { return serialize_config(SearchConfig{}); });
    m.def("tau_from_range", &tau_from_range, py::arg("range_miles"), py::arg("spacing_miles"));
    m.def("bpr_time", [](double t0, double capacity, double flow, double alpha, double beta) {
        Arc a;
        a.free_flow_time = t0;
        a.capacity = capacity;
        a.bpr_alpha = alpha;
        a.bpr_beta = beta;
        return bpr_time(a, flow);
    }, py::arg("free_flow_time"), py::arg("capacity"), py::arg("flow"), py::arg("alpha") = 0.15, py::arg("beta") = 4.0);
}
