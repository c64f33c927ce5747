#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lfc/ddesim.hpp"
#include "lfc/digraph.hpp"
#include "lfc/errors.hpp"
#include "lfc/matops.hpp"
#include "lfc/scenario.hpp"
#include "lfc/stability.hpp"

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const lfc::Matrix& m) {
    Rows out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

lfc::Matrix from_rows(const Rows& rows) {
    if (rows.empty()) throw lfc::ValidationError("matrix must have at least one row");
    const std::size_t cols = rows.front().size();
    lfc::Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw lfc::ValidationError("matrix rows must have equal length");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

lfc::WeightedDigraph make_graph(int order,
                                const std::vector<std::tuple<int, int, double>>& arcs) {
    std::vector<lfc::Arc> list;
    list.reserve(arcs.size());
    for (const auto& [from, to, weight] : arcs) list.push_back({from, to, weight});
    return lfc::WeightedDigraph(order, std::move(list));
}

py::dict fixed_dict(const lfc::FixedAnalysis& a) {
    py::dict d;
    d["h"] = to_rows(a.h);
    d["p_bar"] = to_rows(a.p_bar);
    d["mu_bar"] = a.mu_bar;
    d["lambda_bar"] = a.lambda_bar;
    d["k_star"] = a.k_star;
    d["k_star_alt"] = a.k_star_alt;
    d["k"] = a.k;
    d["q"] = a.q;
    d["q_matrix"] = to_rows(a.q_matrix);
    d["lambda_min"] = a.lambda_min;
    d["tau"] = a.tau;
    d["norm_convention"] = a.norm_convention;
    d["warnings"] = a.warnings;
    return d;
}

py::dict switched_dict(const lfc::SwitchedAnalysis& a) {
    py::dict d;
    py::list hs;
    for (const auto& h : a.h_list) hs.append(to_rows(h));
    d["h_list"] = hs;
    d["lambda_tilde"] = a.lambda_tilde;
    d["mu_tilde"] = a.mu_tilde;
    d["k_star"] = a.k_star;
    d["k_star_alt"] = a.k_star_alt;
    d["k"] = a.k;
    d["q"] = a.q;
    d["lambda_min"] = a.lambda_min;
    d["tau"] = a.tau;
    d["unbalanced_members"] = a.unbalanced_members;
    d["norm_convention"] = a.norm_convention;
    d["warnings"] = a.warnings;
    return d;
}

py::dict run_scenario(const std::string& json_text, std::optional<unsigned> seed) {
    const lfc::ScenarioConfig cfg = lfc::scenario_from_json(json_text);
    const lfc::SimConfig sim = lfc::build_sim_config(cfg, seed);
    const lfc::Trajectory tr = lfc::integrate(sim);
    const lfc::ErrorMetrics m = lfc::error_metrics(tr);
    py::dict d;
    d["samples"] = tr.samples();
    d["diverged"] = tr.diverged;
    d["final_time"] = tr.times.back();
    d["final_err_x"] = m.final_err_x;
    d["final_err_v"] = m.final_err_v;
    if (m.settle_time)
        d["settle_time"] = *m.settle_time;
    else
        d["settle_time"] = py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph-theoretic stability margins and delayed-dynamics simulation "
              "for leader-following agent networks";

    py::register_exception<lfc::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<lfc::AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);
    py::register_exception<lfc::ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<lfc::Arc>(m, "Arc")
        .def_readonly("from_node", &lfc::Arc::from)
        .def_readonly("to_node", &lfc::Arc::to)
        .def_readonly("weight", &lfc::Arc::weight);

    py::class_<lfc::WeightedDigraph>(m, "WeightedDigraph")
        .def(py::init(&make_graph), py::arg("order"), py::arg("arcs"))
        .def("order", &lfc::WeightedDigraph::order)
        .def("arcs", &lfc::WeightedDigraph::arcs)
        .def("has_arc", &lfc::WeightedDigraph::has_arc)
        .def("weight", &lfc::WeightedDigraph::weight);

    py::class_<lfc::LeaderTopology>(m, "LeaderTopology")
        .def(py::init<lfc::WeightedDigraph, lfc::Vector>(), py::arg("graph"),
             py::arg("leader_weights"))
        .def("graph", &lfc::LeaderTopology::graph)
        .def("leader_weights", &lfc::LeaderTopology::leader_weights);

    m.def("adjacency_matrix",
          [](const lfc::WeightedDigraph& g) { return to_rows(lfc::adjacency_matrix(g)); });
    m.def("laplacian", [](const lfc::WeightedDigraph& g) { return to_rows(lfc::laplacian(g)); });
    m.def("strong_components", &lfc::strong_components);
    m.def("is_strongly_connected", &lfc::is_strongly_connected);
    m.def("is_balanced", &lfc::is_balanced);
    m.def("has_globally_reachable_node", &lfc::has_globally_reachable_node);
    m.def("leader_globally_reachable", &lfc::leader_globally_reachable);

    m.def("eigenvalues", [](const Rows& a) { return lfc::eigenvalues(from_rows(a)).values; });
    m.def("symmetric_eigenvalues",
          [](const Rows& a) { return lfc::symmetric_eigenvalues(from_rows(a)); });
    m.def("is_positive_definite",
          [](const Rows& a) { return lfc::is_positive_definite(from_rows(a)); });
    m.def("spectral_norm", [](const Rows& a) { return lfc::spectral_norm(from_rows(a)); });
    m.def("solve_lyapunov", [](const Rows& h) { return to_rows(lfc::solve_lyapunov(from_rows(h))); });
    m.def("solve_linear",
          [](const Rows& a, const lfc::Vector& b) { return lfc::solve_linear(from_rows(a), b); });

    m.def("h_matrix", [](const lfc::LeaderTopology& t) { return to_rows(lfc::h_matrix(t)); });
    m.def("is_positive_stable",
          [](const Rows& h) { return lfc::is_positive_stable(from_rows(h)); });
    m.def("balanced_definiteness", &lfc::balanced_definiteness);
    m.def("analyze_fixed",
          [](const lfc::LeaderTopology& t, double k, double q) {
              return fixed_dict(lfc::analyze_fixed(t, k, q));
          },
          py::arg("topology"), py::arg("k"), py::arg("q"));
    m.def("analyze_switched",
          [](const std::vector<lfc::LeaderTopology>& ts, double k, double q) {
              return switched_dict(lfc::analyze_switched(ts, k, q));
          },
          py::arg("topologies"), py::arg("k"), py::arg("q"));

    m.def("control_input", &lfc::control_input, py::arg("topology"), py::arg("k"),
          py::arg("x_delayed"), py::arg("x0_delayed"), py::arg("v_now"), py::arg("v0"));

    m.def("builtin_scenario_names", &lfc::builtin_scenario_names);
    m.def("builtin_scenario",
          [](const std::string& name) { return lfc::scenario_to_json(lfc::builtin_scenario(name)); },
          py::arg("name"));
    m.def("run_scenario", &run_scenario, py::arg("scenario_json"),
          py::arg("seed") = std::nullopt,
          "Integrate a scenario JSON document and return a summary dict");
}
