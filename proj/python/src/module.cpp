#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gwcp/bounds.hpp"
#include "gwcp/conformal.hpp"
#include "gwcp/io.hpp"
#include "gwcp/simulate.hpp"

namespace py = pybind11;

namespace {

using Groups = std::vector<std::vector<double>>;

gwcp::WeightSource parse_source(const std::string& name) {
    if (name == "calibration") return gwcp::WeightSource::calibration;
    if (name == "pretraining") return gwcp::WeightSource::pretraining;
    if (name == "oracle") return gwcp::WeightSource::oracle;
    throw gwcp::Error("unknown weight source '" + name + "'");
}

// Global rules become a float, per-group rules a list of floats (+inf included).
py::object to_python(const gwcp::ThresholdRule& rule) {
    if (rule.kind() == gwcp::ThresholdRule::Kind::global) {
        return py::float_(rule.global_threshold().value());
    }
    py::list out;
    for (gwcp::ExtendedScore s : rule.group_thresholds()) out.append(s.value());
    return out;
}

py::dict to_python(const gwcp::BoundEstimate& b) {
    py::dict d;
    d["value"] = b.value;
    d["form"] = b.form == gwcp::BoundForm::closed ? "closed" : "monte_carlo";
    d["trials"] = b.trials;
    d["std_error"] = b.std_error;
    return d;
}

std::vector<gwcp::Atom> atoms_of(const std::vector<double>& scores,
                                 const std::vector<double>& weights) {
    if (scores.size() != weights.size()) {
        throw gwcp::Error("scores and weights differ in length");
    }
    std::vector<gwcp::Atom> atoms;
    atoms.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        atoms.push_back({gwcp::ExtendedScore(scores[i]), weights[i]});
    }
    return atoms;
}

}  // namespace

PYBIND11_MODULE(_gwcp, m) {
    m.doc() = "Group-weighted conformal prediction: thresholds, coverage bounds and simulations";

    auto base = py::register_exception<gwcp::Error>(m, "GwcpError", PyExc_ValueError);
    py::register_exception<gwcp::UndefinedWeight>(m, "UndefinedWeightError", base.ptr());
    py::register_exception<gwcp::HypothesisNotMet>(m, "HypothesisNotMetError", base.ptr());

    m.def(
        "weighted_quantile",
        [](const std::vector<double>& scores, const std::vector<double>& weights, double tau) {
            return gwcp::weighted_quantile(gwcp::WeightedScoreDistribution(atoms_of(scores, weights)),
                                           tau)
                .value();
        },
        py::arg("scores"), py::arg("weights"), py::arg("tau"),
        "Smallest positive-weight score whose normalized cumulative weight reaches tau "
        "(+inf when tau > 1).");

    m.def(
        "split_cp_threshold",
        [](const std::vector<double>& scores, double alpha) {
            return gwcp::split_cp_threshold(scores, alpha).value();
        },
        py::arg("scores"), py::arg("alpha"));

    m.def(
        "wcp_threshold",
        [](const std::vector<double>& scores, const std::vector<double>& weights, double test_weight,
           double alpha) { return gwcp::wcp_threshold(scores, weights, test_weight, alpha).value(); },
        py::arg("scores"), py::arg("weights"), py::arg("test_weight"), py::arg("alpha"));

    m.def(
        "gwcp_threshold",
        [](const Groups& groups, const std::vector<double>& q, double alpha) {
            return to_python(
                gwcp::gwcp_threshold(gwcp::GroupedScores(groups), gwcp::GroupSimplex(q), alpha));
        },
        py::arg("groups"), py::arg("q"), py::arg("alpha"),
        "groups[k] holds the calibration scores of group k (0-based).");

    m.def(
        "gwcp_unobserved_threshold",
        [](const Groups& groups, double alpha) {
            return to_python(gwcp::gwcp_unobserved_threshold(gwcp::GroupedScores(groups), alpha));
        },
        py::arg("groups"), py::arg("alpha"));

    m.def(
        "corrected_gwcp_thresholds",
        [](const Groups& groups, const std::vector<double>& q, double alpha) {
            return to_python(gwcp::corrected_gwcp_thresholds(gwcp::GroupedScores(groups),
                                                             gwcp::GroupSimplex(q), alpha));
        },
        py::arg("groups"), py::arg("q"), py::arg("alpha"));

    m.def(
        "estimated_weight_threshold",
        [](const Groups& groups, const std::vector<double>& q, double alpha, const std::string& source,
           std::optional<std::vector<double>> p_true, std::vector<std::int64_t> pretrain_counts,
           std::optional<std::size_t> test_group) {
            gwcp::WeightOptions options;
            options.source = parse_source(source);
            if (p_true) options.p_true = gwcp::GroupSimplex(*p_true);
            options.pretrain_counts = std::move(pretrain_counts);
            options.test_atom_group = test_group;
            return to_python(gwcp::estimated_weight_threshold(
                gwcp::GroupedScores(groups), gwcp::GroupSimplex(q), options, alpha));
        },
        py::arg("groups"), py::arg("q"), py::arg("alpha"), py::arg("source") = "calibration",
        py::arg("p_true") = py::none(), py::arg("pretrain_counts") = std::vector<std::int64_t>{},
        py::arg("test_group") = py::none());

    m.def(
        "thm1_bound",
        [](const std::vector<double>& q, const std::vector<std::size_t>& counts, double alpha) {
            return to_python(gwcp::thm1_bound(gwcp::GroupSimplex(q), counts, alpha));
        },
        py::arg("q"), py::arg("counts"), py::arg("alpha"));

    m.def(
        "thm2_closed_bound",
        [](const std::vector<double>& q, const std::vector<double>& p, std::size_t n, double alpha) {
            return to_python(
                gwcp::thm2_closed_bound(gwcp::GroupSimplex(q), gwcp::GroupSimplex(p), n, alpha));
        },
        py::arg("q"), py::arg("p"), py::arg("n"), py::arg("alpha"));

    m.def(
        "corollary_closed_bound",
        [](const std::vector<double>& p, std::size_t n, double alpha) {
            return to_python(gwcp::corollary_closed_bound(gwcp::GroupSimplex(p), n, alpha));
        },
        py::arg("p"), py::arg("n"), py::arg("alpha"));

    m.def(
        "corollary_empirical_bound",
        [](const std::vector<double>& p, std::size_t n, double alpha, std::size_t trials,
           std::uint64_t seed) {
            const gwcp::GroupSimplex simplex(p);
            gwcp::BoundEstimate b;
            {
                py::gil_scoped_release release;
                b = gwcp::corollary_empirical_bound(simplex, n, alpha, trials, seed);
            }
            return to_python(b);
        },
        py::arg("p"), py::arg("n"), py::arg("alpha"), py::arg("trials") = 100, py::arg("seed") = 0);

    m.def(
        "lei_bound_empirical",
        [](const std::vector<double>& p, const std::vector<double>& q, std::size_t n, double alpha,
           std::size_t trials, std::uint64_t seed) {
            const gwcp::GroupSimplex p_simplex(p);
            const gwcp::GroupSimplex q_simplex(q);
            gwcp::BoundEstimate b;
            {
                py::gil_scoped_release release;
                b = gwcp::lei_bound_empirical(p_simplex, q_simplex, n, alpha, trials, seed);
            }
            return to_python(b);
        },
        py::arg("p"), py::arg("q"), py::arg("n"), py::arg("alpha"), py::arg("trials") = 100,
        py::arg("seed") = 0);

    m.def("tight_example_coverage", &gwcp::tight_example_coverage, py::arg("num_groups"),
          py::arg("n1"), py::arg("alpha"));

    m.def(
        "run_experiment",
        [](const std::string& figure, std::uint64_t seed, std::optional<std::size_t> trials) {
            gwcp::ExperimentOptions options;
            options.seed = seed;
            options.trials = trials;
            gwcp::ExperimentTable table;
            {
                py::gil_scoped_release release;
                table = gwcp::run_experiment(figure, options);
            }
            py::list rows;
            for (const auto& r : table.rows) {
                py::dict d;
                d["experiment"] = table.experiment;
                d["regime"] = r.regime;
                d["param"] = r.param;
                d["method"] = r.method;
                d["value"] = r.value;
                d["ci_half_width"] = r.ci_half_width;
                d["trials"] = r.trials;
                d["attempted_trials"] = r.attempted_trials;
                d["seed"] = r.seed;
                rows.append(d);
            }
            return rows;
        },
        py::arg("figure"), py::arg("seed") = 0, py::arg("trials") = py::none(),
        "Rows of a figure experiment ('fig1'..'fig5'), in CSV row order.");

    m.def(
        "experiment_csv",
        [](const std::string& figure, std::uint64_t seed, std::optional<std::size_t> trials) {
            gwcp::ExperimentOptions options;
            options.seed = seed;
            options.trials = trials;
            std::ostringstream out;
            {
                py::gil_scoped_release release;
                gwcp::io::write_experiment_csv(gwcp::run_experiment(figure, options), out);
            }
            return out.str();
        },
        py::arg("figure"), py::arg("seed") = 0, py::arg("trials") = py::none());
}
