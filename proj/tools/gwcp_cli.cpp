// Command-line driver: calibrate on a data file, evaluate coverage bounds,
// and regenerate the simulation tables.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gwcp/bounds.hpp"
#include "gwcp/conformal.hpp"
#include "gwcp/io.hpp"
#include "gwcp/simulate.hpp"

namespace {

struct CalibrateArgs {
    std::string input;
    std::string q = "uniform";
    std::string q_file;
    double alpha = 0.1;
    std::string method = "gwcp";
    std::string format = "text";
    std::optional<std::size_t> groups;
};

struct BoundArgs {
    std::string name;
    std::string q = "uniform";
    std::string p = "uniform";
    std::string counts;
    std::optional<std::size_t> groups;
    std::size_t n = 0;
    std::size_t n1 = 0;
    double alpha = 0.1;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string format = "text";
};

struct ExperimentArgs {
    std::string figure;
    std::uint64_t seed = 0;
    std::optional<std::size_t> trials;
    std::string out;
    std::string format = "csv";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gwcp::Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t list_length(const std::string& text) {
    if (text == "uniform") return 0;
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), ',')) + 1;
}

int run_calibrate(const CalibrateArgs& args) {
    gwcp::GroupedScores grouped = [&] {
        if (args.input == "-") return gwcp::io::read_calibration(std::cin, args.groups);
        std::ifstream in(args.input);
        if (!in) throw gwcp::Error("cannot read '" + args.input + "'");
        return gwcp::io::read_calibration(in, args.groups);
    }();

    const std::string q_text = args.q_file.empty() ? args.q : read_file(args.q_file);
    const std::size_t K = grouped.num_groups();

    gwcp::ThresholdRule rule = gwcp::ThresholdRule::global(gwcp::ExtendedScore(0.0));
    if (args.method == "gwcp") {
        rule = gwcp::gwcp_threshold(grouped, gwcp::io::parse_simplex(q_text, K), args.alpha);
    } else if (args.method == "corrected") {
        rule = gwcp::corrected_gwcp_thresholds(grouped, gwcp::io::parse_simplex(q_text, K),
                                               args.alpha);
    } else if (args.method == "unobserved") {
        rule = gwcp::gwcp_unobserved_threshold(grouped, args.alpha);
    } else {
        std::vector<double> all;
        for (std::size_t k = 0; k < K; ++k) {
            all.insert(all.end(), grouped.group(k).begin(), grouped.group(k).end());
        }
        rule = gwcp::ThresholdRule::global(gwcp::split_cp_threshold(all, args.alpha));
    }

    std::cout << (args.format == "json" ? gwcp::io::format_rule_json(rule)
                                        : gwcp::io::format_rule(rule))
              << '\n';
    return 0;
}

int run_bound(const BoundArgs& args) {
    auto groups_from = [&](std::initializer_list<std::size_t> candidates) {
        if (args.groups) return *args.groups;
        for (std::size_t c : candidates) {
            if (c > 0) return c;
        }
        throw gwcp::Error("number of groups unknown: pass --K");
    };

    gwcp::BoundEstimate estimate;
    if (args.name == "tight") {
        if (!args.groups) throw gwcp::Error("tight needs --K");
        estimate.value = gwcp::tight_example_coverage(*args.groups, args.n1, args.alpha);
    } else if (args.name == "thm1") {
        const auto counts = gwcp::io::parse_counts(args.counts);
        const std::size_t K = groups_from({counts.size(), list_length(args.q)});
        estimate = gwcp::thm1_bound(gwcp::io::parse_simplex(args.q, K), counts, args.alpha);
    } else if (args.name == "thm2") {
        const std::size_t K = groups_from({list_length(args.p), list_length(args.q)});
        estimate = gwcp::thm2_closed_bound(gwcp::io::parse_simplex(args.q, K),
                                           gwcp::io::parse_simplex(args.p, K), args.n, args.alpha);
    } else if (args.name == "corollary") {
        const std::size_t K = groups_from({list_length(args.p)});
        estimate = gwcp::corollary_closed_bound(gwcp::io::parse_simplex(args.p, K), args.n,
                                                args.alpha);
    } else if (args.name == "corollary-mc") {
        const std::size_t K = groups_from({list_length(args.p)});
        estimate = gwcp::corollary_empirical_bound(gwcp::io::parse_simplex(args.p, K), args.n,
                                                   args.alpha, args.trials, args.seed);
    } else if (args.name == "lei") {
        const std::size_t K = groups_from({list_length(args.p), list_length(args.q)});
        estimate = gwcp::lei_bound_empirical(gwcp::io::parse_simplex(args.p, K),
                                             gwcp::io::parse_simplex(args.q, K), args.n,
                                             args.alpha, args.trials, args.seed);
    }

    const bool mc = estimate.form == gwcp::BoundForm::monte_carlo;
    if (args.format == "json") {
        std::cout << "{\"bound\":\"" << args.name << "\",\"value\":"
                  << gwcp::io::format_number(estimate.value)
                  << ",\"form\":\"" << (mc ? "monte_carlo" : "closed") << "\",\"trials\":"
                  << estimate.trials << ",\"std_error\":"
                  << gwcp::io::format_number(estimate.std_error) << "}\n";
    } else if (mc) {
        std::cout << gwcp::io::format_number(estimate.value) << ' '
                  << gwcp::io::format_number(estimate.std_error) << '\n';
    } else {
        std::cout << gwcp::io::format_number(estimate.value) << '\n';
    }
    return 0;
}

int run_experiment(const ExperimentArgs& args) {
    gwcp::ExperimentOptions options;
    options.seed = args.seed;
    options.trials = args.trials;
    const gwcp::ExperimentTable table = gwcp::run_experiment(args.figure, options);

    std::ostringstream buffer;
    if (args.format == "json") {
        gwcp::io::write_experiment_json(table, buffer);
    } else {
        gwcp::io::write_experiment_csv(table, buffer);
    }
    if (args.out.empty()) {
        std::cout << buffer.str();
        return 0;
    }
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out || !(out << buffer.str()) || !out.flush()) {
        throw gwcp::Error("cannot write '" + args.out + "'");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-weighted conformal prediction: calibration, coverage bounds, simulations"};
    app.require_subcommand(1);

    CalibrateArgs cal;
    auto* calibrate = app.add_subcommand("calibrate", "Compute a threshold from a group,score file");
    calibrate->add_option("input", cal.input, "Calibration CSV ('-' for stdin)")->required();
    auto* q_opt = calibrate->add_option("--q", cal.q, "Target group probabilities: 'uniform' or p1,p2,...");
    calibrate->add_option("--q-file", cal.q_file, "File holding the comma-separated q vector")
        ->excludes(q_opt);
    calibrate->add_option("--alpha", cal.alpha, "Miscoverage level in (0,1)")->required();
    calibrate->add_option("--method", cal.method, "gwcp | corrected | unobserved | split")
        ->check(CLI::IsMember({"gwcp", "corrected", "unobserved", "split"}));
    calibrate->add_option("--K", cal.groups, "Number of groups (default: largest label)");
    calibrate->add_option("--format", cal.format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    BoundArgs bnd;
    auto* bound = app.add_subcommand("bound", "Evaluate a coverage lower bound");
    bound->add_option("name", bnd.name, "thm1 | thm2 | corollary | corollary-mc | lei | tight")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "corollary", "corollary-mc", "lei", "tight"}));
    bound->add_option("--q", bnd.q, "Target probabilities: 'uniform' or a list");
    bound->add_option("--p", bnd.p, "Training probabilities: 'uniform' or a list");
    bound->add_option("--counts", bnd.counts, "Group counts, e.g. 1x10 or 1,5,100x3");
    bound->add_option("--K", bnd.groups, "Number of groups");
    bound->add_option("--n", bnd.n, "Sample size");
    bound->add_option("--n1", bnd.n1, "Smallest group size (tight)");
    bound->add_option("--alpha", bnd.alpha, "Miscoverage level")->required();
    bound->add_option("--trials", bnd.trials, "Monte Carlo trials (default 100)");
    bound->add_option("--seed", bnd.seed, "Random seed (default 0)");
    bound->add_option("--format", bnd.format, "text | json")->check(CLI::IsMember({"text", "json"}));

    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "Regenerate a simulation table");
    experiment->add_option("figure", exp.figure, "fig1 | fig2 | fig3 | fig4 | fig5")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "fig5"}));
    experiment->add_option("--seed", exp.seed, "Random seed (default 0)");
    experiment->add_option("--trials", exp.trials, "Override the default trial count");
    experiment->add_option("--out", exp.out, "Output path (default: stdout)");
    experiment->add_option("--format", exp.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*calibrate) return run_calibrate(cal);
        if (*bound) return run_bound(bnd);
        if (*experiment) return run_experiment(exp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
