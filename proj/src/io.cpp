#include "gwcp/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gwcp::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <class Int>
bool parse_integer(std::string_view text, Int& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && !text.empty();
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    std::string out(buf, ptr);
    if (out.find_first_of(".e") == std::string::npos) {
        out += ".0";
    }
    return out;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
        throw Error("not a number: '" + std::string(text) + "'");
    }
    return value;
}

GroupedScores read_calibration(std::istream& in, std::optional<std::size_t> num_groups) {
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    std::vector<std::size_t> labels;
    std::vector<double> scores;
    std::ostringstream problems;
    std::size_t problem_count = 0;
    auto report = [&](std::size_t at, const std::string& msg) {
        problems << "line " << at << ": " << msg << '\n';
        ++problem_count;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!seen_header) {
            if (row != "group,score") {
                throw Error("line " + std::to_string(line_no) +
                            ": expected header 'group,score', got '" + std::string(row) + "'");
            }
            seen_header = true;
            continue;
        }
        const auto fields = split(row, ',');
        if (fields.size() != 2) {
            report(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
            continue;
        }
        long long group = 0;
        if (!parse_integer(fields[0], group) || group < 1) {
            report(line_no, "group must be a positive integer, got '" + std::string(fields[0]) + "'");
            continue;
        }
        if (num_groups && static_cast<std::size_t>(group) > *num_groups) {
            report(line_no, "group " + std::to_string(group) + " exceeds K = " +
                                std::to_string(*num_groups));
            continue;
        }
        double score = 0.0;
        try {
            score = parse_number(fields[1]);
        } catch (const Error&) {
            report(line_no, "score must be a finite number, got '" + std::string(fields[1]) + "'");
            continue;
        }
        if (!std::isfinite(score)) {
            report(line_no, "score must be finite");
            continue;
        }
        labels.push_back(static_cast<std::size_t>(group - 1));
        scores.push_back(score);
    }

    if (!seen_header) {
        throw Error("empty calibration input");
    }
    if (problem_count > 0) {
        std::string msg = problems.str();
        msg.pop_back();
        throw Error(msg);
    }
    if (scores.empty()) {
        throw Error("calibration input has no data rows");
    }
    std::size_t K = 0;
    for (std::size_t g : labels) K = std::max(K, g + 1);
    return GroupedScores::from_labels(num_groups.value_or(K), labels, scores);
}

GroupSimplex parse_simplex(std::string_view text, std::size_t num_groups) {
    text = trim(text);
    if (text == "uniform") {
        return GroupSimplex::uniform(num_groups);
    }
    std::vector<double> probs;
    for (std::string_view part : split(text, ',')) {
        probs.push_back(parse_number(part));
    }
    if (probs.size() != num_groups) {
        throw Error("expected " + std::to_string(num_groups) + " group probabilities, got " +
                    std::to_string(probs.size()));
    }
    return GroupSimplex(std::move(probs));
}

std::vector<std::size_t> parse_counts(std::string_view text) {
    std::vector<std::size_t> counts;
    for (std::string_view part : split(trim(text), ',')) {
        std::size_t value = 0;
        std::size_t repeat = 1;
        const auto x = part.find('x');
        const bool ok = x == std::string_view::npos
                            ? parse_integer(part, value)
                            : parse_integer(part.substr(0, x), value) &&
                                  parse_integer(part.substr(x + 1), repeat);
        if (!ok) {
            throw Error("bad count '" + std::string(part) + "'");
        }
        counts.insert(counts.end(), repeat, value);
    }
    return counts;
}

void write_experiment_csv(const ExperimentTable& table, std::ostream& out) {
    out << kExperimentHeader << '\n';
    for (const ExperimentRow& r : table.rows) {
        out << table.experiment << ',' << r.regime << ',' << r.param << ',' << r.method << ','
            << format_number(r.value) << ',' << format_number(r.ci_half_width) << ',' << r.trials
            << ',' << r.seed << '\n';
    }
}

void write_experiment_json(const ExperimentTable& table, std::ostream& out) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ExperimentRow& r : table.rows) {
        rows.push_back({{"experiment", table.experiment},
                        {"regime", r.regime},
                        {"param", r.param},
                        {"method", r.method},
                        {"value", json_number(r.value)},
                        {"ci_half_width", json_number(r.ci_half_width)},
                        {"trials", r.trials},
                        {"attempted_trials", r.attempted_trials},
                        {"seed", r.seed}});
    }
    out << nlohmann::json{{"experiment", table.experiment}, {"rows", rows}}.dump(2) << '\n';
}

std::string format_rule(const ThresholdRule& rule) {
    if (rule.kind() == ThresholdRule::Kind::global) {
        return format_number(rule.global_threshold().value());
    }
    std::string out;
    const auto thresholds = rule.group_thresholds();
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        if (k > 0) out += '\n';
        out += std::to_string(k + 1) + ',' + format_number(thresholds[k].value());
    }
    return out;
}

std::string format_rule_json(const ThresholdRule& rule) {
    nlohmann::json j;
    if (rule.kind() == ThresholdRule::Kind::global) {
        j = {{"kind", "global"}, {"threshold", json_number(rule.global_threshold().value())}};
    } else {
        nlohmann::json values = nlohmann::json::array();
        for (ExtendedScore s : rule.group_thresholds()) values.push_back(json_number(s.value()));
        j = {{"kind", "per_group"}, {"thresholds", values}};
    }
    return j.dump();
}

}  // namespace gwcp::io
