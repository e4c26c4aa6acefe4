#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwcp/conformal.hpp"
#include "gwcp/simulate.hpp"

namespace gwcp::io {

/// Shortest round-trip decimal; integral values keep a trailing ".0";
/// +inf is written as "inf".
std::string format_number(double value);

/// Parses a finite decimal or "inf"/"+inf".
double parse_number(std::string_view text);

/// Reads a `group,score` file. Group labels are 1-based integers; K is the
/// largest label unless `num_groups` is given. All malformed rows are
/// reported together, one line each, with their line numbers.
GroupedScores read_calibration(std::istream& in, std::optional<std::size_t> num_groups = {});

/// "uniform" or a comma-separated list of probabilities.
GroupSimplex parse_simplex(std::string_view text, std::size_t num_groups);

/// Comma-separated counts; "vxr" repeats value v r times, e.g. "1x8,100x2".
std::vector<std::size_t> parse_counts(std::string_view text);

inline constexpr std::string_view kExperimentHeader =
    "experiment,regime,param,method,value,ci_half_width,trials,seed";

void write_experiment_csv(const ExperimentTable& table, std::ostream& out);
void write_experiment_json(const ExperimentTable& table, std::ostream& out);

/// Text rendering of a rule: the global threshold, or one `group,threshold`
/// line per group (1-based).
std::string format_rule(const ThresholdRule& rule);
std::string format_rule_json(const ThresholdRule& rule);

}  // namespace gwcp::io
