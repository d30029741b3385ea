#pragma once

/// Model files and machine-readable reports.
///
/// Model file format (JSON):
///   {
///     "s": 3,
///     "digit_prefix": [["0","1","5"]],          // optional, default []
///     "digit_cycle":  [["0","1","5"]],          // required, nonempty
///     "prob_prefix":  [["1/3","1/3","1/3"]],    // optional together with
///     "prob_cycle":   [["1/3","1/3","1/3"]]     // prob_cycle; omitted =>
///   }                                           // uniform 1/s everywhere
///
/// Rational entries are strings "[-]digits[/digits]" with positive
/// denominator; plain JSON integers are accepted as a convenience. Every
/// numeric report field is dual-encoded (exact rational plus decimal) so
/// downstream tools never re-derive rationals from decimals.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "subsums/atoms.hpp"
#include "subsums/cdf.hpp"
#include "subsums/classifier.hpp"
#include "subsums/cover.hpp"
#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/rational.hpp"
#include "subsums/sampler.hpp"

namespace subsums {

namespace detail {

inline Rat parse_rational_field(const nlohmann::json& value, const std::string& path) {
    if (value.is_number_integer()) {
        return Rat(Int(value.get<std::int64_t>()));
    }
    if (!value.is_string()) {
        throw validation_error(path + ": expected a rational string like \"-1/2\"");
    }
    return parse_rational_or_throw(value.get<std::string>(), path);
}

template <typename Column>
inline std::vector<Column> parse_columns(const nlohmann::json& array, const std::string& path) {
    if (!array.is_array()) throw validation_error(path + ": expected an array of columns");
    std::vector<Column> columns;
    for (std::size_t c = 0; c < array.size(); ++c) {
        const auto& column = array[c];
        const std::string column_path = path + "[" + std::to_string(c) + "]";
        if (!column.is_array()) {
            throw validation_error(column_path + ": expected an array of rationals");
        }
        Column parsed;
        for (std::size_t i = 0; i < column.size(); ++i) {
            const Rat value =
                parse_rational_field(column[i], column_path + "[" + std::to_string(i) + "]");
            if constexpr (std::is_same_v<Column, DigitColumn>) {
                parsed.digits.push_back(value);
            } else {
                parsed.probs.push_back(value);
            }
        }
        columns.push_back(std::move(parsed));
    }
    return columns;
}

}  // namespace detail

// Parses and validates a model document. A missing probability spec is
// synthesized as uniform 1/s; a half-specified one is rejected.
// Parses without semantic validation: structure and syntax errors still
// throw, but constraint violations (bad s, probs not summing to 1, ...) are
// left for validate() so callers can report them instead of failing.
inline Model model_from_json_unchecked(const nlohmann::json& doc) {
    if (!doc.is_object()) throw validation_error("model file: top level must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        static const char* known[] = {"s", "digit_prefix", "digit_cycle", "prob_prefix",
                                      "prob_cycle"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw validation_error("model file: unknown field '" + key + "'");
        }
    }
    if (!doc.contains("s") || !doc["s"].is_number_integer()) {
        throw validation_error("s: required integer field");
    }

    Model model;
    model.s = doc["s"].get<int>();
    if (doc.contains("digit_prefix")) {
        model.digit_prefix = detail::parse_columns<DigitColumn>(doc["digit_prefix"], "digit_prefix");
    }
    if (!doc.contains("digit_cycle")) throw validation_error("digit_cycle: required field");
    model.digit_cycle = detail::parse_columns<DigitColumn>(doc["digit_cycle"], "digit_cycle");

    const bool has_prob_prefix = doc.contains("prob_prefix");
    const bool has_prob_cycle = doc.contains("prob_cycle");
    if (has_prob_cycle || has_prob_prefix) {
        if (has_prob_prefix) {
            model.prob_prefix = detail::parse_columns<ProbColumn>(doc["prob_prefix"], "prob_prefix");
        }
        if (!has_prob_cycle) {
            throw validation_error("prob_cycle: required when a probability spec is given");
        }
        model.prob_cycle = detail::parse_columns<ProbColumn>(doc["prob_cycle"], "prob_cycle");
        if (!has_prob_prefix && !model.digit_prefix.empty()) {
            throw validation_error("prob_prefix: required when digit_prefix is nonempty and a "
                                   "probability spec is given");
        }
    } else if (model.s >= 2) {
        const Model uniform = uniform_probabilities(model);
        model.prob_prefix = uniform.prob_prefix;
        model.prob_cycle = uniform.prob_cycle;
    }
    return model;
}

inline Model model_from_json(const nlohmann::json& doc) {
    Model model = model_from_json_unchecked(doc);
    const ValidationReport report = validate(model);
    if (!report.ok) {
        std::string what = "model validation failed";
        for (const auto& m : report.messages) what += "; " + m;
        throw validation_error(what);
    }
    return model;
}

namespace detail {

inline nlohmann::json parse_model_file(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) throw validation_error("cannot open model file: " + path.string());
    try {
        return nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& err) {
        throw validation_error("model file " + path.string() + ": " + err.what());
    }
}

}  // namespace detail

inline Model load_model(const std::filesystem::path& path) {
    const nlohmann::json doc = detail::parse_model_file(path);
    try {
        return model_from_json(doc);
    } catch (const validation_error& err) {
        throw validation_error(path.string() + ": " + err.what());
    }
}

// Parsed but not semantically validated; pair with validate() for reporting.
inline Model load_model_unchecked(const std::filesystem::path& path) {
    const nlohmann::json doc = detail::parse_model_file(path);
    try {
        return model_from_json_unchecked(doc);
    } catch (const validation_error& err) {
        throw validation_error(path.string() + ": " + err.what());
    }
}

// ---- JSON reports -------------------------------------------------------

inline nlohmann::json rat_json(const Rat& value) {
    return {{"rational", format_rational(value)}, {"decimal", decimal_string(value)}};
}

inline nlohmann::json to_json(const ValidationReport& report) {
    return {{"ok", report.ok},
            {"is_integer", report.is_integer},
            {"is_complete_residue", report.is_complete_residue},
            {"is_uniform", report.is_uniform},
            {"L", rat_json(report.L)},
            {"messages", report.messages}};
}

inline nlohmann::json to_json(const ProductStatus& status) {
    nlohmann::json out{{"positive", status.positive},
                       {"prefix_factor_decimal", status.prefix_factor_decimal},
                       {"cycle_factor_is_one", status.cycle_factor_is_one},
                       {"cycle_factor_decimal", status.cycle_factor_decimal},
                       {"description", status.description}};
    if (status.prefix_factor) out["prefix_factor"] = format_rational(*status.prefix_factor);
    return out;
}

inline nlohmann::json to_json(const Classification& classification) {
    return {{"verdict", std::string(verdict_name(classification.verdict))},
            {"w_positive", classification.w_status.positive},
            {"q_positive", classification.q_status.positive},
            {"cycle_factor_decimal", classification.q_status.cycle_factor_decimal},
            {"preconditions", to_json(classification.preconditions)},
            {"w", to_json(classification.w_status)},
            {"q", to_json(classification.q_status)}};
}

inline nlohmann::json to_json(const BandReport& report) {
    return {{"level", report.level},
            {"grid_size", report.grid_size},
            {"alpha", report.alpha},
            {"epsilon", report.epsilon},
            {"max_violation", rat_json(report.max_violation)},
            {"truncation_bias", rat_json(report.truncation_bias)},
            {"pass", report.pass},
            {"low_power", report.low_power}};
}

inline nlohmann::json to_json(const LipschitzReport& report) {
    return {{"level", report.level},
            {"max_mass", rat_json(report.max_mass)},
            {"ratio", rat_json(report.ratio)},
            {"satisfied", report.satisfied}};
}

// ---- CSV emission -------------------------------------------------------
// Conventions: ',' separator, '.' decimal point, LF line endings, rows in
// deterministic ascending order. Values are reported in the original
// (de-normalized) coordinates, hence the shift parameters.

inline void write_atoms_csv(std::ostream& out, const AtomTable& table, const Rat& shift) {
    const Int s_pow_n = int_pow(Int(table.model.s), table.level);
    out << "r,mass_num,mass_den,value\n";
    for (const auto& [offset, mass] : table.masses) {
        const Rat value = Rat(Int(offset), s_pow_n) + shift;
        out << offset << ',' << numerator(mass) << ',' << denominator(mass) << ','
            << decimal_string(value) << '\n';
    }
}

inline void write_cover_sequence_csv(std::ostream& out, std::span<const CoverSummary> sequence) {
    out << "n,intervals,total_length_num,total_length_den,total_length_decimal\n";
    for (const auto& row : sequence) {
        out << row.level << ',' << row.interval_count << ',' << numerator(row.total_length)
            << ',' << denominator(row.total_length) << ','
            << decimal_string(row.total_length) << '\n';
    }
}

inline void write_cover_intervals_csv(std::ostream& out, const IntervalCover& cover) {
    out << "lo_num,lo_den,hi_num,hi_den\n";
    for (const auto& interval : cover.intervals) {
        const Rat lo = interval.lo + cover.shift;
        const Rat hi = interval.hi + cover.shift;
        out << numerator(lo) << ',' << denominator(lo) << ',' << numerator(hi) << ','
            << denominator(hi) << '\n';
    }
}

inline void write_cdf_csv(std::ostream& out, std::span<const CdfBounds> curve, const Rat& shift) {
    out << "x_num,x_den,lo_num,lo_den,hi_num,hi_den,lo_decimal,hi_decimal\n";
    for (const auto& bounds : curve) {
        const Rat x = bounds.x + shift;
        out << numerator(x) << ',' << denominator(x) << ',' << numerator(bounds.lo) << ','
            << denominator(bounds.lo) << ',' << numerator(bounds.hi) << ','
            << denominator(bounds.hi) << ',' << decimal_string(bounds.lo) << ','
            << decimal_string(bounds.hi) << '\n';
    }
}

inline void write_samples_csv(std::ostream& out, const SampleBatch& batch, const Rat& shift) {
    out << "index,value_decimal\n";
    for (std::size_t i = 0; i < batch.values.size(); ++i) {
        out << i << ',' << decimal_string(batch.values[i] + shift) << '\n';
    }
}

}  // namespace subsums
