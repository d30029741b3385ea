#pragma once

/// Eventually-periodic digit/probability models.
///
/// A model fixes an integer s >= 2 and, for every position n >= 1, a column
/// of s pairwise-distinct rational digits together with a probability column
/// summing to 1. Columns are given as a finite prefix followed by a cycle
/// repeated forever; the series ratio is implicitly 1/s. The subsum set is
///
///     M = { sum_{n>=1} x_n / s^n : x_n a digit of column n },
///
/// and the random series psi picks digit j of column n with probability
/// p_{jn}, independently across columns.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "subsums/rational.hpp"

namespace subsums {

struct DigitColumn {
    std::vector<Rat> digits;  // exactly s entries, pairwise distinct

    bool operator==(const DigitColumn&) const = default;
};

struct ProbColumn {
    std::vector<Rat> probs;  // exactly s entries, >= 0, summing to 1

    bool operator==(const ProbColumn&) const = default;
};

struct Model {
    int s = 2;
    std::vector<DigitColumn> digit_prefix;
    std::vector<DigitColumn> digit_cycle;  // nonempty
    std::vector<ProbColumn> prob_prefix;   // aligned with digit_prefix
    std::vector<ProbColumn> prob_cycle;    // aligned with digit_cycle

    std::size_t prefix_length() const { return digit_prefix.size(); }
    std::size_t cycle_length() const { return digit_cycle.size(); }

    bool operator==(const Model&) const = default;
};

struct ValidationReport {
    bool ok = false;           // structural invariants hold
    bool is_integer = false;   // every digit is an integer
    bool is_complete_residue = false;  // every column is a complete residue system mod s
    bool is_uniform = false;   // every probability column is (1/s, ..., 1/s)
    Rat L = 0;                 // max |digit| over all stored columns
    std::vector<std::string> messages;
};

namespace detail {

inline std::size_t cycle_index(const Model& model, std::uint64_t n) {
    return static_cast<std::size_t>((n - model.prefix_length() - 1) % model.cycle_length());
}

}  // namespace detail

// Column n (1-based) of the unrolled model: prefix column for
// n <= prefix length, cycle column (n - prefix - 1) mod cycle otherwise.
inline std::pair<const DigitColumn&, const ProbColumn&> column_at(const Model& model,
                                                                  std::uint64_t n) {
    const std::size_t prefix = model.prefix_length();
    if (n <= prefix) {
        const auto i = static_cast<std::size_t>(n - 1);
        return {model.digit_prefix[i], model.prob_prefix[i]};
    }
    const std::size_t i = detail::cycle_index(model, n);
    return {model.digit_cycle[i], model.prob_cycle[i]};
}

inline const DigitColumn& digit_column_at(const Model& model, std::uint64_t n) {
    return column_at(model, n).first;
}

inline const ProbColumn& prob_column_at(const Model& model, std::uint64_t n) {
    return column_at(model, n).second;
}

// Structural checks plus the derived flags. Violations are reported, never
// repaired, so callers can show every problem at once.
inline ValidationReport validate(const Model& model) {
    ValidationReport report;
    auto& msg = report.messages;

    if (model.s < 2) msg.push_back("s must be at least 2, got " + std::to_string(model.s));
    if (model.digit_cycle.empty()) msg.push_back("digit_cycle must be nonempty");
    if (model.prob_prefix.size() != model.digit_prefix.size()) {
        msg.push_back("prob_prefix length " + std::to_string(model.prob_prefix.size()) +
                      " does not match digit_prefix length " +
                      std::to_string(model.digit_prefix.size()));
    }
    if (model.prob_cycle.size() != model.digit_cycle.size()) {
        msg.push_back("prob_cycle length " + std::to_string(model.prob_cycle.size()) +
                      " does not match digit_cycle length " +
                      std::to_string(model.digit_cycle.size()));
    }

    const auto s = static_cast<std::size_t>(std::max(model.s, 0));
    const auto check_digits = [&](const std::vector<DigitColumn>& columns, const char* name) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto& digits = columns[c].digits;
            const std::string where = std::string(name) + "[" + std::to_string(c) + "]";
            if (digits.size() != s) {
                msg.push_back(where + " has " + std::to_string(digits.size()) +
                              " digits, expected " + std::to_string(model.s));
                continue;
            }
            for (std::size_t i = 0; i < digits.size(); ++i) {
                for (std::size_t j = i + 1; j < digits.size(); ++j) {
                    if (digits[i] == digits[j]) {
                        msg.push_back(where + ": duplicate digit " + format_rational(digits[i]));
                    }
                }
            }
        }
    };
    const auto check_probs = [&](const std::vector<ProbColumn>& columns, const char* name) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto& probs = columns[c].probs;
            const std::string where = std::string(name) + "[" + std::to_string(c) + "]";
            if (probs.size() != s) {
                msg.push_back(where + " has " + std::to_string(probs.size()) +
                              " probabilities, expected " + std::to_string(model.s));
                continue;
            }
            Rat total = 0;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                if (probs[i] < 0) {
                    msg.push_back(where + "[" + std::to_string(i) + "]: negative probability " +
                                  format_rational(probs[i]));
                }
                total += probs[i];
            }
            if (total != 1) {
                msg.push_back(where + ": probabilities sum to " + format_rational(total) +
                              ", expected 1");
            }
        }
    };
    check_digits(model.digit_prefix, "digit_prefix");
    check_digits(model.digit_cycle, "digit_cycle");
    check_probs(model.prob_prefix, "prob_prefix");
    check_probs(model.prob_cycle, "prob_cycle");

    report.ok = msg.empty();
    if (!report.ok) return report;

    report.is_integer = true;
    report.is_uniform = true;
    report.is_complete_residue = true;
    const Rat uniform(1, model.s);
    const Int s_int(model.s);

    const auto scan_digits = [&](const std::vector<DigitColumn>& columns) {
        for (const auto& column : columns) {
            std::vector<bool> seen(s, false);
            bool column_integer = true;
            for (const auto& digit : column.digits) {
                const Rat magnitude = rat_abs(digit);
                if (magnitude > report.L) report.L = magnitude;
                if (!is_integer(digit)) {
                    report.is_integer = false;
                    column_integer = false;
                }
            }
            if (!column_integer) {
                report.is_complete_residue = false;
                continue;
            }
            for (const auto& digit : column.digits) {
                Int residue = numerator(digit) % s_int;
                if (residue < 0) residue += s_int;
                seen[residue.convert_to<std::size_t>()] = true;
            }
            if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
                report.is_complete_residue = false;
            }
        }
    };
    scan_digits(model.digit_prefix);
    scan_digits(model.digit_cycle);
    if (!report.is_integer) report.is_complete_residue = false;

    const auto scan_probs = [&](const std::vector<ProbColumn>& columns) {
        for (const auto& column : columns) {
            for (const auto& p : column.probs) {
                if (p != uniform) report.is_uniform = false;
            }
        }
    };
    scan_probs(model.prob_prefix);
    scan_probs(model.prob_cycle);

    return report;
}

inline void require_valid(const Model& model) {
    const ValidationReport report = validate(model);
    if (!report.ok) {
        std::string what = "invalid model";
        for (const auto& m : report.messages) what += "; " + m;
        throw validation_error(what);
    }
}

// True when every column is sorted ascending with minimum digit 0.
inline bool is_normalized(const Model& model) {
    const auto normalized = [](const std::vector<DigitColumn>& columns) {
        return std::all_of(columns.begin(), columns.end(), [](const DigitColumn& c) {
            return !c.digits.empty() && c.digits.front() == 0 &&
                   std::is_sorted(c.digits.begin(), c.digits.end());
        });
    };
    return normalized(model.digit_prefix) && normalized(model.digit_cycle);
}

struct NormalizedModel {
    Model model;  // every column sorted ascending, minimum digit 0
    Rat shift;    // sum_{k>=1} min_k / s^k; original M = normalized M + shift
};

// Sorts each column ascending (probabilities permuted alongside) and shifts
// the column minimum to 0. The removed mins form a convergent series whose
// value is returned as the translation between the two subsum sets.
inline NormalizedModel normalize(const Model& model) {
    require_valid(model);
    NormalizedModel result;
    result.model = model;
    result.shift = 0;

    const Int s(model.s);
    const std::size_t prefix_len = model.prefix_length();
    const std::size_t cycle_len = model.cycle_length();

    const auto sort_column = [](DigitColumn& digits, ProbColumn& probs) {
        std::vector<std::size_t> order(digits.digits.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return digits.digits[a] < digits.digits[b];
        });
        DigitColumn sorted_digits;
        ProbColumn sorted_probs;
        for (std::size_t i : order) {
            sorted_digits.digits.push_back(digits.digits[i]);
            sorted_probs.probs.push_back(probs.probs[i]);
        }
        const Rat min = sorted_digits.digits.front();
        for (auto& d : sorted_digits.digits) d -= min;
        digits = std::move(sorted_digits);
        probs = std::move(sorted_probs);
        return min;
    };

    // shift = sum over the prefix + closed-form geometric sum over the cycle.
    Int s_pow = 1;
    for (std::size_t c = 0; c < prefix_len; ++c) {
        s_pow *= s;
        const Rat min = sort_column(result.model.digit_prefix[c], result.model.prob_prefix[c]);
        result.shift += min / s_pow;
    }
    Rat cycle_sum = 0;  // sum_i min_cycle[i] / s^{i+1}
    Int cyc_pow = 1;
    for (std::size_t c = 0; c < cycle_len; ++c) {
        cyc_pow *= s;
        const Rat min = sort_column(result.model.digit_cycle[c], result.model.prob_cycle[c]);
        cycle_sum += min / cyc_pow;
    }
    // sum_{k > prefix} min_k / s^k = cycle_sum * s^{-prefix} / (1 - s^{-C})
    result.shift += cycle_sum / s_pow * Rat(cyc_pow, cyc_pow - 1);

    return result;
}

// Exact value of sum_{k>n} max_k / s^k, where max_k is the largest digit of
// column k. For a normalized model this is the supremum of the tail series
// after the first n digits; it never exceeds the coarse bound L/((s-1) s^n).
inline Rat tail_sup(const Model& model, std::uint64_t n) {
    const Int s(model.s);
    const std::size_t prefix_len = model.prefix_length();
    const std::size_t cycle_len = model.cycle_length();

    const auto column_max = [](const DigitColumn& column) {
        return *std::max_element(column.digits.begin(), column.digits.end());
    };

    Rat acc = 0;
    // Remaining prefix columns, if any.
    for (std::uint64_t k = n + 1; k <= prefix_len; ++k) {
        acc += column_max(model.digit_prefix[static_cast<std::size_t>(k - 1)]) /
               int_pow(s, static_cast<unsigned>(k));
    }

    // Beyond position N1 = max(n, prefix) every column comes from the cycle.
    const std::uint64_t n1 = std::max<std::uint64_t>(n, prefix_len);
    const std::size_t idx0 = static_cast<std::size_t>((n1 - prefix_len) % cycle_len);
    Rat one_cycle = 0;  // sum_i max_cycle[(idx0+i) mod C] / s^{i+1}
    Int cyc_pow = 1;
    for (std::size_t i = 0; i < cycle_len; ++i) {
        cyc_pow *= s;
        one_cycle += column_max(model.digit_cycle[(idx0 + i) % cycle_len]) / Rat(cyc_pow);
    }
    acc += one_cycle / int_pow(s, static_cast<unsigned>(n1)) * Rat(cyc_pow, cyc_pow - 1);
    return acc;
}

// Same digits, every probability column replaced by (1/s, ..., 1/s).
inline Model uniform_probabilities(const Model& model) {
    Model out = model;
    const ProbColumn uniform{std::vector<Rat>(static_cast<std::size_t>(model.s), Rat(1, model.s))};
    out.prob_prefix.assign(out.digit_prefix.size(), uniform);
    out.prob_cycle.assign(out.digit_cycle.size(), uniform);
    return out;
}

}  // namespace subsums
