#pragma once

/// Lebesgue structure of the distribution of the random series.
///
/// Two infinite products decide everything:
///
///   W = prod_n max_j p_{jn}          (discreteness criterion)
///   Q = prod_n sum_j sqrt(p_{jn}/s)  (absolute-continuity criterion)
///
/// For an eventually-periodic probability spec both are decidable with
/// rational arithmetic alone: each W factor equals 1 iff its column is
/// degenerate (some probability is 1), each Q factor equals 1 iff its column
/// is exactly uniform (the Cauchy-Schwarz equality case), and an infinite
/// product of cycle factors is positive iff one full cycle's factor is
/// exactly 1. Decimal factor values are reported as diagnostics only; they
/// never feed a verdict.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "subsums/model.hpp"
#include "subsums/rational.hpp"

namespace subsums {

struct ProductStatus {
    bool positive = false;
    // Exact product of the prefix factors; set for W, where factors are
    // rational. Q's prefix factors are surds, reported in decimal only.
    std::optional<Rat> prefix_factor;
    std::string prefix_factor_decimal;  // 30 significant digits
    bool cycle_factor_is_one = false;   // one full cycle's factor equals 1 exactly
    std::string cycle_factor_decimal;   // 30 significant digits
    std::string description;
};

enum class Verdict {
    Discrete,
    Singular,
    AbsolutelyContinuous,
    ContinuousUnclassified,
};

inline std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Discrete: return "Discrete";
        case Verdict::Singular: return "Singular";
        case Verdict::AbsolutelyContinuous: return "AbsolutelyContinuous";
        case Verdict::ContinuousUnclassified: return "ContinuousUnclassified";
    }
    return "Unknown";
}

struct Classification {
    Verdict verdict = Verdict::ContinuousUnclassified;
    ProductStatus w_status;
    ProductStatus q_status;
    ValidationReport preconditions;
};

namespace detail {

inline constexpr unsigned kDiagnosticDigits = 30;
// Working precision for the sqrt enclosures; leaves a wide margin over the
// 30 reported digits even after multiplying a full cycle of factors.
inline constexpr unsigned kSqrtDigits = 45;

inline Rat column_max_prob(const ProbColumn& column) {
    Rat best = 0;
    for (const auto& p : column.probs) best = std::max(best, p);
    return best;
}

inline bool column_is_degenerate(const ProbColumn& column) {
    return column_max_prob(column) == 1;
}

inline bool column_is_uniform(const ProbColumn& column, int s) {
    const Rat uniform(1, s);
    for (const auto& p : column.probs) {
        if (p != uniform) return false;
    }
    return true;
}

// Enclosure of one Q factor: sum_j sqrt(p_j / s).
inline std::pair<Rat, Rat> q_factor_enclosure(const ProbColumn& column, int s) {
    Rat lo = 0, hi = 0;
    for (const auto& p : column.probs) {
        const auto bounds = sqrt_enclosure(p / s, kSqrtDigits);
        lo += bounds.first;
        hi += bounds.second;
    }
    return {lo, hi};
}

inline std::string midpoint_decimal(const std::pair<Rat, Rat>& enclosure) {
    return decimal_string((enclosure.first + enclosure.second) / 2, kDiagnosticDigits);
}

}  // namespace detail

// Levy criterion product. Every factor lies in [1/s, 1], so the prefix
// contributes a positive rational; the infinite cycle part is positive iff
// every cycle column is degenerate (factor exactly 1).
inline ProductStatus compute_W(const Model& model) {
    ProductStatus status;

    Rat prefix = 1;
    for (const auto& column : model.prob_prefix) prefix *= detail::column_max_prob(column);
    status.prefix_factor = prefix;
    status.prefix_factor_decimal = decimal_string(prefix, detail::kDiagnosticDigits);

    Rat cycle = 1;
    bool all_degenerate = true;
    for (const auto& column : model.prob_cycle) {
        cycle *= detail::column_max_prob(column);
        all_degenerate = all_degenerate && detail::column_is_degenerate(column);
    }
    status.cycle_factor_is_one = (cycle == 1);
    status.cycle_factor_decimal = decimal_string(cycle, detail::kDiagnosticDigits);
    status.positive = status.cycle_factor_is_one && prefix > 0;

    if (status.cycle_factor_is_one) {
        status.description = "every cycle column is degenerate (max probability 1), so one "
                             "cycle's factor equals 1 and W = " + format_rational(prefix);
    } else {
        status.description = "one full cycle contributes factor " + format_rational(cycle) +
                             " < 1, so the infinite product W is 0";
    }
    return status;
}

// Kakutani criterion product. Each factor sum_j sqrt(p_j/s) lies in (0, 1]
// and equals 1 iff the column is exactly uniform; the positivity decision is
// that rational comparison, the surd value is evaluated only for diagnostics.
inline ProductStatus compute_Q(const Model& model) {
    ProductStatus status;

    std::pair<Rat, Rat> prefix{1, 1};
    for (const auto& column : model.prob_prefix) {
        const auto factor = detail::q_factor_enclosure(column, model.s);
        prefix = {prefix.first * factor.first, prefix.second * factor.second};
    }
    status.prefix_factor_decimal = detail::midpoint_decimal(prefix);

    std::pair<Rat, Rat> cycle{1, 1};
    bool all_uniform = true;
    for (const auto& column : model.prob_cycle) {
        const auto factor = detail::q_factor_enclosure(column, model.s);
        cycle = {cycle.first * factor.first, cycle.second * factor.second};
        all_uniform = all_uniform && detail::column_is_uniform(column, model.s);
    }
    status.cycle_factor_is_one = all_uniform;
    status.cycle_factor_decimal =
        all_uniform ? "1" : detail::midpoint_decimal(cycle);
    status.positive = all_uniform;

    if (all_uniform) {
        status.description = "every cycle column is uniform (all probabilities 1/s), so one "
                             "cycle's factor equals 1 and Q > 0";
    } else {
        status.description = "some cycle column is not uniform; one full cycle contributes "
                             "factor ~" + status.cycle_factor_decimal +
                             " < 1, so the infinite product Q is 0";
    }
    return status;
}

// Ordered verdict rules:
//   1. W > 0                                   -> Discrete
//   2. W = 0, Q > 0, complete residue columns  -> AbsolutelyContinuous
//   3. W = 0, Q = 0                            -> Singular
//   4. W = 0, Q > 0, residue gate fails        -> ContinuousUnclassified
// Rule 4 marks distributions that are continuous but beyond the reach of
// the absolute-continuity criterion, whose proof needs every column to be a
// complete residue system mod s.
inline Classification classify(const Model& model) {
    Classification result;
    result.preconditions = validate(model);
    if (!result.preconditions.ok) {
        std::string what = "classify: invalid model";
        for (const auto& m : result.preconditions.messages) what += "; " + m;
        throw validation_error(what);
    }
    result.w_status = compute_W(model);
    result.q_status = compute_Q(model);

    if (result.w_status.positive) {
        result.verdict = Verdict::Discrete;
    } else if (result.q_status.positive && result.preconditions.is_complete_residue) {
        result.verdict = Verdict::AbsolutelyContinuous;
    } else if (!result.q_status.positive) {
        result.verdict = Verdict::Singular;
    } else {
        result.verdict = Verdict::ContinuousUnclassified;
    }
    return result;
}

}  // namespace subsums
