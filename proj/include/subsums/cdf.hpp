#pragma once

/// Exact two-sided bounds on the distribution function F(x) = P(psi < x).
///
/// At level n the series splits into a partial sum r/s^n with mass S(r;n)
/// and a tail confined to [0, tail_sup(n)], so psi lands in the atom
/// interval [a_r, b_r] = [r/s^n, r/s^n + tail_sup(n)] with probability
/// S(r;n). Summing masses of intervals entirely below x gives a lower
/// bound, summing masses of intervals starting below x an upper bound:
///
///     lo(x) = sum_{b_r < x} S(r;n),    hi(x) = sum_{a_r < x} S(r;n).
///
/// Deeper levels have nested atom intervals, so for fixed x the bounds
/// tighten monotonically as n grows.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subsums/atoms.hpp"
#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/rational.hpp"

namespace subsums {

struct CdfBounds {
    Rat x;  // query point, normalized coordinates
    std::uint32_t level = 0;
    Rat lo;
    Rat hi;
};

struct LipschitzReport {
    std::uint32_t level = 0;
    Rat max_mass;
    Rat ratio;  // max_mass * s^n; the Lipschitz property is ratio <= 1
    bool satisfied = false;
};

namespace detail {

// Shared machinery for evaluating many queries against one atom table.
class CdfEvaluator {
public:
    CdfEvaluator(const Model& model, std::uint32_t level, std::uint64_t max_entries)
        : table_(table_at(model, level, max_entries)),
          s_pow_n_(int_pow(Int(model.s), level)),
          tail_(tail_sup(model, level)) {
        prefix_sums_.reserve(table_.masses.size() + 1);
        prefix_sums_.emplace_back(0);
        for (const auto& [offset, mass] : table_.masses) {
            prefix_sums_.push_back(prefix_sums_.back() + mass);
        }
    }

    // Total mass of atoms with offset strictly below the rational threshold.
    Rat mass_below(const Rat& threshold) const {
        const auto it = std::partition_point(
            table_.masses.begin(), table_.masses.end(),
            [&](const auto& entry) { return Rat(Int(entry.first)) < threshold; });
        return prefix_sums_[static_cast<std::size_t>(it - table_.masses.begin())];
    }

    // lo: atom intervals entirely below x, i.e. r + tail*s^n < x*s^n.
    Rat lower(const Rat& x) const { return mass_below((x - tail_) * s_pow_n_); }
    // hi: atom intervals starting below x, i.e. r < x*s^n.
    Rat upper(const Rat& x) const { return mass_below(x * s_pow_n_); }

    CdfBounds bounds(const Rat& x, std::uint32_t level) const {
        return {x, level, lower(x), upper(x)};
    }

    const AtomTable& table() const { return table_; }

private:
    AtomTable table_;
    Int s_pow_n_;
    Rat tail_;
    std::vector<Rat> prefix_sums_;
};

}  // namespace detail

inline CdfBounds cdf_bounds(const Model& model, const Rat& x, std::uint32_t n,
                            std::uint64_t max_entries = kDefaultMaxEntries) {
    return detail::CdfEvaluator(model, n, max_entries).bounds(x, n);
}

// Bounds at every grid point, sharing one atom table and its prefix sums.
inline std::vector<CdfBounds> cdf_curve(const Model& model, std::span<const Rat> grid,
                                        std::uint32_t n,
                                        std::uint64_t max_entries = kDefaultMaxEntries) {
    const detail::CdfEvaluator evaluator(model, n, max_entries);
    std::vector<CdfBounds> curve;
    curve.reserve(grid.size());
    for (const auto& x : grid) curve.push_back(evaluator.bounds(x, n));
    return curve;
}

// Discrete form of the Lipschitz property |F(x1) - F(x2)| <= |x1 - x2|:
// every level-n atom mass is at most s^-n, i.e. max_mass * s^n <= 1. The
// bound is guaranteed only for uniform probabilities on complete residue
// columns, so other models are rejected as inapplicable rather than reported.
inline LipschitzReport lipschitz_check(const Model& model, std::uint32_t n,
                                       std::uint64_t max_entries = kDefaultMaxEntries) {
    const ValidationReport report = validate(model);
    if (!report.ok || !report.is_uniform || !report.is_complete_residue) {
        throw unsupported_error(
            "lipschitz_check: applicable only to uniform probabilities on complete residue "
            "columns");
    }
    LipschitzReport result;
    result.level = n;
    result.max_mass = max_mass(table_at(model, n, max_entries));
    result.ratio = result.max_mass * int_pow(Int(model.s), n);
    result.satisfied = result.ratio <= 1;
    return result;
}

}  // namespace subsums
