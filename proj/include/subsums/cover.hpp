#pragma once

/// Interval covers of the subsum set.
///
/// Fixing the first n digits confines the series to
/// [r/s^n, r/s^n + tail_sup(n)], so the union of these intervals over all
/// level-n offsets covers M. Successive levels nest (each child interval
/// lies inside its parent), so the exact total length is a nonincreasing
/// upper bound on the Lebesgue measure of M. Offsets are taken from the
/// atom table with uniform probabilities: the cover depends on the digits
/// alone, and zero-probability digits must not drop intervals.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subsums/atoms.hpp"
#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/rational.hpp"

namespace subsums {

struct Interval {
    Rat lo;
    Rat hi;  // closed interval, lo <= hi

    Rat length() const { return hi - lo; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }

    bool operator==(const Interval&) const = default;
};

struct IntervalCover {
    std::uint32_t level = 0;
    // Sorted, pairwise disjoint with strictly positive gaps.
    std::vector<Interval> intervals;
    Rat total_length;
    Rat shift;  // de-normalization offset: M_original lies in (union + shift)
};

struct CoverSummary {
    std::uint32_t level = 0;
    std::size_t interval_count = 0;
    Rat total_length;
};

// Sorted maximal disjoint intervals with the same union; touching endpoints
// merge. Input order is arbitrary; every input must satisfy lo <= hi.
inline std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
    for (const auto& interval : intervals) {
        if (interval.lo > interval.hi) {
            throw invariant_error("merge_intervals: interval with lo > hi");
        }
    }
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> merged;
    for (auto& interval : intervals) {
        if (!merged.empty() && interval.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, interval.hi);
        } else {
            merged.push_back(std::move(interval));
        }
    }
    return merged;
}

namespace detail {

// Candidate intervals share the width tail_sup(n), so consecutive offsets
// r_prev, r merge exactly when r - r_prev <= tail_sup(n) * s^n. Working on
// integer offsets avoids materializing s^n rational endpoints.
inline IntervalCover cover_from_offsets(const AtomTable& support, const Model& model,
                                        const Rat& shift) {
    const std::uint32_t n = support.level;
    const Int s_pow_n = int_pow(Int(model.s), n);
    const Rat width = tail_sup(model, n);
    const Rat gap_threshold = width * s_pow_n;

    IntervalCover cover;
    cover.level = n;
    cover.shift = shift;
    cover.total_length = 0;

    std::int64_t run_start = 0;
    std::int64_t run_end = 0;
    bool in_run = false;
    const auto close_run = [&]() {
        Interval interval{Rat(Int(run_start), s_pow_n), Rat(Int(run_end), s_pow_n) + width};
        cover.total_length += interval.length();
        cover.intervals.push_back(std::move(interval));
    };
    for (const auto& [offset, mass] : support.masses) {
        if (in_run && Rat(Int(offset - run_end)) <= gap_threshold) {
            run_end = offset;
        } else {
            if (in_run) close_run();
            run_start = offset;
            run_end = offset;
            in_run = true;
        }
    }
    if (in_run) close_run();
    return cover;
}

}  // namespace detail

// Level-n cover of the normalized model's subsum set. `shift` is carried
// through so consumers can translate back to the original coordinates.
inline IntervalCover cover(const Model& model, std::uint32_t n, const Rat& shift = Rat(0),
                           std::uint64_t max_entries = kDefaultMaxEntries) {
    const AtomTable support = table_at(uniform_probabilities(model), n, max_entries);
    return detail::cover_from_offsets(support, model, shift);
}

// Total lengths for n = 0..n_max, computed off one incrementally extended
// support table. The sequence is checked to be nonincreasing; a violation
// would falsify the nesting argument and is reported as an internal error.
inline std::vector<CoverSummary> cover_sequence(const Model& model, std::uint32_t n_max,
                                                const Rat& shift = Rat(0),
                                                std::uint64_t max_entries = kDefaultMaxEntries) {
    const Model uniform = uniform_probabilities(model);
    detail::check_entry_cap(uniform, n_max, max_entries);

    std::vector<CoverSummary> sequence;
    AtomTable support = initial_table(uniform);
    for (std::uint32_t n = 0;; ++n) {
        const IntervalCover level_cover = detail::cover_from_offsets(support, model, shift);
        if (!sequence.empty() && level_cover.total_length > sequence.back().total_length) {
            throw invariant_error("cover_sequence: total length increased from level " +
                                  std::to_string(n - 1) + " to " + std::to_string(n));
        }
        sequence.push_back(
            {n, level_cover.intervals.size(), level_cover.total_length});
        if (n == n_max) break;
        support = extend(support, uniform);
    }
    return sequence;
}

}  // namespace subsums
