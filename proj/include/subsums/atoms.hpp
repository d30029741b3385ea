#pragma once

/// Exact atom masses of the truncated series.
///
/// After fixing the first n digits, the partial sum takes values r/s^n for
/// integer offsets r, and the mass S(r;n) of an offset is the total
/// probability of all digit tuples reaching it. Offsets obey the recursion
///
///     r' = s*r + d,       mass' = mass * p(d),
///
/// because each earlier digit's weight gains one factor of s at the next
/// level; offsets reached by several tuples accumulate their masses. The
/// same table can be built by enumerating all s^n tuples directly, which
/// serves as the independent oracle for the recursion.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/rational.hpp"

namespace subsums {

inline constexpr std::uint64_t kDefaultMaxEntries = 10'000'000;

struct AtomTable {
    std::uint32_t level = 0;
    // Ascending offsets, every mass > 0, masses sum to exactly 1.
    std::vector<std::pair<std::int64_t, Rat>> masses;
    Model model;  // the (normalized, integer-digit) model the table belongs to

    Rat total_mass() const {
        Rat total = 0;
        for (const auto& [offset, mass] : masses) total += mass;
        return total;
    }
};

namespace detail {

inline void require_normalized(const Model& model, const char* op) {
    if (!is_normalized(model)) {
        throw validation_error(std::string(op) +
                               ": model must be normalized first (see normalize())");
    }
}

// Integer digits of column n, or unsupported_error. Integer offsets are the
// whole point of the atom table; rational-digit models are still served by
// the sampler, which never forms offsets.
inline std::vector<std::int64_t> integer_digits(const Model& model, std::uint64_t n,
                                                const char* op) {
    const DigitColumn& column = digit_column_at(model, n);
    std::vector<std::int64_t> digits;
    digits.reserve(column.digits.size());
    for (const auto& d : column.digits) {
        if (!is_integer(d)) {
            throw unsupported_error(std::string(op) + ": column " + std::to_string(n) +
                                    " has non-integer digit " + format_rational(d) +
                                    "; integer offsets are unavailable for this model, "
                                    "use the sampler instead");
        }
        digits.push_back(numerator(d).convert_to<std::int64_t>());
    }
    return digits;
}

inline void check_entry_cap(const Model& model, std::uint32_t n, std::uint64_t max_entries) {
    if (int_pow(Int(model.s), n) > Int(max_entries)) {
        throw resource_limit_error("level " + std::to_string(n) + " projects s^n = " +
                                   int_pow(Int(model.s), n).str() + " entries, above the cap of " +
                                   std::to_string(max_entries) +
                                   " (raise --max-entries to override)");
    }
}

}  // namespace detail

// Level 0: the empty product, all mass on offset 0.
inline AtomTable initial_table(const Model& model) {
    detail::require_normalized(model, "initial_table");
    AtomTable table;
    table.level = 0;
    table.masses.emplace_back(0, Rat(1));
    table.model = model;
    return table;
}

// One more digit: every (r, mass) spawns (s*r + d_j, mass * p_j) for each
// digit with positive probability; equal offsets are summed.
inline AtomTable extend(const AtomTable& table, const Model& model) {
    const std::uint64_t next_column = static_cast<std::uint64_t>(table.level) + 1;
    const auto digits = detail::integer_digits(model, next_column, "extend");
    const ProbColumn& probs = prob_column_at(model, next_column);
    const auto s = static_cast<std::int64_t>(model.s);

    std::vector<std::pair<std::int64_t, Rat>> children;
    children.reserve(table.masses.size() * digits.size());
    for (const auto& [offset, mass] : table.masses) {
        for (std::size_t j = 0; j < digits.size(); ++j) {
            const Rat& p = probs.probs[j];
            if (p == 0) continue;
            children.emplace_back(s * offset + digits[j], mass * p);
        }
    }
    std::sort(children.begin(), children.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    AtomTable next;
    next.level = table.level + 1;
    next.model = model;
    next.masses.reserve(children.size());
    for (auto& child : children) {
        if (!next.masses.empty() && next.masses.back().first == child.first) {
            next.masses.back().second += child.second;
        } else {
            next.masses.push_back(std::move(child));
        }
    }
    return next;
}

// n-fold extension of the level-0 table. Refuses upfront when the projected
// entry count s^n exceeds the cap.
inline AtomTable table_at(const Model& model, std::uint32_t n,
                          std::uint64_t max_entries = kDefaultMaxEntries) {
    detail::check_entry_cap(model, n, max_entries);
    AtomTable table = initial_table(model);
    for (std::uint32_t k = 0; k < n; ++k) table = extend(table, model);
    return table;
}

inline Rat max_mass(const AtomTable& table) {
    Rat best = 0;
    for (const auto& [offset, mass] : table.masses) best = std::max(best, mass);
    return best;
}

// Independent oracle: enumerate all digit tuples (j_1, ..., j_n) and
// accumulate probability products by the offset r = sum_k d_{j_k k} s^{n-k}.
// Must equal table_at(model, n) entry for entry.
inline AtomTable brute_force_table(const Model& model, std::uint32_t n,
                                   std::uint64_t max_entries = kDefaultMaxEntries) {
    detail::require_normalized(model, "brute_force_table");
    detail::check_entry_cap(model, n, max_entries);

    std::vector<std::vector<std::int64_t>> digits;
    std::vector<const ProbColumn*> probs;
    for (std::uint64_t k = 1; k <= n; ++k) {
        digits.push_back(detail::integer_digits(model, k, "brute_force_table"));
        probs.push_back(&prob_column_at(model, k));
    }

    std::map<std::int64_t, Rat> accumulated;
    const auto s = static_cast<std::int64_t>(model.s);
    const auto walk = [&](auto&& self, std::uint32_t k, std::int64_t offset, const Rat& mass) -> void {
        if (k == n) {
            accumulated[offset] += mass;
            return;
        }
        for (std::size_t j = 0; j < digits[k].size(); ++j) {
            const Rat& p = probs[k]->probs[j];
            if (p == 0) continue;
            self(self, k + 1, s * offset + digits[k][j], mass * p);
        }
    };
    walk(walk, 0, 0, Rat(1));

    AtomTable table;
    table.level = n;
    table.model = model;
    table.masses.assign(accumulated.begin(), accumulated.end());
    return table;
}

}  // namespace subsums
