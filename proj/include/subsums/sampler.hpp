#pragma once

/// Seeded Monte Carlo simulation of the random series, for statistical
/// cross-validation of the exact machinery.
///
/// Reproducibility contract: sample i draws from its own SplitMix64
/// substream whose initial state is derived from (seed, i) alone, so a
/// batch is a pure function of (model, seed, depth, count) and any subset
/// of indices can be regenerated independently. Digits are chosen by exact
/// inverse-CDF: a 64-bit draw u is treated as the rational u/2^64 and
/// compared against cumulative column probabilities with integer
/// arithmetic, so no floating point touches the digit choice.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "subsums/cdf.hpp"
#include "subsums/errors.hpp"
#include "subsums/model.hpp"
#include "subsums/rational.hpp"

namespace subsums {

struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// Initial state of sample i's substream.
inline std::uint64_t substream_state(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer{seed + 0x9E3779B97F4A7C15ULL * (index + 1)};
    return mixer.next();
}

struct SampleBatch {
    std::uint64_t seed = 0;
    std::uint32_t depth = 0;   // truncation level K
    std::vector<Rat> values;   // realizations of sum_{k<=K} psi_k / s^k
    // tail_sup(depth): for a normalized model the dropped tail lies in
    // [0, truncation_bias] exactly.
    Rat truncation_bias;
};

struct BandReport {
    std::uint32_t level = 0;     // atom-table level the bounds came from
    std::size_t grid_size = 0;
    double alpha = 0;
    double epsilon = 0;          // DKW half-width sqrt(ln(2/alpha) / (2 count))
    Rat max_violation;           // worst band excess over the grid, 0 when passing
    bool pass = false;
    bool low_power = false;      // epsilon >= 1/2: the band can hardly reject
    Rat truncation_bias;
};

namespace detail {

// Per-column inverse-CDF thresholds, pre-scaled for the comparison
// u * den < num * 2^64 against a raw 64-bit draw u.
struct ColumnSampler {
    std::vector<Int> cum_num_shifted;  // cumulative numerator << 64
    std::vector<Int> cum_den;
    std::vector<std::size_t> digit_index;

    explicit ColumnSampler(const ProbColumn& column) {
        Rat cum = 0;
        for (std::size_t j = 0; j < column.probs.size(); ++j) {
            if (column.probs[j] == 0) continue;
            cum += column.probs[j];
            cum_num_shifted.push_back(numerator(cum) << 64);
            cum_den.push_back(denominator(cum));
            digit_index.push_back(j);
        }
    }

    std::size_t pick(std::uint64_t u) const {
        const Int u_int(u);
        for (std::size_t t = 0; t < digit_index.size(); ++t) {
            if (u_int * cum_den[t] < cum_num_shifted[t]) return digit_index[t];
        }
        return digit_index.back();  // u == 2^64 cannot occur; guard rounding of cum to 1
    }
};

}  // namespace detail

// `count` independent truncated realizations. Works for any valid model,
// integer digits or not; values are exact rationals.
inline SampleBatch sample(const Model& model, std::size_t count, std::uint64_t seed,
                          std::uint32_t depth) {
    const ValidationReport report = validate(model);
    if (!report.ok) {
        std::string what = "sample: invalid model";
        for (const auto& m : report.messages) what += "; " + m;
        throw validation_error(what);
    }
    if (count < 1) throw validation_error("sample: count must be at least 1");
    if (depth < 1) throw validation_error("sample: depth must be at least 1");

    const std::size_t prefix_len = model.prefix_length();
    const std::size_t cycle_len = model.cycle_length();

    // Distinct columns only: positions beyond the prefix repeat with period C.
    std::vector<detail::ColumnSampler> samplers;
    samplers.reserve(prefix_len + cycle_len);
    for (const auto& column : model.prob_prefix) samplers.emplace_back(column);
    for (const auto& column : model.prob_cycle) samplers.emplace_back(column);
    std::vector<const detail::ColumnSampler*> sampler_at(depth);
    std::vector<const DigitColumn*> digits_at(depth);
    for (std::uint32_t k = 1; k <= depth; ++k) {
        const std::size_t idx = (k <= prefix_len)
                                    ? static_cast<std::size_t>(k - 1)
                                    : prefix_len + (k - prefix_len - 1) % cycle_len;
        sampler_at[k - 1] = &samplers[idx];
        digits_at[k - 1] = (k <= prefix_len)
                               ? &model.digit_prefix[k - 1]
                               : &model.digit_cycle[idx - prefix_len];
    }

    const Int s(model.s);
    const Int s_pow_depth = int_pow(s, depth);

    SampleBatch batch;
    batch.seed = seed;
    batch.depth = depth;
    batch.truncation_bias = tail_sup(model, depth);
    batch.values.reserve(count);

    std::vector<std::size_t> choice(depth);
    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 stream{substream_state(seed, i)};
        for (std::uint32_t k = 0; k < depth; ++k) {
            choice[k] = sampler_at[k]->pick(stream.next());
        }
        if (report.is_integer) {
            // value = (sum_k d_k s^{depth-k}) / s^depth, accumulated forward.
            Int num = 0;
            for (std::uint32_t k = 0; k < depth; ++k) {
                num = num * s + numerator(digits_at[k]->digits[choice[k]]);
            }
            batch.values.emplace_back(num, s_pow_depth);
        } else {
            // Horner from the deepest digit: v <- (v + d_k) / s.
            Rat v = 0;
            for (std::uint32_t k = depth; k-- > 0;) {
                v = (v + digits_at[k]->digits[choice[k]]) / s;
            }
            batch.values.push_back(std::move(v));
        }
    }
    return batch;
}

// Distribution-free validation of the exact CDF bounds against the batch's
// empirical CDF, on `grid_size` equispaced points of the support. The DKW
// band allows +-epsilon around the empirical CDF; the upper bound is also
// queried at x + truncation_bias because truncated values undershoot the
// full series. Model must be normalized with integer digits and must be the
// model the batch was drawn from (mismatches are exactly what this detects).
inline BandReport band_check(const SampleBatch& batch, const Model& model, std::uint32_t n_level,
                             std::size_t grid_size, double alpha,
                             std::uint64_t max_entries = kDefaultMaxEntries) {
    if (grid_size < 1) throw validation_error("band_check: grid_size must be at least 1");
    if (!(alpha > 0) || !(alpha < 1)) {
        throw validation_error("band_check: alpha must lie in (0, 1)");
    }
    const std::size_t count = batch.values.size();

    BandReport report;
    report.level = n_level;
    report.grid_size = grid_size;
    report.alpha = alpha;
    report.epsilon = std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(count)));
    report.low_power = report.epsilon >= 0.5;
    report.truncation_bias = batch.truncation_bias;
    report.max_violation = 0;

    const Rat epsilon(report.epsilon);  // exact binary rational of the double
    const detail::CdfEvaluator evaluator(model, n_level, max_entries);

    std::vector<Rat> sorted = batch.values;
    std::sort(sorted.begin(), sorted.end());
    const Rat n_rat(count);
    const auto empirical_below = [&](const Rat& x) {
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
        return Rat(Int(it - sorted.begin())) / n_rat;
    };

    const Rat support_top = tail_sup(model, 0);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const Rat x = (grid_size == 1) ? support_top / 2
                                       : support_top * Int(i) / Int(grid_size - 1);
        const Rat ecdf = empirical_below(x);
        const Rat lo = evaluator.lower(x);
        const Rat hi = evaluator.upper(x + batch.truncation_bias);
        const Rat below = lo - epsilon - ecdf;
        const Rat above = ecdf - hi - epsilon;
        if (below > report.max_violation) report.max_violation = below;
        if (above > report.max_violation) report.max_violation = above;
    }
    report.pass = (report.max_violation == 0);
    return report;
}

}  // namespace subsums
