#pragma once

/// Built-in example models and the self-check suite behind `selftest`.
///
/// The checks re-derive the library's core guarantees at small levels:
/// recursion equals brute-force enumeration, masses conserve, complete
/// residue systems fill s^n offsets with mass exactly s^-n, covers shrink
/// monotonically, CDF bounds bracket, and sampling is reproducible.

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "subsums/atoms.hpp"
#include "subsums/cdf.hpp"
#include "subsums/classifier.hpp"
#include "subsums/cover.hpp"
#include "subsums/model.hpp"
#include "subsums/sampler.hpp"

namespace subsums {

// Column helpers for models written out in code.
inline DigitColumn digit_column(std::initializer_list<long> digits) {
    DigitColumn column;
    for (long d : digits) column.digits.emplace_back(d);
    return column;
}

inline ProbColumn prob_column(std::initializer_list<Rat> probs) {
    ProbColumn column;
    for (const auto& p : probs) column.probs.push_back(p);
    return column;
}

// Constant-column model: every position uses the same digits/probabilities.
inline Model constant_model(int s, DigitColumn digits, ProbColumn probs) {
    Model model;
    model.s = s;
    model.digit_cycle = {std::move(digits)};
    model.prob_cycle = {std::move(probs)};
    return model;
}

// The five shipped example models.
inline Model binary_uniform_model() {
    return constant_model(2, digit_column({0, 1}), prob_column({Rat(1, 2), Rat(1, 2)}));
}

inline Model ternary_015_uniform_model() {
    return constant_model(3, digit_column({0, 1, 5}),
                          prob_column({Rat(1, 3), Rat(1, 3), Rat(1, 3)}));
}

inline Model ternary_015_skewed_model() {
    return constant_model(3, digit_column({0, 1, 5}),
                          prob_column({Rat(1, 2), Rat(1, 2), Rat(0)}));
}

inline Model ternary_013_uniform_model() {
    return constant_model(3, digit_column({0, 1, 3}),
                          prob_column({Rat(1, 3), Rat(1, 3), Rat(1, 3)}));
}

inline Model binary_degenerate_model() {
    return constant_model(2, digit_column({0, 1}), prob_column({Rat(1), Rat(0)}));
}

struct ExampleModel {
    std::string name;
    Model model;
    Verdict expected_verdict;
};

inline std::vector<ExampleModel> example_models() {
    return {
        {"binary_uniform", binary_uniform_model(), Verdict::AbsolutelyContinuous},
        {"ternary_015_uniform", ternary_015_uniform_model(), Verdict::AbsolutelyContinuous},
        {"ternary_015_skewed", ternary_015_skewed_model(), Verdict::Singular},
        {"ternary_013_uniform", ternary_013_uniform_model(), Verdict::ContinuousUnclassified},
        {"binary_degenerate", binary_degenerate_model(), Verdict::Discrete},
    };
}

inline bool tables_equal(const AtomTable& a, const AtomTable& b) {
    return a.level == b.level && a.masses == b.masses;
}

// Runs every self-check, printing one line per check. Returns overall pass.
inline bool selftest(std::ostream& out) {
    bool all_ok = true;
    const auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        out << (ok ? "[ok]   " : "[FAIL] ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << '\n';
        all_ok = all_ok && ok;
    };

    const auto examples = example_models();

    for (const auto& example : examples) {
        const Classification result = classify(example.model);
        check("classify " + example.name,
              result.verdict == example.expected_verdict,
              std::string(verdict_name(result.verdict)) + " (expected " +
                  std::string(verdict_name(example.expected_verdict)) + ")");
    }

    // Models that stress the recursion: collisions and negative digits.
    Model collision;
    collision.s = 2;
    collision.digit_prefix = {digit_column({0, 1})};
    collision.digit_cycle = {digit_column({0, 2})};
    collision.prob_prefix = {prob_column({Rat(1, 2), Rat(1, 2)})};
    collision.prob_cycle = {prob_column({Rat(1, 2), Rat(1, 2)})};

    Model negatives = constant_model(3, digit_column({-4, 0, 2}),
                                     prob_column({Rat(1, 6), Rat(1, 3), Rat(1, 2)}));

    std::vector<std::pair<std::string, Model>> oracle_models;
    for (const auto& example : examples) oracle_models.emplace_back(example.name, example.model);
    oracle_models.emplace_back("collision", collision);
    oracle_models.emplace_back("negative_digits", negatives);

    for (const auto& [name, raw] : oracle_models) {
        const Model model = normalize(raw).model;
        bool equal = true;
        bool conserved = true;
        for (std::uint32_t n = 0; n <= 5; ++n) {
            const AtomTable fast = table_at(model, n);
            if (!tables_equal(fast, brute_force_table(model, n))) equal = false;
            if (fast.total_mass() != 1) conserved = false;
        }
        check("oracle equivalence (n<=5) " + name, equal);
        check("mass conservation (n<=5) " + name, conserved);
    }

    // Complete residue systems, uniform probabilities: s^n atoms of mass s^-n.
    const std::vector<std::pair<std::string, Model>> crs_models = {
        {"binary_uniform", binary_uniform_model()},
        {"ternary_015_uniform", ternary_015_uniform_model()},
    };
    for (const auto& [name, model] : crs_models) {
        bool sharp = true;
        for (std::uint32_t n = 0; n <= 8; ++n) {
            const AtomTable table = table_at(model, n);
            const Int expected = int_pow(Int(model.s), n);
            if (Int(table.masses.size()) != expected) sharp = false;
            if (max_mass(table) != Rat(1, expected)) sharp = false;
            if (lipschitz_check(model, n).ratio != 1) sharp = false;
        }
        check("complete residue sharpness (n<=8) " + name, sharp);
    }

    // Cover lengths: nonincreasing everywhere, constant 1 for full binary.
    {
        const auto binary_seq = cover_sequence(binary_uniform_model(), 8);
        bool constant_one = true;
        for (const auto& row : binary_seq) constant_one = constant_one && row.total_length == 1;
        check("binary cover length constant 1", constant_one);

        const auto ternary_seq = cover_sequence(ternary_015_uniform_model(), 8);
        bool above_one = true;
        for (const auto& row : ternary_seq) above_one = above_one && row.total_length >= 1;
        check("ternary cover lengths >= 1", above_one);
        check("ternary cover starts 5/2, 2",
              ternary_seq[0].total_length == Rat(5, 2) && ternary_seq[1].total_length == 2);
    }

    // CDF bounds bracket the uniform binary CDF F(x) = x.
    {
        const Model model = binary_uniform_model();
        bool bracket = true;
        for (int i = 0; i <= 16; ++i) {
            const Rat x(i, 16);
            const CdfBounds bounds = cdf_bounds(model, x, 8);
            if (!(bounds.lo <= x && x <= bounds.hi)) bracket = false;
            if (bounds.hi - bounds.lo > Rat(1, 128)) bracket = false;
        }
        check("binary cdf bounds bracket identity", bracket);
    }

    // Sampling reproducibility and support containment.
    {
        const Model model = ternary_015_uniform_model();
        const SampleBatch a = sample(model, 200, 7, 24);
        const SampleBatch b = sample(model, 200, 7, 24);
        check("sampler determinism", a.values == b.values);
        const Rat top = tail_sup(model, 0);
        bool contained = true;
        for (const auto& v : a.values) contained = contained && v >= 0 && v <= top;
        check("sampler support containment", contained);
    }

    return all_ok;
}

}  // namespace subsums
