// Walkthrough: build a model in code, classify it, then shrink an interval
// cover around its subsum set and bound the CDF at a point.

#include <iostream>

#include "subsums/subsums.hpp"

int main() {
    using namespace subsums;

    // ψ = Σ ψ_k / 3^k with ψ_k uniform on {0, 1, 5}.
    Model model = constant_model(3, digit_column({0, 1, 5}),
                                 prob_column({Rat(1, 3), Rat(1, 3), Rat(1, 3)}));

    const Classification verdict = classify(model);
    std::cout << "verdict: " << verdict_name(verdict.verdict) << "\n";
    std::cout << "W positive: " << verdict.w_status.positive
              << ", Q positive: " << verdict.q_status.positive << "\n\n";

    std::cout << "cover lengths (upper bounds on the measure of M):\n";
    for (const CoverSummary& row : cover_sequence(model, 10)) {
        std::cout << "  n=" << row.level << "  intervals=" << row.interval_count
                  << "  length=" << format_rational(row.total_length) << " ~ "
                  << decimal_string(row.total_length, 6) << "\n";
    }

    const Rat x(5, 4);
    const CdfBounds bounds = cdf_bounds(model, x, 10);
    std::cout << "\nF(5/4) in [" << decimal_string(bounds.lo, 6) << ", "
              << decimal_string(bounds.hi, 6) << "]\n";

    const SampleBatch batch = sample(model, 20000, 2024, 40);
    const BandReport band = band_check(batch, model, 8, 81, 0.01);
    std::cout << "DKW band check at level 8: " << (band.pass ? "pass" : "FAIL")
              << " (epsilon " << band.epsilon << ")\n";
    return band.pass ? 0 : 1;
}
