// Command-line front end. Wires model files to the library's analyses and
// emits machine-readable reports (JSON) and tables (CSV).
//
// Exit codes: 0 success, 1 validation failure (including malformed model
// files and bad arguments), 2 resource-guard refusal, 3 internal invariant
// violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subsums/subsums.hpp"

namespace {

using namespace subsums;
namespace fs = std::filesystem;

struct Options {
    std::string model_path;
    std::string out_dir;
    std::uint64_t max_entries = kDefaultMaxEntries;
    std::uint32_t level = 0;
    std::uint32_t max_level = 0;
    bool dump_intervals = false;
    std::size_t grid = 101;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::uint32_t depth = 64;
    std::uint32_t check_level = 0;
    bool check_requested = false;
    double alpha = 0.01;
};

// Writes one named artifact: into --out DIR when given, otherwise stdout.
void emit(const Options& opt, const std::string& name,
          const std::function<void(std::ostream&)>& write) {
    if (opt.out_dir.empty()) {
        write(std::cout);
        return;
    }
    fs::create_directories(opt.out_dir);
    const fs::path path = fs::path(opt.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open output file: " + path.string());
    write(out);
}

void emit_json(const Options& opt, const std::string& name, const nlohmann::json& doc) {
    emit(opt, name, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

// Equispaced rationals spanning [0, top], endpoints included.
std::vector<Rat> support_grid(const Rat& top, std::size_t points) {
    std::vector<Rat> grid;
    grid.reserve(points);
    if (points == 1) {
        grid.push_back(top / 2);
        return grid;
    }
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(top * Int(i) / Int(points - 1));
    }
    return grid;
}

int run_validate(const Options& opt) {
    const Model model = load_model_unchecked(opt.model_path);
    const ValidationReport report = validate(model);
    emit_json(opt, "validation.json", to_json(report));
    return report.ok ? 0 : 1;
}

int run_classify(const Options& opt) {
    const Model model = load_model(opt.model_path);
    emit_json(opt, "classification.json", to_json(classify(model)));
    return 0;
}

int run_atoms(const Options& opt) {
    const NormalizedModel norm = normalize(load_model(opt.model_path));
    const AtomTable table = table_at(norm.model, opt.level, opt.max_entries);
    emit(opt, "atoms.csv", [&](std::ostream& out) { write_atoms_csv(out, table, norm.shift); });
    return 0;
}

int run_measure(const Options& opt) {
    const NormalizedModel norm = normalize(load_model(opt.model_path));
    const auto sequence = cover_sequence(norm.model, opt.max_level, norm.shift, opt.max_entries);
    emit(opt, "cover_sequence.csv",
         [&](std::ostream& out) { write_cover_sequence_csv(out, sequence); });
    if (opt.dump_intervals) {
        const IntervalCover top = cover(norm.model, opt.max_level, norm.shift, opt.max_entries);
        emit(opt, "cover_intervals.csv",
             [&](std::ostream& out) { write_cover_intervals_csv(out, top); });
    }
    return 0;
}

int run_cdf(const Options& opt) {
    const NormalizedModel norm = normalize(load_model(opt.model_path));
    const std::vector<Rat> grid = support_grid(tail_sup(norm.model, 0), opt.grid);
    const auto curve = cdf_curve(norm.model, grid, opt.level, opt.max_entries);
    emit(opt, "cdf.csv", [&](std::ostream& out) { write_cdf_csv(out, curve, norm.shift); });
    return 0;
}

int run_sample(const Options& opt) {
    const NormalizedModel norm = normalize(load_model(opt.model_path));
    const SampleBatch batch = sample(norm.model, opt.count, opt.seed, opt.depth);
    emit(opt, "samples.csv",
         [&](std::ostream& out) { write_samples_csv(out, batch, norm.shift); });
    if (opt.check_requested) {
        const BandReport report =
            band_check(batch, norm.model, opt.check_level, opt.grid, opt.alpha, opt.max_entries);
        emit_json(opt, "band_report.json", to_json(report));
    }
    return 0;
}

int run_selftest() { return selftest(std::cout) ? 0 : 3; }

int dispatch(const std::string& command, const Options& opt) {
    if (command == "validate") return run_validate(opt);
    if (command == "classify") return run_classify(opt);
    if (command == "atoms") return run_atoms(opt);
    if (command == "measure") return run_measure(opt);
    if (command == "cdf") return run_cdf(opt);
    if (command == "sample") return run_sample(opt);
    return run_selftest();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subsum sets of geometric series: exact atoms, classification, covers, "
                 "CDF bounds, and Monte Carlo cross-checks"};
    app.require_subcommand(1);

    Options opt;

    const auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", opt.model_path, "model JSON file")
            ->required()
            ->check(CLI::ExistingFile);
    };
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_dir, "output directory (default: stdout)");
        sub->add_option("--max-entries", opt.max_entries,
                        "resource guard: maximum atom-table entries")
            ->capture_default_str();
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a model file, report as JSON");
    add_model(validate_cmd);
    add_common(validate_cmd);

    auto* classify_cmd =
        app.add_subcommand("classify", "decide the distribution type (JSON report)");
    add_model(classify_cmd);
    add_common(classify_cmd);

    auto* atoms_cmd = app.add_subcommand("atoms", "exact level-n atom masses (CSV)");
    add_model(atoms_cmd);
    add_common(atoms_cmd);
    atoms_cmd->add_option("--level", opt.level, "truncation level n")->required();

    auto* measure_cmd =
        app.add_subcommand("measure", "interval-cover lengths for n = 0..max-level (CSV)");
    add_model(measure_cmd);
    add_common(measure_cmd);
    measure_cmd->add_option("--max-level", opt.max_level, "deepest cover level")->required();
    measure_cmd->add_flag("--intervals", opt.dump_intervals,
                          "also dump the max-level intervals (CSV)");

    auto* cdf_cmd = app.add_subcommand("cdf", "two-sided CDF bounds on a support grid (CSV)");
    add_model(cdf_cmd);
    add_common(cdf_cmd);
    cdf_cmd->add_option("--level", opt.level, "truncation level n")->required();
    cdf_cmd->add_option("--grid", opt.grid, "number of grid points")->capture_default_str();

    auto* sample_cmd = app.add_subcommand("sample", "seeded Monte Carlo draws (CSV)");
    add_model(sample_cmd);
    add_common(sample_cmd);
    sample_cmd->add_option("--count", opt.count, "number of samples")->required();
    sample_cmd->add_option("--seed", opt.seed, "64-bit seed")->capture_default_str();
    sample_cmd->add_option("--depth", opt.depth, "truncation depth")->capture_default_str();
    auto* check_opt = sample_cmd->add_option(
        "--check-level", opt.check_level, "also run a DKW band check against level-n CDF bounds");
    sample_cmd->add_option("--grid", opt.grid, "band-check grid points")->capture_default_str();
    sample_cmd->add_option("--alpha", opt.alpha, "band-check significance level")
        ->capture_default_str();

    app.add_subcommand("selftest", "run the built-in example suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    opt.check_requested = check_opt->count() > 0;

    try {
        return dispatch(app.get_subcommands().front()->get_name(), opt);
    } catch (const resource_limit_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const invariant_error& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 3;
    } catch (const std::runtime_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 3;
    }
}
