#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "subsums/model_io.hpp"
#include "subsums/selftest.hpp"

using namespace subsums;
using nlohmann::json;
using Catch::Matchers::ContainsSubstring;

namespace {

// Writes `text` to a unique temp file, removed on destruction.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& text) {
        static int counter = 0;
        const auto tag = std::chrono::steady_clock::now().time_since_epoch().count();
        path = std::filesystem::temp_directory_path() /
               ("subsums_io_test_" + std::to_string(tag) + "_" +
                std::to_string(counter++) + ".json");
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

}  // namespace

TEST_CASE("minimal document parses with uniform probabilities synthesized", "[io]") {
    const json doc = json::parse(R"({"s": 2, "digit_cycle": [["0", "1"]]})");
    const Model model = model_from_json(doc);
    CHECK(model == binary_uniform_model());
    CHECK(model.prob_cycle.size() == 1);
    CHECK(model.prob_cycle[0].probs == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("explicit probabilities and prefixes parse", "[io]") {
    const json doc = json::parse(R"({
        "s": 3,
        "digit_prefix": [["0", "1", "2"]],
        "digit_cycle": [["0", "1", "5"]],
        "prob_prefix": [["1/4", "1/4", "1/2"]],
        "prob_cycle": [["1/2", "1/2", "0"]]
    })");
    const Model model = model_from_json(doc);
    CHECK(model.s == 3);
    REQUIRE(model.digit_prefix.size() == 1);
    CHECK(model.digit_prefix[0].digits == std::vector<Rat>{Rat(0), Rat(1), Rat(2)});
    REQUIRE(model.prob_prefix.size() == 1);
    CHECK(model.prob_prefix[0].probs == std::vector<Rat>{Rat(1, 4), Rat(1, 4), Rat(1, 2)});
    REQUIRE(model.prob_cycle.size() == 1);
    CHECK(model.prob_cycle[0].probs == std::vector<Rat>{Rat(1, 2), Rat(1, 2), Rat(0)});
}

TEST_CASE("plain JSON integers are accepted in columns", "[io]") {
    const json doc = json::parse(R"({"s": 3, "digit_cycle": [[0, 1, 5]]})");
    CHECK(model_from_json(doc) == ternary_015_uniform_model());
}

TEST_CASE("negative digits round-trip through strings", "[io]") {
    const json doc = json::parse(R"({"s": 2, "digit_cycle": [["-1", "0"]]})");
    const Model model = model_from_json(doc);
    CHECK(model.digit_cycle[0].digits == std::vector<Rat>{Rat(-1), Rat(0)});
}

TEST_CASE("structural document errors throw with a field path", "[io]") {
    const auto reject = [](const char* text, const char* needle) {
        CHECK_THROWS_MATCHES(model_from_json(json::parse(text)), validation_error,
                             Catch::Matchers::MessageMatches(ContainsSubstring(needle)));
    };

    SECTION("top level must be an object") {
        reject(R"([1, 2, 3])", "top level");
    }
    SECTION("unknown fields are rejected") {
        reject(R"({"s": 2, "digit_cycle": [["0", "1"]], "ratio": 2})", "unknown field 'ratio'");
    }
    SECTION("s is required and must be a JSON integer") {
        reject(R"({"digit_cycle": [["0", "1"]]})", "s: required integer");
        reject(R"({"s": "2", "digit_cycle": [["0", "1"]]})", "s: required integer");
        reject(R"({"s": 2.0, "digit_cycle": [["0", "1"]]})", "s: required integer");
    }
    SECTION("digit_cycle is required") {
        reject(R"({"s": 2})", "digit_cycle: required");
    }
    SECTION("columns must be arrays of rationals") {
        reject(R"({"s": 2, "digit_cycle": "01"})", "digit_cycle: expected an array");
        reject(R"({"s": 2, "digit_cycle": ["01"]})", "digit_cycle[0]: expected an array");
        reject(R"({"s": 2, "digit_cycle": [[0.5, 1]]})", "digit_cycle[0][0]");
        reject(R"({"s": 2, "digit_cycle": [[true, 1]]})", "digit_cycle[0][0]");
    }
    SECTION("bad rational strings carry their element path") {
        reject(R"({"s": 2, "digit_cycle": [["0", "1/0"]]})", "digit_cycle[0][1]");
        reject(R"({"s": 2, "digit_cycle": [["0", "x"]]})", "cannot parse rational 'x'");
    }
    SECTION("half-specified probabilities are rejected") {
        reject(R"({"s": 2, "digit_cycle": [["0", "1"]], "prob_prefix": []})",
               "prob_cycle: required when");
        reject(R"({"s": 2, "digit_prefix": [["0", "1"]], "digit_cycle": [["0", "1"]],
                   "prob_cycle": [["1/2", "1/2"]]})",
               "prob_prefix: required when");
    }
}

TEST_CASE("semantic violations pass unchecked parsing but fail checked parsing", "[io]") {
    const json doc = json::parse(R"({
        "s": 3,
        "digit_cycle": [["0", "1", "5"]],
        "prob_cycle": [["1/2", "1/5", "1/5"]]
    })");

    const Model model = model_from_json_unchecked(doc);
    CHECK(model.s == 3);
    CHECK_FALSE(validate(model).ok);

    CHECK_THROWS_MATCHES(model_from_json(doc), validation_error,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("model validation failed") &&
                             ContainsSubstring("probabilities sum to 9/10")));
}

TEST_CASE("load_model reads a file and prefixes errors with its path", "[io]") {
    SECTION("well-formed file loads") {
        const TempFile file(R"({"s": 3, "digit_cycle": [["0", "1", "5"]]})");
        CHECK(load_model(file.path) == ternary_015_uniform_model());
    }
    SECTION("missing file") {
        CHECK_THROWS_MATCHES(load_model("/nonexistent/model.json"), validation_error,
                             Catch::Matchers::MessageMatches(
                                 ContainsSubstring("cannot open model file") &&
                                 ContainsSubstring("/nonexistent/model.json")));
    }
    SECTION("malformed JSON names the file") {
        const TempFile file("{\"s\": 2,");
        CHECK_THROWS_MATCHES(load_model(file.path), validation_error,
                             Catch::Matchers::MessageMatches(
                                 ContainsSubstring(file.path.string())));
    }
    SECTION("semantic errors name the file") {
        const TempFile file(R"({"s": 1, "digit_cycle": [["0"]]})");
        CHECK_THROWS_MATCHES(load_model(file.path), validation_error,
                             Catch::Matchers::MessageMatches(
                                 ContainsSubstring(file.path.string()) &&
                                 ContainsSubstring("model validation failed")));
    }
    SECTION("load_model_unchecked defers semantic errors to validate()") {
        const TempFile file(R"({"s": 1, "digit_cycle": [["0"]]})");
        const Model model = load_model_unchecked(file.path);
        CHECK(model.s == 1);
        CHECK_FALSE(validate(model).ok);
    }
}

TEST_CASE("shipped model files match the built-in models", "[io]") {
    const std::filesystem::path dir = std::filesystem::path(__FILE__).parent_path() / ".." / "models";
    for (const auto& example : example_models()) {
        const Model loaded = load_model(dir / (example.name + ".json"));
        CHECK(loaded == example.model);
    }
}

TEST_CASE("rational report fields are dual-encoded", "[io]") {
    const json encoded = rat_json(Rat(5, 2));
    CHECK(encoded["rational"] == "5/2");
    CHECK(encoded["decimal"] == "2.5");
    CHECK(rat_json(Rat(-1, 3))["decimal"] == "-0.333333333333333");
}

TEST_CASE("validation reports serialize their flags and messages", "[io]") {
    Model bad = ternary_015_uniform_model();
    bad.prob_cycle[0].probs = {Rat(1, 2), Rat(1, 2), Rat(1, 2)};
    const json doc = to_json(validate(bad));
    CHECK(doc["ok"] == false);
    CHECK(doc["messages"].is_array());
    CHECK(!doc["messages"].empty());

    const json good = to_json(validate(ternary_015_skewed_model()));
    CHECK(good["ok"] == true);
    CHECK(good["is_integer"] == true);
    CHECK(good["is_complete_residue"] == true);  // digits, not probs, decide this
    CHECK(good["is_uniform"] == false);
    CHECK(good["L"]["rational"] == "5");
    CHECK(good["L"]["decimal"] == "5");
    CHECK(good["messages"].empty());
}

TEST_CASE("classifications serialize the verdict and both products", "[io]") {
    const json doc = to_json(classify(ternary_015_skewed_model()));
    CHECK(doc["verdict"] == "Singular");
    CHECK(doc["w_positive"] == false);
    CHECK(doc["q_positive"] == false);
    CHECK(doc["w"]["description"].is_string());
    CHECK(doc["q"]["cycle_factor_decimal"].is_string());
    CHECK(doc["preconditions"]["ok"] == true);

    // prefix_factor appears exactly when the rational is known: always for
    // W, never for the surd-valued Q.
    const json degenerate = to_json(classify(binary_degenerate_model()));
    CHECK(degenerate["verdict"] == "Discrete");
    CHECK(degenerate["w"]["prefix_factor"] == "1");
    CHECK(!degenerate["q"].contains("prefix_factor"));
    const json uniform = to_json(classify(binary_uniform_model()));
    CHECK(uniform["verdict"] == "AbsolutelyContinuous");
    CHECK(uniform["q"]["cycle_factor_decimal"] == "1");
}

TEST_CASE("band and lipschitz reports serialize rationals exactly", "[io]") {
    const Model model = binary_uniform_model();
    const SampleBatch batch = sample(model, 400, 11, 32);
    const json band = to_json(band_check(batch, model, 4, 9, 0.01));
    CHECK(band["level"] == 4);
    CHECK(band["grid_size"] == 9);
    CHECK(band["alpha"] == 0.01);
    CHECK(band["epsilon"].is_number());
    CHECK(band["max_violation"].contains("rational"));
    CHECK(band["truncation_bias"]["rational"] == format_rational(tail_sup(model, 32)));
    CHECK(band["pass"].is_boolean());
    CHECK(band["low_power"] == false);

    const json lip = to_json(lipschitz_check(model, 6));
    CHECK(lip["level"] == 6);
    CHECK(lip["max_mass"]["rational"] == "1/64");
    CHECK(lip["ratio"]["rational"] == "1");
    CHECK(lip["satisfied"] == true);
}

TEST_CASE("atoms CSV lists offsets with exact masses and shifted values", "[io]") {
    const AtomTable table = table_at(binary_uniform_model(), 1);

    std::ostringstream plain;
    write_atoms_csv(plain, table, Rat(0));
    CHECK(plain.str() == "r,mass_num,mass_den,value\n"
                         "0,1,2,0\n"
                         "1,1,2,0.5\n");

    std::ostringstream shifted;
    write_atoms_csv(shifted, table, Rat(-1));
    CHECK(shifted.str() == "r,mass_num,mass_den,value\n"
                           "0,1,2,-1\n"
                           "1,1,2,-0.5\n");
}

TEST_CASE("cover sequence CSV reports exact and decimal lengths", "[io]") {
    const auto sequence = cover_sequence(ternary_015_uniform_model(), 1);
    std::ostringstream out;
    write_cover_sequence_csv(out, sequence);
    CHECK(out.str() == "n,intervals,total_length_num,total_length_den,total_length_decimal\n"
                       "0,1,5,2,2.5\n"
                       "1,2,2,1,2\n");
}

TEST_CASE("cover interval CSV applies the shift to both endpoints", "[io]") {
    const IntervalCover plain = cover(binary_uniform_model(), 3);
    std::ostringstream out;
    write_cover_intervals_csv(out, plain);
    CHECK(out.str() == "lo_num,lo_den,hi_num,hi_den\n0,1,1,1\n");

    const IntervalCover shifted = cover(binary_uniform_model(), 3, Rat(-1, 2));
    std::ostringstream out_shifted;
    write_cover_intervals_csv(out_shifted, shifted);
    CHECK(out_shifted.str() == "lo_num,lo_den,hi_num,hi_den\n-1,2,1,2\n");
}

TEST_CASE("cdf CSV reports shifted x with exact and decimal bounds", "[io]") {
    const Model model = binary_uniform_model();
    const Rat xs[] = {Rat(1, 2)};
    const auto curve = cdf_curve(model, xs, 4);
    std::ostringstream out;
    write_cdf_csv(out, curve, Rat(1));
    CHECK(out.str() == "x_num,x_den,lo_num,lo_den,hi_num,hi_den,lo_decimal,hi_decimal\n"
                       "3,2,7,16,1,2,0.4375,0.5\n");
}

TEST_CASE("samples CSV indexes rows and applies the shift", "[io]") {
    SampleBatch batch;
    batch.values = {Rat(0), Rat(1, 4), Rat(3, 2)};
    std::ostringstream out;
    write_samples_csv(out, batch, Rat(-1));
    CHECK(out.str() == "index,value_decimal\n"
                       "0,-1\n"
                       "1,-0.75\n"
                       "2,0.5\n");
}
