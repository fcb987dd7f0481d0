#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "binquest/matrix.hpp"
#include "binquest/synth.hpp"
#include "binquest/textio.hpp"

#include "support.hpp"

using namespace binquest;
using bqtest::TempDir;

namespace {

const char* kSchema2 = R"([
  {"code": "Q1A", "group": 1, "label": "first"},
  {"code": "Q1B", "group": 1, "label": "second"}
])";

}  // namespace

TEST_CASE("load_matrix accepts a minimal well-formed file") {
    TempDir dir("corpus_load");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1A,Q1B\nr1,1,0\nr2,0,1\n");
    const ResponseMatrix m = load_matrix(dir.file("m.csv"), dir.file("schema.json"));
    CHECK(m.n_rows() == 2);
    CHECK(m.n_cols() == 2);
    CHECK(m.cell(0, 0) == 1);
    CHECK(m.cell(0, 1) == 0);
    CHECK(m.cell(1, 1) == 1);
    CHECK(m.respondent_ids[0] == "r1");
}

TEST_CASE("load_matrix reorders columns to schema order") {
    TempDir dir("corpus_order");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1B,Q1A\nr1,1,0\n");
    const ResponseMatrix m = load_matrix(dir.file("m.csv"), dir.file("schema.json"));
    CHECK(m.questions[0].code == "Q1A");
    CHECK(m.cell(0, 0) == 0);  // Q1A
    CHECK(m.cell(0, 1) == 1);  // Q1B
}

TEST_CASE("load_matrix names the row and column of a bad cell") {
    TempDir dir("corpus_badcell");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1A,Q1B\nr1,1,0\nr2,0,1\nr3,0,2\n");
    try {
        load_matrix(dir.file("m.csv"), dir.file("schema.json"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("Q1B") != std::string::npos);
    }
}

TEST_CASE("load_matrix rejects duplicate respondent ids") {
    TempDir dir("corpus_dup");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1A,Q1B\nr1,1,0\nr1,0,1\n");
    CHECK_THROWS_WITH_AS(load_matrix(dir.file("m.csv"), dir.file("schema.json")),
                         doctest::Contains("duplicate respondent id r1"), DataError);
}

TEST_CASE("load_matrix rejects header codes missing from the schema and vice versa") {
    TempDir dir("corpus_missing");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1A,Q9X\nr1,1,0\n");
    CHECK_THROWS_WITH_AS(load_matrix(dir.file("m.csv"), dir.file("schema.json")),
                         doctest::Contains("Q9X missing from schema"), DataError);
    write_file(dir.file("m2.csv"), "id,Q1A\nr1,1\n");
    CHECK_THROWS_WITH_AS(load_matrix(dir.file("m2.csv"), dir.file("schema.json")),
                         doctest::Contains("Q1B missing from matrix header"), DataError);
}

TEST_CASE("load_matrix rejects blank cells instead of imputing") {
    TempDir dir("corpus_blank");
    write_file(dir.file("schema.json"), kSchema2);
    write_file(dir.file("m.csv"), "id,Q1A,Q1B\nr1,1,\n");
    CHECK_THROWS_AS(load_matrix(dir.file("m.csv"), dir.file("schema.json")), DataError);
}

TEST_CASE("save/load round-trips canonical files byte for byte") {
    TempDir dir("corpus_roundtrip");
    write_file(dir.file("schema.json"), kSchema2);
    const std::string canonical = "id,Q1A,Q1B\nr1,1,0\nr2,0,1\nr3,1,1\n";
    write_file(dir.file("m.csv"), canonical);
    const ResponseMatrix m = load_matrix(dir.file("m.csv"), dir.file("schema.json"));
    CHECK(matrix_to_csv(m) == canonical);
}

TEST_CASE("validate flags zero-variance columns and reports ok correctly") {
    const ResponseMatrix good = bqtest::make_matrix({{1, 0}, {0, 1}});
    const ValidationReport ok = validate(good);
    CHECK(ok.ok());
    CHECK(ok.errors.empty());
    CHECK(ok.warnings.empty());

    const ResponseMatrix constant = bqtest::make_matrix({{0, 1}, {0, 0}});
    const ValidationReport warned = validate(constant);
    CHECK(warned.ok());
    REQUIRE(warned.warnings.size() == 1);
    CHECK(warned.warnings[0].locus == "column Q1");
    CHECK(warned.warnings[0].message.find("zero variance") != std::string::npos);
}

TEST_CASE("validate reports duplicate ids built in memory") {
    ResponseMatrix m = bqtest::make_matrix({{1, 0}, {0, 1}});
    m.respondent_ids[1] = m.respondent_ids[0];
    const ValidationReport report = validate(m);
    CHECK_FALSE(report.ok());
    CHECK(report.errors[0].message.find("duplicate respondent id") != std::string::npos);
}

TEST_CASE("encode_categorical produces one-hot rows") {
    const std::vector<QuestionMeta> options = {
        {"Q4A", 4, "a"}, {"Q4B", 4, "b"}, {"Q4C", 4, "c"}};
    const ResponseMatrix m = encode_categorical({{"r1", 1}}, options);
    REQUIRE(m.n_rows() == 1);
    CHECK(m.cell(0, 0) == 0);
    CHECK(m.cell(0, 1) == 1);
    CHECK(m.cell(0, 2) == 0);
}

TEST_CASE("encode_categorical rejects out-of-range indexes and double selections") {
    const std::vector<QuestionMeta> options = {
        {"Q4A", 4, "a"}, {"Q4B", 4, "b"}, {"Q4C", 4, "c"}};
    CHECK_THROWS_AS(encode_categorical({{"r1", 5}}, options), DataError);
    CHECK_THROWS_AS(encode_categorical({{"r1", 0}, {"r1", 1}}, options), DataError);
    CHECK_THROWS_WITH_AS(encode_categorical({{"r1", 0}}, options, {"r1", "r2"}),
                         doctest::Contains("r2: no selection"), DataError);
}

TEST_CASE("encode_categorical column sums count the selections") {
    const std::vector<QuestionMeta> options = {
        {"Q4A", 4, "a"}, {"Q4B", 4, "b"}, {"Q4C", 4, "c"}};
    const ResponseMatrix m =
        encode_categorical({{"r1", 0}, {"r2", 1}, {"r3", 2}, {"r4", 0}}, options);
    std::vector<int> sums(3, 0);
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) sums[j] += m.cell(i, j);
    }
    CHECK(sums == std::vector<int>{2, 1, 1});
}

TEST_CASE("encode_categorical rows each sum to exactly one") {
    SplitMix64 rng(41);
    const std::vector<QuestionMeta> options = {
        {"Q4A", 4, "a"}, {"Q4B", 4, "b"}, {"Q4C", 4, "c"}, {"Q4D", 4, "d"}};
    std::vector<std::pair<std::string, int>> choices;
    for (int i = 0; i < 50; ++i) {
        choices.emplace_back("r" + std::to_string(i), static_cast<int>(rng.below(4)));
    }
    const ResponseMatrix m = encode_categorical(choices, options);
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        int sum = 0;
        for (std::size_t j = 0; j < m.n_cols(); ++j) sum += m.cell(i, j);
        CHECK(sum == 1);
    }
}

TEST_CASE("synth_mixture degenerate probabilities give constant matrices") {
    MixtureSpec zero;
    zero.weights = {1.0};
    zero.probs = {{0.0, 0.0, 0.0}};
    zero.n_rows = 5;
    zero.seed = 7;
    const SynthResult all_zero = synth_mixture(zero);
    CHECK(all_zero.matrix.n_rows() == 5);
    CHECK(all_zero.matrix.n_cols() == 3);
    for (auto c : all_zero.matrix.cells) CHECK(c == 0);
    for (int l : all_zero.true_labels) CHECK(l == 0);

    MixtureSpec one = zero;
    one.probs = {{1.0, 1.0, 1.0}};
    const SynthResult all_one = synth_mixture(one);
    for (auto c : all_one.matrix.cells) CHECK(c == 1);
}

TEST_CASE("synth_mixture labels match row content for separated components") {
    MixtureSpec spec;
    spec.weights = {0.5, 0.5};
    spec.probs = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    spec.n_rows = 200;
    spec.seed = 99;
    const SynthResult r = synth_mixture(spec);
    for (std::size_t i = 0; i < r.matrix.n_rows(); ++i) {
        const int expected = r.true_labels[i];
        for (std::size_t j = 0; j < r.matrix.n_cols(); ++j) {
            CHECK(r.matrix.cell(i, j) == expected);
        }
    }
}

TEST_CASE("synth_mixture is deterministic in the seed") {
    MixtureSpec spec;
    spec.weights = {0.3, 0.7};
    spec.probs = {{0.2, 0.8, 0.5}, {0.9, 0.1, 0.4}};
    spec.n_rows = 64;
    spec.seed = 1234;
    const SynthResult a = synth_mixture(spec);
    const SynthResult b = synth_mixture(spec);
    CHECK(a.matrix.cells == b.matrix.cells);
    CHECK(a.true_labels == b.true_labels);
    CHECK(matrix_to_csv(a.matrix) == matrix_to_csv(b.matrix));
}

TEST_CASE("synth_mixture validates its spec") {
    MixtureSpec bad;
    bad.weights = {1.0};
    bad.probs = {{0.5}};
    bad.n_rows = 0;
    CHECK_THROWS_AS(synth_mixture(bad), std::invalid_argument);
    bad.n_rows = 1;
    bad.weights = {};
    bad.probs = {};
    CHECK_THROWS_AS(synth_mixture(bad), std::invalid_argument);
    bad.weights = {0.6, 0.6};
    bad.probs = {{0.5}, {0.5}};
    CHECK_THROWS_AS(synth_mixture(bad), std::invalid_argument);
}

TEST_CASE("mixture spec parses from JSON") {
    const MixtureSpec spec = mixture_spec_from_json(
        R"({"weights": [0.5, 0.5], "probs": [[0.1, 0.9], [0.9, 0.1]], "n_rows": 10, "seed": 3})");
    CHECK(spec.n_components() == 2);
    CHECK(spec.n_questions() == 2);
    CHECK(spec.n_rows == 10);
    CHECK(spec.seed == 3);
    CHECK_THROWS_AS(mixture_spec_from_json("{"), DataError);
    CHECK_THROWS_AS(mixture_spec_from_json(R"({"weights": [1.0]})"), DataError);
}

TEST_CASE("select_columns keeps requested codes in order") {
    const ResponseMatrix m = bqtest::make_matrix({{1, 0, 1}, {0, 1, 1}});
    const ResponseMatrix sub = select_columns(m, {"Q3", "Q1"});
    CHECK(sub.n_cols() == 2);
    CHECK(sub.questions[0].code == "Q3");
    CHECK(sub.cell(0, 0) == 1);
    CHECK(sub.cell(1, 1) == 0);
    CHECK_THROWS_AS(select_columns(m, {"nope"}), std::invalid_argument);
}
