#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "binquest/rules.hpp"

#include "oracles.hpp"
#include "support.hpp"

using namespace binquest;
using bqtest::make_matrix;


TEST_CASE("conversion rate on the worked proportions") {
    CHECK(conversion_rate(0.5, 0.75) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(conversion_rate(0.3, 0.3) == 0.0);
    CHECK(conversion_rate(0.4, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("conversion rate extremes stay defined and inputs are range-checked") {
    // p_a = 1 only admits drops (denominator p_a) and p_a = 0 only admits
    // rises (denominator 1 - p_a), so valid proportions never hit an
    // undefined denominator.
    CHECK(conversion_rate(1.0, 0.5) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(conversion_rate(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(conversion_rate(1.0, 1.0) == 0.0);
    CHECK(conversion_rate(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(conversion_rate(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(conversion_rate(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("conversion rate bounds and zero-iff-equal on random proportions") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const double pa = 0.01 + 0.98 * rng.uniform();
        const double pab = rng.uniform();
        const double rate = conversion_rate(pa, pab);
        CHECK(rate >= -1.0 - 1e-12);
        CHECK(rate <= 1.0 + 1e-12);
        if (pab == pa) CHECK(rate == 0.0);
        if (rate == 0.0) CHECK(pab == pa);
        if (pab > pa) CHECK(rate > 0.0);
        if (pab < pa) CHECK(rate < 0.0);
    }
}

TEST_CASE("independent balanced columns yield no rules") {
    // Exact product structure: all four combinations once.
    const ResponseMatrix m = make_matrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    MiningConfig config;
    config.min_support = 1;
    config.min_abs_conversion = 0.0;
    MiningSummary summary;
    const auto rules = mine_rules(m, config, &summary);
    CHECK(rules.empty());
    CHECK(summary.pairs_evaluated == 2);
    // Conversion rate is exactly zero, so the significance gate never fires.
    CHECK(summary.skipped_not_significant == 2);
}

TEST_CASE("constructed contingency example: rate 0.8, z = 8") {
    // N=400, B yes 100, A yes 200, A and B 90.
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 400; ++i) {
        const bool b = i < 100;
        bool a;
        if (b) a = i < 90;                  // 90 of the first 100
        else a = i < 210;                   // 110 of the remaining 300
        rows.push_back({a ? 1 : 0, b ? 1 : 0});
    }
    const ResponseMatrix m = make_matrix(rows);
    MiningConfig config;
    const auto rules = mine_rules(m, config);
    REQUIRE_FALSE(rules.empty());
    const Rule* found = nullptr;
    for (const auto& r : rules) {
        if (r.b_code == "Q2" && r.a_code == "Q1") found = &r;
    }
    REQUIRE(found != nullptr);
    CHECK(found->cond.p_a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(found->cond.p_a_given_b == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(found->conversion_rate == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(found->support == 100);
    CHECK(found->test.z == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(found->test.significant);
}

TEST_CASE("same-group pairs are dropped when cross_group_only is set") {
    std::vector<QuestionMeta> questions = {{"Q1A", 1, "a"}, {"Q1B", 1, "b"}};
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 200; ++i) {
        const int v = i < 100 ? 1 : 0;
        rows.push_back({v, v});  // perfectly dependent
    }
    const ResponseMatrix m = make_matrix(rows, questions);
    MiningConfig config;
    MiningSummary summary;
    CHECK(mine_rules(m, config, &summary).empty());
    CHECK(summary.skipped_same_group == 2);

    config.cross_group_only = false;
    const auto rules = mine_rules(m, config);
    CHECK(rules.size() == 2);
    CHECK(rules[0].conversion_rate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exclusion pairs silence a relation in both directions") {
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < 200; ++i) {
        const int v = i < 100 ? 1 : 0;
        rows.push_back({v, v});
    }
    const ResponseMatrix m = make_matrix(rows);  // distinct groups by default
    MiningConfig config;
    CHECK(mine_rules(m, config).size() == 2);
    config.exclusion_pairs.insert({"Q1", "Q2"});
    MiningSummary summary;
    CHECK(mine_rules(m, config, &summary).empty());
    CHECK(summary.skipped_excluded == 2);
}

TEST_CASE("mine_rules equals the brute-force oracle on random matrices") {
    SplitMix64 rng(7771);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 8 + rng.below(9);   // n <= 16
        const std::size_t mcols = 2 + rng.below(7);  // M <= 8
        const ResponseMatrix m = bqtest::random_matrix(rng, n, mcols, 0.2 + 0.6 * rng.uniform());
        MiningConfig config;
        config.min_support = 1 + static_cast<std::int64_t>(rng.below(4));
        config.min_abs_conversion = 0.1 * rng.uniform();
        config.alpha = 0.2;  // small n needs a loose gate to retain anything
        const auto got = mine_rules(m, config);
        auto expected = bqtest::oracle_mine(m, config);
        REQUIRE(got.size() == expected.size());
        // Compare as sets keyed by (b, a).
        for (const auto& g : got) {
            const Rule* match = nullptr;
            for (const auto& e : expected) {
                if (e.b_code == g.b_code && e.a_code == g.a_code) match = &e;
            }
            REQUIRE(match != nullptr);
            CHECK(std::abs(g.conversion_rate - match->conversion_rate) < 1e-12);
            CHECK(g.support == match->support);
            CHECK(std::abs(g.test.z - match->test.z) < 1e-12);
            CHECK(std::abs(g.test.p_value - match->test.p_value) < 1e-12);
        }
    }
}

TEST_CASE("raising thresholds only removes rules") {
    SplitMix64 rng(555);
    const ResponseMatrix m = bqtest::random_matrix(rng, 60, 6, 0.4);
    MiningConfig loose;
    loose.min_support = 1;
    loose.min_abs_conversion = 0.0;
    loose.alpha = 0.5;
    const auto base = mine_rules(m, loose);

    auto contains = [](const std::vector<Rule>& rules, const Rule& r) {
        for (const auto& x : rules) {
            if (x.b_code == r.b_code && x.a_code == r.a_code) return true;
        }
        return false;
    };
    for (double min_conv : {0.05, 0.2, 0.5}) {
        MiningConfig tight = loose;
        tight.min_abs_conversion = min_conv;
        for (const auto& r : mine_rules(m, tight)) CHECK(contains(base, r));
    }
    for (std::int64_t support : {5, 15, 30}) {
        MiningConfig tight = loose;
        tight.min_support = support;
        const auto subset = mine_rules(m, tight);
        CHECK(subset.size() <= base.size());
        for (const auto& r : subset) CHECK(contains(base, r));
    }
}

TEST_CASE("duplicating every row preserves rates and doubles support") {
    SplitMix64 rng(31);
    ResponseMatrix m = bqtest::random_matrix(rng, 30, 4, 0.4);
    MiningConfig config;
    config.min_support = 1;
    config.min_abs_conversion = 0.0;
    config.alpha = 0.9999;  // keep everything comparable
    const auto before = mine_rules(m, config);

    ResponseMatrix doubled = m;
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        doubled.respondent_ids.push_back(m.respondent_ids[i] + "_copy");
        for (std::size_t j = 0; j < m.n_cols(); ++j) doubled.cells.push_back(m.cell(i, j));
    }
    const auto after = mine_rules(doubled, config);
    REQUIRE(after.size() == before.size());
    for (const auto& b : before) {
        const Rule* match = nullptr;
        for (const auto& a : after) {
            if (a.b_code == b.b_code && a.a_code == b.a_code) match = &a;
        }
        REQUIRE(match != nullptr);
        CHECK(match->conversion_rate == doctest::Approx(b.conversion_rate).epsilon(1e-12));
        CHECK(match->cond.p_a == doctest::Approx(b.cond.p_a).epsilon(1e-12));
        CHECK(match->support == 2 * b.support);
    }
}

TEST_CASE("rules sort by falling absolute rate with code tie-breaks") {
    SplitMix64 rng(91);
    const ResponseMatrix m = bqtest::random_matrix(rng, 50, 5, 0.4);
    MiningConfig config;
    config.min_support = 1;
    config.min_abs_conversion = 0.0;
    config.alpha = 0.9999;
    const auto rules = mine_rules(m, config);
    for (std::size_t i = 1; i < rules.size(); ++i) {
        const double prev = std::abs(rules[i - 1].conversion_rate);
        const double cur = std::abs(rules[i].conversion_rate);
        CHECK(prev >= cur);
        if (prev == cur) {
            CHECK(std::make_pair(rules[i - 1].b_code, rules[i - 1].a_code) <=
                  std::make_pair(rules[i].b_code, rules[i].a_code));
        }
    }
}

TEST_CASE("format_rule renders the sentence template") {
    Rule rule;
    rule.b_code = "Q2";
    rule.a_code = "Q1";
    rule.support = 100;
    rule.conversion_rate = 0.8;
    CHECK(format_rule(rule) ==
          "Those who answer Q2 (support: 100) respond more frequently Q1 (conversion rate 80.0%)");

    rule.conversion_rate = -0.052;
    rule.support = 1340;
    const std::string s = format_rule(rule);
    CHECK(s.find("less frequently") != std::string::npos);
    CHECK(s.find("-5.2%") != std::string::npos);
    CHECK(s.find("(support: 1340)") != std::string::npos);
}

TEST_CASE("rule CSV and text exports") {
    Rule rule;
    rule.b_code = "Q2";
    rule.a_code = "Q1";
    rule.cond.p_a = 0.5;
    rule.cond.p_a_given_b = 0.9;
    rule.conversion_rate = 0.8;
    rule.support = 100;
    rule.test.z = 8.0;
    rule.test.p_value = 1.25e-15;
    const std::string csv = rules_to_csv(std::vector<Rule>{rule});
    CHECK(csv.rfind("b_code,a_code,p_A,p_A_given_B,conversion_rate,support,z,p_value\n", 0) == 0);
    CHECK(csv.find("Q2,Q1,0.5,0.9,0.8,100,8,") != std::string::npos);
    const std::string text = rules_to_text(std::vector<Rule>{rule});
    CHECK(text.find("conversion rate 80.0%") != std::string::npos);
}

TEST_CASE("mining config validation") {
    MiningConfig config;
    config.alpha = 0.0;
    CHECK_THROWS_AS(config.check(), std::invalid_argument);
    config = MiningConfig{};
    config.min_support = 0;
    CHECK_THROWS_AS(config.check(), std::invalid_argument);
    config = MiningConfig{};
    config.min_abs_conversion = 1.5;
    CHECK_THROWS_AS(config.check(), std::invalid_argument);
}
