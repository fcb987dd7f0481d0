#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binquest/matrix.hpp"
#include "binquest/stats.hpp"

namespace binquest {

// Directed rule B -> A with the signed conversion rate:
//   p(A|B) >= p(A):  (p(A|B) - p(A)) / (1 - p(A))   in [0, 1]
//   p(A|B) <  p(A):  (p(A|B) - p(A)) / p(A)         in [-1, 0)
struct Rule {
    std::string b_code;  // antecedent
    std::string a_code;  // consequent
    ConditionalStats cond;
    double conversion_rate = 0.0;
    std::int64_t support = 0;  // respondents with B = 1
    TestResult test;
};

struct MiningConfig {
    double alpha = 0.05;
    double min_abs_conversion = 0.05;
    std::int64_t min_support = 30;
    bool cross_group_only = true;
    // Unordered code pairs to drop (the manual "obvious relationship" filter).
    std::set<std::pair<std::string, std::string>> exclusion_pairs;

    void check() const;
    bool excluded(const std::string& a, const std::string& b) const;
};

struct MiningSummary {
    std::int64_t pairs_evaluated = 0;
    std::int64_t skipped_same_group = 0;
    std::int64_t skipped_excluded = 0;
    std::int64_t skipped_empty_stratum = 0;
    std::int64_t skipped_degenerate_pa = 0;
    std::int64_t skipped_low_conversion = 0;
    std::int64_t skipped_low_support = 0;
    std::int64_t skipped_not_significant = 0;
    std::int64_t retained = 0;
};

// Equal proportions yield exactly 0. Throws std::invalid_argument when the
// needed denominator vanishes (p_a = 1 with an increase, p_a = 0 with a drop).
double conversion_rate(double p_a, double p_a_given_b);

// Evaluates every ordered pair (B -> A), applying the filters in order:
// same-group, exclusion list, empty stratum, degenerate p(A), |rate|,
// support, significance. Result sorted by descending |rate|, ties by
// (b_code, a_code).
std::vector<Rule> mine_rules(const ResponseMatrix& matrix, const MiningConfig& config,
                             MiningSummary* summary = nullptr);

// "Those who answer <B> (support: <n>) respond <more|less> frequently <A>
// (conversion rate <x.x>%)". One decimal, minus sign kept on negative rates.
std::string format_rule(const Rule& rule);

// CSV header: b_code,a_code,p_A,p_A_given_B,conversion_rate,support,z,p_value.
std::string rules_to_csv(std::span<const Rule> rules);
std::string rules_to_text(std::span<const Rule> rules);
std::string mining_summary_to_text(const MiningSummary& summary);

}  // namespace binquest
