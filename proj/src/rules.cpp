#include "binquest/rules.hpp"

#include <algorithm>
#include <cmath>

#include "binquest/textio.hpp"

namespace binquest {

void MiningConfig::check() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mining: alpha must lie in (0,1)");
    if (min_abs_conversion < 0.0 || min_abs_conversion > 1.0) {
        throw std::invalid_argument("mining: min_abs_conversion must lie in [0,1]");
    }
    if (min_support < 1) throw std::invalid_argument("mining: min_support must be >= 1");
}

bool MiningConfig::excluded(const std::string& a, const std::string& b) const {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    return exclusion_pairs.count(key) > 0;
}

double conversion_rate(double p_a, double p_a_given_b) {
    if (p_a < 0.0 || p_a > 1.0 || p_a_given_b < 0.0 || p_a_given_b > 1.0) {
        throw std::invalid_argument("conversion_rate: proportions must lie in [0,1]");
    }
    if (p_a_given_b == p_a) return 0.0;
    if (p_a_given_b > p_a) {
        if (p_a == 1.0) throw std::invalid_argument("conversion_rate: undefined for p_a = 1");
        return (p_a_given_b - p_a) / (1.0 - p_a);
    }
    if (p_a == 0.0) throw std::invalid_argument("conversion_rate: undefined for p_a = 0");
    return (p_a_given_b - p_a) / p_a;
}

std::vector<Rule> mine_rules(const ResponseMatrix& matrix, const MiningConfig& config,
                             MiningSummary* summary) {
    config.check();
    MiningSummary local;
    const std::size_t m = matrix.n_cols();
    const std::int64_t n = static_cast<std::int64_t>(matrix.n_rows());

    // Column totals and pairwise co-occurrence counts in one pass.
    std::vector<std::int64_t> totals(m, 0);
    std::vector<std::int64_t> both(m * m, 0);
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const std::uint8_t* row = matrix.row(i);
        for (std::size_t a = 0; a < m; ++a) {
            if (!row[a]) continue;
            totals[a]++;
            for (std::size_t b = 0; b < m; ++b) {
                if (row[b]) both[a * m + b]++;
            }
        }
    }

    std::vector<Rule> rules;
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t a = 0; a < m; ++a) {
            if (a == b) continue;
            local.pairs_evaluated++;
            const QuestionMeta& qa = matrix.questions[a];
            const QuestionMeta& qb = matrix.questions[b];
            if (config.cross_group_only && qa.group == qb.group) {
                local.skipped_same_group++;
                continue;
            }
            if (config.excluded(qa.code, qb.code)) {
                local.skipped_excluded++;
                continue;
            }
            const std::int64_t n_b = totals[b];
            if (n_b == 0 || n_b == n) {
                local.skipped_empty_stratum++;
                continue;
            }
            const std::int64_t a_total = totals[a];
            if (a_total == 0 || a_total == n) {
                local.skipped_degenerate_pa++;
                continue;
            }
            ConditionalStats cond;
            cond.a_code = qa.code;
            cond.b_code = qb.code;
            cond.n = n;
            cond.n_b = n_b;
            cond.a_total = a_total;
            cond.a_and_b = both[a * m + b];
            cond.p_a = static_cast<double>(a_total) / static_cast<double>(n);
            cond.p_a_given_b = static_cast<double>(cond.a_and_b) / static_cast<double>(n_b);
            cond.p_a_given_not_b =
                static_cast<double>(a_total - cond.a_and_b) / static_cast<double>(n - n_b);

            const double rate = conversion_rate(cond.p_a, cond.p_a_given_b);
            if (std::abs(rate) < config.min_abs_conversion) {
                local.skipped_low_conversion++;
                continue;
            }
            if (n_b < config.min_support) {
                local.skipped_low_support++;
                continue;
            }
            const TestResult test = proportion_ztest(cond.p_a, cond.p_a_given_b, n_b, config.alpha);
            if (!test.significant) {
                local.skipped_not_significant++;
                continue;
            }
            Rule rule;
            rule.b_code = qb.code;
            rule.a_code = qa.code;
            rule.cond = cond;
            rule.conversion_rate = rate;
            rule.support = n_b;
            rule.test = test;
            rules.push_back(std::move(rule));
        }
    }
    local.retained = static_cast<std::int64_t>(rules.size());

    std::sort(rules.begin(), rules.end(), [](const Rule& x, const Rule& y) {
        const double ax = std::abs(x.conversion_rate);
        const double ay = std::abs(y.conversion_rate);
        if (ax != ay) return ax > ay;
        if (x.b_code != y.b_code) return x.b_code < y.b_code;
        return x.a_code < y.a_code;
    });
    if (summary) *summary = local;
    return rules;
}

std::string format_rule(const Rule& rule) {
    std::string out = "Those who answer " + rule.b_code + " (support: " +
                      std::to_string(rule.support) + ") respond ";
    out += rule.conversion_rate >= 0.0 ? "more" : "less";
    out += " frequently " + rule.a_code + " (conversion rate " +
           fmt_fixed(rule.conversion_rate * 100.0, 1) + "%)";
    return out;
}

std::string rules_to_csv(std::span<const Rule> rules) {
    std::string out = "b_code,a_code,p_A,p_A_given_B,conversion_rate,support,z,p_value\n";
    for (const auto& r : rules) {
        out += r.b_code;
        out += ',' + r.a_code;
        out += ',' + fmt_shortest(r.cond.p_a);
        out += ',' + fmt_shortest(r.cond.p_a_given_b);
        out += ',' + fmt_shortest(r.conversion_rate);
        out += ',' + std::to_string(r.support);
        out += ',' + fmt_shortest(r.test.z);
        out += ',' + fmt_shortest(r.test.p_value);
        out += '\n';
    }
    return out;
}

std::string rules_to_text(std::span<const Rule> rules) {
    std::string out;
    for (const auto& r : rules) {
        out += format_rule(r);
        out += '\n';
    }
    return out;
}

std::string mining_summary_to_text(const MiningSummary& s) {
    std::string out;
    out += "pairs evaluated:        " + std::to_string(s.pairs_evaluated) + "\n";
    out += "skipped same group:     " + std::to_string(s.skipped_same_group) + "\n";
    out += "skipped excluded:       " + std::to_string(s.skipped_excluded) + "\n";
    out += "skipped empty stratum:  " + std::to_string(s.skipped_empty_stratum) + "\n";
    out += "skipped degenerate p:   " + std::to_string(s.skipped_degenerate_pa) + "\n";
    out += "skipped low conversion: " + std::to_string(s.skipped_low_conversion) + "\n";
    out += "skipped low support:    " + std::to_string(s.skipped_low_support) + "\n";
    out += "skipped not significant:" + std::to_string(s.skipped_not_significant) + "\n";
    out += "retained:               " + std::to_string(s.retained) + "\n";
    return out;
}

}  // namespace binquest
