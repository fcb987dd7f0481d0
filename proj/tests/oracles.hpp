#pragma once

// Brute-force reference implementations used by the unit and acceptance
// suites. These stay deliberately independent of the library's code paths:
// plain loops, no shared helpers beyond the matrix type.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "binquest/matrix.hpp"
#include "binquest/rules.hpp"

namespace bqtest {

// Brute-force mining reference: recount every ordered pair from scratch and
// apply each filter with its own arithmetic.
inline std::vector<binquest::Rule> oracle_mine(const binquest::ResponseMatrix& matrix,
                                               const binquest::MiningConfig& config) {
    using binquest::Rule;
    std::vector<Rule> kept;
    const std::int64_t n = static_cast<std::int64_t>(matrix.n_rows());
    for (std::size_t b = 0; b < matrix.n_cols(); ++b) {
        for (std::size_t a = 0; a < matrix.n_cols(); ++a) {
            if (a == b) continue;
            if (config.cross_group_only &&
                matrix.questions[a].group == matrix.questions[b].group) continue;
            const std::string& ca = matrix.questions[a].code;
            const std::string& cb = matrix.questions[b].code;
            const auto key = ca < cb ? std::make_pair(ca, cb) : std::make_pair(cb, ca);
            if (config.exclusion_pairs.count(key)) continue;
            std::int64_t nb = 0, na = 0, nab = 0;
            for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
                const bool va = matrix.cell(i, a) != 0;
                const bool vb = matrix.cell(i, b) != 0;
                nb += vb;
                na += va;
                nab += va && vb;
            }
            if (nb == 0 || nb == n) continue;
            if (na == 0 || na == n) continue;
            const double pa = static_cast<double>(na) / static_cast<double>(n);
            const double pab = static_cast<double>(nab) / static_cast<double>(nb);
            double rate;
            if (pab >= pa) rate = (pab - pa) / (1.0 - pa);
            else rate = (pab - pa) / pa;
            if (std::abs(rate) < config.min_abs_conversion) continue;
            if (nb < config.min_support) continue;
            const double se = std::sqrt(pa * (1.0 - pa) / static_cast<double>(nb));
            const double z = (pab - pa) / se;
            const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
            if (!(p < config.alpha)) continue;
            Rule rule;
            rule.b_code = cb;
            rule.a_code = ca;
            rule.conversion_rate = rate;
            rule.support = nb;
            rule.test.z = z;
            rule.test.p_value = p;
            kept.push_back(std::move(rule));
        }
    }
    return kept;
}

// Global-optimum k-means inertia by enumerating every assignment of n points
// to k groups (empty groups allowed, which covers partitions into <= k parts).
inline double exhaustive_kmeans_inertia(const binquest::ResponseMatrix& matrix, int k) {
    const std::size_t n = matrix.n_rows();
    const std::size_t m = matrix.n_cols();
    std::vector<int> assign(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k), std::vector<double>(m, 0.0));
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            counts[static_cast<std::size_t>(assign[i])]++;
            for (std::size_t j = 0; j < m; ++j) {
                sums[static_cast<std::size_t>(assign[i])][j] += matrix.cell(i, j);
            }
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& sum = sums[static_cast<std::size_t>(assign[i])];
            const double size = counts[static_cast<std::size_t>(assign[i])];
            for (std::size_t j = 0; j < m; ++j) {
                const double d = static_cast<double>(matrix.cell(i, j)) - sum[j] / size;
                inertia += d * d;
            }
        }
        best = std::min(best, inertia);

        std::size_t pos = 0;
        while (pos < n && assign[pos] == k - 1) assign[pos++] = 0;
        if (pos == n) break;
        assign[pos]++;
    }
    return best;
}

// Greedy monothetic reference: per node, try every column, compare child
// objectives as exact rationals, recurse. Mirrors the contract, not the code.
struct OracleNode {
    int split_col = -1;
    double objective = 0.0;
    std::vector<int> members;
    std::vector<OracleNode> children;
};

inline std::int64_t oracle_tf_sum(const binquest::ResponseMatrix& matrix,
                                  const std::vector<int>& members) {
    std::int64_t total = 0;
    const std::int64_t n = static_cast<std::int64_t>(members.size());
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        std::int64_t t = 0;
        for (int i : members) t += matrix.cell(static_cast<std::size_t>(i), j);
        total += t * (n - t);
    }
    return total;
}

inline OracleNode oracle_monothetic(const binquest::ResponseMatrix& matrix,
                                    std::vector<int> members, int depth) {
    OracleNode node;
    node.members = members;
    const std::int64_t n = static_cast<std::int64_t>(members.size());
    const std::int64_t parent_num = oracle_tf_sum(matrix, members);
    node.objective = static_cast<double>(parent_num) / static_cast<double>(n);
    if (depth <= 0 || members.size() < 2) return node;

    int best_col = -1;
    std::int64_t best_num = 0, best_den = 1;
    std::vector<int> best_m0, best_m1;
    for (std::size_t col = 0; col < matrix.n_cols(); ++col) {
        std::vector<int> m0, m1;
        for (int i : members) {
            (matrix.cell(static_cast<std::size_t>(i), col) ? m1 : m0).push_back(i);
        }
        if (m0.empty() || m1.empty()) continue;
        const std::int64_t n0 = static_cast<std::int64_t>(m0.size());
        const std::int64_t n1 = static_cast<std::int64_t>(m1.size());
        const std::int64_t num = oracle_tf_sum(matrix, m0) * n1 + oracle_tf_sum(matrix, m1) * n0;
        const std::int64_t den = n0 * n1;
        if (best_col < 0 ||
            static_cast<__int128>(num) * best_den < static_cast<__int128>(best_num) * den) {
            best_col = static_cast<int>(col);
            best_num = num;
            best_den = den;
            best_m0 = std::move(m0);
            best_m1 = std::move(m1);
        }
    }
    if (best_col < 0) return node;
    // strict gain: children/den < parent/n
    if (!(static_cast<__int128>(best_num) * n < static_cast<__int128>(parent_num) * best_den)) {
        return node;
    }
    node.split_col = best_col;
    node.children.push_back(oracle_monothetic(matrix, best_m0, depth - 1));
    node.children.push_back(oracle_monothetic(matrix, best_m1, depth - 1));
    return node;
}

}  // namespace bqtest
