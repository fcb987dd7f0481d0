#include "binquest/stats.hpp"

#include <algorithm>
#include <cmath>

#include "binquest/textio.hpp"

namespace binquest {

QuestionStats bernoulli_stats_column(const ResponseMatrix& matrix, std::size_t col) {
    QuestionStats s;
    s.code = matrix.questions[col].code;
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) s.t += matrix.cell(i, col);
    s.n = static_cast<std::int64_t>(matrix.n_rows());
    s.f = s.n - s.t;
    s.p = static_cast<double>(s.t) / static_cast<double>(s.n);
    s.variance = static_cast<double>(s.t) * static_cast<double>(s.f) /
                 (static_cast<double>(s.n) * static_cast<double>(s.n));
    return s;
}

QuestionStats bernoulli_stats(const ResponseMatrix& matrix, std::string_view code) {
    return bernoulli_stats_column(matrix, matrix.column_of(code));
}

std::vector<QuestionStats> rank_by_variance(const ResponseMatrix& matrix) {
    std::vector<QuestionStats> all;
    all.reserve(matrix.n_cols());
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        all.push_back(bernoulli_stats_column(matrix, j));
    }
    std::sort(all.begin(), all.end(), [](const QuestionStats& a, const QuestionStats& b) {
        if (a.variance != b.variance) return a.variance > b.variance;
        return a.code < b.code;
    });
    return all;
}

ConditionalStats conditional_stats(const ResponseMatrix& matrix, std::string_view a_code,
                                   std::string_view b_code) {
    if (a_code == b_code) throw std::invalid_argument("conditional_stats: a and b must differ");
    const std::size_t a = matrix.column_of(a_code);
    const std::size_t b = matrix.column_of(b_code);
    ConditionalStats c;
    c.a_code = std::string(a_code);
    c.b_code = std::string(b_code);
    c.n = static_cast<std::int64_t>(matrix.n_rows());
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const bool va = matrix.cell(i, a) != 0;
        const bool vb = matrix.cell(i, b) != 0;
        c.a_total += va;
        c.n_b += vb;
        c.a_and_b += (va && vb);
    }
    if (c.n_b == 0 || c.n_b == c.n) {
        throw DataError("conditional_stats: empty stratum for " + c.b_code);
    }
    c.p_a = static_cast<double>(c.a_total) / static_cast<double>(c.n);
    c.p_a_given_b = static_cast<double>(c.a_and_b) / static_cast<double>(c.n_b);
    c.p_a_given_not_b =
        static_cast<double>(c.a_total - c.a_and_b) / static_cast<double>(c.n - c.n_b);
    return c;
}

TestResult proportion_ztest(double p0, double p_hat, std::int64_t n, double alpha) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw std::invalid_argument("proportion_ztest: p0 must lie strictly between 0 and 1");
    }
    if (n < 1) throw std::invalid_argument("proportion_ztest: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("proportion_ztest: alpha must lie in (0,1)");
    }
    TestResult r;
    r.alpha = alpha;
    const double se = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(n));
    r.z = (p_hat - p0) / se;
    // Two-sided tail mass: 2 * (1 - Phi(|z|)) computed as erfc for accuracy.
    r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    r.significant = r.p_value < alpha;
    return r;
}

double ci_margin(double p_hat, std::int64_t n, double alpha) {
    if (n < 1) throw std::invalid_argument("ci_margin: n must be >= 1");
    if (p_hat < 0.0 || p_hat > 1.0) throw std::invalid_argument("ci_margin: p_hat outside [0,1]");
    const double z = normal_quantile(1.0 - alpha / 2.0);
    return z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("normal_quantile: q must lie in (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (normal_cdf(mid) < q) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string stats_to_csv(std::span<const QuestionStats> stats) {
    std::string out = "code,T,F,N,p,variance\n";
    for (const auto& s : stats) {
        out += s.code;
        out += ',' + std::to_string(s.t);
        out += ',' + std::to_string(s.f);
        out += ',' + std::to_string(s.n);
        out += ',' + fmt_shortest(s.p);
        out += ',' + fmt_shortest(s.variance);
        out += '\n';
    }
    return out;
}

}  // namespace binquest
