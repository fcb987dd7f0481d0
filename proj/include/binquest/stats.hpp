#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binquest/matrix.hpp"

namespace binquest {

// Per-answer Bernoulli statistics. variance is t*f/n^2, which equals p(1-p)
// and the biased empirical variance of the 0/1 column.
struct QuestionStats {
    std::string code;
    std::int64_t t = 0;  // count of yes
    std::int64_t f = 0;  // count of no
    std::int64_t n = 0;  // t + f
    double p = 0.0;
    double variance = 0.0;

    bool degenerate() const { return t == 0 || f == 0; }  // zero variance
};

struct ConditionalStats {
    std::string a_code;
    std::string b_code;
    std::int64_t n = 0;          // all respondents
    std::int64_t n_b = 0;        // respondents with B = 1
    std::int64_t a_total = 0;    // respondents with A = 1
    std::int64_t a_and_b = 0;    // respondents with A = 1 and B = 1
    double p_a = 0.0;
    double p_a_given_b = 0.0;
    double p_a_given_not_b = 0.0;
};

struct TestResult {
    double z = 0.0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool significant = false;  // p_value < alpha
};

QuestionStats bernoulli_stats_column(const ResponseMatrix& matrix, std::size_t col);
QuestionStats bernoulli_stats(const ResponseMatrix& matrix, std::string_view code);

// All columns, descending variance, ties by ascending code.
std::vector<QuestionStats> rank_by_variance(const ResponseMatrix& matrix);

// Proportion of A in the B=1 and B=0 strata. Throws DataError when either
// stratum is empty (the pair must be skipped).
ConditionalStats conditional_stats(const ResponseMatrix& matrix,
                                   std::string_view a_code, std::string_view b_code);

// One-sample z test of an observed proportion against baseline p0:
//   z = (p_hat - p0) / sqrt(p0 (1 - p0) / n), p two-sided.
// p0 in {0, 1} is undefined; callers skip those pairs.
TestResult proportion_ztest(double p0, double p_hat, std::int64_t n, double alpha);

// Half-width of the normal-approximation confidence interval:
//   z_{alpha/2} * sqrt(p_hat (1 - p_hat) / n).
double ci_margin(double p_hat, std::int64_t n, double alpha);

// Phi(x) = erfc(-x / sqrt 2) / 2. erfc keeps the tails accurate, so p-values
// reproduce to 6 decimals across platforms.
double normal_cdf(double x);

// Inverse of normal_cdf by bisection on [-40, 40]; normal_quantile(0.975) is
// 1.959964 to 1e-5.
double normal_quantile(double q);

// CSV with header code,T,F,N,p,variance.
std::string stats_to_csv(std::span<const QuestionStats> stats);

}  // namespace binquest
