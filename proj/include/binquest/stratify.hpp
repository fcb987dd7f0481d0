#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "binquest/matrix.hpp"
#include "binquest/stats.hpp"

namespace binquest {

// Numeric per-respondent covariate (e.g. financial return), CSV "id,value".
struct ScoreTable {
    std::map<std::string, double> values;
};

// Categorical per-respondent covariate (e.g. gender), same CSV shape.
struct CategoryTable {
    std::map<std::string, std::string> values;
};

ScoreTable load_scores(const std::string& path);
CategoryTable load_categories(const std::string& path);

using Mask = std::vector<std::uint8_t>;  // aligned with matrix rows

// Selects the ceil(q * N) highest-scored respondents; boundary score ties
// break by ascending respondent id. Every matrix id must be scored.
Mask top_quantile_mask(const ResponseMatrix& matrix, const ScoreTable& scores, double q);

struct ClusterDistribution {
    std::vector<std::int64_t> counts;   // segment members per cluster
    std::vector<double> segment_share;  // counts / segment size
    std::vector<double> within_rate;    // counts / cluster size
    std::int64_t segment_size = 0;
};

ClusterDistribution cluster_distribution(const std::vector<int>& labels, const Mask& mask);

struct QuestionProfileRow {
    std::string code;
    double p_overall = 0.0;
    double p_segment = 0.0;
    double difference = 0.0;
    TestResult test;  // proportion_ztest(p_overall, p_segment, |mask|, alpha)
};

std::vector<QuestionProfileRow> segment_question_profile(const ResponseMatrix& matrix,
                                                         const Mask& mask, double alpha = 0.05);

struct CategorySegments {
    std::vector<std::pair<std::string, Mask>> segments;  // per category value, sorted
    std::vector<std::string> missing_ids;                // rows without the covariate
};

CategorySegments categorical_segments(const ResponseMatrix& matrix, const CategoryTable& covariate);

struct SegmentComparison {
    std::string segment;
    ClusterDistribution clusters;
    std::vector<QuestionProfileRow> questions;
};

std::string cluster_distribution_to_csv(const ClusterDistribution& dist);
std::string question_profile_to_csv(const std::vector<QuestionProfileRow>& rows);

}  // namespace binquest
