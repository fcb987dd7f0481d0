#include "binquest/stratify.hpp"

#include <algorithm>
#include <cmath>

#include "binquest/textio.hpp"

namespace binquest {

namespace {

template <typename Parse>
void load_table(const std::string& path, Parse parse) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) throw DataError(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(lines[0], 1);
    if (header.size() != 2 || header[0] != "id" || header[1] != "value") {
        throw DataError(path + ": header must be 'id,value'");
    }
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        const std::vector<std::string> fields = split_csv_line(lines[li], li + 1);
        if (fields.size() != 2) {
            throw DataError(path + ": row " + std::to_string(li) + ": expected 2 fields");
        }
        parse(li, fields[0], fields[1]);
    }
}

}  // namespace

ScoreTable load_scores(const std::string& path) {
    ScoreTable table;
    load_table(path, [&](std::size_t row, const std::string& id, const std::string& value) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw DataError(path + ": row " + std::to_string(row) + ": non-numeric score '" + value + "'");
        }
        if (used != value.size()) {
            throw DataError(path + ": row " + std::to_string(row) + ": non-numeric score '" + value + "'");
        }
        if (!table.values.emplace(id, v).second) {
            throw DataError(path + ": row " + std::to_string(row) + ": duplicate id " + id);
        }
    });
    return table;
}

CategoryTable load_categories(const std::string& path) {
    CategoryTable table;
    load_table(path, [&](std::size_t row, const std::string& id, const std::string& value) {
        if (value.empty()) {
            throw DataError(path + ": row " + std::to_string(row) + ": empty category");
        }
        if (!table.values.emplace(id, value).second) {
            throw DataError(path + ": row " + std::to_string(row) + ": duplicate id " + id);
        }
    });
    return table;
}

Mask top_quantile_mask(const ResponseMatrix& matrix, const ScoreTable& scores, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("top_quantile_mask: q outside (0,1]");
    const std::size_t n = matrix.n_rows();
    std::vector<std::pair<double, std::size_t>> ranked;  // score with row index
    ranked.reserve(n);
    std::string missing;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = scores.values.find(matrix.respondent_ids[i]);
        if (it == scores.values.end()) {
            if (!missing.empty()) missing += ", ";
            missing += matrix.respondent_ids[i];
            continue;
        }
        ranked.emplace_back(it->second, i);
    }
    if (!missing.empty()) throw DataError("top_quantile_mask: unscored respondents: " + missing);

    // Descending score; boundary ties resolved by ascending respondent id.
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return matrix.respondent_ids[a.second] < matrix.respondent_ids[b.second];
    });
    // ceil with a small slack so q values written as decimals (0.05 * 100)
    // land on the intended integer.
    auto take = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    take = std::clamp<std::size_t>(take, 1, n);

    Mask mask(n, 0);
    for (std::size_t i = 0; i < take; ++i) mask[ranked[i].second] = 1;
    return mask;
}

ClusterDistribution cluster_distribution(const std::vector<int>& labels, const Mask& mask) {
    if (labels.size() != mask.size()) {
        throw std::invalid_argument("cluster_distribution: labels/mask size mismatch");
    }
    ClusterDistribution dist;
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    dist.counts.assign(static_cast<std::size_t>(k), 0);
    std::vector<std::int64_t> cluster_sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        cluster_sizes[static_cast<std::size_t>(labels[i])]++;
        if (mask[i]) {
            dist.counts[static_cast<std::size_t>(labels[i])]++;
            dist.segment_size++;
        }
    }
    if (dist.segment_size == 0) throw std::invalid_argument("cluster_distribution: empty mask");
    dist.segment_share.resize(static_cast<std::size_t>(k));
    dist.within_rate.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        dist.segment_share[static_cast<std::size_t>(c)] =
            static_cast<double>(dist.counts[static_cast<std::size_t>(c)]) /
            static_cast<double>(dist.segment_size);
        dist.within_rate[static_cast<std::size_t>(c)] =
            cluster_sizes[static_cast<std::size_t>(c)] > 0
                ? static_cast<double>(dist.counts[static_cast<std::size_t>(c)]) /
                      static_cast<double>(cluster_sizes[static_cast<std::size_t>(c)])
                : 0.0;
    }
    return dist;
}

std::vector<QuestionProfileRow> segment_question_profile(const ResponseMatrix& matrix,
                                                         const Mask& mask, double alpha) {
    if (mask.size() != matrix.n_rows()) {
        throw std::invalid_argument("segment_question_profile: mask size mismatch");
    }
    std::int64_t seg_size = 0;
    for (auto m : mask) seg_size += m != 0;
    // A full mask is valid: the profile then reproduces the overall
    // proportions with zero differences.
    if (seg_size == 0) throw std::invalid_argument("segment_question_profile: empty mask");

    std::vector<QuestionProfileRow> rows;
    rows.reserve(matrix.n_cols());
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        QuestionProfileRow row;
        row.code = matrix.questions[j].code;
        std::int64_t total = 0, seg = 0;
        for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
            const std::uint8_t v = matrix.cell(i, j);
            total += v;
            if (mask[i]) seg += v;
        }
        row.p_overall = static_cast<double>(total) / static_cast<double>(matrix.n_rows());
        row.p_segment = static_cast<double>(seg) / static_cast<double>(seg_size);
        row.difference = row.p_segment - row.p_overall;
        if (row.p_overall > 0.0 && row.p_overall < 1.0) {
            row.test = proportion_ztest(row.p_overall, row.p_segment, seg_size, alpha);
        } else {
            row.test = TestResult{0.0, 1.0, alpha, false};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CategorySegments categorical_segments(const ResponseMatrix& matrix, const CategoryTable& covariate) {
    if (covariate.values.empty()) throw std::invalid_argument("categorical_segments: no categories");
    CategorySegments out;
    std::map<std::string, Mask> masks;
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        auto it = covariate.values.find(matrix.respondent_ids[i]);
        if (it == covariate.values.end()) {
            out.missing_ids.push_back(matrix.respondent_ids[i]);
            continue;
        }
        auto [entry, inserted] = masks.try_emplace(it->second, Mask(matrix.n_rows(), 0));
        entry->second[i] = 1;
    }
    for (auto& [name, mask] : masks) out.segments.emplace_back(name, std::move(mask));
    return out;
}

std::string cluster_distribution_to_csv(const ClusterDistribution& dist) {
    std::string out = "cluster,count,segment_share,within_cluster_rate\n";
    for (std::size_t c = 0; c < dist.counts.size(); ++c) {
        out += std::to_string(c);
        out += ',' + std::to_string(dist.counts[c]);
        out += ',' + fmt_shortest(dist.segment_share[c]);
        out += ',' + fmt_shortest(dist.within_rate[c]);
        out += '\n';
    }
    return out;
}

std::string question_profile_to_csv(const std::vector<QuestionProfileRow>& rows) {
    std::string out = "code,p_overall,p_segment,difference,z,p_value,significant\n";
    for (const auto& r : rows) {
        out += r.code;
        out += ',' + fmt_shortest(r.p_overall);
        out += ',' + fmt_shortest(r.p_segment);
        out += ',' + fmt_shortest(r.difference);
        out += ',' + fmt_shortest(r.test.z);
        out += ',' + fmt_shortest(r.test.p_value);
        out += ',';
        out += r.test.significant ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace binquest
