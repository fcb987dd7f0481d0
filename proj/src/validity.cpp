#include "binquest/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "binquest/error.hpp"
#include "binquest/textio.hpp"

namespace binquest {

namespace {

struct LabelInfo {
    int k = 0;
    std::vector<std::int64_t> sizes;
};

LabelInfo inspect_labels(const ResponseMatrix& matrix, const std::vector<int>& labels) {
    if (labels.size() != matrix.n_rows()) {
        throw std::invalid_argument("validity: labels must match matrix rows");
    }
    LabelInfo info;
    for (int l : labels) {
        if (l < 0) throw std::invalid_argument("validity: negative label");
        info.k = std::max(info.k, l + 1);
    }
    info.sizes.assign(static_cast<std::size_t>(info.k), 0);
    for (int l : labels) info.sizes[static_cast<std::size_t>(l)]++;
    for (std::int64_t s : info.sizes) {
        if (s == 0) throw std::invalid_argument("validity: empty cluster label");
    }
    return info;
}

double euclid(const std::uint8_t* a, const std::uint8_t* b, std::size_t dim) {
    std::int64_t d = 0;
    for (std::size_t j = 0; j < dim; ++j) d += a[j] != b[j];
    return std::sqrt(static_cast<double>(d));
}

std::vector<std::vector<double>> cluster_means(const ResponseMatrix& matrix,
                                               const std::vector<int>& labels,
                                               const LabelInfo& info) {
    std::vector<std::vector<std::int64_t>> sums(static_cast<std::size_t>(info.k),
                                                std::vector<std::int64_t>(matrix.n_cols(), 0));
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        auto& sum = sums[static_cast<std::size_t>(labels[i])];
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) sum[j] += matrix.cell(i, j);
    }
    std::vector<std::vector<double>> means(static_cast<std::size_t>(info.k),
                                           std::vector<double>(matrix.n_cols(), 0.0));
    for (int c = 0; c < info.k; ++c) {
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            means[static_cast<std::size_t>(c)][j] =
                static_cast<double>(sums[static_cast<std::size_t>(c)][j]) /
                static_cast<double>(info.sizes[static_cast<std::size_t>(c)]);
        }
    }
    return means;
}

}  // namespace

double silhouette(const ResponseMatrix& matrix, const std::vector<int>& labels) {
    const LabelInfo info = inspect_labels(matrix, labels);
    if (info.k < 2) throw std::invalid_argument("silhouette: needs at least 2 clusters");
    const std::size_t n = matrix.n_rows();

    double total = 0.0;
    std::vector<double> dist_sum(static_cast<std::size_t>(info.k));
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist_sum[static_cast<std::size_t>(labels[j])] +=
                euclid(matrix.row(i), matrix.row(j), matrix.n_cols());
        }
        const int own = labels[i];
        const std::int64_t own_size = info.sizes[static_cast<std::size_t>(own)];
        if (own_size < 2) continue;  // singleton scores 0
        const double a = dist_sum[static_cast<std::size_t>(own)] / static_cast<double>(own_size - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < info.k; ++c) {
            if (c == own) continue;
            b = std::min(b, dist_sum[static_cast<std::size_t>(c)] /
                                static_cast<double>(info.sizes[static_cast<std::size_t>(c)]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

double calinski_harabasz(const ResponseMatrix& matrix, const std::vector<int>& labels) {
    const LabelInfo info = inspect_labels(matrix, labels);
    const std::size_t n = matrix.n_rows();
    if (info.k < 2 || static_cast<std::size_t>(info.k) >= n) {
        throw std::invalid_argument("calinski_harabasz: needs 2 <= k < n");
    }
    const auto means = cluster_means(matrix, labels, info);
    std::vector<double> overall(matrix.n_cols(), 0.0);
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        std::int64_t t = 0;
        for (std::size_t i = 0; i < n; ++i) t += matrix.cell(i, j);
        overall[j] = static_cast<double>(t) / static_cast<double>(n);
    }
    double ssb = 0.0;
    for (int c = 0; c < info.k; ++c) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            const double d = means[static_cast<std::size_t>(c)][j] - overall[j];
            d2 += d * d;
        }
        ssb += static_cast<double>(info.sizes[static_cast<std::size_t>(c)]) * d2;
    }
    double ssw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mean = means[static_cast<std::size_t>(labels[i])];
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            const double d = static_cast<double>(matrix.cell(i, j)) - mean[j];
            ssw += d * d;
        }
    }
    if (ssw == 0.0) return std::numeric_limits<double>::infinity();
    return (ssb / static_cast<double>(info.k - 1)) /
           (ssw / static_cast<double>(n - static_cast<std::size_t>(info.k)));
}

double davies_bouldin(const ResponseMatrix& matrix, const std::vector<int>& labels) {
    const LabelInfo info = inspect_labels(matrix, labels);
    if (info.k < 2) throw std::invalid_argument("davies_bouldin: needs at least 2 clusters");
    const auto means = cluster_means(matrix, labels, info);

    // S_c: mean euclidean distance of members to their centroid.
    std::vector<double> scatter(static_cast<std::size_t>(info.k), 0.0);
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const auto& mean = means[static_cast<std::size_t>(labels[i])];
        double d2 = 0.0;
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            const double d = static_cast<double>(matrix.cell(i, j)) - mean[j];
            d2 += d * d;
        }
        scatter[static_cast<std::size_t>(labels[i])] += std::sqrt(d2);
    }
    for (int c = 0; c < info.k; ++c) {
        scatter[static_cast<std::size_t>(c)] /= static_cast<double>(info.sizes[static_cast<std::size_t>(c)]);
    }

    double total = 0.0;
    for (int i = 0; i < info.k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < info.k; ++j) {
            if (i == j) continue;
            double m2 = 0.0;
            for (std::size_t d = 0; d < matrix.n_cols(); ++d) {
                const double diff = means[static_cast<std::size_t>(i)][d] - means[static_cast<std::size_t>(j)][d];
                m2 += diff * diff;
            }
            const double m = std::sqrt(m2);
            if (m == 0.0) throw std::invalid_argument("davies_bouldin: coincident centroids");
            worst = std::max(worst, (scatter[static_cast<std::size_t>(i)] +
                                     scatter[static_cast<std::size_t>(j)]) / m);
        }
        total += worst;
    }
    return total / static_cast<double>(info.k);
}

std::string to_string(SweepMethod m) {
    switch (m) {
        case SweepMethod::KMeans: return "KMeans";
        case SweepMethod::AgglomerativeWard: return "Agglomerative";
        case SweepMethod::AgglomerativeL1Complete: return "Agglom.L1";
    }
    return "?";
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Silhouette: return "silhouette";
        case Metric::CalinskiHarabasz: return "calinski_harabasz";
        case Metric::DaviesBouldin: return "davies_bouldin";
    }
    return "?";
}

void SelectionTable::recompute_marks() {
    bold_marks.clear();
    auto mark_best = [&](Metric metric, auto getter, bool maximize) {
        std::optional<double> best;
        for (const auto& row : rows) {
            const auto v = getter(row);
            if (!v) continue;
            if (!best || (maximize ? *v > *best : *v < *best)) best = *v;
        }
        if (!best) return;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto v = getter(rows[i]);
            if (v && *v == *best) bold_marks.insert({i, metric});
        }
    };
    mark_best(Metric::Silhouette, [](const SweepRow& r) { return r.silhouette; }, true);
    mark_best(Metric::CalinskiHarabasz, [](const SweepRow& r) { return r.calinski_harabasz; }, true);
    mark_best(Metric::DaviesBouldin, [](const SweepRow& r) { return r.davies_bouldin; }, false);
}

void SelectionTable::append(const SelectionTable& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    recompute_marks();
}

std::string SelectionTable::to_csv() const {
    std::string out = "method,Silhouette Score,Calinski Harabasz,Davies Bouldin,best_metrics\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += r.method;
        for (const auto& cell : {r.silhouette, r.calinski_harabasz, r.davies_bouldin}) {
            out += ',';
            if (cell) out += fmt_shortest(*cell);
        }
        out += ',';
        bool first = true;
        for (Metric m : {Metric::Silhouette, Metric::CalinskiHarabasz, Metric::DaviesBouldin}) {
            if (bold_marks.count({i, m})) {
                if (!first) out += ';';
                out += to_string(m);
                first = false;
            }
        }
        out += '\n';
    }
    return out;
}

SelectionTable sweep(const ResponseMatrix& matrix, const std::vector<SweepMethod>& methods,
                     int k_min, int k_max, const ClusterConfig& base, int threads) {
    if (k_min < 2 || k_max < k_min) throw std::invalid_argument("sweep: bad k range");
    if (static_cast<std::size_t>(k_max) > matrix.n_rows()) {
        throw std::invalid_argument("sweep: k_max exceeds row count");
    }
    SelectionTable table;
    for (SweepMethod method : methods) {
        for (int k = k_min; k <= k_max; ++k) {
            std::vector<int> labels;
            if (method == SweepMethod::KMeans) {
                ClusterConfig config = base;
                config.k = k;
                config.orientation = Orientation::Rows;
                config.distance = Distance::SquaredEuclidean;
                labels = kmeans_fit(matrix, config, threads).labels;
            } else if (method == SweepMethod::AgglomerativeWard) {
                labels = agglomerative_fit(matrix, k, Linkage::Ward, Distance::SquaredEuclidean).labels;
            } else {
                labels = agglomerative_fit(matrix, k, Linkage::Complete, Distance::Manhattan).labels;
            }
            SweepRow row;
            // KMeans rows always carry k; agglomerative rows stay bare when
            // evaluated at a single comparison k, matching the usual report
            // shape.
            row.method = to_string(method);
            if (method == SweepMethod::KMeans || k_min != k_max) {
                row.method += " " + std::to_string(k);
            }
            row.k = k;
            try { row.silhouette = silhouette(matrix, labels); } catch (const std::invalid_argument&) {}
            try { row.calinski_harabasz = calinski_harabasz(matrix, labels); } catch (const std::invalid_argument&) {}
            try { row.davies_bouldin = davies_bouldin(matrix, labels); } catch (const std::invalid_argument&) {}
            table.rows.push_back(std::move(row));
        }
    }
    table.recompute_marks();
    return table;
}

}  // namespace binquest
