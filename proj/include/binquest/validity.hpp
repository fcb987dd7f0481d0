#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "binquest/cluster.hpp"
#include "binquest/matrix.hpp"

namespace binquest {

// Internal cluster-validity scores. Distances are euclidean for silhouette
// and davies-bouldin regardless of how the model was fit, so methods compare
// on a common scale.
struct ValidityScores {
    double silhouette = 0.0;         // [-1, 1], higher is better
    double calinski_harabasz = 0.0;  // >= 0 or +inf when SSW = 0, higher is better
    double davies_bouldin = 0.0;     // >= 0, lower is better
};

// Mean over points of (b - a) / max(a, b); singleton-cluster points score 0.
double silhouette(const ResponseMatrix& matrix, const std::vector<int>& labels);

// (SSB / (k - 1)) / (SSW / (n - k)); +inf sentinel when SSW = 0.
double calinski_harabasz(const ResponseMatrix& matrix, const std::vector<int>& labels);

// Mean over clusters of the worst (S_i + S_j) / M_ij ratio. Coincident
// centroids make the ratio undefined and throw.
double davies_bouldin(const ResponseMatrix& matrix, const std::vector<int>& labels);

enum class SweepMethod { KMeans, AgglomerativeWard, AgglomerativeL1Complete };
enum class Metric { Silhouette, CalinskiHarabasz, DaviesBouldin };

std::string to_string(SweepMethod m);
std::string to_string(Metric m);

struct SweepRow {
    std::string method;  // display label, e.g. "KMeans 14"
    int k = 0;
    std::optional<double> silhouette;
    std::optional<double> calinski_harabasz;
    std::optional<double> davies_bouldin;
};

struct SelectionTable {
    std::vector<SweepRow> rows;
    std::set<std::pair<std::size_t, Metric>> bold_marks;  // best per metric

    // Re-derives bold_marks: max silhouette, max CH, min DB over present cells.
    void recompute_marks();

    // Appends the other table's rows and recomputes marks over the union.
    void append(const SelectionTable& other);

    // CSV columns: method, Silhouette Score, Calinski Harabasz, Davies
    // Bouldin, best_metrics.
    std::string to_csv() const;
};

// One row per (method, k). Metric errors (e.g. coincident centroids) leave
// that cell absent. `base` supplies seed/restarts/max_iter for the k-means
// fits; clustering is over rows.
SelectionTable sweep(const ResponseMatrix& matrix, const std::vector<SweepMethod>& methods,
                     int k_min, int k_max, const ClusterConfig& base, int threads = 0);

}  // namespace binquest
