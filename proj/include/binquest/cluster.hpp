#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "binquest/matrix.hpp"
#include "binquest/stats.hpp"

namespace binquest {

enum class Distance { SquaredEuclidean, Manhattan };
enum class Orientation { Rows, Columns };

std::string to_string(Distance d);
std::string to_string(Orientation o);
Distance distance_from_string(std::string_view s);
Orientation orientation_from_string(std::string_view s);

struct ClusterConfig {
    int k = 2;
    int restarts = 2000;
    std::uint64_t seed = 1;
    int max_iter = 300;
    Distance distance = Distance::SquaredEuclidean;
    Orientation orientation = Orientation::Rows;
};

// Fractional centroids are member means, i.e. per-coordinate yes-proportions.
// inertia sums squared euclidean distances (or L1 distances when the config
// distance is manhattan) from each item to its centroid.
struct ClusterModel {
    ClusterConfig config;
    std::vector<std::vector<double>> centroids;  // k x D
    std::vector<int> labels;                     // one per clustered item
    double inertia = 0.0;
    bool converged = false;
};

// Best-of-restarts Lloyd k-means with k-means++ seeding. Restart r draws from
// SplitMix64(seed ^ r); the winner is the minimum inertia, ties resolved by
// the lowest restart index, so serial and parallel runs agree bit for bit.
// threads = 0 picks the hardware default. When lloyd_trace is given it
// receives the winning restart's per-iteration inertia.
ClusterModel kmeans_fit(const ResponseMatrix& matrix, const ClusterConfig& config,
                        int threads = 0, std::vector<double>* lloyd_trace = nullptr);

// Nearest-centroid labels under the model's configured distance; ties go to
// the lowest cluster index.
std::vector<int> assign(const ClusterModel& model, const ResponseMatrix& matrix);
int assign_point(const ClusterModel& model, std::span<const double> point);

enum class Linkage { Ward, Complete };

// Bottom-up merging to k clusters; ward requires squared-euclidean. Merge ties
// break on the lowest pair of cluster ids. Final clusters are relabeled by
// smallest member index and centroids recomputed as member means.
ClusterModel agglomerative_fit(const ResponseMatrix& matrix, int k, Linkage linkage,
                               Distance distance, Orientation orientation = Orientation::Rows);

// One representative code per column cluster: the override when present, else
// the member with maximum variance (ties by ascending code).
std::vector<std::string> select_representatives(const ClusterModel& column_model,
                                                std::span<const QuestionStats> column_stats,
                                                const std::map<int, std::string>& overrides = {});

std::string cluster_model_to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const std::string& text);

}  // namespace binquest
