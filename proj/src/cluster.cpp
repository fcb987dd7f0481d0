#include "binquest/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "binquest/error.hpp"
#include "binquest/rng.hpp"

namespace binquest {

std::string to_string(Distance d) {
    return d == Distance::SquaredEuclidean ? "squared-euclidean" : "manhattan";
}
std::string to_string(Orientation o) { return o == Orientation::Rows ? "rows" : "columns"; }

Distance distance_from_string(std::string_view s) {
    if (s == "squared-euclidean") return Distance::SquaredEuclidean;
    if (s == "manhattan") return Distance::Manhattan;
    throw std::invalid_argument("unknown distance: " + std::string(s));
}

Orientation orientation_from_string(std::string_view s) {
    if (s == "rows") return Orientation::Rows;
    if (s == "columns") return Orientation::Columns;
    throw std::invalid_argument("unknown orientation: " + std::string(s));
}

namespace {

// Items to cluster, flattened: rows of the matrix, or columns when the
// orientation transposes.
struct PointSet {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<std::uint8_t> data;  // n * dim

    const std::uint8_t* point(std::size_t i) const { return data.data() + i * dim; }
};

PointSet make_points(const ResponseMatrix& matrix, Orientation orientation) {
    PointSet ps;
    if (orientation == Orientation::Rows) {
        ps.n = matrix.n_rows();
        ps.dim = matrix.n_cols();
        ps.data = matrix.cells;
    } else {
        ps.n = matrix.n_cols();
        ps.dim = matrix.n_rows();
        ps.data.resize(ps.n * ps.dim);
        for (std::size_t j = 0; j < ps.n; ++j) {
            for (std::size_t i = 0; i < ps.dim; ++i) ps.data[j * ps.dim + i] = matrix.cell(i, j);
        }
    }
    return ps;
}

// Hamming count; equals the squared euclidean (and L1) distance between
// binary points.
std::int64_t hamming(const std::uint8_t* a, const std::uint8_t* b, std::size_t dim) {
    std::int64_t d = 0;
    for (std::size_t j = 0; j < dim; ++j) d += a[j] != b[j];
    return d;
}

double point_centroid_dist(const std::uint8_t* x, const double* c, std::size_t dim, Distance dist) {
    double acc = 0.0;
    if (dist == Distance::SquaredEuclidean) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = static_cast<double>(x[j]) - c[j];
            acc += d * d;
        }
    } else {
        for (std::size_t j = 0; j < dim; ++j) acc += std::abs(static_cast<double>(x[j]) - c[j]);
    }
    return acc;
}

struct FitState {
    std::vector<int> labels;
    std::vector<double> centroids;  // k * dim
    double inertia = 0.0;
    bool converged = false;
    std::vector<double> trace;  // per-iteration inertia, only when requested
};

// Centroids as member means via exact integer sums, so the result does not
// depend on accumulation order.
void update_means(const PointSet& ps, const std::vector<int>& labels, int k,
                  std::vector<double>& centroids, std::vector<std::int64_t>& scratch_sums,
                  std::vector<std::int64_t>& scratch_sizes) {
    scratch_sums.assign(static_cast<std::size_t>(k) * ps.dim, 0);
    scratch_sizes.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < ps.n; ++i) {
        const int c = labels[i];
        scratch_sizes[static_cast<std::size_t>(c)] += 1;
        const std::uint8_t* x = ps.point(i);
        std::int64_t* sum = scratch_sums.data() + static_cast<std::size_t>(c) * ps.dim;
        for (std::size_t j = 0; j < ps.dim; ++j) sum[j] += x[j];
    }
    centroids.assign(static_cast<std::size_t>(k) * ps.dim, 0.0);
    for (int c = 0; c < k; ++c) {
        const std::int64_t size = scratch_sizes[static_cast<std::size_t>(c)];
        if (size == 0) continue;  // repaired by the caller
        const std::int64_t* sum = scratch_sums.data() + static_cast<std::size_t>(c) * ps.dim;
        double* out = centroids.data() + static_cast<std::size_t>(c) * ps.dim;
        for (std::size_t j = 0; j < ps.dim; ++j) {
            out[j] = static_cast<double>(sum[j]) / static_cast<double>(size);
        }
    }
}

double total_inertia(const PointSet& ps, const std::vector<int>& labels,
                     const std::vector<double>& centroids, Distance dist) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ps.n; ++i) {
        acc += point_centroid_dist(ps.point(i), centroids.data() + static_cast<std::size_t>(labels[i]) * ps.dim,
                                   ps.dim, dist);
    }
    return acc;
}

// One seeded run: k-means++ initialization, Lloyd until labels stabilize.
FitState lloyd_once(const PointSet& ps, const ClusterConfig& config, std::uint64_t sub_seed,
                    bool want_trace) {
    const int k = config.k;
    SplitMix64 rng(sub_seed);

    // k-means++ over squared euclidean distances (= hamming between points).
    std::vector<std::size_t> centers;
    centers.push_back(static_cast<std::size_t>(rng.below(ps.n)));
    std::vector<double> d2(ps.n, 0.0);
    for (std::size_t i = 0; i < ps.n; ++i) {
        d2[i] = static_cast<double>(hamming(ps.point(i), ps.point(centers[0]), ps.dim));
    }
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick;
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(rng.below(ps.n));
        } else {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            pick = ps.n - 1;
            for (std::size_t i = 0; i < ps.n; ++i) {
                acc += d2[i];
                if (u < acc) { pick = i; break; }
            }
        }
        centers.push_back(pick);
        for (std::size_t i = 0; i < ps.n; ++i) {
            const double d = static_cast<double>(hamming(ps.point(i), ps.point(pick), ps.dim));
            if (d < d2[i]) d2[i] = d;
        }
    }

    FitState st;
    st.centroids.resize(static_cast<std::size_t>(k) * ps.dim);
    for (int c = 0; c < k; ++c) {
        const std::uint8_t* x = ps.point(centers[static_cast<std::size_t>(c)]);
        for (std::size_t j = 0; j < ps.dim; ++j) {
            st.centroids[static_cast<std::size_t>(c) * ps.dim + j] = static_cast<double>(x[j]);
        }
    }
    st.labels.assign(ps.n, -1);

    std::vector<std::int64_t> sums, sizes;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < ps.n; ++i) {
            const std::uint8_t* x = ps.point(i);
            int best = 0;
            double best_d = point_centroid_dist(x, st.centroids.data(), ps.dim, config.distance);
            for (int c = 1; c < k; ++c) {
                const double d = point_centroid_dist(
                    x, st.centroids.data() + static_cast<std::size_t>(c) * ps.dim, ps.dim,
                    config.distance);
                if (d < best_d) { best_d = d; best = c; }
            }
            if (st.labels[i] != best) { st.labels[i] = best; changed = true; }
        }

        // Empty-cluster repair: hand the empty cluster the point farthest from
        // its current centroid (ties by lowest point index), skipping points
        // that are alone in their cluster.
        std::vector<std::int64_t> count(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < ps.n; ++i) count[static_cast<std::size_t>(st.labels[i])]++;
        for (int c = 0; c < k; ++c) {
            if (count[static_cast<std::size_t>(c)] != 0) continue;
            std::size_t farthest = ps.n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < ps.n; ++i) {
                if (count[static_cast<std::size_t>(st.labels[i])] < 2) continue;
                const double d = point_centroid_dist(
                    ps.point(i),
                    st.centroids.data() + static_cast<std::size_t>(st.labels[i]) * ps.dim, ps.dim,
                    config.distance);
                if (d > far_d) { far_d = d; farthest = i; }
            }
            if (farthest == ps.n) break;  // k > distinct points; leave empty
            count[static_cast<std::size_t>(st.labels[farthest])]--;
            st.labels[farthest] = c;
            count[static_cast<std::size_t>(c)] = 1;
            changed = true;
        }

        update_means(ps, st.labels, k, st.centroids, sums, sizes);
        if (want_trace) st.trace.push_back(total_inertia(ps, st.labels, st.centroids, config.distance));
        if (!changed) { st.converged = true; break; }
    }

    st.inertia = total_inertia(ps, st.labels, st.centroids, config.distance);
    return st;
}

void check_config(const PointSet& ps, const ClusterConfig& config) {
    if (ps.n == 0 || ps.dim == 0) throw std::invalid_argument("kmeans: empty matrix");
    if (config.k < 1) throw std::invalid_argument("kmeans: k must be positive");
    if (static_cast<std::size_t>(config.k) > ps.n) {
        throw std::invalid_argument("kmeans: k exceeds number of clustered items");
    }
    if (config.restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    if (config.max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
}

}  // namespace

ClusterModel kmeans_fit(const ResponseMatrix& matrix, const ClusterConfig& config, int threads,
                        std::vector<double>* lloyd_trace) {
    const PointSet ps = make_points(matrix, config.orientation);
    check_config(ps, config);

    const bool want_trace = lloyd_trace != nullptr;
    struct Best {
        double inertia = std::numeric_limits<double>::infinity();
        int restart = -1;
        FitState state;
    };
    // Restart r is fully determined by sub-seed seed ^ r, so any partition of
    // the restart range over threads yields the same winner.
    auto run_range = [&](int begin, int step) {
        Best best;
        for (int r = begin; r < config.restarts; r += step) {
            FitState st = lloyd_once(ps, config, config.seed ^ static_cast<std::uint64_t>(r),
                                     want_trace);
            if (st.inertia < best.inertia || (st.inertia == best.inertia && r < best.restart)) {
                best.inertia = st.inertia;
                best.restart = r;
                best.state = std::move(st);
            }
        }
        return best;
    };

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min(n_threads, config.restarts);

    Best overall;
    if (n_threads == 1) {
        overall = run_range(0, 1);
    } else {
        std::vector<Best> partials(static_cast<std::size_t>(n_threads));
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] { partials[static_cast<std::size_t>(t)] = run_range(t, n_threads); });
        }
        for (auto& th : pool) th.join();
        for (auto& p : partials) {
            if (p.restart < 0) continue;
            if (p.inertia < overall.inertia ||
                (p.inertia == overall.inertia && p.restart < overall.restart)) {
                overall = std::move(p);
            }
        }
    }

    if (overall.restart < 0) throw InternalError("kmeans: no restart produced a model");

    ClusterModel model;
    model.config = config;
    model.labels = std::move(overall.state.labels);
    model.inertia = overall.state.inertia;
    model.converged = overall.state.converged;
    model.centroids.assign(static_cast<std::size_t>(config.k), std::vector<double>(ps.dim));
    for (int c = 0; c < config.k; ++c) {
        for (std::size_t j = 0; j < ps.dim; ++j) {
            model.centroids[static_cast<std::size_t>(c)][j] =
                overall.state.centroids[static_cast<std::size_t>(c) * ps.dim + j];
        }
    }
    if (lloyd_trace) *lloyd_trace = std::move(overall.state.trace);
    return model;
}

int assign_point(const ClusterModel& model, std::span<const double> point) {
    if (model.centroids.empty()) throw std::invalid_argument("assign: model has no centroids");
    if (point.size() != model.centroids[0].size()) {
        throw std::invalid_argument("assign: dimension mismatch");
    }
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        double d = 0.0;
        const auto& centroid = model.centroids[c];
        if (model.config.distance == Distance::SquaredEuclidean) {
            for (std::size_t j = 0; j < point.size(); ++j) {
                const double diff = point[j] - centroid[j];
                d += diff * diff;
            }
        } else {
            for (std::size_t j = 0; j < point.size(); ++j) d += std::abs(point[j] - centroid[j]);
        }
        if (d < best_d) { best_d = d; best = static_cast<int>(c); }
    }
    return best;
}

std::vector<int> assign(const ClusterModel& model, const ResponseMatrix& matrix) {
    const PointSet ps = make_points(matrix, model.config.orientation);
    if (model.centroids.empty() || ps.dim != model.centroids[0].size()) {
        throw std::invalid_argument("assign: dimension mismatch");
    }
    std::vector<int> labels(ps.n);
    std::vector<double> buffer(ps.dim);
    for (std::size_t i = 0; i < ps.n; ++i) {
        const std::uint8_t* x = ps.point(i);
        for (std::size_t j = 0; j < ps.dim; ++j) buffer[j] = static_cast<double>(x[j]);
        labels[i] = assign_point(model, buffer);
    }
    return labels;
}

namespace {

struct AggloCluster {
    bool alive = true;
    std::vector<int> members;
    std::vector<std::int64_t> sums;  // per-dim member sum
};

double ward_cost(const AggloCluster& a, const AggloCluster& b, std::size_t dim) {
    const double na = static_cast<double>(a.members.size());
    const double nb = static_cast<double>(b.members.size());
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double diff = static_cast<double>(a.sums[j]) / na - static_cast<double>(b.sums[j]) / nb;
        d2 += diff * diff;
    }
    return na * nb / (na + nb) * d2;
}

}  // namespace

ClusterModel agglomerative_fit(const ResponseMatrix& matrix, int k, Linkage linkage,
                               Distance distance, Orientation orientation) {
    if (linkage == Linkage::Ward && distance != Distance::SquaredEuclidean) {
        throw std::invalid_argument("agglomerative: ward linkage requires squared-euclidean");
    }
    const PointSet ps = make_points(matrix, orientation);
    if (ps.n == 0) throw std::invalid_argument("agglomerative: empty matrix");
    if (k < 1 || static_cast<std::size_t>(k) > ps.n) {
        throw std::invalid_argument("agglomerative: k must lie in [1, n]");
    }

    const std::size_t n = ps.n;
    std::vector<AggloCluster> clusters(n);
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i].members = {static_cast<int>(i)};
        clusters[i].sums.assign(ps.dim, 0);
        const std::uint8_t* x = ps.point(i);
        for (std::size_t j = 0; j < ps.dim; ++j) clusters[i].sums[j] = x[j];
    }

    // Pairwise merge costs; row i holds entries for j > i.
    std::vector<std::vector<double>> cost(n);
    auto pair_cost = [&](std::size_t i, std::size_t j) -> double& {
        return i < j ? cost[i][j - i - 1] : cost[j][i - j - 1];
    };
    // For complete linkage the cost is the max point-pair distance; between
    // binary points both supported distances reduce to the hamming count.
    for (std::size_t i = 0; i < n; ++i) {
        cost[i].resize(n - i - 1);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = static_cast<double>(hamming(ps.point(i), ps.point(j), ps.dim));
            cost[i][j - i - 1] = (linkage == Linkage::Ward) ? 0.5 * d : d;
        }
    }

    std::size_t alive_count = n;
    while (alive_count > static_cast<std::size_t>(k)) {
        std::size_t best_i = n, best_j = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!clusters[i].alive) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!clusters[j].alive) continue;
                const double c = pair_cost(i, j);
                if (c < best) { best = c; best_i = i; best_j = j; }
            }
        }
        AggloCluster& a = clusters[best_i];
        AggloCluster& b = clusters[best_j];
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        for (std::size_t j = 0; j < ps.dim; ++j) a.sums[j] += b.sums[j];
        b.alive = false;
        b.members.clear();
        --alive_count;
        for (std::size_t other = 0; other < n; ++other) {
            if (!clusters[other].alive || other == best_i) continue;
            double c;
            if (linkage == Linkage::Ward) {
                c = ward_cost(a, clusters[other], ps.dim);
            } else {
                c = std::max(pair_cost(best_i, other), pair_cost(best_j, other));
            }
            pair_cost(best_i, other) = c;
        }
    }

    // Relabel surviving clusters by smallest member index.
    std::vector<std::pair<int, std::size_t>> order;
    for (std::size_t i = 0; i < n; ++i) {
        if (clusters[i].alive) {
            order.emplace_back(*std::min_element(clusters[i].members.begin(), clusters[i].members.end()), i);
        }
    }
    std::sort(order.begin(), order.end());

    ClusterModel model;
    model.config.k = k;
    model.config.restarts = 1;
    model.config.seed = 0;
    model.config.max_iter = 1;
    model.config.distance = distance;
    model.config.orientation = orientation;
    model.labels.assign(n, 0);
    model.centroids.assign(static_cast<std::size_t>(k), std::vector<double>(ps.dim, 0.0));
    for (std::size_t c = 0; c < order.size(); ++c) {
        const AggloCluster& cl = clusters[order[c].second];
        for (int m : cl.members) model.labels[static_cast<std::size_t>(m)] = static_cast<int>(c);
        for (std::size_t j = 0; j < ps.dim; ++j) {
            model.centroids[c][j] =
                static_cast<double>(cl.sums[j]) / static_cast<double>(cl.members.size());
        }
    }
    std::vector<double> flat(static_cast<std::size_t>(k) * ps.dim);
    for (int c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < ps.dim; ++j) {
            flat[static_cast<std::size_t>(c) * ps.dim + j] = model.centroids[static_cast<std::size_t>(c)][j];
        }
    }
    model.inertia = total_inertia(ps, model.labels, flat, distance);
    model.converged = true;
    return model;
}

std::vector<std::string> select_representatives(const ClusterModel& column_model,
                                                std::span<const QuestionStats> column_stats,
                                                const std::map<int, std::string>& overrides) {
    if (column_model.labels.size() != column_stats.size()) {
        throw std::invalid_argument("select_representatives: stats/labels size mismatch");
    }
    const int k = column_model.config.k;
    std::vector<std::string> reps(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        const QuestionStats* best = nullptr;
        bool override_ok = false;
        auto ov = overrides.find(c);
        for (std::size_t j = 0; j < column_stats.size(); ++j) {
            if (column_model.labels[j] != c) continue;
            const QuestionStats& s = column_stats[j];
            if (ov != overrides.end() && s.code == ov->second) override_ok = true;
            if (!best || s.variance > best->variance ||
                (s.variance == best->variance && s.code < best->code)) {
                best = &s;
            }
        }
        if (ov != overrides.end()) {
            if (!override_ok) {
                throw std::invalid_argument("select_representatives: override " + ov->second +
                                            " is not a member of cluster " + std::to_string(c));
            }
            reps[static_cast<std::size_t>(c)] = ov->second;
        } else if (best) {
            reps[static_cast<std::size_t>(c)] = best->code;
        }
    }
    return reps;
}

std::string cluster_model_to_json(const ClusterModel& model) {
    nlohmann::json doc;
    doc["config"] = {
        {"k", model.config.k},
        {"restarts", model.config.restarts},
        {"seed", model.config.seed},
        {"max_iter", model.config.max_iter},
        {"distance", to_string(model.config.distance)},
        {"orientation", to_string(model.config.orientation)},
    };
    doc["centroids"] = model.centroids;
    doc["labels"] = model.labels;
    doc["inertia"] = model.inertia;
    doc["converged"] = model.converged;
    return doc.dump(2) + "\n";
}

ClusterModel cluster_model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("cluster model: ") + e.what());
    }
    ClusterModel model;
    try {
        const auto& c = doc.at("config");
        model.config.k = c.at("k").get<int>();
        model.config.restarts = c.at("restarts").get<int>();
        model.config.seed = c.at("seed").get<std::uint64_t>();
        model.config.max_iter = c.at("max_iter").get<int>();
        model.config.distance = distance_from_string(c.at("distance").get<std::string>());
        model.config.orientation = orientation_from_string(c.at("orientation").get<std::string>());
        model.centroids = doc.at("centroids").get<std::vector<std::vector<double>>>();
        model.labels = doc.at("labels").get<std::vector<int>>();
        model.inertia = doc.at("inertia").get<double>();
        model.converged = doc.at("converged").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("cluster model: ") + e.what());
    }
    return model;
}

}  // namespace binquest
