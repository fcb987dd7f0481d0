#include "binquest/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "binquest/monothetic.hpp"
#include "binquest/stratify.hpp"
#include "binquest/synth.hpp"
#include "binquest/textio.hpp"
#include "binquest/validity.hpp"

namespace binquest {

namespace {

void expect_keys(const nlohmann::json& obj, const char* where,
                 std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed) {
            if (it.key() == key) { ok = true; break; }
        }
        if (!ok) throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
}

template <typename T>
void read_opt(const nlohmann::json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_cluster_section(const nlohmann::json& obj, const char* where, ClusterSection& section) {
    expect_keys(obj, where, {"k", "restarts", "max-iter", "distance"});
    read_opt(obj, "k", section.k);
    read_opt(obj, "restarts", section.restarts);
    read_opt(obj, "max-iter", section.max_iter);
    if (obj.contains("distance")) {
        section.distance = distance_from_string(obj.at("distance").get<std::string>());
    }
}

Rgb read_rgb(const nlohmann::json& arr, const char* where) {
    if (!arr.is_array() || arr.size() != 3) {
        throw ConfigError(std::string("config: ") + where + " must be [r,g,b]");
    }
    return {arr[0].get<int>(), arr[1].get<int>(), arr[2].get<int>()};
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    if (!doc.is_object()) throw ConfigError("config " + path + ": expected a JSON object");

    RunConfig config;
    try {
        expect_keys(doc, "config",
                    {"matrix", "schema", "scores", "covariates", "synth-spec", "output-dir",
                     "seed", "threads", "questions", "respondents", "monothetic-depth", "sweep",
                     "mining", "charts", "quantiles"});
        read_opt(doc, "matrix", config.matrix_path);
        read_opt(doc, "schema", config.schema_path);
        read_opt(doc, "scores", config.scores_path);
        read_opt(doc, "covariates", config.covariates_path);
        read_opt(doc, "synth-spec", config.synth_spec_path);
        read_opt(doc, "output-dir", config.output_dir);
        read_opt(doc, "seed", config.seed);
        read_opt(doc, "threads", config.threads);
        if (doc.contains("questions")) read_cluster_section(doc.at("questions"), "questions", config.questions);
        if (doc.contains("respondents")) {
            read_cluster_section(doc.at("respondents"), "respondents", config.respondents);
        }
        read_opt(doc, "monothetic-depth", config.monothetic_depth);
        if (doc.contains("sweep")) {
            const auto& s = doc.at("sweep");
            expect_keys(s, "sweep", {"k-min", "k-max", "agglomerative", "agglom-k"});
            read_opt(s, "k-min", config.sweep_k_min);
            read_opt(s, "k-max", config.sweep_k_max);
            read_opt(s, "agglomerative", config.sweep_agglomerative);
            read_opt(s, "agglom-k", config.sweep_agglom_k);
        }
        if (doc.contains("mining")) {
            const auto& m = doc.at("mining");
            expect_keys(m, "mining",
                        {"alpha", "min-abs-conversion", "min-support", "cross-group-only", "exclusions"});
            read_opt(m, "alpha", config.mining.alpha);
            read_opt(m, "min-abs-conversion", config.mining.min_abs_conversion);
            read_opt(m, "min-support", config.mining.min_support);
            read_opt(m, "cross-group-only", config.mining.cross_group_only);
            if (m.contains("exclusions")) {
                for (const auto& pair : m.at("exclusions")) {
                    if (!pair.is_array() || pair.size() != 2) {
                        throw ConfigError("config: exclusions entries must be [codeA, codeB]");
                    }
                    std::string a = pair[0].get<std::string>();
                    std::string b = pair[1].get<std::string>();
                    if (b < a) std::swap(a, b);
                    config.mining.exclusion_pairs.insert({a, b});
                }
            }
        }
        if (doc.contains("charts")) {
            const auto& c = doc.at("charts");
            expect_keys(c, "charts",
                        {"grape-radius", "halfpie-radius", "top-rules", "color-low", "color-mid",
                         "color-high"});
            read_opt(c, "grape-radius", config.charts.grape_radius);
            read_opt(c, "halfpie-radius", config.charts.halfpie_radius);
            read_opt(c, "top-rules", config.charts.top_rules);
            if (c.contains("color-low")) config.charts.scale.low = read_rgb(c.at("color-low"), "color-low");
            if (c.contains("color-mid")) config.charts.scale.mid = read_rgb(c.at("color-mid"), "color-mid");
            if (c.contains("color-high")) config.charts.scale.high = read_rgb(c.at("color-high"), "color-high");
        }
        read_opt(doc, "quantiles", config.quantiles);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return config;
}

void apply_env_overrides(RunConfig& config) {
    if (const char* seed = std::getenv("BINQUEST_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(seed, &used);
            if (used != std::string(seed).size()) throw std::invalid_argument("trailing characters");
            config.seed = v;
        } catch (const std::exception&) {
            throw ConfigError(std::string("BINQUEST_SEED is not a valid 64-bit seed: ") + seed);
        }
    }
}

std::optional<Command> parse_command(const std::string& name) {
    if (name == "validate") return Command::Validate;
    if (name == "stats") return Command::Stats;
    if (name == "cluster-questions") return Command::ClusterQuestions;
    if (name == "cluster-respondents") return Command::ClusterRespondents;
    if (name == "sweep") return Command::Sweep;
    if (name == "monothetic") return Command::Monothetic;
    if (name == "rules") return Command::Rules;
    if (name == "charts") return Command::Charts;
    if (name == "stratify") return Command::Stratify;
    if (name == "synth") return Command::Synth;
    if (name == "pipeline") return Command::Pipeline;
    return std::nullopt;
}

namespace {

namespace fs = std::filesystem;

struct Workspace {
    const RunConfig& config;
    fs::path out_dir;
    std::vector<std::string> artifacts;

    explicit Workspace(const RunConfig& cfg) : config(cfg), out_dir(cfg.output_dir) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw ConfigError("cannot create output dir " + cfg.output_dir + ": " + ec.message());
    }

    void write(const std::string& name, std::string_view content) {
        write_file((out_dir / name).string(), content);
        artifacts.push_back(name);
    }

    std::string path_of(const std::string& name) const { return (out_dir / name).string(); }
};

ResponseMatrix require_matrix(const RunConfig& config) {
    if (config.matrix_path.empty() || config.schema_path.empty()) {
        throw ConfigError("matrix and schema paths are required for this command");
    }
    return load_matrix(config.matrix_path, config.schema_path);
}

ClusterConfig cluster_config(const ClusterSection& section, std::uint64_t seed,
                             Orientation orientation) {
    ClusterConfig cc;
    cc.k = section.k;
    cc.restarts = section.restarts;
    cc.max_iter = section.max_iter;
    cc.distance = section.distance;
    cc.seed = seed;
    cc.orientation = orientation;
    return cc;
}

std::vector<QuestionStats> per_column_stats(const ResponseMatrix& matrix) {
    std::vector<QuestionStats> stats;
    stats.reserve(matrix.n_cols());
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        stats.push_back(bernoulli_stats_column(matrix, j));
    }
    return stats;
}

std::string representatives_csv(const std::vector<std::string>& reps) {
    std::string out = "cluster,code\n";
    for (std::size_t c = 0; c < reps.size(); ++c) {
        out += std::to_string(c) + ',' + reps[c] + '\n';
    }
    return out;
}

// Representatives reordered to schema order, so reduced-matrix charts keep the
// questionnaire's spatial arrangement.
std::vector<std::string> reps_in_schema_order(const ResponseMatrix& matrix,
                                              std::vector<std::string> reps) {
    std::sort(reps.begin(), reps.end(), [&](const std::string& a, const std::string& b) {
        return matrix.column_of(a) < matrix.column_of(b);
    });
    return reps;
}

int run_validate(Workspace& ws) {
    const ResponseMatrix matrix = require_matrix(ws.config);
    const ValidationReport report = validate(matrix);
    ws.write("validation.txt", validation_report_to_text(report));
    return report.ok() ? 0 : 3;
}

void run_stats(Workspace& ws) {
    const ResponseMatrix matrix = require_matrix(ws.config);
    const auto ranked = rank_by_variance(matrix);
    ws.write("stats.csv", stats_to_csv(ranked));
}

struct QuestionClustering {
    ClusterModel model;
    std::vector<std::string> representatives;  // cluster order
};

QuestionClustering cluster_questions(const ResponseMatrix& matrix, const RunConfig& config) {
    QuestionClustering out;
    out.model = kmeans_fit(matrix, cluster_config(config.questions, config.seed, Orientation::Columns),
                           config.threads);
    out.representatives = select_representatives(out.model, per_column_stats(matrix));
    return out;
}

void run_cluster_questions(Workspace& ws) {
    const ResponseMatrix matrix = require_matrix(ws.config);
    const QuestionClustering qc = cluster_questions(matrix, ws.config);
    ws.write("question_clusters.json", cluster_model_to_json(qc.model));
    ws.write("representatives.csv", representatives_csv(qc.representatives));
}

void run_cluster_respondents(Workspace& ws, const ResponseMatrix& matrix) {
    const ClusterModel model = kmeans_fit(
        matrix, cluster_config(ws.config.respondents, ws.config.seed, Orientation::Rows),
        ws.config.threads);
    ws.write("respondent_clusters.json", cluster_model_to_json(model));
}

SelectionTable run_sweep(Workspace& ws, const ResponseMatrix& matrix) {
    const RunConfig& config = ws.config;
    const ClusterConfig base = cluster_config(config.respondents, config.seed, Orientation::Rows);
    SelectionTable table = sweep(matrix, {SweepMethod::KMeans}, config.sweep_k_min,
                                 config.sweep_k_max, base, config.threads);
    if (config.sweep_agglomerative) {
        int agglom_k = config.sweep_agglom_k;
        if (agglom_k <= 0) {
            // Comparison k defaults to the best-silhouette k-means row.
            double best = -2.0;
            agglom_k = config.sweep_k_min;
            for (const auto& row : table.rows) {
                if (row.silhouette && *row.silhouette > best) {
                    best = *row.silhouette;
                    agglom_k = row.k;
                }
            }
        }
        table.append(sweep(matrix, {SweepMethod::AgglomerativeWard, SweepMethod::AgglomerativeL1Complete},
                           agglom_k, agglom_k, base, config.threads));
    }
    ws.write("sweep.csv", table.to_csv());
    return table;
}

void run_monothetic(Workspace& ws, const ResponseMatrix& matrix) {
    const MonotheticTree tree = monothetic_fit(matrix, ws.config.monothetic_depth);
    ws.write("monothetic.json", monothetic_to_json(tree));
    ws.write("monothetic.txt", monothetic_to_text(tree));
}

std::vector<Rule> run_rules(Workspace& ws, const ResponseMatrix& matrix) {
    MiningSummary summary;
    const std::vector<Rule> rules = mine_rules(matrix, ws.config.mining, &summary);
    ws.write("rules.csv", rules_to_csv(rules));
    ws.write("rules.txt", rules_to_text(rules));
    ws.write("rules_summary.txt", mining_summary_to_text(summary));
    return rules;
}

void render_grapeshapes(Workspace& ws, const ResponseMatrix& reduced, const ClusterModel& model,
                        std::vector<std::string>& svg_files) {
    std::vector<std::string> codes;
    for (const auto& q : reduced.questions) codes.push_back(q.code);
    const GrapeLayout layout = make_grape_layout(codes, ws.config.charts.grape_radius);
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        const std::string name = "grapeshape_cluster_" + std::to_string(c) + ".svg";
        ws.write(name, render_grape_bunch(model.centroids[c], layout, ws.config.charts.scale,
                                          "cluster " + std::to_string(c)).bytes);
        svg_files.push_back(name);
    }
    const std::string all = "grapeshape_all.svg";
    ws.write(all, render_grapeshape(model, layout, ws.config.charts.scale).bytes);
    svg_files.push_back(all);
}

void render_halfpies(Workspace& ws, std::span<const Rule> rules,
                     std::vector<std::string>& svg_files) {
    const int limit = ws.config.charts.top_rules;
    int rendered = 0;
    for (const auto& rule : rules) {
        if (rendered >= limit) break;
        HalfPieSpec spec;
        spec.cond = rule.cond;
        spec.alpha = ws.config.mining.alpha;
        spec.radius = ws.config.charts.halfpie_radius;
        const std::string name = sanitize_filename("halfpie_" + rule.b_code + "_" + rule.a_code) + ".svg";
        ws.write(name, render_halfpie(spec).bytes);
        svg_files.push_back(name);
        ++rendered;
    }
}

void run_charts(Workspace& ws) {
    const ResponseMatrix matrix = require_matrix(ws.config);
    const std::string model_path = ws.path_of("respondent_clusters.json");
    if (!fs::exists(model_path)) {
        throw DataError("charts: missing " + model_path + " (run cluster-respondents or pipeline first)");
    }
    const ClusterModel model = cluster_model_from_json(read_file(model_path));

    // The model may have been fit on a reduced column set; recover the codes
    // from representatives.csv when present.
    ResponseMatrix chart_matrix = matrix;
    const std::string reps_path = ws.path_of("representatives.csv");
    if (model.centroids.at(0).size() != matrix.n_cols()) {
        if (!fs::exists(reps_path)) {
            throw DataError("charts: model dimensionality does not match the matrix and no representatives.csv found");
        }
        std::vector<std::string> codes;
        const auto lines = split_lines(read_file(reps_path));
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            codes.push_back(split_csv_line(lines[i], i + 1).at(1));
        }
        chart_matrix = select_columns(matrix, reps_in_schema_order(matrix, codes));
    }

    std::vector<std::string> svg_files;
    render_grapeshapes(ws, chart_matrix, model, svg_files);

    const std::string rules_path = ws.path_of("rules.csv");
    if (fs::exists(rules_path)) {
        // Recompute the conditional stats for the strongest rules; the CSV
        // keeps only the rule-level fields.
        const auto lines = split_lines(read_file(rules_path));
        std::vector<Rule> top;
        for (std::size_t i = 1; i < lines.size() && top.size() < static_cast<std::size_t>(ws.config.charts.top_rules); ++i) {
            if (lines[i].empty()) continue;
            const auto fields = split_csv_line(lines[i], i + 1);
            Rule rule;
            rule.b_code = fields.at(0);
            rule.a_code = fields.at(1);
            rule.cond = conditional_stats(matrix, rule.a_code, rule.b_code);
            top.push_back(std::move(rule));
        }
        render_halfpies(ws, top, svg_files);
    }
    std::sort(svg_files.begin(), svg_files.end());
    ws.write("index.html", gallery_html(svg_files));
}

std::string quantile_segment_name(double q) {
    return sanitize_filename("top" + fmt_shortest(q * 100.0) + "pct");
}

void run_one_segment(Workspace& ws, const ResponseMatrix& matrix, const std::vector<int>& labels,
                     const std::string& name, const Mask& mask,
                     std::vector<std::string>& svg_files) {
    const ClusterDistribution dist = cluster_distribution(labels, mask);
    ws.write("stratify_clusters_" + name + ".csv", cluster_distribution_to_csv(dist));
    std::vector<std::string> bar_labels;
    for (std::size_t c = 0; c < dist.counts.size(); ++c) bar_labels.push_back("c" + std::to_string(c));
    const std::string bar_name = "stratify_clusters_" + name + ".svg";
    ws.write(bar_name,
             render_bar_chart(bar_labels, dist.within_rate, "segment " + name + " rate per cluster").bytes);
    svg_files.push_back(bar_name);

    const auto profile = segment_question_profile(matrix, mask, ws.config.mining.alpha);
    ws.write("stratify_questions_" + name + ".csv", question_profile_to_csv(profile));

    // HalfPie per question-segment pair for the most significant differences.
    std::vector<const QuestionProfileRow*> significant;
    for (const auto& row : profile) {
        if (row.test.significant) significant.push_back(&row);
    }
    std::sort(significant.begin(), significant.end(),
              [](const QuestionProfileRow* a, const QuestionProfileRow* b) {
                  if (a->test.p_value != b->test.p_value) return a->test.p_value < b->test.p_value;
                  return a->code < b->code;
              });
    std::int64_t mask_size = 0;
    for (auto m : mask) mask_size += m != 0;
    const std::int64_t n = static_cast<std::int64_t>(matrix.n_rows());
    int rendered = 0;
    for (const QuestionProfileRow* row : significant) {
        if (rendered >= ws.config.charts.top_rules) break;
        if (mask_size == n) break;  // no complement stratum to draw
        const std::size_t col = matrix.column_of(row->code);
        ConditionalStats cond;
        cond.a_code = row->code;
        cond.b_code = name;
        cond.n = n;
        cond.n_b = mask_size;
        for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
            const bool va = matrix.cell(i, col) != 0;
            cond.a_total += va;
            if (mask[i] && va) cond.a_and_b++;
        }
        cond.p_a = static_cast<double>(cond.a_total) / static_cast<double>(cond.n);
        cond.p_a_given_b = static_cast<double>(cond.a_and_b) / static_cast<double>(cond.n_b);
        cond.p_a_given_not_b = static_cast<double>(cond.a_total - cond.a_and_b) /
                               static_cast<double>(cond.n - cond.n_b);
        HalfPieSpec spec;
        spec.cond = cond;
        spec.alpha = ws.config.mining.alpha;
        spec.radius = ws.config.charts.halfpie_radius;
        const std::string file = sanitize_filename("stratify_halfpie_" + name + "_" + row->code) + ".svg";
        ws.write(file, render_halfpie(spec).bytes);
        svg_files.push_back(file);
        ++rendered;
    }
}

void run_stratify(Workspace& ws, const ResponseMatrix& matrix, const std::vector<int>& labels,
                  std::vector<std::string>& svg_files) {
    const RunConfig& config = ws.config;
    if (!config.scores_path.empty()) {
        const ScoreTable scores = load_scores(config.scores_path);
        for (double q : config.quantiles) {
            const Mask mask = top_quantile_mask(matrix, scores, q);
            run_one_segment(ws, matrix, labels, quantile_segment_name(q), mask, svg_files);
        }
    }
    if (!config.covariates_path.empty()) {
        const CategoryTable categories = load_categories(config.covariates_path);
        const CategorySegments segments = categorical_segments(matrix, categories);
        if (!segments.missing_ids.empty()) {
            std::string report = "respondents without covariate:\n";
            for (const auto& id : segments.missing_ids) report += id + "\n";
            ws.write("stratify_missing_covariate.txt", report);
        }
        for (const auto& [value, mask] : segments.segments) {
            run_one_segment(ws, matrix, labels, sanitize_filename("cat_" + value), mask, svg_files);
        }
    }
}

void run_stratify_standalone(Workspace& ws) {
    const ResponseMatrix matrix = require_matrix(ws.config);
    const std::string model_path = ws.path_of("respondent_clusters.json");
    if (!fs::exists(model_path)) {
        throw DataError("stratify: missing " + model_path + " (run cluster-respondents or pipeline first)");
    }
    const ClusterModel model = cluster_model_from_json(read_file(model_path));
    if (model.labels.size() != matrix.n_rows()) {
        throw DataError("stratify: cluster model rows do not match the matrix");
    }
    if (ws.config.scores_path.empty() && ws.config.covariates_path.empty()) {
        throw ConfigError("stratify: a scores or covariates file is required");
    }
    std::vector<std::string> svg_files;
    run_stratify(ws, matrix, model.labels, svg_files);
}

void run_synth(Workspace& ws) {
    if (ws.config.synth_spec_path.empty()) {
        throw ConfigError("synth: a synth-spec path is required");
    }
    const MixtureSpec spec = load_mixture_spec(ws.config.synth_spec_path);
    const SynthResult result = synth_mixture(spec);
    ws.write("matrix.csv", matrix_to_csv(result.matrix));
    ws.write("labels.csv", labels_to_csv(result.matrix.respondent_ids, result.true_labels));
    ws.write("schema.json", schema_to_json(result.matrix.questions));
}

int run_pipeline(Workspace& ws) {
    const RunConfig& config = ws.config;
    const ResponseMatrix matrix = require_matrix(config);

    const ValidationReport report = validate(matrix);
    ws.write("validation.txt", validation_report_to_text(report));
    if (!report.ok()) throw DataError("pipeline: matrix failed validation, see validation.txt");

    ws.write("stats.csv", stats_to_csv(rank_by_variance(matrix)));

    const QuestionClustering qc = cluster_questions(matrix, config);
    ws.write("question_clusters.json", cluster_model_to_json(qc.model));
    ws.write("representatives.csv", representatives_csv(qc.representatives));

    const ResponseMatrix reduced =
        select_columns(matrix, reps_in_schema_order(matrix, qc.representatives));

    const ClusterModel respondent_model = kmeans_fit(
        reduced, cluster_config(config.respondents, config.seed, Orientation::Rows), config.threads);
    ws.write("respondent_clusters.json", cluster_model_to_json(respondent_model));

    run_sweep(ws, reduced);
    run_monothetic(ws, matrix);
    const std::vector<Rule> rules = run_rules(ws, matrix);

    std::vector<std::string> svg_files;
    render_grapeshapes(ws, reduced, respondent_model, svg_files);
    render_halfpies(ws, rules, svg_files);

    run_stratify(ws, matrix, respondent_model.labels, svg_files);

    std::sort(svg_files.begin(), svg_files.end());
    ws.write("index.html", gallery_html(svg_files));
    return 0;
}

}  // namespace

RunResult run_command(Command command, const RunConfig& config) {
    Workspace ws(config);
    int code = 0;
    switch (command) {
        case Command::Validate: code = run_validate(ws); break;
        case Command::Stats: run_stats(ws); break;
        case Command::ClusterQuestions: run_cluster_questions(ws); break;
        case Command::ClusterRespondents: run_cluster_respondents(ws, require_matrix(config)); break;
        case Command::Sweep: run_sweep(ws, require_matrix(config)); break;
        case Command::Monothetic: run_monothetic(ws, require_matrix(config)); break;
        case Command::Rules: run_rules(ws, require_matrix(config)); break;
        case Command::Charts: run_charts(ws); break;
        case Command::Stratify: run_stratify_standalone(ws); break;
        case Command::Synth: run_synth(ws); break;
        case Command::Pipeline: code = run_pipeline(ws); break;
    }
    return {code, std::move(ws.artifacts)};
}

namespace {

const char* kUsage =
    "usage: binquest <command> [options]\n"
    "commands: validate stats cluster-questions cluster-respondents sweep\n"
    "          monothetic rules charts stratify synth pipeline\n"
    "run 'binquest --help' for options\n";

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"binquest - exploratory analytics for binary questionnaires"};
    app.fallthrough();

    std::string config_path, matrix, schema, scores, covariates, synth_spec, output_dir;
    std::uint64_t seed = 0;
    int threads = -1, questions_k = 0, respondents_k = 0, restarts = 0, depth = 0;
    int k_min = 0, k_max = 0, top_rules = -1;
    std::int64_t min_support = 0;
    double alpha = 0.0, min_abs_conversion = -1.0;

    auto* opt_config = app.add_option("--config", config_path, "JSON config file");
    auto* opt_matrix = app.add_option("--matrix", matrix, "matrix CSV path");
    auto* opt_schema = app.add_option("--schema", schema, "schema JSON path");
    auto* opt_scores = app.add_option("--scores", scores, "per-respondent score CSV");
    auto* opt_cov = app.add_option("--covariates", covariates, "per-respondent category CSV");
    auto* opt_synth = app.add_option("--synth-spec", synth_spec, "mixture spec JSON");
    auto* opt_out = app.add_option("--output-dir,-o", output_dir, "artifact directory");
    auto* opt_seed = app.add_option("--seed", seed, "global random seed");
    auto* opt_threads = app.add_option("--threads", threads, "worker threads (0 = auto)");
    auto* opt_qk = app.add_option("--questions-k", questions_k, "question cluster count");
    auto* opt_rk = app.add_option("--respondents-k", respondents_k, "respondent cluster count");
    auto* opt_restarts = app.add_option("--restarts", restarts, "k-means restarts");
    auto* opt_depth = app.add_option("--depth", depth, "monothetic depth");
    auto* opt_kmin = app.add_option("--k-min", k_min, "sweep lower k");
    auto* opt_kmax = app.add_option("--k-max", k_max, "sweep upper k");
    auto* opt_alpha = app.add_option("--alpha", alpha, "significance level");
    auto* opt_support = app.add_option("--min-support", min_support, "rule support floor");
    auto* opt_conv = app.add_option("--min-abs-conversion", min_abs_conversion, "rule |rate| floor");
    auto* opt_top = app.add_option("--top-rules", top_rules, "halfpies for the strongest rules");

    std::vector<std::string> command_names = {
        "validate", "stats", "cluster-questions", "cluster-respondents", "sweep",
        "monothetic", "rules", "charts", "stratify", "synth", "pipeline"};
    for (const auto& name : command_names) {
        app.add_subcommand(name);
    }
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << std::flush;
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << kUsage;
        return 2;
    }

    const auto subcommands = app.get_subcommands();
    if (subcommands.empty()) {
        std::cerr << kUsage;
        return 2;
    }
    const std::optional<Command> command = parse_command(subcommands[0]->get_name());
    if (!command) {
        std::cerr << "error: unknown command " << subcommands[0]->get_name() << "\n" << kUsage;
        return 2;
    }

    try {
        RunConfig config;
        if (opt_config->count()) config = parse_config_file(config_path);
        if (!opt_seed->count()) apply_env_overrides(config);

        if (opt_matrix->count()) config.matrix_path = matrix;
        if (opt_schema->count()) config.schema_path = schema;
        if (opt_scores->count()) config.scores_path = scores;
        if (opt_cov->count()) config.covariates_path = covariates;
        if (opt_synth->count()) config.synth_spec_path = synth_spec;
        if (opt_out->count()) config.output_dir = output_dir;
        if (opt_seed->count()) config.seed = seed;
        if (opt_threads->count()) config.threads = threads;
        if (opt_qk->count()) config.questions.k = questions_k;
        if (opt_rk->count()) config.respondents.k = respondents_k;
        if (opt_restarts->count()) {
            config.questions.restarts = restarts;
            config.respondents.restarts = restarts;
        }
        if (opt_depth->count()) config.monothetic_depth = depth;
        if (opt_kmin->count()) config.sweep_k_min = k_min;
        if (opt_kmax->count()) config.sweep_k_max = k_max;
        if (opt_alpha->count()) config.mining.alpha = alpha;
        if (opt_support->count()) config.mining.min_support = min_support;
        if (opt_conv->count()) config.mining.min_abs_conversion = min_abs_conversion;
        if (opt_top->count()) config.charts.top_rules = top_rules;

        const RunResult result = run_command(*command, config);
        for (const auto& artifact : result.artifacts) {
            std::cout << config.output_dir << "/" << artifact << "\n";
        }
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace binquest
