#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "binquest/charts.hpp"
#include "binquest/cluster.hpp"
#include "binquest/rules.hpp"

namespace binquest {

struct ClusterSection {
    int k = 2;
    int restarts = 2000;
    int max_iter = 300;
    Distance distance = Distance::SquaredEuclidean;
};

struct ChartOptions {
    double grape_radius = 12.0;
    double halfpie_radius = 120.0;
    int top_rules = 12;  // halfpies rendered for the strongest rules
    ColorScale scale;
};

// Defaults follow the methodology's stated settings: 2000 restarts, alpha
// 0.05, question k 10, respondent k 14, monothetic depth 4, sweep k 2..15.
struct RunConfig {
    std::string matrix_path;
    std::string schema_path;
    std::string scores_path;      // optional, enables stratify
    std::string covariates_path;  // optional categorical covariate
    std::string synth_spec_path;  // for the synth command
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware default

    ClusterSection questions{.k = 10};
    ClusterSection respondents{.k = 14};
    int monothetic_depth = 4;

    int sweep_k_min = 2;
    int sweep_k_max = 15;
    bool sweep_agglomerative = true;
    int sweep_agglom_k = 0;  // 0 = k of the best-silhouette kmeans row

    MiningConfig mining;
    ChartOptions charts;
    std::vector<double> quantiles{0.05, 0.15};
};

// JSON config file with kebab-case keys; unknown keys are errors. Flags given
// on the command line override file values; BINQUEST_SEED overrides the file
// seed (but not an explicit --seed).
RunConfig parse_config_file(const std::string& path);
void apply_env_overrides(RunConfig& config);

enum class Command {
    Validate, Stats, ClusterQuestions, ClusterRespondents, Sweep,
    Monothetic, Rules, Charts, Stratify, Synth, Pipeline,
};

std::optional<Command> parse_command(const std::string& name);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts;  // paths written, relative to output_dir
};

// Runs one command; artifact names are fixed (stats.csv, rules.csv,
// grapeshape_cluster_<i>.svg, halfpie_<B>_<A>.svg, ...). Throws ConfigError /
// DataError / InternalError; run_cli maps those to exit codes 2 / 3 / 4.
RunResult run_command(Command command, const RunConfig& config);

// Full argv interface (subcommand + flags). Returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace binquest
