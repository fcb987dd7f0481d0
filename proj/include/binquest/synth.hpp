#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binquest/matrix.hpp"

namespace binquest {

// Bernoulli mixture used to synthesize test corpora at desk scale.
struct MixtureSpec {
    std::vector<double> weights;              // K nonnegative, sum 1 (+-1e-9)
    std::vector<std::vector<double>> probs;   // K x M, each in [0,1]
    std::int64_t n_rows = 0;
    std::uint64_t seed = 1;

    std::size_t n_components() const { return weights.size(); }
    std::size_t n_questions() const { return probs.empty() ? 0 : probs[0].size(); }

    // Throws std::invalid_argument on any violated invariant.
    void check() const;
};

struct SynthResult {
    ResponseMatrix matrix;
    std::vector<int> true_labels;  // component index per row
};

// Deterministic in the spec seed. Draw order per row: one weighted() pick for
// the component, then one bernoulli() per cell, left to right (see rng.hpp).
// Respondent ids are s000001..; question codes Q1..QM, each in its own group.
SynthResult synth_mixture(const MixtureSpec& spec);

// Spec JSON: {"weights": [...], "probs": [[...]], "n_rows": n, "seed": s}.
MixtureSpec mixture_spec_from_json(const std::string& text);
MixtureSpec load_mixture_spec(const std::string& path);

std::string labels_to_csv(const std::vector<std::string>& ids, const std::vector<int>& labels);

}  // namespace binquest
