#include "binquest/synth.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "binquest/rng.hpp"
#include "binquest/textio.hpp"

namespace binquest {

void MixtureSpec::check() const {
    if (weights.empty()) throw std::invalid_argument("mixture: no components");
    if (probs.size() != weights.size()) {
        throw std::invalid_argument("mixture: probs rows must match weights");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture: weights must sum to 1");
    const std::size_t m = probs[0].size();
    if (m == 0) throw std::invalid_argument("mixture: zero questions");
    for (const auto& row : probs) {
        if (row.size() != m) throw std::invalid_argument("mixture: ragged probs");
        for (double p : row) {
            if (p < 0.0 || p > 1.0) throw std::invalid_argument("mixture: prob outside [0,1]");
        }
    }
    if (n_rows <= 0) throw std::invalid_argument("mixture: n_rows must be positive");
}

SynthResult synth_mixture(const MixtureSpec& spec) {
    spec.check();
    const std::size_t m = spec.n_questions();
    SynthResult out;
    out.matrix.questions.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        QuestionMeta q;
        q.code = "Q" + std::to_string(j + 1);
        q.group = static_cast<int>(j + 1);
        q.label = "Synthetic answer " + std::to_string(j + 1);
        out.matrix.questions.push_back(std::move(q));
    }
    out.matrix.respondent_ids.reserve(static_cast<std::size_t>(spec.n_rows));
    out.matrix.cells.reserve(static_cast<std::size_t>(spec.n_rows) * m);
    out.true_labels.reserve(static_cast<std::size_t>(spec.n_rows));

    SplitMix64 rng(spec.seed);
    char id[32];
    for (std::int64_t i = 0; i < spec.n_rows; ++i) {
        std::snprintf(id, sizeof(id), "s%06lld", static_cast<long long>(i + 1));
        out.matrix.respondent_ids.emplace_back(id);
        const std::size_t z = rng.weighted(spec.weights);
        out.true_labels.push_back(static_cast<int>(z));
        for (std::size_t j = 0; j < m; ++j) {
            out.matrix.cells.push_back(static_cast<std::uint8_t>(rng.bernoulli(spec.probs[z][j])));
        }
    }
    return out;
}

MixtureSpec mixture_spec_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("mixture spec: ") + e.what());
    }
    MixtureSpec spec;
    try {
        spec.weights = doc.at("weights").get<std::vector<double>>();
        spec.probs = doc.at("probs").get<std::vector<std::vector<double>>>();
        spec.n_rows = doc.at("n_rows").get<std::int64_t>();
        spec.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("mixture spec: ") + e.what());
    }
    try {
        spec.check();
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("mixture spec: ") + e.what());
    }
    return spec;
}

MixtureSpec load_mixture_spec(const std::string& path) {
    return mixture_spec_from_json(read_file(path));
}

std::string labels_to_csv(const std::vector<std::string>& ids, const std::vector<int>& labels) {
    std::string out = "id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i];
        out += ',';
        out += std::to_string(labels[i]);
        out += '\n';
    }
    return out;
}

}  // namespace binquest
