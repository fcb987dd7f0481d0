#pragma once

// Shared helpers for the test suites: matrix builders, random-instance
// generators (seeded through the library RNG so failures replay), and a
// scratch directory guard.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "binquest/matrix.hpp"
#include "binquest/rng.hpp"

namespace bqtest {

// Matrix from explicit rows; codes default to Q1..QM, each in its own group.
inline binquest::ResponseMatrix make_matrix(const std::vector<std::vector<int>>& rows,
                                            std::vector<binquest::QuestionMeta> questions = {}) {
    binquest::ResponseMatrix m;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    if (questions.empty()) {
        for (std::size_t j = 0; j < cols; ++j) {
            m.questions.push_back({"Q" + std::to_string(j + 1), static_cast<int>(j + 1),
                                   "question " + std::to_string(j + 1)});
        }
    } else {
        m.questions = std::move(questions);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.respondent_ids.push_back("r" + std::to_string(i + 1));
        for (int v : rows[i]) m.cells.push_back(static_cast<std::uint8_t>(v));
    }
    return m;
}

inline binquest::ResponseMatrix random_matrix(binquest::SplitMix64& rng, std::size_t n,
                                              std::size_t m, double p = 0.5) {
    std::vector<std::vector<int>> rows(n, std::vector<int>(m, 0));
    for (auto& row : rows) {
        for (auto& cell : row) cell = rng.bernoulli(p) ? 1 : 0;
    }
    return make_matrix(rows);
}

// Unique scratch directory under the system temp dir, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("binquest_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace bqtest
