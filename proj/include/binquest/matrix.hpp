#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "binquest/error.hpp"

namespace binquest {

struct QuestionMeta {
    std::string code;   // short answer identifier, unique within a matrix
    int group = 1;      // question group id, >= 1
    std::string label;  // human-readable text, nonempty
};

// N respondents x M binary answers. Cells are written once at construction and
// treated as immutable afterwards; all analysis code takes const references.
struct ResponseMatrix {
    std::vector<std::string> respondent_ids;  // length N, unique
    std::vector<QuestionMeta> questions;      // length M, codes unique
    std::vector<std::uint8_t> cells;          // row-major N*M, each 0 or 1

    std::size_t n_rows() const { return respondent_ids.size(); }
    std::size_t n_cols() const { return questions.size(); }

    std::uint8_t cell(std::size_t row, std::size_t col) const {
        return cells[row * n_cols() + col];
    }

    const std::uint8_t* row(std::size_t r) const { return cells.data() + r * n_cols(); }

    std::optional<std::size_t> find_column(std::string_view code) const;

    // Column index for a known code; throws std::invalid_argument otherwise.
    std::size_t column_of(std::string_view code) const;
};

struct Finding {
    std::string locus;    // e.g. "row 3", "column Q1B"
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> errors;
    std::vector<Finding> warnings;
    bool ok() const { return errors.empty(); }
};

// Schema JSON: array of {"code": ..., "group": ..., "label": ...}.
std::vector<QuestionMeta> load_schema(const std::string& path);
std::string schema_to_json(const std::vector<QuestionMeta>& questions);

// Matrix CSV: header "id,<code>,..." followed by one row per respondent with
// literal 0/1 cells, UTF-8, LF line endings. Columns are reordered to schema
// order on load; every error names its row or column.
ResponseMatrix load_matrix(const std::string& matrix_path, const std::string& schema_path);
std::string matrix_to_csv(const ResponseMatrix& matrix);
void save_matrix(const ResponseMatrix& matrix, const std::string& path);

// Checks every ResponseMatrix invariant; zero-variance columns come back as
// warnings so downstream stages can skip them without reindexing.
ValidationReport validate(const ResponseMatrix& matrix);

// One-hot expansion of a single-choice question: one binary column per option,
// exactly one 1 per respondent row. `roster`, when given, is the full list of
// expected respondents so missing selections can be reported.
ResponseMatrix encode_categorical(
    const std::vector<std::pair<std::string, int>>& choices,
    const std::vector<QuestionMeta>& options,
    const std::vector<std::string>& roster = {});

// Submatrix with only the named columns, in the given order.
ResponseMatrix select_columns(const ResponseMatrix& matrix, const std::vector<std::string>& codes);

std::string validation_report_to_text(const ValidationReport& report);

}  // namespace binquest
