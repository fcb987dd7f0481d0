#include "binquest/matrix.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "binquest/textio.hpp"

namespace binquest {

std::optional<std::size_t> ResponseMatrix::find_column(std::string_view code) const {
    for (std::size_t j = 0; j < questions.size(); ++j) {
        if (questions[j].code == code) return j;
    }
    return std::nullopt;
}

std::size_t ResponseMatrix::column_of(std::string_view code) const {
    auto j = find_column(code);
    if (!j) throw std::invalid_argument("unknown answer code: " + std::string(code));
    return *j;
}

std::vector<QuestionMeta> load_schema(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("schema " + path + ": " + e.what());
    }
    if (!doc.is_array()) throw DataError("schema " + path + ": expected a JSON array");
    std::vector<QuestionMeta> questions;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        const std::string at = "schema entry " + std::to_string(i);
        if (!entry.is_object() || !entry.contains("code") || !entry.contains("group") ||
            !entry.contains("label")) {
            throw DataError(at + ": expected {code, group, label}");
        }
        QuestionMeta q;
        q.code = entry.at("code").get<std::string>();
        q.group = entry.at("group").get<int>();
        q.label = entry.at("label").get<std::string>();
        if (q.code.empty()) throw DataError(at + ": empty code");
        if (q.group < 1) throw DataError(at + " (" + q.code + "): group must be >= 1");
        if (q.label.empty()) throw DataError(at + " (" + q.code + "): empty label");
        if (!seen.insert(q.code).second) throw DataError(at + ": duplicate code " + q.code);
        questions.push_back(std::move(q));
    }
    return questions;
}

std::string schema_to_json(const std::vector<QuestionMeta>& questions) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& q : questions) {
        doc.push_back({{"code", q.code}, {"group", q.group}, {"label", q.label}});
    }
    return doc.dump(2) + "\n";
}

ResponseMatrix load_matrix(const std::string& matrix_path, const std::string& schema_path) {
    const std::vector<QuestionMeta> schema = load_schema(schema_path);
    const std::string text = read_file(matrix_path);
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw DataError(matrix_path + ": empty file");

    const std::vector<std::string> header = split_csv_line(lines[0], 1);
    if (header.empty() || header[0] != "id") {
        throw DataError(matrix_path + ": header must start with 'id'");
    }

    // Map CSV columns onto schema positions; both directions must cover.
    std::unordered_map<std::string, std::size_t> schema_pos;
    for (std::size_t j = 0; j < schema.size(); ++j) schema_pos.emplace(schema[j].code, j);
    std::vector<std::size_t> csv_to_schema(header.size() - 1);
    std::unordered_set<std::string> csv_codes;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto it = schema_pos.find(header[c]);
        if (it == schema_pos.end()) {
            throw DataError(matrix_path + ": column " + header[c] + " missing from schema");
        }
        if (!csv_codes.insert(header[c]).second) {
            throw DataError(matrix_path + ": duplicate column " + header[c]);
        }
        csv_to_schema[c - 1] = it->second;
    }
    for (const auto& q : schema) {
        if (!csv_codes.count(q.code)) {
            throw DataError(matrix_path + ": schema code " + q.code + " missing from matrix header");
        }
    }

    ResponseMatrix m;
    m.questions = schema;
    const std::size_t n_cols = schema.size();
    std::unordered_set<std::string> ids;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (line.empty() && li + 1 == lines.size()) break;  // trailing newline
        const std::size_t data_row = li;  // 1-based data row number
        const std::vector<std::string> fields = split_csv_line(line, li + 1);
        if (fields.size() != header.size()) {
            throw DataError(matrix_path + ": row " + std::to_string(data_row) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw DataError(matrix_path + ": row " + std::to_string(data_row) + ": empty id");
        }
        if (!ids.insert(fields[0]).second) {
            throw DataError(matrix_path + ": row " + std::to_string(data_row) +
                            ": duplicate respondent id " + fields[0]);
        }
        m.respondent_ids.push_back(fields[0]);
        std::vector<std::uint8_t> row(n_cols, 0);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const std::string& cell = fields[c];
            if (cell != "0" && cell != "1") {
                throw DataError(matrix_path + ": row " + std::to_string(data_row) + ", column " +
                                header[c] + ": cell must be 0 or 1, got '" + cell + "'");
            }
            row[csv_to_schema[c - 1]] = static_cast<std::uint8_t>(cell == "1");
        }
        m.cells.insert(m.cells.end(), row.begin(), row.end());
    }
    if (m.respondent_ids.empty()) throw DataError(matrix_path + ": no respondent rows");
    return m;
}

std::string matrix_to_csv(const ResponseMatrix& matrix) {
    std::string out = "id";
    for (const auto& q : matrix.questions) {
        out += ',';
        out += q.code;
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        out += matrix.respondent_ids[i];
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            out += ',';
            out += matrix.cell(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

void save_matrix(const ResponseMatrix& matrix, const std::string& path) {
    write_file(path, matrix_to_csv(matrix));
}

ValidationReport validate(const ResponseMatrix& matrix) {
    ValidationReport report;
    auto error = [&](std::string locus, std::string msg) {
        report.errors.push_back({std::move(locus), std::move(msg)});
    };

    if (matrix.n_rows() == 0) error("matrix", "no respondents");
    if (matrix.n_cols() == 0) error("matrix", "no questions");
    if (matrix.cells.size() != matrix.n_rows() * matrix.n_cols()) {
        error("matrix", "cell storage does not match N x M");
        return report;
    }

    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        if (!ids.insert(matrix.respondent_ids[i]).second) {
            error("row " + std::to_string(i + 1), "duplicate respondent id " + matrix.respondent_ids[i]);
        }
    }
    std::unordered_set<std::string> codes;
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        const auto& q = matrix.questions[j];
        const std::string locus = "column " + (q.code.empty() ? std::to_string(j + 1) : q.code);
        if (q.code.empty()) error(locus, "empty code");
        else if (!codes.insert(q.code).second) error(locus, "duplicate code");
        if (q.group < 1) error(locus, "group id must be >= 1");
        if (q.label.empty()) error(locus, "empty label");
    }
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
            if (matrix.cell(i, j) > 1) {
                error("row " + std::to_string(i + 1) + ", column " + matrix.questions[j].code,
                      "cell outside {0,1}");
            }
        }
    }
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        std::int64_t ones = 0;
        for (std::size_t i = 0; i < matrix.n_rows(); ++i) ones += matrix.cell(i, j);
        if (matrix.n_rows() > 0 &&
            (ones == 0 || ones == static_cast<std::int64_t>(matrix.n_rows()))) {
            report.warnings.push_back({"column " + matrix.questions[j].code,
                                       "zero variance (all answers identical)"});
        }
    }
    return report;
}

ResponseMatrix encode_categorical(const std::vector<std::pair<std::string, int>>& choices,
                                  const std::vector<QuestionMeta>& options,
                                  const std::vector<std::string>& roster) {
    if (options.empty()) throw std::invalid_argument("encode_categorical: no options");
    std::vector<std::string> order;  // first-appearance order of respondents
    std::unordered_map<std::string, int> selection;
    for (const auto& [id, option] : choices) {
        if (option < 0 || option >= static_cast<int>(options.size())) {
            throw DataError("respondent " + id + ": option index " + std::to_string(option) +
                            " out of range (have " + std::to_string(options.size()) + " options)");
        }
        auto [it, inserted] = selection.emplace(id, option);
        if (!inserted) throw DataError("respondent " + id + ": multiple selections");
        order.push_back(id);
    }
    if (!roster.empty()) {
        for (const auto& id : roster) {
            if (!selection.count(id)) throw DataError("respondent " + id + ": no selection");
        }
        order = roster;
    }
    ResponseMatrix m;
    m.questions = options;
    m.respondent_ids = order;
    m.cells.assign(order.size() * options.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        m.cells[i * options.size() + static_cast<std::size_t>(selection.at(order[i]))] = 1;
    }
    return m;
}

ResponseMatrix select_columns(const ResponseMatrix& matrix, const std::vector<std::string>& codes) {
    ResponseMatrix out;
    out.respondent_ids = matrix.respondent_ids;
    std::vector<std::size_t> cols;
    for (const auto& code : codes) {
        const std::size_t j = matrix.column_of(code);
        cols.push_back(j);
        out.questions.push_back(matrix.questions[j]);
    }
    out.cells.reserve(matrix.n_rows() * cols.size());
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        for (std::size_t j : cols) out.cells.push_back(matrix.cell(i, j));
    }
    return out;
}

std::string validation_report_to_text(const ValidationReport& report) {
    std::string out;
    for (const auto& f : report.errors) out += "ERROR " + f.locus + ": " + f.message + "\n";
    for (const auto& f : report.warnings) out += "WARNING " + f.locus + ": " + f.message + "\n";
    out += report.ok() ? "OK\n" : "INVALID\n";
    return out;
}

}  // namespace binquest
