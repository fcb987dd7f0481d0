#include "binquest/monothetic.hpp"

#include <algorithm>

#include <json.hpp>

#include "binquest/error.hpp"
#include "binquest/textio.hpp"

namespace binquest {

namespace {

// Within-group objective of a row set, as an exact rational: the sum over all
// answers of t_j * f_j, over the member count. Split choices and gain tests
// compare these rationals in wide integers, so results carry no floating-point
// tie ambiguity.
struct Objective {
    std::int64_t numerator = 0;    // sum_j t_j * (n - t_j)
    std::int64_t denominator = 1;  // n

    double value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

Objective node_objective(const ResponseMatrix& matrix, const std::vector<int>& members) {
    Objective obj;
    obj.denominator = static_cast<std::int64_t>(members.size());
    for (std::size_t j = 0; j < matrix.n_cols(); ++j) {
        std::int64_t t = 0;
        for (int i : members) t += matrix.cell(static_cast<std::size_t>(i), j);
        obj.numerator += t * (obj.denominator - t);
    }
    return obj;
}

// a/b < c/d with positive denominators.
bool rational_less(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return static_cast<__int128>(a) * d < static_cast<__int128>(c) * b;
}

struct SplitEval {
    int col = -1;
    // children objective total as a rational: num / (n0 * n1)
    std::int64_t num = 0;
    std::int64_t den = 1;
    Objective child0, child1;
};

void split_node(const ResponseMatrix& matrix, MonotheticNode& node, int remaining_depth) {
    const Objective parent = node_objective(matrix, node.members);
    node.objective = parent.value();
    if (remaining_depth <= 0 || node.members.size() < 2) return;
    SplitEval best;
    std::vector<int> m0, m1;
    for (std::size_t col = 0; col < matrix.n_cols(); ++col) {
        m0.clear();
        m1.clear();
        for (int i : node.members) {
            (matrix.cell(static_cast<std::size_t>(i), col) ? m1 : m0).push_back(i);
        }
        if (m0.empty() || m1.empty()) continue;  // constant column, no bifurcation
        const Objective o0 = node_objective(matrix, m0);
        const Objective o1 = node_objective(matrix, m1);
        // o0.num/n0 + o1.num/n1 over the common denominator n0 * n1.
        const std::int64_t num = o0.numerator * o1.denominator + o1.numerator * o0.denominator;
        const std::int64_t den = o0.denominator * o1.denominator;
        if (best.col < 0 || rational_less(num, den, best.num, best.den)) {
            best = {static_cast<int>(col), num, den, o0, o1};
        }
    }
    if (best.col < 0) return;  // every column constant within the node

    // Keep the split only on a strict gain: children total < parent total.
    if (!rational_less(best.num, best.den, parent.numerator, parent.denominator)) return;

    node.split_col = best.col;
    node.split_code = matrix.questions[static_cast<std::size_t>(best.col)].code;
    node.child0 = std::make_unique<MonotheticNode>();
    node.child1 = std::make_unique<MonotheticNode>();
    for (int i : node.members) {
        (matrix.cell(static_cast<std::size_t>(i), static_cast<std::size_t>(best.col)) ? node.child1
                                                                                      : node.child0)
            ->members.push_back(i);
    }
    split_node(matrix, *node.child0, remaining_depth - 1);
    split_node(matrix, *node.child1, remaining_depth - 1);
}

int number_leaves(MonotheticNode& node, int next) {
    if (node.is_leaf()) {
        node.leaf_id = next;
        return next + 1;
    }
    next = number_leaves(*node.child0, next);
    return number_leaves(*node.child1, next);
}

}  // namespace

MonotheticTree monothetic_fit(const ResponseMatrix& matrix, int depth) {
    if (matrix.n_rows() == 0 || matrix.n_cols() == 0) {
        throw std::invalid_argument("monothetic: empty matrix");
    }
    if (depth < 1) throw std::invalid_argument("monothetic: depth must be >= 1");
    MonotheticTree tree;
    tree.depth = depth;
    tree.root = std::make_unique<MonotheticNode>();
    tree.root->members.resize(matrix.n_rows());
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) tree.root->members[i] = static_cast<int>(i);
    split_node(matrix, *tree.root, depth);
    tree.leaf_count = number_leaves(*tree.root, 0);
    return tree;
}

int monothetic_assign(const MonotheticTree& tree, std::span<const std::uint8_t> row) {
    const MonotheticNode* node = tree.root.get();
    while (!node->is_leaf()) {
        if (static_cast<std::size_t>(node->split_col) >= row.size()) {
            throw std::invalid_argument("monothetic_assign: row dimension mismatch");
        }
        node = row[static_cast<std::size_t>(node->split_col)] ? node->child1.get()
                                                              : node->child0.get();
    }
    return node->leaf_id;
}

namespace {

nlohmann::json node_to_json(const MonotheticNode& node) {
    nlohmann::json doc;
    doc["size"] = node.members.size();
    doc["objective"] = node.objective;
    if (node.is_leaf()) {
        doc["leaf"] = node.leaf_id;
    } else {
        doc["split"] = node.split_code;
        doc["children"] = nlohmann::json::array({node_to_json(*node.child0), node_to_json(*node.child1)});
    }
    return doc;
}

void node_to_text(const MonotheticNode& node, int indent, std::string& out,
                  const std::string& branch) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    if (!branch.empty()) out += branch + " ";
    if (node.is_leaf()) {
        out += "leaf " + std::to_string(node.leaf_id);
    } else {
        out += "split " + node.split_code;
    }
    out += " n=" + std::to_string(node.members.size());
    out += " objective=" + fmt_fixed(node.objective, 6) + "\n";
    if (!node.is_leaf()) {
        node_to_text(*node.child0, indent + 1, out, node.split_code + "=0");
        node_to_text(*node.child1, indent + 1, out, node.split_code + "=1");
    }
}

}  // namespace

std::string monothetic_to_json(const MonotheticTree& tree) {
    nlohmann::json doc;
    doc["depth"] = tree.depth;
    doc["leaf_count"] = tree.leaf_count;
    doc["root"] = node_to_json(*tree.root);
    return doc.dump(2) + "\n";
}

std::string monothetic_to_text(const MonotheticTree& tree) {
    std::string out;
    node_to_text(*tree.root, 0, out, "");
    return out;
}

}  // namespace binquest
