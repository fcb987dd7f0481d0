#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "binquest/matrix.hpp"

namespace binquest {

// Node objective: total within-group variance, sum over answers of
// t_j * f_j / n for the node's member rows. Splits are compared with exact
// integer arithmetic so ties are deterministic.
struct MonotheticNode {
    int split_col = -1;          // -1 for leaves
    std::string split_code;
    std::vector<int> members;    // row indices
    double objective = 0.0;
    int leaf_id = -1;            // DFS order over leaves, 0-branch first
    std::unique_ptr<MonotheticNode> child0;  // split answer = 0
    std::unique_ptr<MonotheticNode> child1;  // split answer = 1

    bool is_leaf() const { return split_col < 0; }
};

struct MonotheticTree {
    std::unique_ptr<MonotheticNode> root;
    int depth = 0;       // configured maximum depth
    int leaf_count = 0;
};

// Greedy divisive clustering: at each node every answer column is evaluated
// and the split minimizing the summed child objectives is taken (ties by
// lowest column index). Nodes with fewer than 2 members, no strictly positive
// gain, or at maximum depth become leaves.
MonotheticTree monothetic_fit(const ResponseMatrix& matrix, int depth);

// Descends by split answers: 0 goes to the first child, 1 to the second.
int monothetic_assign(const MonotheticTree& tree, std::span<const std::uint8_t> row);

std::string monothetic_to_json(const MonotheticTree& tree);
std::string monothetic_to_text(const MonotheticTree& tree);

}  // namespace binquest
