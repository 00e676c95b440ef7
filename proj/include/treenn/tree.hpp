#ifndef TREENN_TREE_HPP
#define TREENN_TREE_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "treenn/dataset.hpp"

namespace treenn {

enum class SplitCriterion { InformationGain, GainRatio };

// Multi-way split node. Branches exist only for attribute values actually
// present among the covered rows; every node keeps its outcome tally and the
// covered training-row indices.
struct TreeNode {
    bool is_leaf = true;
    int split_attribute = -1;  // internal nodes only
    std::map<std::string, std::unique_ptr<TreeNode>> children;
    OutcomeDistribution outcome_counts;
    std::vector<int> row_indices;  // sorted

    std::size_t leaf_count() const;
    std::size_t node_count() const;
};

double entropy(const OutcomeDistribution& dist);
double information_gain(const Dataset& dataset, const std::vector<int>& rows, int attribute);
double gain_ratio(const Dataset& dataset, const std::vector<int>& rows, int attribute);

// Greedy recursive construction. Stops at purity, attribute exhaustion, or
// zero best criterion value; criterion ties break by schema order.
std::unique_ptr<TreeNode> build_tree(const Dataset& dataset, SplitCriterion criterion);

// Splits strictly in the given attribute order (a permutation of the schema),
// skipping an attribute at a node only when it is single-valued among the
// covered rows.
std::unique_ptr<TreeNode> build_fixed_tree(const Dataset& dataset,
                                           const std::vector<std::string>& attribute_order);

// The fallback primitive: all outcomes beneath a node.
inline const OutcomeDistribution& subtree_outcomes(const TreeNode& node) {
    return node.outcome_counts;
}

// Human-readable indented text form; round-trips through read_tree given the
// same dataset.
void write_tree(std::ostream& out, const TreeNode& root, const Dataset& dataset);
std::unique_ptr<TreeNode> read_tree(std::istream& in, const Dataset& dataset);

}  // namespace treenn

#endif
