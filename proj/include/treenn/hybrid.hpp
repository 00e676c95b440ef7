#ifndef TREENN_HYBRID_HPP
#define TREENN_HYBRID_HPP

#include <unordered_map>
#include <utility>

#include "treenn/allnn.hpp"
#include "treenn/dataset.hpp"
#include "treenn/tree.hpp"
#include "treenn/tree_eval.hpp"

namespace treenn {

struct CostCounter {
    long attribute_comparisons = 0;
    long branches_pruned = 0;
    long rows_skipped_by_pruning = 0;
    bool fast_path_taken = false;
};

// A decision tree annotated, per node, with the attributes whose value is
// constant across all rows the node covers. Comparing those once per subtree
// instead of once per row is where the savings come from. Does not own the
// tree or the dataset.
struct HybridTree {
    const Dataset* dataset = nullptr;
    const TreeNode* root = nullptr;
    std::unordered_map<const TreeNode*, std::vector<std::pair<int, std::string>>> shared;
};

HybridTree build_hybrid(const Dataset& dataset, const TreeNode& tree);

struct HybridPrediction {
    PredictionResult result;
    ChampionSet champions;
    CostCounter cost;
};

// Tree-hosted all-NN. Fast path: when the query descends cleanly to a leaf
// whose rows match it on every attribute, that leaf is the exact champion
// set. Otherwise a depth-first champion search runs over the whole tree with
// shared-attribute skipping and champion-threshold branch pruning. Either
// way the distribution and champion set equal predict_allnn's exactly.
// enable_pruning only affects the cost counters, never the result.
HybridPrediction predict_hybrid(const HybridTree& htree, const Query& query,
                                bool enable_pruning = true);

// Cost of the flat all-NN scan: one comparison per (row, attribute) pair.
CostCounter predict_allnn_naive_cost(const Dataset& dataset, const Query& query);

}  // namespace treenn

#endif
