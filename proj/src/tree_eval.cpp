#include "treenn/tree_eval.hpp"

#include <stdexcept>

namespace treenn {

namespace {

void check_schema(const Dataset& dataset, const Query& query) {
    if (query.values.size() != dataset.n_attributes())
        throw std::invalid_argument("query does not conform to the dataset schema");
}

const TreeNode* matching_child(const TreeNode& node, const Query& query) {
    const auto& qv = query.values[node.split_attribute];
    if (!qv.has_value()) return nullptr;  // Missing matches no branch
    auto it = node.children.find(*qv);
    return it == node.children.end() ? nullptr : it->second.get();
}

void eval_interfering(const TreeNode& node, const Query& query, OutcomeDistribution& acc,
                      PredictionResult& diag) {
    if (node.is_leaf) {
        acc.merge(node.outcome_counts);
        ++diag.leaves_aggregated;
        return;
    }
    if (const TreeNode* child = matching_child(node, query)) {
        eval_interfering(*child, query, acc, diag);
        return;
    }
    ++diag.mismatch_count;
    ++diag.fanout_events;
    for (const auto& [value, child] : node.children) eval_interfering(*child, query, acc, diag);
}

}  // namespace

PredictionResult predict_standard(const TreeNode& tree, const Dataset& dataset,
                                  const Query& query) {
    check_schema(dataset, query);
    PredictionResult res;
    const TreeNode* node = &tree;
    while (!node->is_leaf) {
        const TreeNode* child = matching_child(*node, query);
        if (!child) break;
        node = child;
    }
    if (!node->is_leaf) res.mismatch_count = 1;
    res.distribution = subtree_outcomes(*node);
    res.leaves_aggregated = static_cast<int>(node->leaf_count());
    res.label = argmax_label(res.distribution);
    return res;
}

PredictionResult predict_interfering(const TreeNode& tree, const Dataset& dataset,
                                     const Query& query) {
    check_schema(dataset, query);
    PredictionResult res;
    eval_interfering(tree, query, res.distribution, res);
    res.label = argmax_label(res.distribution);
    return res;
}

}  // namespace treenn
