#include "treenn/hybrid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace treenn {

namespace {

void annotate(const Dataset& ds, const TreeNode& node, HybridTree& ht) {
    const std::size_t k = ds.n_attributes();
    std::vector<std::pair<int, std::string>> shared;
    for (std::size_t a = 0; a < k; ++a) {
        if (node.row_indices.empty()) throw std::runtime_error("build_hybrid: node covers no rows");
        const std::string& first = ds.rows[node.row_indices[0]].values[a];
        bool constant = true;
        for (int r : node.row_indices) {
            if (r < 0 || r >= static_cast<int>(ds.n_rows()))
                throw std::runtime_error("build_hybrid: tree row index out of dataset range");
            if (ds.rows[r].values[a] != first) {
                constant = false;
                break;
            }
        }
        if (constant) shared.emplace_back(static_cast<int>(a), first);
    }
    ht.shared[&node] = std::move(shared);
    for (const auto& [value, child] : node.children) annotate(ds, *child, ht);
}

struct SearchState {
    const HybridTree* ht;
    const Query* query;
    bool prune;
    int k;
    int best = -1;  // seeds so the first leaf visited always becomes champion
    std::vector<int> champions;
    CostCounter cost;
    std::vector<char> decided;  // attributes resolved on the current path
    int path_mismatches = 0;
};

void evaluate_leaf_rows(const TreeNode& leaf, SearchState& st) {
    const Dataset& ds = *st.ht->dataset;
    for (int r : leaf.row_indices) {
        int mismatches = st.path_mismatches;
        bool abandoned = false;
        for (int a = 0; a < st.k; ++a) {
            if (st.decided[a]) continue;
            const auto& qv = st.query->values[a];
            if (!qv.has_value()) {
                ++mismatches;  // Missing mismatches without an equality test
            } else {
                ++st.cost.attribute_comparisons;
                if (*qv != ds.rows[r].values[a]) ++mismatches;
            }
            if (st.prune && mismatches > st.k - st.best) {
                abandoned = true;
                break;
            }
        }
        if (abandoned) continue;
        int matches = st.k - mismatches;
        if (matches > st.best) {
            st.best = matches;
            st.champions.clear();
            st.champions.push_back(r);
        } else if (matches == st.best) {
            st.champions.push_back(r);
        }
    }
}

void search(const TreeNode& node, SearchState& st) {
    std::vector<int> newly_decided;
    int added_mismatches = 0;
    bool abandoned = false;

    for (const auto& [attr, value] : st.ht->shared.at(&node)) {
        if (st.decided[attr]) continue;
        st.decided[attr] = 1;
        newly_decided.push_back(attr);
        const auto& qv = st.query->values[attr];
        if (!qv.has_value()) {
            ++added_mismatches;
            ++st.path_mismatches;
        } else {
            ++st.cost.attribute_comparisons;
            if (*qv != value) {
                ++added_mismatches;
                ++st.path_mismatches;
            }
        }
        // even a perfect remainder cannot reach the champions' count
        if (st.prune && st.path_mismatches > st.k - st.best) {
            abandoned = true;
            break;
        }
    }

    if (abandoned) {
        ++st.cost.branches_pruned;
        st.cost.rows_skipped_by_pruning += static_cast<long>(node.row_indices.size());
    } else if (node.is_leaf) {
        evaluate_leaf_rows(node, st);
    } else {
        // descend into the branch matching the query first so high-match
        // champions tighten the pruning threshold early
        const TreeNode* preferred = nullptr;
        const auto& qv = st.query->values[node.split_attribute];
        if (qv.has_value()) {
            auto it = node.children.find(*qv);
            if (it != node.children.end()) preferred = it->second.get();
        }
        if (preferred) search(*preferred, st);
        for (const auto& [value, child] : node.children)
            if (child.get() != preferred) search(*child, st);
    }

    for (int a : newly_decided) st.decided[a] = 0;
    st.path_mismatches -= added_mismatches;
}

// The fast path applies when every query value is present, the descent
// matches a branch at every node, and the leaf's rows agree with the query
// on all attributes. Leaf rows that all match one query are identical to
// each other, so the check reduces to "every attribute is shared and the
// query matches each shared value".
bool try_fast_path(const HybridTree& ht, const Query& query, HybridPrediction& out) {
    const int k = static_cast<int>(ht.dataset->n_attributes());
    for (const auto& qv : query.values)
        if (!qv.has_value()) return false;

    const TreeNode* node = ht.root;
    while (!node->is_leaf) {
        auto it = node->children.find(*query.values[node->split_attribute]);
        if (it == node->children.end()) return false;
        node = it->second.get();
    }
    const auto& shared = ht.shared.at(node);
    if (static_cast<int>(shared.size()) != k) return false;
    long probes = 0;
    for (const auto& [attr, value] : shared) {
        ++probes;
        if (*query.values[attr] != value) return false;
    }
    // comparisons from abandoned fast-path probes are not tallied; a
    // successful probe is the whole cost of the prediction
    out.cost.attribute_comparisons += probes;
    out.cost.fast_path_taken = true;
    out.result.distribution = node->outcome_counts;
    out.result.label = argmax_label(out.result.distribution);
    out.result.leaves_aggregated = 1;
    out.champions.best_match_count = k;
    out.champions.row_indices = node->row_indices;
    return true;
}

}  // namespace

HybridTree build_hybrid(const Dataset& dataset, const TreeNode& tree) {
    std::vector<int> expected(dataset.n_rows());
    std::iota(expected.begin(), expected.end(), 0);
    if (tree.row_indices != expected)
        throw std::runtime_error("build_hybrid: tree does not cover the dataset's rows");
    HybridTree ht;
    ht.dataset = &dataset;
    ht.root = &tree;
    annotate(dataset, tree, ht);
    return ht;
}

HybridPrediction predict_hybrid(const HybridTree& htree, const Query& query,
                                bool enable_pruning) {
    if (!htree.dataset || !htree.root) throw std::invalid_argument("predict_hybrid: empty tree");
    if (query.values.size() != htree.dataset->n_attributes())
        throw std::invalid_argument("query does not conform to the dataset schema");

    HybridPrediction out;
    if (try_fast_path(htree, query, out)) return out;

    SearchState st;
    st.ht = &htree;
    st.query = &query;
    st.prune = enable_pruning;
    st.k = static_cast<int>(htree.dataset->n_attributes());
    st.decided.assign(htree.dataset->n_attributes(), 0);
    search(*htree.root, st);

    std::sort(st.champions.begin(), st.champions.end());
    out.champions.best_match_count = st.best;
    out.champions.row_indices = std::move(st.champions);
    for (int r : out.champions.row_indices)
        out.result.distribution.add(htree.dataset->rows[r].outcome);
    out.result.label = argmax_label(out.result.distribution);
    out.cost = st.cost;
    out.cost.fast_path_taken = false;
    return out;
}

CostCounter predict_allnn_naive_cost(const Dataset& dataset, const Query& query) {
    if (dataset.rows.empty()) throw std::runtime_error("predict_allnn_naive_cost: empty dataset");
    CostCounter c;
    c.attribute_comparisons =
        static_cast<long>(dataset.n_rows()) * static_cast<long>(query.values.size());
    return c;
}

}  // namespace treenn
