#include <doctest.h>

#include "treenn/allnn.hpp"
#include "treenn/harness.hpp"
#include "treenn/hybrid.hpp"
#include "treenn/tree.hpp"

using namespace treenn;

namespace {

Query q3(const char* a, const char* b, const char* c) {
    Query q;
    q.values.push_back(a ? std::optional<std::string>(a) : std::nullopt);
    q.values.push_back(b ? std::optional<std::string>(b) : std::nullopt);
    q.values.push_back(c ? std::optional<std::string>(c) : std::nullopt);
    return q;
}

const TreeNode* descend(const TreeNode& root, std::initializer_list<const char*> path) {
    const TreeNode* node = &root;
    for (const char* v : path) node = node->children.at(v).get();
    return node;
}

}  // namespace

TEST_CASE("build_hybrid records per-node shared attributes") {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});
    HybridTree ht = build_hybrid(ds, *tree);

    // rows 11-14 all carry b1 and c1
    const TreeNode* b1c1 = descend(*tree, {"b1", "c1"});
    auto shared = ht.shared.at(b1c1);
    REQUIRE(shared.size() == 2);
    CHECK(shared[0] == std::pair<int, std::string>{1, "b1"});
    CHECK(shared[1] == std::pair<int, std::string>{2, "c1"});

    // single-row leaf shares everything
    const TreeNode* row7_leaf = descend(*tree, {"b0", "c2", "a1"});
    REQUIRE(row7_leaf->is_leaf);
    CHECK(ht.shared.at(row7_leaf).size() == 3);

    // nothing is globally constant in the fixture
    CHECK(ht.shared.at(tree.get()).empty());

    // a tree over a different row set is rejected
    Dataset sub = make_subset(ds, {0, 1, 2});
    auto subtree = build_tree(sub, SplitCriterion::InformationGain);
    CHECK_THROWS_AS(build_hybrid(ds, *subtree), std::runtime_error);
}

TEST_CASE("hybrid reproduces the worked queries") {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});
    HybridTree ht = build_hybrid(ds, *tree);

    auto y = predict_hybrid(ht, q3("a0", "b1", "c2"));
    CHECK(y.result.distribution.count_of("t0") == 3);
    CHECK(y.result.distribution.count_of("t1") == 2);
    CHECK(y.result.distribution.count_of("t2") == 1);
    CHECK(y.result.label == "t0");
    CHECK(y.champions.row_indices == std::vector<int>{2, 3, 4, 8, 11, 12});
    CHECK(y.champions.best_match_count == 2);
    CHECK(!y.cost.fast_path_taken);

    auto x = predict_hybrid(ht, q3("a0", "b0", "c2"));
    CHECK(x.cost.fast_path_taken);
    CHECK(x.result.distribution.count_of("t0") == 2);
    CHECK(x.result.distribution.count_of("t2") == 1);
    CHECK(x.result.label == "t0");
    CHECK(x.champions.best_match_count == 3);
    CHECK(x.champions.row_indices == std::vector<int>{2, 3, 4});

    // degenerate all-Missing query equals the outcome prior
    auto blank = predict_hybrid(ht, q3(nullptr, nullptr, nullptr));
    auto [nn, nn_champs] = predict_allnn(ds, q3(nullptr, nullptr, nullptr));
    CHECK(blank.result.distribution == nn.distribution);
    CHECK(blank.champions == nn_champs);
    CHECK(blank.result.label == "t2");
}

TEST_CASE("fast path fires only on verified full matches") {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});
    HybridTree ht = build_hybrid(ds, *tree);
    const int k = 3;

    for (const auto& row : ds.rows) {
        auto hp = predict_hybrid(ht, Query::from_row(row));
        if (hp.cost.fast_path_taken) {
            CHECK(hp.champions.best_match_count == k);
            for (int r : hp.champions.row_indices)
                CHECK(match_count(ds.rows[r], Query::from_row(row)) == k);
        }
    }
    // descent that reaches a leaf whose rows disagree on an unexamined
    // attribute must take the slow path
    Dataset small;
    small.schema.names = {"P", "Q"};
    small.schema.domains = {{"p0", "p1"}, {"q0", "q1"}};
    small.outcome_domain = {"no", "yes"};
    small.rows = {{0, {"p0", "q0"}, "yes"}, {1, {"p0", "q1"}, "yes"}, {2, {"p1", "q0"}, "no"}};
    auto ptree = build_tree(small, SplitCriterion::InformationGain);
    REQUIRE(!ptree->is_leaf);
    HybridTree pht = build_hybrid(small, *ptree);
    Query pq{{std::string("p0"), std::string("q0")}};
    auto mixed = predict_hybrid(pht, pq);
    CHECK(!mixed.cost.fast_path_taken);
    auto [nn, nn_champs] = predict_allnn(small, pq);
    CHECK(mixed.result.distribution == nn.distribution);
    CHECK(mixed.champions == nn_champs);
    CHECK(mixed.champions.row_indices == std::vector<int>{0});
}

TEST_CASE("naive all-NN cost is rows times attributes") {
    Dataset ds = table1_fixture();
    CHECK(predict_allnn_naive_cost(ds, q3("a0", "b0", "c2")).attribute_comparisons == 45);
    CHECK(predict_allnn_naive_cost(ds, q3(nullptr, nullptr, nullptr)).attribute_comparisons == 45);

    SyntheticSpec spec;
    spec.n_rows = 100;
    spec.n_attributes = 8;
    spec.seed = 1;
    auto [synth, queries] = generate_synthetic(spec);
    CHECK(predict_allnn_naive_cost(synth, queries[0].query).attribute_comparisons == 800);
}

TEST_CASE("equivalence, pruning neutrality, and cost soundness on random instances") {
    long pruned_total = 0;
    for (std::uint64_t seed = 200; seed < 280; ++seed) {
        SyntheticSpec spec;
        spec.n_rows = 5 + static_cast<int>(seed % 26);
        spec.n_attributes = 2 + static_cast<int>(seed % 4);
        spec.values_per_attribute = 2 + static_cast<int>(seed % 3);
        spec.n_queries = 10;
        spec.unseen_value_rate = 0.2;
        spec.missing_rate = 0.2;
        spec.seed = seed;
        auto [ds, queries] = generate_synthetic(spec);
        auto tree = build_tree(ds, SplitCriterion::InformationGain);
        HybridTree ht = build_hybrid(ds, *tree);
        long naive = static_cast<long>(ds.n_rows()) * static_cast<long>(ds.n_attributes());

        for (const auto& lq : queries) {
            auto hp = predict_hybrid(ht, lq.query);
            auto [nn, nn_champs] = predict_allnn(ds, lq.query);
            CHECK(hp.result.distribution == nn.distribution);
            CHECK(hp.result.label == nn.label);
            CHECK(hp.champions == nn_champs);

            auto unpruned = predict_hybrid(ht, lq.query, /*enable_pruning=*/false);
            CHECK(unpruned.result.distribution == hp.result.distribution);
            CHECK(unpruned.champions == hp.champions);
            CHECK(unpruned.cost.branches_pruned == 0);
            CHECK(unpruned.cost.rows_skipped_by_pruning == 0);

            CHECK(hp.cost.attribute_comparisons <= naive);
            CHECK(hp.cost.attribute_comparisons <= unpruned.cost.attribute_comparisons);
            pruned_total += hp.cost.branches_pruned;
        }
    }
    CHECK(pruned_total > 0);  // pruning actually triggers across the corpus
}
