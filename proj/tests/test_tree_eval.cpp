#include <doctest.h>

#include "treenn/harness.hpp"
#include "treenn/tree.hpp"
#include "treenn/tree_eval.hpp"

using namespace treenn;

namespace {

OutcomeDistribution dist(std::initializer_list<std::pair<const char*, long>> items) {
    OutcomeDistribution d;
    for (const auto& [l, n] : items) d.add(l, n);
    return d;
}

Query q3(const char* a, const char* b, const char* c) {
    Query q;
    q.values.push_back(a ? std::optional<std::string>(a) : std::nullopt);
    q.values.push_back(b ? std::optional<std::string>(b) : std::nullopt);
    q.values.push_back(c ? std::optional<std::string>(c) : std::nullopt);
    return q;
}

}  // namespace

TEST_CASE("standard evaluation of the worked queries") {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});

    auto y = predict_standard(*tree, ds, q3("a0", "b1", "c2"));
    CHECK(y.distribution == dist({{"t0", 2}, {"t1", 2}, {"t2", 3}}));
    CHECK(y.label == "t2");
    CHECK(y.mismatch_count == 1);

    auto x = predict_standard(*tree, ds, q3("a0", "b0", "c2"));
    CHECK(x.distribution == dist({{"t0", 2}, {"t2", 1}}));
    CHECK(x.label == "t0");
    CHECK(x.mismatch_count == 0);
    CHECK(x.leaves_aggregated == 1);

    // Missing at the root attribute falls back to the whole table
    auto missing_b = predict_standard(*tree, ds, q3("a0", nullptr, "c2"));
    CHECK(missing_b.distribution == dist({{"t0", 5}, {"t1", 4}, {"t2", 6}}));
    CHECK(missing_b.label == "t2");
    CHECK(missing_b.mismatch_count == 1);

    CHECK_THROWS_AS(predict_standard(*tree, ds, Query{}), std::invalid_argument);
}

TEST_CASE("interfering evaluation fans out at the mismatch node") {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});

    auto y = predict_interfering(*tree, ds, q3("a0", "b1", "c2"));
    CHECK(y.distribution == dist({{"t0", 1}, {"t1", 2}}));
    CHECK(y.label == "t1");
    CHECK(y.fanout_events == 1);
    CHECK(y.leaves_aggregated == 2);  // leaves {08} and {11,12}

    // no mismatch: identical to the standard descent
    auto x = predict_interfering(*tree, ds, q3("a0", "b0", "c2"));
    CHECK(x.distribution == dist({{"t0", 2}, {"t2", 1}}));
    CHECK(x.label == "t0");
    CHECK(x.fanout_events == 0);

    // Missing C fans out at the C node; A='a0' filters both branches
    auto missing_c = predict_interfering(*tree, ds, q3("a0", "b1", nullptr));
    CHECK(missing_c.distribution == dist({{"t0", 1}, {"t1", 2}}));
    CHECK(missing_c.label == "t1");
}

TEST_CASE("interfering subset and no-mismatch equivalence over random instances") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        SyntheticSpec spec;
        spec.n_rows = 5 + static_cast<int>(seed % 26);
        spec.n_attributes = 2 + static_cast<int>(seed % 4);
        spec.values_per_attribute = 2 + static_cast<int>(seed % 3);
        spec.n_queries = 12;
        spec.unseen_value_rate = 0.25;
        spec.missing_rate = 0.15;
        spec.seed = seed;
        auto [ds, queries] = generate_synthetic(spec);
        auto tree = build_tree(ds, SplitCriterion::InformationGain);

        for (const auto& lq : queries) {
            auto std_res = predict_standard(*tree, ds, lq.query);
            auto int_res = predict_interfering(*tree, ds, lq.query);

            // pointwise domination by the fallback at the first mismatch node
            for (const auto& [label, n] : int_res.distribution.counts)
                CHECK(n <= std_res.distribution.count_of(label));
            CHECK(int_res.distribution.total >= 1);
            CHECK(std_res.distribution.total >= 1);

            if (std_res.mismatch_count == 0)
                CHECK(int_res.distribution == std_res.distribution);

            // determinism
            auto again = predict_interfering(*tree, ds, lq.query);
            CHECK(again.distribution == int_res.distribution);
            CHECK(again.label == int_res.label);
        }
    }
}
