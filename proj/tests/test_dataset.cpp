#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "treenn/dataset.hpp"

using namespace treenn;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "test_tmp_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

OutcomeDistribution dist(std::initializer_list<std::pair<const char*, long>> items) {
    OutcomeDistribution d;
    for (const auto& [l, n] : items) d.add(l, n);
    return d;
}

}  // namespace

TEST_CASE("table1 fixture matches the printed table") {
    Dataset ds = table1_fixture();
    REQUIRE(ds.n_rows() == 15);
    CHECK(ds.schema.names == std::vector<std::string>{"A", "B", "C"});
    CHECK(ds.schema.domains[0] == std::vector<std::string>{"a0", "a1", "a2"});
    CHECK(ds.schema.domains[1] == std::vector<std::string>{"b0", "b1"});
    CHECK(ds.schema.domains[2] == std::vector<std::string>{"c0", "c1", "c2"});
    CHECK(ds.outcome_domain == std::vector<std::string>{"t0", "t1", "t2"});

    CHECK(ds.rows[7].values == std::vector<std::string>{"a1", "b0", "c2"});
    CHECK(ds.rows[7].outcome == "t1");
    CHECK(ds.rows[0].values == std::vector<std::string>{"a0", "b0", "c1"});
    CHECK(ds.rows[0].outcome == "t1");

    OutcomeDistribution all;
    for (const auto& row : ds.rows) all.add(row.outcome);
    CHECK(all == dist({{"t0", 5}, {"t1", 4}, {"t2", 6}}));
}

TEST_CASE("load_csv ingests the fixture table") {
    Dataset fixture = table1_fixture();
    std::ostringstream csv;
    save_csv(csv, fixture);
    auto path = write_temp("table1.csv", csv.str());
    Dataset ds = load_csv(path);
    REQUIRE(ds.n_rows() == 15);
    for (std::size_t i = 0; i < 15; ++i) {
        CHECK(ds.rows[i].values == fixture.rows[i].values);
        CHECK(ds.rows[i].outcome == fixture.rows[i].outcome);
    }
    CHECK(ds.schema.domains == fixture.schema.domains);

    // round trip reproduces the identical byte stream
    std::ostringstream again;
    save_csv(again, ds);
    CHECK(again.str() == csv.str());
    std::remove(path.c_str());
}

TEST_CASE("load_csv rejects malformed input") {
    auto empty = write_temp("empty.csv", "outcome,A,B\n");
    CHECK_THROWS_WITH_AS(load_csv(empty), doctest::Contains("empty dataset"), std::runtime_error);
    std::remove(empty.c_str());

    auto ragged = write_temp("ragged.csv", "outcome,A,B\nt0,x,y\nt1,x\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged), doctest::Contains("line 3"), std::runtime_error);
    std::remove(ragged.c_str());

    auto badheader = write_temp("badheader.csv", "A,B,C\nt0,x,y\n");
    CHECK_THROWS_AS(load_csv(badheader), std::runtime_error);
    std::remove(badheader.c_str());

    CHECK_THROWS_AS(load_csv("no_such_file.csv"), std::runtime_error);
}

TEST_CASE("match_count counts positionwise equal, non-missing values") {
    Dataset ds = table1_fixture();
    Query y{{std::string("a0"), std::string("b1"), std::string("c2")}};
    CHECK(match_count(ds.rows[11], y) == 2);
    CHECK(match_count(ds.rows[5], y) == 0);

    Query all_missing{{std::nullopt, std::nullopt, std::nullopt}};
    for (const auto& row : ds.rows) CHECK(match_count(row, all_missing) == 0);

    Query short_query{{std::string("a0")}};
    CHECK_THROWS_AS(match_count(ds.rows[0], short_query), std::invalid_argument);
}

TEST_CASE("match_count self-match and missing-reveal monotonicity") {
    Dataset ds = table1_fixture();
    for (const auto& row : ds.rows) {
        CHECK(match_count(row, Query::from_row(row)) == 3);
        // revealing one missing slot with the row's own value adds exactly 1
        Query q{{std::nullopt, std::nullopt, std::nullopt}};
        int prev = match_count(row, q);
        for (std::size_t a = 0; a < 3; ++a) {
            q.values[a] = row.values[a];
            int cur = match_count(row, q);
            CHECK(cur == prev + 1);
            prev = cur;
        }
    }
}

TEST_CASE("argmax_label majority with lexicographic tie-break") {
    CHECK(argmax_label(dist({{"t0", 2}, {"t1", 2}, {"t2", 3}})) == "t2");
    CHECK(argmax_label(dist({{"t0", 2}, {"t1", 2}})) == "t0");
    CHECK(argmax_label(dist({{"t0", 3}, {"t1", 2}, {"t2", 1}})) == "t0");
    CHECK_THROWS_WITH_AS(argmax_label(OutcomeDistribution{}),
                         doctest::Contains("no outcomes"), std::runtime_error);
}

TEST_CASE("make_subset reindexes and recomputes domains") {
    Dataset ds = table1_fixture();
    Dataset sub = make_subset(ds, {8, 9, 10});
    REQUIRE(sub.n_rows() == 3);
    CHECK(sub.rows[0].index == 0);
    CHECK(sub.rows[0].values == std::vector<std::string>{"a0", "b1", "c0"});
    CHECK(sub.schema.domains[1] == std::vector<std::string>{"b1"});
    CHECK(sub.schema.domains[2] == std::vector<std::string>{"c0"});
    CHECK_THROWS_AS(make_subset(ds, {99}), std::out_of_range);
}
