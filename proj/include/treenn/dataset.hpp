#ifndef TREENN_DATASET_HPP
#define TREENN_DATASET_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace treenn {

struct AttributeSchema {
    std::vector<std::string> names;
    // Distinct values observed per attribute, sorted.
    std::vector<std::vector<std::string>> domains;

    std::size_t size() const { return names.size(); }
    int index_of(const std::string& name) const;  // -1 if absent
};

struct TrainingRow {
    int index = 0;
    std::vector<std::string> values;
    std::string outcome;
};

struct Dataset {
    AttributeSchema schema;
    std::vector<TrainingRow> rows;
    std::vector<std::string> outcome_domain;  // sorted distinct outcomes

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_attributes() const { return schema.size(); }
};

// One entry per schema attribute; nullopt is the Missing marker. A present
// value need not belong to the training domain (unseen values are legal
// queries and simply never match anything).
struct Query {
    std::vector<std::optional<std::string>> values;

    static Query from_row(const TrainingRow& row);
};

struct OutcomeDistribution {
    std::map<std::string, long> counts;  // no zero-count entries
    long total = 0;

    void add(const std::string& label, long n = 1);
    void merge(const OutcomeDistribution& other);
    long count_of(const std::string& label) const;
    bool operator==(const OutcomeDistribution& other) const = default;
};

Dataset load_csv(const std::string& path);
void save_csv(std::ostream& out, const Dataset& dataset);

// The 15-row toy table used by the demo and the worked-example tests.
Dataset table1_fixture();

// New dataset holding the selected rows, reindexed 0..n-1, with domains
// recomputed from the selection.
Dataset make_subset(const Dataset& dataset, const std::vector<int>& row_indices);

// Number of positions where the query value is present and equal to the
// row value. Missing never matches.
int match_count(const TrainingRow& row, const Query& query);

// Majority label; ties go to the lexicographically smallest label.
std::string argmax_label(const OutcomeDistribution& dist);

std::string format_distribution(const OutcomeDistribution& dist);

}  // namespace treenn

#endif
