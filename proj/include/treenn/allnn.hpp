#ifndef TREENN_ALLNN_HPP
#define TREENN_ALLNN_HPP

#include <utility>

#include "treenn/dataset.hpp"
#include "treenn/tree_eval.hpp"

namespace treenn {

// All training rows attaining the maximal attribute-match count with a query.
struct ChampionSet {
    int best_match_count = 0;
    std::vector<int> row_indices;  // sorted

    bool operator==(const ChampionSet& other) const = default;
};

// Exhaustive all-nearest-neighbors prediction: scan every row, keep the
// champions, majority-vote their outcomes. The row scan is OpenMP-parallel.
std::pair<PredictionResult, ChampionSet> predict_allnn(const Dataset& dataset,
                                                       const Query& query);

// Single-threaded reference kept for testing the parallel kernel against.
std::pair<PredictionResult, ChampionSet> predict_allnn_serial(const Dataset& dataset,
                                                              const Query& query);

}  // namespace treenn

#endif
