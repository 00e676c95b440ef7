#include "treenn/allnn.hpp"

#include <stdexcept>

namespace treenn {

namespace {

void check_inputs(const Dataset& dataset, const Query& query) {
    if (dataset.rows.empty()) throw std::runtime_error("predict_allnn: empty dataset");
    if (query.values.size() != dataset.n_attributes())
        throw std::invalid_argument("query does not conform to the dataset schema");
}

std::pair<PredictionResult, ChampionSet> collect(const Dataset& dataset,
                                                 const std::vector<int>& matches) {
    ChampionSet champions;
    int best = 0;
    for (int m : matches) best = std::max(best, m);
    champions.best_match_count = best;
    PredictionResult res;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        if (matches[i] == best) {
            champions.row_indices.push_back(static_cast<int>(i));
            res.distribution.add(dataset.rows[i].outcome);
        }
    }
    res.label = argmax_label(res.distribution);
    return {std::move(res), std::move(champions)};
}

}  // namespace

std::pair<PredictionResult, ChampionSet> predict_allnn(const Dataset& dataset,
                                                       const Query& query) {
    check_inputs(dataset, query);
    const int n = static_cast<int>(dataset.n_rows());
    std::vector<int> matches(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        matches[static_cast<std::size_t>(i)] = match_count(dataset.rows[i], query);
    return collect(dataset, matches);
}

std::pair<PredictionResult, ChampionSet> predict_allnn_serial(const Dataset& dataset,
                                                              const Query& query) {
    check_inputs(dataset, query);
    std::vector<int> matches;
    matches.reserve(dataset.n_rows());
    for (const auto& row : dataset.rows) matches.push_back(match_count(row, query));
    return collect(dataset, matches);
}

}  // namespace treenn
