#ifndef TREENN_HARNESS_HPP
#define TREENN_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "treenn/dataset.hpp"

namespace treenn {

struct SyntheticSpec {
    int n_rows = 100;
    int n_attributes = 4;
    int values_per_attribute = 3;
    int n_outcomes = 3;
    int n_queries = 50;
    double unseen_value_rate = 0.0;  // query slots carrying a value withheld from training
    double missing_rate = 0.0;
    std::uint64_t seed = 0;
};

struct LabeledQuery {
    Query query;
    std::string label;
};

// Seed-deterministic dataset + labeled query generator. Outcomes follow a
// random rule over a random attribute subset with 10% label noise.
std::pair<Dataset, std::vector<LabeledQuery>> generate_synthetic(const SyntheticSpec& spec);

enum class Predictor { Standard, Interfering, AllNN, Hybrid };

std::string predictor_name(Predictor p);

struct FoldDetail {
    int fold = 0;
    double accuracy = 0.0;
    double mean_comparisons = 0.0;
    double mean_fanouts = 0.0;
    double fast_path_fraction = 0.0;
};

struct PredictorReport {
    Predictor predictor = Predictor::Standard;
    double accuracy = 0.0;
    double mean_comparisons = 0.0;
    double mean_fanouts = 0.0;
    double fast_path_fraction = 0.0;
    std::vector<FoldDetail> folds;
};

struct ComparisonReport {
    std::vector<PredictorReport> predictors;
    double naive_mean_comparisons = 0.0;  // flat all-NN baseline, N·K per query
    double hybrid_cost_ratio = 0.0;       // hybrid mean comparisons / naive mean
};

// Index-stride k-fold (row i goes to fold i mod k). Tree-based predictors are
// trained per fold with information-gain splitting.
PredictorReport k_fold_accuracy(const Dataset& dataset, int k, Predictor predictor);

// Runs all four predictors and cross-checks the hybrid against all-NN on
// every held-out query (exact distribution + champion equality, and
// comparisons <= the naive N·K cost).
ComparisonReport compare_all(const Dataset& dataset, int k);

// One row per predictor per fold plus summary rows.
void write_report_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace treenn

#endif
