#ifndef TREENN_TREE_EVAL_HPP
#define TREENN_TREE_EVAL_HPP

#include "treenn/dataset.hpp"
#include "treenn/tree.hpp"

namespace treenn {

struct PredictionResult {
    OutcomeDistribution distribution;
    std::string label;
    int mismatch_count = 0;     // standard: 0 or 1; interfering: mismatch nodes hit
    int fanout_events = 0;      // interfering only
    int leaves_aggregated = 0;  // leaves contributing to the distribution
};

// Classic descent. At the first node where no branch matches the query value
// (or the value is Missing) the prediction falls back to all outcomes beneath
// that node.
PredictionResult predict_standard(const TreeNode& tree, const Dataset& dataset,
                                  const Query& query);

// Same descent, but a mismatch fans the evaluation out over every sub-branch
// of the mismatch node; surviving leaves' outcome counts are merged. Nested
// mismatches on parallel paths fan out again.
PredictionResult predict_interfering(const TreeNode& tree, const Dataset& dataset,
                                     const Query& query);

}  // namespace treenn

#endif
