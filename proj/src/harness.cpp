#include "treenn/harness.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>

#include "treenn/allnn.hpp"
#include "treenn/hybrid.hpp"
#include "treenn/tree.hpp"
#include "treenn/tree_eval.hpp"

namespace treenn {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void validate(const SyntheticSpec& spec) {
    if (spec.n_rows < 1 || spec.n_attributes < 1 || spec.values_per_attribute < 1 ||
        spec.n_outcomes < 1 || spec.n_queries < 1)
        throw std::invalid_argument("synthetic spec: all counts must be >= 1");
    if (spec.unseen_value_rate < 0.0 || spec.unseen_value_rate > 1.0 ||
        spec.missing_rate < 0.0 || spec.missing_rate > 1.0)
        throw std::invalid_argument("synthetic spec: rates must lie in [0,1]");
    if (spec.values_per_attribute < 2 && spec.unseen_value_rate > 0.0)
        throw std::invalid_argument(
            "synthetic spec: unseen_value_rate > 0 needs values_per_attribute >= 2");
}

// Outcome rule: a seed-keyed hash of the rule attributes' value tokens.
// Missing and unseen tokens hash like any other value, so query labels are
// well defined for every query shape.
struct OutcomeRule {
    std::uint64_t key;
    std::vector<int> attrs;
    int n_outcomes;

    int apply(const std::vector<std::optional<std::string>>& values) const {
        std::uint64_t h = key;
        for (int a : attrs) {
            const auto& v = values[a];
            std::uint64_t t = 0x9ae16a3b2f90404full;
            const std::string& s = v.has_value() ? *v : std::string("?");
            for (char c : s) t = mix64(t ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
            h = mix64(h ^ t);
        }
        return static_cast<int>(h % static_cast<std::uint64_t>(n_outcomes));
    }
};

std::string value_name(int v) { return "v" + std::to_string(v); }
std::string outcome_name(int o) { return "t" + std::to_string(o); }

}  // namespace

std::pair<Dataset, std::vector<LabeledQuery>> generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);

    const int k = spec.n_attributes;
    const int train_values =
        spec.unseen_value_rate > 0.0 ? spec.values_per_attribute - 1 : spec.values_per_attribute;
    const std::string withheld = value_name(spec.values_per_attribute - 1);

    OutcomeRule rule;
    rule.key = mix64(spec.seed ^ 0x5851f42d4c957f2dull);
    rule.n_outcomes = spec.n_outcomes;
    {
        std::vector<int> attrs(k);
        for (int a = 0; a < k; ++a) attrs[a] = a;
        std::shuffle(attrs.begin(), attrs.end(), rng);
        int subset = (k + 1) / 2;
        rule.attrs.assign(attrs.begin(), attrs.begin() + subset);
        std::sort(rule.attrs.begin(), rule.attrs.end());
    }

    std::uniform_int_distribution<int> value_dist(0, train_values - 1);
    std::uniform_int_distribution<int> outcome_dist(0, spec.n_outcomes - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Dataset ds;
    for (int a = 0; a < k; ++a) ds.schema.names.push_back("f" + std::to_string(a));
    std::vector<std::vector<std::string>> seen(k);
    for (int i = 0; i < spec.n_rows; ++i) {
        TrainingRow row;
        row.index = i;
        std::vector<std::optional<std::string>> tokens;
        for (int a = 0; a < k; ++a) {
            std::string v = value_name(value_dist(rng));
            tokens.emplace_back(v);
            row.values.push_back(std::move(v));
        }
        int label = rule.apply(tokens);
        if (unit(rng) < 0.1) label = outcome_dist(rng);  // 10% label noise
        row.outcome = outcome_name(label);
        ds.rows.push_back(std::move(row));
    }
    {
        // recompute observed domains per column
        std::vector<std::vector<std::string>> doms(k);
        std::vector<std::string> outs;
        for (const auto& row : ds.rows) {
            outs.push_back(row.outcome);
            for (int a = 0; a < k; ++a) doms[a].push_back(row.values[a]);
        }
        for (int a = 0; a < k; ++a) {
            std::sort(doms[a].begin(), doms[a].end());
            doms[a].erase(std::unique(doms[a].begin(), doms[a].end()), doms[a].end());
            seen[a] = doms[a];
        }
        ds.schema.domains = std::move(doms);
        std::sort(outs.begin(), outs.end());
        outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
        ds.outcome_domain = std::move(outs);
    }

    std::vector<LabeledQuery> queries;
    for (int q = 0; q < spec.n_queries; ++q) {
        LabeledQuery lq;
        for (int a = 0; a < k; ++a) {
            double roll = unit(rng);
            if (roll < spec.missing_rate) {
                lq.query.values.emplace_back(std::nullopt);
            } else if (roll < spec.missing_rate + (1.0 - spec.missing_rate) * spec.unseen_value_rate) {
                lq.query.values.emplace_back(withheld);
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, seen[a].size() - 1);
                lq.query.values.emplace_back(seen[a][pick(rng)]);
            }
        }
        int label = rule.apply(lq.query.values);
        if (unit(rng) < 0.1) label = outcome_dist(rng);
        lq.label = outcome_name(label);
        queries.push_back(std::move(lq));
    }
    return {std::move(ds), std::move(queries)};
}

std::string predictor_name(Predictor p) {
    switch (p) {
        case Predictor::Standard: return "standard";
        case Predictor::Interfering: return "interfering";
        case Predictor::AllNN: return "allnn";
        case Predictor::Hybrid: return "hybrid";
    }
    return "?";
}

namespace {

struct FoldSplit {
    Dataset train;
    std::vector<int> held_out;  // indices into the full dataset
};

FoldSplit make_fold(const Dataset& dataset, int k, int fold) {
    FoldSplit fs;
    std::vector<int> train_rows;
    for (int i = 0; i < static_cast<int>(dataset.n_rows()); ++i) {
        if (i % k == fold)
            fs.held_out.push_back(i);
        else
            train_rows.push_back(i);
    }
    fs.train = make_subset(dataset, train_rows);
    return fs;
}

}  // namespace

PredictorReport k_fold_accuracy(const Dataset& dataset, int k, Predictor predictor) {
    if (k < 2 || k > static_cast<int>(dataset.n_rows()))
        throw std::invalid_argument("k_fold_accuracy: k must lie in [2, n_rows]");

    PredictorReport rep;
    rep.predictor = predictor;
    long correct = 0, total = 0;
    double sum_cmp = 0.0, sum_fan = 0.0, sum_fast = 0.0;

    for (int fold = 0; fold < k; ++fold) {
        FoldSplit fs = make_fold(dataset, k, fold);
        if (fs.held_out.empty()) continue;

        std::unique_ptr<TreeNode> tree;
        HybridTree htree;
        if (predictor != Predictor::AllNN)
            tree = build_tree(fs.train, SplitCriterion::InformationGain);
        if (predictor == Predictor::Hybrid) htree = build_hybrid(fs.train, *tree);

        FoldDetail detail;
        detail.fold = fold;
        long fold_correct = 0;
        double fold_cmp = 0.0, fold_fan = 0.0, fold_fast = 0.0;
        for (int i : fs.held_out) {
            Query q = Query::from_row(dataset.rows[i]);
            std::string label;
            switch (predictor) {
                case Predictor::Standard:
                    label = predict_standard(*tree, fs.train, q).label;
                    break;
                case Predictor::Interfering: {
                    auto res = predict_interfering(*tree, fs.train, q);
                    fold_fan += res.fanout_events;
                    label = res.label;
                    break;
                }
                case Predictor::AllNN: {
                    auto [res, champs] = predict_allnn(fs.train, q);
                    fold_cmp += static_cast<double>(
                        predict_allnn_naive_cost(fs.train, q).attribute_comparisons);
                    label = res.label;
                    break;
                }
                case Predictor::Hybrid: {
                    auto hp = predict_hybrid(htree, q);
                    fold_cmp += static_cast<double>(hp.cost.attribute_comparisons);
                    if (hp.cost.fast_path_taken) fold_fast += 1.0;
                    label = hp.result.label;
                    break;
                }
            }
            if (label == dataset.rows[i].outcome) ++fold_correct;
        }
        const double n = static_cast<double>(fs.held_out.size());
        detail.accuracy = fold_correct / n;
        detail.mean_comparisons = fold_cmp / n;
        detail.mean_fanouts = fold_fan / n;
        detail.fast_path_fraction = fold_fast / n;
        rep.folds.push_back(detail);

        correct += fold_correct;
        total += fs.held_out.size();
        sum_cmp += fold_cmp;
        sum_fan += fold_fan;
        sum_fast += fold_fast;
    }
    rep.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    rep.mean_comparisons = sum_cmp / static_cast<double>(total);
    rep.mean_fanouts = sum_fan / static_cast<double>(total);
    rep.fast_path_fraction = sum_fast / static_cast<double>(total);
    return rep;
}

ComparisonReport compare_all(const Dataset& dataset, int k) {
    ComparisonReport report;
    for (Predictor p :
         {Predictor::Standard, Predictor::Interfering, Predictor::AllNN, Predictor::Hybrid})
        report.predictors.push_back(k_fold_accuracy(dataset, k, p));

    // hybrid == all-NN, checked per held-out query, not just in aggregate
    double naive_sum = 0.0;
    long total = 0;
    for (int fold = 0; fold < k; ++fold) {
        FoldSplit fs = make_fold(dataset, k, fold);
        if (fs.held_out.empty()) continue;
        auto tree = build_tree(fs.train, SplitCriterion::InformationGain);
        HybridTree htree = build_hybrid(fs.train, *tree);
        for (int i : fs.held_out) {
            Query q = Query::from_row(dataset.rows[i]);
            auto [nn_res, nn_champs] = predict_allnn(fs.train, q);
            auto hp = predict_hybrid(htree, q);
            if (hp.result.distribution != nn_res.distribution || hp.champions != nn_champs)
                throw std::logic_error("compare_all: hybrid/all-NN equivalence violated");
            long naive = predict_allnn_naive_cost(fs.train, q).attribute_comparisons;
            if (hp.cost.attribute_comparisons > naive)
                throw std::logic_error("compare_all: hybrid exceeded the naive comparison cost");
            naive_sum += static_cast<double>(naive);
            ++total;
        }
    }
    report.naive_mean_comparisons = naive_sum / static_cast<double>(total);
    const auto& hybrid = report.predictors[3];
    const auto& allnn = report.predictors[2];
    if (hybrid.accuracy != allnn.accuracy)
        throw std::logic_error("compare_all: hybrid accuracy diverged from all-NN");
    report.hybrid_cost_ratio = report.naive_mean_comparisons > 0.0
                                   ? hybrid.mean_comparisons / report.naive_mean_comparisons
                                   : 0.0;
    return report;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << "predictor,fold,accuracy,mean_comparisons,mean_fanouts,fast_path_fraction\n";
    for (const auto& pr : report.predictors)
        for (const auto& f : pr.folds)
            out << predictor_name(pr.predictor) << ',' << f.fold << ',' << f.accuracy << ','
                << f.mean_comparisons << ',' << f.mean_fanouts << ',' << f.fast_path_fraction
                << '\n';
    for (const auto& pr : report.predictors)
        out << predictor_name(pr.predictor) << ",summary," << pr.accuracy << ','
            << pr.mean_comparisons << ',' << pr.mean_fanouts << ',' << pr.fast_path_fraction
            << '\n';
    out << "naive_allnn,summary,," << report.naive_mean_comparisons << ",,\n";
    out << "hybrid_cost_ratio,summary,," << report.hybrid_cost_ratio << ",,\n";
}

}  // namespace treenn
