#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "treenn/allnn.hpp"
#include "treenn/dataset.hpp"
#include "treenn/harness.hpp"
#include "treenn/hybrid.hpp"
#include "treenn/tree.hpp"
#include "treenn/tree_eval.hpp"

using namespace treenn;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::string champions_str(const ChampionSet& c) {
    std::string s = "{";
    for (std::size_t i = 0; i < c.row_indices.size(); ++i) {
        if (i) s += ',';
        char buf[8];
        std::snprintf(buf, sizeof buf, "%02d", c.row_indices[i]);
        s += buf;
    }
    return s + "}";
}

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cout << "  SELF-CHECK FAILED: " << what << "\n";
    }
}

void demo_query(const Dataset& ds, const TreeNode& tree, const HybridTree& ht,
                const std::string& name, const Query& q, const OutcomeDistribution& exp_std,
                const std::string& exp_std_label, const OutcomeDistribution& exp_int,
                const std::string& exp_int_label, const OutcomeDistribution& exp_nn,
                const std::string& exp_nn_label, const std::vector<int>& exp_champions,
                bool exp_fast) {
    std::cout << "query " << name << ":\n";
    auto std_res = predict_standard(tree, ds, q);
    std::cout << "  standard    -> " << std_res.label << " ("
              << std_res.distribution.count_of(std_res.label) << ")  dist "
              << format_distribution(std_res.distribution) << "\n";
    check(std_res.distribution == exp_std && std_res.label == exp_std_label,
          name + " standard result");

    auto int_res = predict_interfering(tree, ds, q);
    std::cout << "  interfering -> " << int_res.label << " ("
              << int_res.distribution.count_of(int_res.label) << ")  dist "
              << format_distribution(int_res.distribution) << "  fanouts "
              << int_res.fanout_events << "\n";
    check(int_res.distribution == exp_int && int_res.label == exp_int_label,
          name + " interfering result");

    auto [nn_res, nn_champs] = predict_allnn(ds, q);
    std::cout << "  all-NN      -> " << nn_res.label << " ("
              << nn_res.distribution.count_of(nn_res.label) << ")  dist "
              << format_distribution(nn_res.distribution) << "  champions "
              << champions_str(nn_champs) << "\n";
    check(nn_res.distribution == exp_nn && nn_res.label == exp_nn_label &&
              nn_champs.row_indices == exp_champions,
          name + " all-NN result");

    auto hp = predict_hybrid(ht, q);
    std::cout << "  hybrid      -> " << hp.result.label << " ("
              << hp.result.distribution.count_of(hp.result.label) << ")  dist "
              << format_distribution(hp.result.distribution) << "  champions "
              << champions_str(hp.champions) << "  comparisons "
              << hp.cost.attribute_comparisons << "  fast_path "
              << (hp.cost.fast_path_taken ? "yes" : "no") << "\n";
    check(hp.result.distribution == exp_nn && hp.result.label == exp_nn_label &&
              hp.champions.row_indices == exp_champions &&
              hp.cost.fast_path_taken == exp_fast,
          name + " hybrid result");
}

int cmd_demo() {
    Dataset ds = table1_fixture();
    auto tree = build_fixed_tree(ds, {"B", "C", "A"});
    HybridTree ht = build_hybrid(ds, *tree);
    std::cout << "fixed tree over the 15-row demo table, split order B, C, A\n\n";

    Query x{{std::string("a0"), std::string("b0"), std::string("c2")}};
    Query y{{std::string("a0"), std::string("b1"), std::string("c2")}};

    OutcomeDistribution x_leaf;  // rows 02,03,04
    x_leaf.add("t0", 2);
    x_leaf.add("t2", 1);
    demo_query(ds, *tree, ht, "X=(a0,b0,c2)", x, x_leaf, "t0", x_leaf, "t0", x_leaf, "t0",
               {2, 3, 4}, true);

    OutcomeDistribution y_std;  // everything under branch b1
    y_std.add("t0", 2);
    y_std.add("t1", 2);
    y_std.add("t2", 3);
    OutcomeDistribution y_int;  // leaves {08} and {11,12}
    y_int.add("t0", 1);
    y_int.add("t1", 2);
    OutcomeDistribution y_nn;  // all rows with two matching attributes
    y_nn.add("t0", 3);
    y_nn.add("t1", 2);
    y_nn.add("t2", 1);
    demo_query(ds, *tree, ht, "Y=(a0,b1,c2)", y, y_std, "t2", y_int, "t1", y_nn, "t0",
               {2, 3, 4, 8, 11, 12}, false);

    if (failures) {
        std::cout << "\n" << failures << " self-check(s) failed\n";
        return 1;
    }
    std::cout << "\nall self-checks passed\n";
    return 0;
}

int cmd_train(const std::string& data, const std::string& criterion,
              const std::string& fixed_order, const std::string& model_out) {
    Dataset ds = load_csv(data);
    std::unique_ptr<TreeNode> tree;
    if (!fixed_order.empty()) {
        tree = build_fixed_tree(ds, split_commas(fixed_order));
    } else {
        SplitCriterion crit = criterion == "gainratio" ? SplitCriterion::GainRatio
                                                       : SplitCriterion::InformationGain;
        tree = build_tree(ds, crit);
    }
    std::ofstream out(model_out);
    if (!out) throw std::runtime_error("cannot write model file: " + model_out);
    write_tree(out, *tree, ds);
    std::cout << "trained on " << ds.n_rows() << " rows, " << ds.n_attributes()
              << " attributes\n";
    std::cout << "nodes " << tree->node_count() << ", leaves " << tree->leaf_count();
    if (!tree->is_leaf) std::cout << ", root splits on " << ds.schema.names[tree->split_attribute];
    std::cout << "\nmodel written to " << model_out << "\n";
    return 0;
}

std::vector<Query> load_queries(const std::string& path, const Dataset& ds) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open queries file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_commas(line) != ds.schema.names)
        throw std::runtime_error(path + ": query header does not match the dataset schema");
    std::vector<Query> queries;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != ds.n_attributes())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": wrong field count");
        Query q;
        for (auto& f : fields) {
            if (f == "?")
                q.values.emplace_back(std::nullopt);
            else
                q.values.emplace_back(std::move(f));
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

int cmd_predict(const std::string& model, const std::string& data, const std::string& queries_path,
                const std::string& predictor, const std::string& out_path) {
    Dataset ds = load_csv(data);
    std::ifstream min(model);
    if (!min) throw std::runtime_error("cannot open model file: " + model);
    auto tree = read_tree(min, ds);
    auto queries = load_queries(queries_path, ds);

    HybridTree ht;
    if (predictor == "hybrid") ht = build_hybrid(ds, *tree);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << "label,distribution,best_match_count,champions,comparisons,fanouts,fast_path\n";
    for (const auto& q : queries) {
        if (predictor == "standard") {
            auto r = predict_standard(*tree, ds, q);
            out << r.label << ',' << format_distribution(r.distribution) << ",,,,,\n";
        } else if (predictor == "interfering") {
            auto r = predict_interfering(*tree, ds, q);
            out << r.label << ',' << format_distribution(r.distribution) << ",,,,"
                << r.fanout_events << ",\n";
        } else if (predictor == "allnn") {
            auto [r, champs] = predict_allnn(ds, q);
            out << r.label << ',' << format_distribution(r.distribution) << ','
                << champs.best_match_count << ',' << champions_str(champs) << ",,,\n";
        } else if (predictor == "hybrid") {
            auto hp = predict_hybrid(ht, q);
            out << hp.result.label << ',' << format_distribution(hp.result.distribution) << ','
                << hp.champions.best_match_count << ',' << champions_str(hp.champions) << ','
                << hp.cost.attribute_comparisons << ",," << (hp.cost.fast_path_taken ? "1" : "0")
                << "\n";
        } else {
            throw std::runtime_error("unknown predictor: " + predictor);
        }
    }
    std::cout << queries.size() << " predictions written to " << out_path << "\n";
    return 0;
}

int cmd_bench(const SyntheticSpec& spec, int k, const std::string& out_path) {
    auto [ds, queries] = generate_synthetic(spec);
    ComparisonReport report = compare_all(ds, k);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write report file: " + out_path);
        write_report_csv(out, report);
    }
    std::cout << "dataset: " << ds.n_rows() << " rows x " << ds.n_attributes()
              << " attributes, " << k << "-fold\n";
    std::cout << "predictor    accuracy  mean_cmp  mean_fanouts  fast_path\n";
    for (const auto& pr : report.predictors) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-12s %.4f    %8.2f  %8.2f      %.2f",
                      predictor_name(pr.predictor).c_str(), pr.accuracy, pr.mean_comparisons,
                      pr.mean_fanouts, pr.fast_path_fraction);
        std::cout << buf << "\n";
    }
    std::cout << "naive all-NN mean comparisons: " << report.naive_mean_comparisons << "\n";
    std::cout << "hybrid / naive comparison ratio: " << report.hybrid_cost_ratio << "\n";
    if (report.hybrid_cost_ratio > 1.0)
        throw std::logic_error("hybrid cost exceeded the naive baseline");
    if (!out_path.empty()) std::cout << "report written to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision-tree / all-NN hybrid classifier"};
    app.require_subcommand(1);

    app.add_subcommand("demo", "run the worked examples and self-check the results");

    auto* train = app.add_subcommand("train", "build a tree from CSV data and serialize it");
    std::string data, model, criterion = "gain", fixed_order, queries_path, out_path, predictor;
    train->add_option("--data", data, "training CSV (outcome,<attrs...>)")->required();
    train->add_option("--model", model, "output model path")->required();
    train->add_option("--criterion", criterion, "gain|gainratio")
        ->check(CLI::IsMember({"gain", "gainratio"}));
    train->add_option("--fixed-order", fixed_order,
                      "comma-separated attribute order (overrides --criterion)");

    auto* predict = app.add_subcommand("predict", "predict labels for a query CSV");
    predict->add_option("--model", model, "serialized tree")->required();
    predict->add_option("--data", data, "backing training CSV")->required();
    predict->add_option("--queries", queries_path, "query CSV ('?' = missing)")->required();
    predict->add_option("--out", out_path, "output CSV")->required();
    predict->add_option("--predictor", predictor, "standard|interfering|allnn|hybrid")
        ->required()
        ->check(CLI::IsMember({"standard", "interfering", "allnn", "hybrid"}));

    auto* bench = app.add_subcommand("bench", "synthetic benchmark of all four predictors");
    SyntheticSpec spec;
    int k = 5;
    bench->add_option("--rows", spec.n_rows, "training rows");
    bench->add_option("--attributes", spec.n_attributes, "attribute count");
    bench->add_option("--values", spec.values_per_attribute, "values per attribute");
    bench->add_option("--outcomes", spec.n_outcomes, "outcome label count");
    bench->add_option("--queries", spec.n_queries, "generated query count");
    bench->add_option("--unseen-rate", spec.unseen_value_rate, "unseen-value rate [0,1]");
    bench->add_option("--missing-rate", spec.missing_rate, "missing-value rate [0,1]");
    bench->add_option("--seed", spec.seed, "rng seed");
    bench->add_option("--k", k, "cross-validation folds");
    bench->add_option("--out", out_path, "report CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("demo")) return cmd_demo();
        if (app.got_subcommand("train")) return cmd_train(data, criterion, fixed_order, model);
        if (app.got_subcommand("predict"))
            return cmd_predict(model, data, queries_path, predictor, out_path);
        if (app.got_subcommand("bench")) return cmd_bench(spec, k, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
