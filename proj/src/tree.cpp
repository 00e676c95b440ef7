#include "treenn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace treenn {

std::size_t TreeNode::leaf_count() const {
    if (is_leaf) return 1;
    std::size_t n = 0;
    for (const auto& [v, child] : children) n += child->leaf_count();
    return n;
}

std::size_t TreeNode::node_count() const {
    std::size_t n = 1;
    for (const auto& [v, child] : children) n += child->node_count();
    return n;
}

namespace {

OutcomeDistribution tally(const Dataset& ds, const std::vector<int>& rows) {
    OutcomeDistribution d;
    for (int i : rows) d.add(ds.rows[i].outcome);
    return d;
}

std::map<std::string, std::vector<int>> partition(const Dataset& ds,
                                                  const std::vector<int>& rows, int attr) {
    std::map<std::string, std::vector<int>> parts;
    for (int i : rows) parts[ds.rows[i].values[attr]].push_back(i);
    return parts;
}

double partition_entropy(const std::map<std::string, std::vector<int>>& parts, double n) {
    double h = 0.0;
    for (const auto& [v, part] : parts) {
        double p = static_cast<double>(part.size()) / n;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double entropy(const OutcomeDistribution& dist) {
    if (dist.total <= 0) return 0.0;
    double h = 0.0;
    for (const auto& [label, n] : dist.counts) {
        double p = static_cast<double>(n) / static_cast<double>(dist.total);
        h -= p * std::log2(p);
    }
    return h;
}

double information_gain(const Dataset& dataset, const std::vector<int>& rows, int attribute) {
    if (rows.empty()) throw std::invalid_argument("information_gain: empty row set");
    double parent = entropy(tally(dataset, rows));
    auto parts = partition(dataset, rows, attribute);
    double n = static_cast<double>(rows.size());
    double weighted = 0.0;
    for (const auto& [v, part] : parts)
        weighted += (static_cast<double>(part.size()) / n) * entropy(tally(dataset, part));
    return parent - weighted;
}

double gain_ratio(const Dataset& dataset, const std::vector<int>& rows, int attribute) {
    if (rows.empty()) throw std::invalid_argument("gain_ratio: empty row set");
    auto parts = partition(dataset, rows, attribute);
    if (parts.size() < 2) return 0.0;  // single-valued attribute, no useful split
    double split_info = partition_entropy(parts, static_cast<double>(rows.size()));
    return information_gain(dataset, rows, attribute) / split_info;
}

namespace {

std::unique_ptr<TreeNode> make_leaf(const Dataset& ds, std::vector<int> rows) {
    auto node = std::make_unique<TreeNode>();
    node->is_leaf = true;
    node->outcome_counts = tally(ds, rows);
    node->row_indices = std::move(rows);
    return node;
}

bool is_pure(const OutcomeDistribution& d) { return d.counts.size() <= 1; }

std::unique_ptr<TreeNode> build_greedy(const Dataset& ds, std::vector<int> rows,
                                       std::vector<bool>& used, SplitCriterion criterion) {
    auto counts = tally(ds, rows);
    int best_attr = -1;
    double best_score = 0.0;
    if (!is_pure(counts)) {
        for (std::size_t a = 0; a < ds.n_attributes(); ++a) {
            if (used[a]) continue;
            double score = criterion == SplitCriterion::InformationGain
                               ? information_gain(ds, rows, static_cast<int>(a))
                               : gain_ratio(ds, rows, static_cast<int>(a));
            if (best_attr < 0 || score > best_score) {
                best_attr = static_cast<int>(a);
                best_score = score;
            }
        }
    }
    if (best_attr < 0 || best_score <= 0.0) return make_leaf(ds, std::move(rows));

    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    node->split_attribute = best_attr;
    node->outcome_counts = std::move(counts);
    node->row_indices = rows;
    used[best_attr] = true;
    for (auto& [value, part] : partition(ds, rows, best_attr))
        node->children[value] = build_greedy(ds, std::move(part), used, criterion);
    used[best_attr] = false;
    return node;
}

std::unique_ptr<TreeNode> build_ordered(const Dataset& ds, std::vector<int> rows,
                                        const std::vector<int>& order, std::size_t pos) {
    auto counts = tally(ds, rows);
    if (!is_pure(counts)) {
        for (std::size_t i = pos; i < order.size(); ++i) {
            int attr = order[i];
            auto parts = partition(ds, rows, attr);
            if (parts.size() < 2) continue;  // single-valued here, skip
            auto node = std::make_unique<TreeNode>();
            node->is_leaf = false;
            node->split_attribute = attr;
            node->outcome_counts = std::move(counts);
            node->row_indices = rows;
            for (auto& [value, part] : parts)
                node->children[value] = build_ordered(ds, std::move(part), order, i + 1);
            return node;
        }
    }
    return make_leaf(ds, std::move(rows));
}

}  // namespace

std::unique_ptr<TreeNode> build_tree(const Dataset& dataset, SplitCriterion criterion) {
    if (dataset.rows.empty()) throw std::runtime_error("build_tree: empty dataset");
    std::vector<int> rows(dataset.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<bool> used(dataset.n_attributes(), false);
    return build_greedy(dataset, std::move(rows), used, criterion);
}

std::unique_ptr<TreeNode> build_fixed_tree(const Dataset& dataset,
                                           const std::vector<std::string>& attribute_order) {
    if (dataset.rows.empty()) throw std::runtime_error("build_fixed_tree: empty dataset");
    std::vector<int> order;
    std::vector<bool> seen(dataset.n_attributes(), false);
    for (const auto& name : attribute_order) {
        int a = dataset.schema.index_of(name);
        if (a < 0) throw std::invalid_argument("build_fixed_tree: unknown attribute " + name);
        if (seen[a]) throw std::invalid_argument("build_fixed_tree: duplicate attribute " + name);
        seen[a] = true;
        order.push_back(a);
    }
    if (order.size() != dataset.n_attributes())
        throw std::invalid_argument("build_fixed_tree: order must permute all schema attributes");
    std::vector<int> rows(dataset.n_rows());
    std::iota(rows.begin(), rows.end(), 0);
    return build_ordered(dataset, std::move(rows), order, 0);
}

namespace {

void write_node(std::ostream& out, const TreeNode& node, const Dataset& ds, int depth,
                const std::string& branch) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ');
    if (!branch.empty()) out << branch << " -> ";
    if (node.is_leaf) {
        out << "leaf ";
        for (std::size_t i = 0; i < node.row_indices.size(); ++i) {
            if (i) out << ',';
            out << node.row_indices[i];
        }
    } else {
        out << "split " << ds.schema.names[node.split_attribute];
    }
    out << ' ' << format_distribution(node.outcome_counts) << '\n';
    for (const auto& [value, child] : node.children)
        write_node(out, *child, ds, depth + 1, value);
}

struct ParsedLine {
    int depth;
    std::string branch;  // empty at the root
    bool leaf;
    std::string payload;  // attribute name or row list
};

void finish_node(TreeNode& node, const Dataset& ds) {
    if (!node.is_leaf) {
        node.row_indices.clear();
        OutcomeDistribution d;
        for (const auto& [v, child] : node.children) {
            node.row_indices.insert(node.row_indices.end(), child->row_indices.begin(),
                                    child->row_indices.end());
            d.merge(child->outcome_counts);
        }
        std::sort(node.row_indices.begin(), node.row_indices.end());
        node.outcome_counts = d;
    }
    if (node.row_indices.empty()) throw std::runtime_error("tree parse: node covers no rows");
}

}  // namespace

void write_tree(std::ostream& out, const TreeNode& root, const Dataset& dataset) {
    out << "treenn-tree 1\n";
    out << "attributes ";
    for (std::size_t i = 0; i < dataset.schema.names.size(); ++i) {
        if (i) out << ',';
        out << dataset.schema.names[i];
    }
    out << '\n';
    write_node(out, root, dataset, 0, "");
}

std::unique_ptr<TreeNode> read_tree(std::istream& in, const Dataset& dataset) {
    std::string line;
    if (!std::getline(in, line) || line != "treenn-tree 1")
        throw std::runtime_error("tree parse: bad magic line");
    if (!std::getline(in, line) || line.rfind("attributes ", 0) != 0)
        throw std::runtime_error("tree parse: missing attributes line");
    {
        std::string expect = "attributes ";
        for (std::size_t i = 0; i < dataset.schema.names.size(); ++i) {
            if (i) expect += ',';
            expect += dataset.schema.names[i];
        }
        if (line != expect)
            throw std::runtime_error("tree parse: attribute list does not match dataset schema");
    }

    std::vector<ParsedLine> lines;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ParsedLine pl;
        std::size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        if (indent % 2 != 0) throw std::runtime_error("tree parse: odd indentation");
        pl.depth = static_cast<int>(indent / 2);
        std::string rest = line.substr(indent);
        auto arrow = rest.find(" -> ");
        if (arrow != std::string::npos) {
            pl.branch = rest.substr(0, arrow);
            rest = rest.substr(arrow + 4);
        }
        // trim the trailing counts annotation
        auto brace = rest.find(" {");
        if (brace != std::string::npos) rest = rest.substr(0, brace);
        if (rest.rfind("split ", 0) == 0) {
            pl.leaf = false;
            pl.payload = rest.substr(6);
        } else if (rest.rfind("leaf ", 0) == 0) {
            pl.leaf = true;
            pl.payload = rest.substr(5);
        } else {
            throw std::runtime_error("tree parse: unrecognized node line: " + line);
        }
        lines.push_back(std::move(pl));
    }
    if (lines.empty() || lines[0].depth != 0 || !lines[0].branch.empty())
        throw std::runtime_error("tree parse: missing root node");

    std::vector<TreeNode*> stack;
    auto root = std::make_unique<TreeNode>();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& pl = lines[i];
        TreeNode* node;
        if (i == 0) {
            node = root.get();
        } else {
            if (pl.depth < 1 || pl.depth > static_cast<int>(stack.size()))
                throw std::runtime_error("tree parse: bad nesting depth");
            while (static_cast<int>(stack.size()) > pl.depth) {
                finish_node(*stack.back(), dataset);
                stack.pop_back();
            }
            TreeNode* parent = stack.back();
            if (pl.branch.empty()) throw std::runtime_error("tree parse: child without branch value");
            if (parent->children.count(pl.branch))
                throw std::runtime_error("tree parse: duplicate branch " + pl.branch);
            auto child = std::make_unique<TreeNode>();
            node = child.get();
            parent->children[pl.branch] = std::move(child);
        }
        if (pl.leaf) {
            node->is_leaf = true;
            std::stringstream ss(pl.payload);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                int idx = std::stoi(tok);
                if (idx < 0 || idx >= static_cast<int>(dataset.n_rows()))
                    throw std::runtime_error("tree parse: row index out of range: " + tok);
                node->row_indices.push_back(idx);
                node->outcome_counts.add(dataset.rows[idx].outcome);
            }
        } else {
            node->is_leaf = false;
            node->split_attribute = dataset.schema.index_of(pl.payload);
            if (node->split_attribute < 0)
                throw std::runtime_error("tree parse: unknown attribute " + pl.payload);
            stack.push_back(node);
        }
    }
    while (!stack.empty()) {
        finish_node(*stack.back(), dataset);
        stack.pop_back();
    }
    if (root->is_leaf) finish_node(*root, dataset);
    return root;
}

}  // namespace treenn
