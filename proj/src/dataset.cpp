#include "treenn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace treenn {

int AttributeSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

Query Query::from_row(const TrainingRow& row) {
    Query q;
    q.values.reserve(row.values.size());
    for (const auto& v : row.values) q.values.emplace_back(v);
    return q;
}

void OutcomeDistribution::add(const std::string& label, long n) {
    if (n == 0) return;
    counts[label] += n;
    total += n;
}

void OutcomeDistribution::merge(const OutcomeDistribution& other) {
    for (const auto& [label, n] : other.counts) add(label, n);
}

long OutcomeDistribution::count_of(const std::string& label) const {
    auto it = counts.find(label);
    return it == counts.end() ? 0 : it->second;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void finalize_domains(Dataset& ds) {
    const std::size_t k = ds.schema.size();
    std::vector<std::set<std::string>> doms(k);
    std::set<std::string> outs;
    for (const auto& row : ds.rows) {
        outs.insert(row.outcome);
        for (std::size_t a = 0; a < k; ++a) doms[a].insert(row.values[a]);
    }
    ds.schema.domains.assign(k, {});
    for (std::size_t a = 0; a < k; ++a)
        ds.schema.domains[a].assign(doms[a].begin(), doms[a].end());
    ds.outcome_domain.assign(outs.begin(), outs.end());
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw std::runtime_error(path + ": line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "outcome")
        throw std::runtime_error(path + ": line 1: malformed header, expected outcome,<attr>,...");
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i].empty())
            throw std::runtime_error(path + ": line 1: empty attribute name");

    Dataset ds;
    ds.schema.names.assign(header.begin() + 1, header.end());
    const std::size_t k = ds.schema.size();

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != k + 1)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(k + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        for (const auto& f : fields)
            if (f.empty())
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": empty field");
        TrainingRow row;
        row.index = static_cast<int>(ds.rows.size());
        row.outcome = fields[0];
        row.values.assign(fields.begin() + 1, fields.end());
        ds.rows.push_back(std::move(row));
    }
    if (ds.rows.empty()) throw std::runtime_error(path + ": empty dataset");

    finalize_domains(ds);
    return ds;
}

void save_csv(std::ostream& out, const Dataset& dataset) {
    out << "outcome";
    for (const auto& n : dataset.schema.names) out << ',' << n;
    out << '\n';
    for (const auto& row : dataset.rows) {
        out << row.outcome;
        for (const auto& v : row.values) out << ',' << v;
        out << '\n';
    }
}

Dataset table1_fixture() {
    static const char* raw[15][4] = {
        {"t1", "a0", "b0", "c1"}, {"t2", "a0", "b0", "c1"}, {"t0", "a0", "b0", "c2"},
        {"t0", "a0", "b0", "c2"}, {"t2", "a0", "b0", "c2"}, {"t0", "a1", "b0", "c0"},
        {"t2", "a1", "b0", "c0"}, {"t1", "a1", "b0", "c2"}, {"t1", "a0", "b1", "c0"},
        {"t0", "a2", "b1", "c0"}, {"t2", "a2", "b1", "c0"}, {"t0", "a0", "b1", "c1"},
        {"t1", "a0", "b1", "c1"}, {"t2", "a1", "b1", "c1"}, {"t2", "a1", "b1", "c1"},
    };
    Dataset ds;
    ds.schema.names = {"A", "B", "C"};
    for (int i = 0; i < 15; ++i) {
        TrainingRow row;
        row.index = i;
        row.outcome = raw[i][0];
        row.values = {raw[i][1], raw[i][2], raw[i][3]};
        ds.rows.push_back(std::move(row));
    }
    finalize_domains(ds);
    return ds;
}

Dataset make_subset(const Dataset& dataset, const std::vector<int>& row_indices) {
    Dataset out;
    out.schema.names = dataset.schema.names;
    for (int r : row_indices) {
        if (r < 0 || r >= static_cast<int>(dataset.n_rows()))
            throw std::out_of_range("make_subset: row index out of range");
        TrainingRow row = dataset.rows[r];
        row.index = static_cast<int>(out.rows.size());
        out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) throw std::runtime_error("make_subset: empty selection");
    finalize_domains(out);
    return out;
}

int match_count(const TrainingRow& row, const Query& query) {
    if (row.values.size() != query.values.size())
        throw std::invalid_argument("match_count: row and query disagree on attribute count");
    int n = 0;
    for (std::size_t i = 0; i < row.values.size(); ++i)
        if (query.values[i].has_value() && *query.values[i] == row.values[i]) ++n;
    return n;
}

std::string argmax_label(const OutcomeDistribution& dist) {
    if (dist.total <= 0 || dist.counts.empty())
        throw std::runtime_error("no outcomes to classify");
    // counts is ordered by label, so the first maximum is the
    // lexicographically smallest among ties.
    auto best = dist.counts.begin();
    for (auto it = dist.counts.begin(); it != dist.counts.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

std::string format_distribution(const OutcomeDistribution& dist) {
    std::string s = "{";
    bool first = true;
    for (const auto& [label, n] : dist.counts) {
        if (!first) s += ' ';
        first = false;
        s += label + ':' + std::to_string(n);
    }
    s += '}';
    return s;
}

}  // namespace treenn
