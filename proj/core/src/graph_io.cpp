#include "amlgraph/graph_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "amlgraph/errors.hpp"

namespace amlgraph {

namespace {

std::string loc(const std::filesystem::path& path, std::size_t line) {
    return path.filename().string() + ":" + std::to_string(line);
}

// Splits a CSV line on commas (no quoting; ids and numbers only) and trims
// trailing carriage returns from files written on other platforms.
std::vector<std::string> split_row(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw DataError(loc(path, line) + ": bad numeric field '" + field + "'");
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

// Shortest decimal that round-trips to the same double.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    for (int prec = 1; prec < 17; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

}  // namespace

TransactionGraph load_graph(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path) {
    TransactionGraph graph;
    std::unordered_map<std::string, AccountId> account_index;

    {
        std::ifstream in = open_input(nodes_path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (lineno == 1) {
                const auto header = split_row(line);
                if (header.empty() || header[0] != "account_id")
                    throw DataError(loc(nodes_path, lineno) +
                                    ": expected header starting with account_id");
                graph.account_feature_dim = header.size() - 1;
                continue;
            }
            if (line.empty()) continue;
            const auto row = split_row(line);
            if (row.size() != graph.account_feature_dim + 1)
                throw DataError(loc(nodes_path, lineno) + ": expected " +
                                std::to_string(graph.account_feature_dim + 1) +
                                " fields, got " + std::to_string(row.size()));
            const auto [it, inserted] = account_index.emplace(
                row[0], static_cast<AccountId>(graph.account_labels.size()));
            if (!inserted)
                throw DataError(loc(nodes_path, lineno) +
                                ": duplicate account id '" + row[0] + "'");
            graph.account_labels.push_back(row[0]);
            for (std::size_t j = 1; j < row.size(); ++j)
                graph.account_features.push_back(
                    parse_double(row[j], nodes_path, lineno));
        }
        if (lineno == 0)
            throw DataError(nodes_path.string() + ": empty file");
    }

    {
        std::ifstream in = open_input(edges_path);
        std::string line;
        std::size_t lineno = 0;
        std::unordered_map<std::string, TxId> tx_index;
        while (std::getline(in, line)) {
            ++lineno;
            if (lineno == 1) {
                const auto header = split_row(line);
                if (header.size() < 4 || header[0] != "tx_id" ||
                    header[1] != "src" || header[2] != "dst")
                    throw DataError(loc(edges_path, lineno) +
                                    ": expected header tx_id,src,dst,...");
                graph.tx_attribute_dim = header.size() - 3;
                continue;
            }
            if (line.empty()) continue;
            const auto row = split_row(line);
            if (row.size() != graph.tx_attribute_dim + 3)
                throw DataError(loc(edges_path, lineno) + ": expected " +
                                std::to_string(graph.tx_attribute_dim + 3) +
                                " fields, got " + std::to_string(row.size()));
            const auto [it, inserted] = tx_index.emplace(
                row[0], static_cast<TxId>(graph.tx_labels.size()));
            if (!inserted)
                throw DataError(loc(edges_path, lineno) +
                                ": duplicate transaction id '" + row[0] + "'");
            const auto src = account_index.find(row[1]);
            const auto dst = account_index.find(row[2]);
            if (src == account_index.end())
                throw DataError(loc(edges_path, lineno) + ": unknown account '" +
                                row[1] + "'");
            if (dst == account_index.end())
                throw DataError(loc(edges_path, lineno) + ": unknown account '" +
                                row[2] + "'");
            graph.tx_labels.push_back(row[0]);
            graph.tx_src.push_back(src->second);
            graph.tx_dst.push_back(dst->second);
            for (std::size_t j = 3; j < row.size(); ++j)
                graph.tx_attributes.push_back(
                    parse_double(row[j], edges_path, lineno));
        }
        if (lineno == 0)
            throw DataError(edges_path.string() + ": empty file");
    }

    graph.finalize();
    return graph;
}

namespace {

std::unordered_map<std::string, std::uint32_t> label_index(
    const std::vector<std::string>& labels) {
    std::unordered_map<std::string, std::uint32_t> idx;
    idx.reserve(labels.size());
    for (std::uint32_t i = 0; i < labels.size(); ++i) idx.emplace(labels[i], i);
    return idx;
}

}  // namespace

LabelSet load_labels(const std::filesystem::path& labels_path,
                     const TransactionGraph& graph) {
    LabelSet out;
    out.laundering.assign(graph.transaction_count(), kLabelUnknown);
    out.train_mask.assign(graph.transaction_count(), 0);
    out.test_mask.assign(graph.transaction_count(), 0);

    const auto tx_index = label_index(graph.tx_labels);
    std::ifstream in = open_input(labels_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            const auto header = split_row(line);
            if (header.size() != 2 || header[0] != "tx_id" || header[1] != "label")
                throw DataError(loc(labels_path, lineno) +
                                ": expected header tx_id,label");
            continue;
        }
        if (line.empty()) continue;
        const auto row = split_row(line);
        if (row.size() != 2)
            throw DataError(loc(labels_path, lineno) + ": expected 2 fields");
        const auto it = tx_index.find(row[0]);
        if (it == tx_index.end())
            throw DataError(loc(labels_path, lineno) + ": unknown transaction '" +
                            row[0] + "'");
        if (row[1] != "0" && row[1] != "1")
            throw DataError(loc(labels_path, lineno) + ": label must be 0 or 1, got '" +
                            row[1] + "'");
        if (out.laundering[it->second] != kLabelUnknown)
            throw DataError(loc(labels_path, lineno) +
                            ": duplicate label for transaction '" + row[0] + "'");
        out.laundering[it->second] = static_cast<std::int8_t>(row[1] == "1" ? 1 : 0);
    }
    if (lineno == 0) throw DataError(labels_path.string() + ": empty file");
    return out;
}

std::vector<std::pair<AccountId, AccountId>> load_relation_edges(
    const std::filesystem::path& groups_path, const TransactionGraph& graph) {
    std::vector<std::pair<AccountId, AccountId>> out;
    const auto account_index = label_index(graph.account_labels);
    std::ifstream in = open_input(groups_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            const auto header = split_row(line);
            if (header.size() != 2 || header[0] != "account_a" ||
                header[1] != "account_b")
                throw DataError(loc(groups_path, lineno) +
                                ": expected header account_a,account_b");
            continue;
        }
        if (line.empty()) continue;
        const auto row = split_row(line);
        if (row.size() != 2)
            throw DataError(loc(groups_path, lineno) + ": expected 2 fields");
        const auto a = account_index.find(row[0]);
        const auto b = account_index.find(row[1]);
        if (a == account_index.end())
            throw DataError(loc(groups_path, lineno) + ": unknown account '" +
                            row[0] + "'");
        if (b == account_index.end())
            throw DataError(loc(groups_path, lineno) + ": unknown account '" +
                            row[1] + "'");
        out.emplace_back(a->second, b->second);
    }
    if (lineno == 0) throw DataError(groups_path.string() + ": empty file");
    return out;
}

void write_nodes_csv(const TransactionGraph& graph,
                     const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "account_id";
    for (std::size_t j = 0; j < graph.account_feature_dim; ++j) out << ",f" << j;
    out << "\n";
    for (std::size_t i = 0; i < graph.account_count(); ++i) {
        out << graph.account_labels[i];
        for (std::size_t j = 0; j < graph.account_feature_dim; ++j)
            out << ","
                << format_double(
                       graph.account_features[i * graph.account_feature_dim + j]);
        out << "\n";
    }
}

void write_edges_csv(const TransactionGraph& graph,
                     const std::filesystem::path& path) {
    static const char* kAttributeNames[] = {"amount", "timestamp", "fee", "token"};
    std::ofstream out = open_output(path);
    out << "tx_id,src,dst";
    for (std::size_t j = 0; j < graph.tx_attribute_dim; ++j) {
        if (j < 4)
            out << "," << kAttributeNames[j];
        else
            out << ",a" << j;
    }
    out << "\n";
    for (std::size_t i = 0; i < graph.transaction_count(); ++i) {
        out << graph.tx_labels[i] << "," << graph.account_labels[graph.tx_src[i]]
            << "," << graph.account_labels[graph.tx_dst[i]];
        for (std::size_t j = 0; j < graph.tx_attribute_dim; ++j)
            out << ","
                << format_double(
                       graph.tx_attributes[i * graph.tx_attribute_dim + j]);
        out << "\n";
    }
}

void write_labels_csv(const LabelSet& labels, const TransactionGraph& graph,
                      const std::filesystem::path& path) {
    if (labels.size() != graph.transaction_count())
        throw DataError("labels: size does not match graph transactions");
    std::ofstream out = open_output(path);
    out << "tx_id,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.laundering[i] == kLabelUnknown) continue;
        out << graph.tx_labels[i] << "," << int(labels.laundering[i]) << "\n";
    }
}

void write_groups_csv(
    const std::vector<std::pair<AccountId, AccountId>>& relation_edges,
    const TransactionGraph& graph, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << "account_a,account_b\n";
    for (const auto& [a, b] : relation_edges)
        out << graph.account_labels[a] << "," << graph.account_labels[b] << "\n";
}

}  // namespace amlgraph
