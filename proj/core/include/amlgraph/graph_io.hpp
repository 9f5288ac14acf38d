#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "amlgraph/graph.hpp"

namespace amlgraph {

/// CSV schemas (UTF-8, header row required):
///   nodes.csv:  account_id,f0,f1,...
///   edges.csv:  tx_id,src,dst,amount,timestamp,fee,token
///   labels.csv: tx_id,label            (label in {0,1})
///   groups.csv: account_a,account_b    (one relation edge per row)
///
/// Accounts and transactions are re-indexed densely in file order;
/// transaction ids in the file must be unique and every endpoint must name a
/// declared account. Violations raise DataError with the offending row.

TransactionGraph load_graph(const std::filesystem::path& nodes_path,
                            const std::filesystem::path& edges_path);

/// Laundering labels aligned to a loaded graph; transactions absent from the
/// file stay unknown.
LabelSet load_labels(const std::filesystem::path& labels_path,
                     const TransactionGraph& graph);

/// Relation edges (e.g. delegation pairs) resolved to dense account ids.
std::vector<std::pair<AccountId, AccountId>> load_relation_edges(
    const std::filesystem::path& groups_path, const TransactionGraph& graph);

void write_nodes_csv(const TransactionGraph& graph,
                     const std::filesystem::path& path);
void write_edges_csv(const TransactionGraph& graph,
                     const std::filesystem::path& path);
void write_labels_csv(const LabelSet& labels, const TransactionGraph& graph,
                      const std::filesystem::path& path);
void write_groups_csv(
    const std::vector<std::pair<AccountId, AccountId>>& relation_edges,
    const TransactionGraph& graph, const std::filesystem::path& path);

}  // namespace amlgraph
