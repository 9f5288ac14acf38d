#pragma once

#include <cstdint>
#include <vector>

#include "amlgraph/graph.hpp"

namespace amlgraph {

/// One training subgraph. `graph` is a self-contained re-indexed view;
/// `accounts` and `transactions` map its dense ids back to the parent graph.
/// `loss_rows` marks which rows of the view carry the loss for this batch:
/// the view also contains the closure transactions pulled in by the one-hop
/// account expansion, and those only provide message-passing context.
struct SubgraphBatch {
    TransactionGraph graph;
    std::vector<AccountId> accounts;
    std::vector<TxId> transactions;
    std::vector<std::uint32_t> loss_rows;  // indices into `transactions`
};

/// Splits the transactions into `batch_count` loss chunks of a seeded random
/// permutation and expands each chunk to an edge-induced subgraph over the
/// chunk endpoints plus their one-hop neighbors. Every transaction is a loss
/// target in exactly one batch. batch_count = 1 yields the full graph.
/// Throws ConfigError when batch_count is 0 or exceeds the transaction count.
std::vector<SubgraphBatch> sample_subgraph_batches(const TransactionGraph& graph,
                                                   std::size_t batch_count,
                                                   std::uint64_t seed);

}  // namespace amlgraph
