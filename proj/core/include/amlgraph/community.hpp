#pragma once

#include <cstdint>

#include "amlgraph/graph.hpp"

namespace amlgraph {

/// Newman modularity (resolution 1) of a partition over the undirected
/// weighted projection of the transaction graph (weight = transaction count
/// between a pair; self-loops kept). Accounts outside every group count as
/// singletons.
double modularity(const TransactionGraph& graph, const GroupPartition& partition);

/// Greedy modularity communities on the undirected projection: local moving
/// in a seeded node order until no gain, then community aggregation, repeated
/// to a fixpoint. Communities of size < 2 are dropped. Deterministic for a
/// fixed seed.
GroupPartition derive_groups_modularity(const TransactionGraph& graph,
                                        std::uint64_t seed = 0);

/// Keeps only groups with min_size <= |C| <= max_size.
GroupPartition filter_groups(const GroupPartition& partition,
                             std::size_t min_size = 2,
                             std::size_t max_size = 10000);

}  // namespace amlgraph
