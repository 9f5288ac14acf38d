#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace amlgraph {

using AccountId = std::uint32_t;
using TxId = std::uint32_t;

/// Directed multigraph of accounts and attributed transactions. Accounts and
/// transactions use dense 0-based ids. finalize() builds the incidence index
/// and the deduplicated neighbor lists used by message passing; after that
/// the structure is read-only and safe to share across threads.
struct TransactionGraph {
    std::vector<std::string> account_labels;  // original external ids
    std::size_t account_feature_dim = 0;
    std::vector<double> account_features;  // n x account_feature_dim, row-major

    std::vector<std::string> tx_labels;  // original external ids; finalize()
                                         // fills "0","1",... when left empty
    std::vector<AccountId> tx_src;
    std::vector<AccountId> tx_dst;
    std::size_t tx_attribute_dim = 0;
    std::vector<double> tx_attributes;  // m x tx_attribute_dim, row-major

    // Built by finalize():
    std::vector<std::uint32_t> adj_offsets;  // n+1; CSR over incident txs
    std::vector<TxId> adj_tx;                // both directions, id order
    std::vector<AccountId> neighbor_owner;   // flattened deduped neighbor pairs
    std::vector<AccountId> neighbor_peer;    // direction-agnostic

    std::size_t account_count() const { return account_labels.size(); }
    std::size_t transaction_count() const { return tx_src.size(); }

    /// Incident transaction ids (in and out) of an account.
    std::span<const TxId> incident(AccountId a) const {
        return {adj_tx.data() + adj_offsets[a],
                adj_tx.data() + adj_offsets[a + 1]};
    }

    /// Validates endpoint ids and feature sizes, then builds the incidence
    /// index and neighbor lists. Throws DataError on inconsistencies.
    void finalize();

    /// Z-score each attribute column, with mean/stddev fitted on the rows
    /// where fit_rows is true (all rows when empty). Constant columns map to
    /// all zeros. Account feature columns are always fitted on all accounts.
    void standardize_attributes(std::span<const std::uint8_t> fit_rows = {});
};

/// Disjoint account groups; each group is sorted, groups are ordered by
/// their smallest member. Groups always have >= 2 accounts.
struct GroupPartition {
    std::vector<std::vector<AccountId>> groups;

    std::size_t group_count() const { return groups.size(); }

    /// Dense lookup: group index per account, or nullopt. account_count
    /// bounds the lookup table.
    std::vector<std::int32_t> membership(std::size_t account_count) const;
};

/// Partition of the accounts touched by relation edges into weakly connected
/// components. Accounts with no relation edge are excluded, as are
/// single-account components (a lone self-edge).
GroupPartition weakly_connected_components(
    std::span<const std::pair<AccountId, AccountId>> relation_edges);

/// Per-transaction intra-group indicator: bits[i] = 1 iff both endpoints of
/// transaction i lie in the same group. degenerate flags the all-ones case,
/// which carries no discriminative signal and must be rejected for training.
struct GroupVector {
    std::vector<std::uint8_t> bits;
    bool degenerate = false;

    std::size_t count_ones() const;
};

GroupVector build_group_vector(const TransactionGraph& graph,
                               const GroupPartition& partition);

inline constexpr std::int8_t kLabelUnknown = -1;

/// Per-transaction laundering labels plus disjoint train/test masks.
/// Masked-train entries are never unknown.
struct LabelSet {
    std::vector<std::int8_t> laundering;  // 0, 1, or kLabelUnknown
    std::vector<std::uint8_t> train_mask;
    std::vector<std::uint8_t> test_mask;

    std::size_t size() const { return laundering.size(); }
    std::size_t count_labeled() const;
    /// Class counts restricted to a mask.
    std::pair<std::size_t, std::size_t> class_counts(
        std::span<const std::uint8_t> mask) const;
};

/// Stratified train/test split: per class, round(ratio * class_size) labeled
/// transactions go to the train mask (within +-1), the rest to test.
/// Deterministic for a fixed seed. Unknown labels join neither mask.
/// Throws ConfigError when a class has no labeled members or the ratio is
/// outside (0, 1].
LabelSet split_labels(const LabelSet& labels, double train_ratio,
                      std::uint64_t seed);

}  // namespace amlgraph
