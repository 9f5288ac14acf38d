#include "amlgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "amlgraph/errors.hpp"
#include "amlgraph/rng.hpp"

namespace amlgraph {

void TransactionGraph::finalize() {
    const std::size_t n = account_count();
    const std::size_t m = transaction_count();
    if (tx_dst.size() != m)
        throw DataError("graph: src/dst arrays disagree on transaction count");
    if (tx_labels.empty()) {
        tx_labels.reserve(m);
        for (std::size_t i = 0; i < m; ++i) tx_labels.push_back(std::to_string(i));
    }
    if (tx_labels.size() != m)
        throw DataError("graph: transaction id list has wrong size");
    if (account_features.size() != n * account_feature_dim)
        throw DataError("graph: account feature matrix has wrong size");
    if (tx_attributes.size() != m * tx_attribute_dim)
        throw DataError("graph: transaction attribute matrix has wrong size");
    for (std::size_t i = 0; i < m; ++i) {
        if (tx_src[i] >= n || tx_dst[i] >= n)
            throw DataError("graph: transaction " + std::to_string(i) +
                            " references a missing account");
    }

    // Incidence index (both directions), transaction order within account.
    adj_offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        ++adj_offsets[tx_src[i] + 1];
        if (tx_dst[i] != tx_src[i]) ++adj_offsets[tx_dst[i] + 1];
    }
    for (std::size_t a = 0; a < n; ++a) adj_offsets[a + 1] += adj_offsets[a];
    adj_tx.assign(adj_offsets[n], 0);
    std::vector<std::uint32_t> cursor(adj_offsets.begin(), adj_offsets.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
        adj_tx[cursor[tx_src[i]]++] = static_cast<TxId>(i);
        if (tx_dst[i] != tx_src[i]) adj_tx[cursor[tx_dst[i]]++] = static_cast<TxId>(i);
    }

    // Deduplicated, direction-agnostic neighbor pairs for mean aggregation.
    neighbor_owner.clear();
    neighbor_peer.clear();
    std::vector<AccountId> peers;
    for (AccountId a = 0; a < n; ++a) {
        peers.clear();
        for (TxId t : incident(a)) {
            const AccountId other = tx_src[t] == a ? tx_dst[t] : tx_src[t];
            peers.push_back(other);
        }
        std::sort(peers.begin(), peers.end());
        peers.erase(std::unique(peers.begin(), peers.end()), peers.end());
        for (AccountId p : peers) {
            neighbor_owner.push_back(a);
            neighbor_peer.push_back(p);
        }
    }
}

namespace {

void zscore_columns(std::vector<double>& matrix, std::size_t rows,
                    std::size_t cols, std::span<const std::uint8_t> fit_rows) {
    if (rows == 0 || cols == 0) return;
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0, sumsq = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!fit_rows.empty() && !fit_rows[i]) continue;
            const double v = matrix[i * cols + j];
            sum += v;
            sumsq += v * v;
            ++count;
        }
        if (count == 0) continue;
        const double mean = sum / static_cast<double>(count);
        const double var = sumsq / static_cast<double>(count) - mean * mean;
        const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double& v = matrix[i * cols + j];
            v = sd > 0.0 ? (v - mean) / sd : 0.0;
        }
    }
}

}  // namespace

void TransactionGraph::standardize_attributes(std::span<const std::uint8_t> fit_rows) {
    if (!fit_rows.empty() && fit_rows.size() != transaction_count())
        throw DataError("standardize: fit mask length does not match transactions");
    zscore_columns(tx_attributes, transaction_count(), tx_attribute_dim, fit_rows);
    zscore_columns(account_features, account_count(), account_feature_dim, {});
}

std::vector<std::int32_t> GroupPartition::membership(std::size_t account_count) const {
    std::vector<std::int32_t> member(account_count, -1);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (AccountId a : groups[g]) {
            if (a < account_count) member[a] = static_cast<std::int32_t>(g);
        }
    return member;
}

GroupPartition weakly_connected_components(
    std::span<const std::pair<AccountId, AccountId>> relation_edges) {
    GroupPartition out;
    if (relation_edges.empty()) return out;

    // Union-find over the touched accounts only.
    std::vector<AccountId> touched;
    touched.reserve(relation_edges.size() * 2);
    for (const auto& [a, b] : relation_edges) {
        touched.push_back(a);
        touched.push_back(b);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    std::vector<std::uint32_t> parent(touched.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t x) {
        std::uint32_t root = x;
        while (parent[root] != root) root = parent[root];
        while (parent[x] != root) x = std::exchange(parent[x], root);
        return root;
    };
    auto local = [&](AccountId a) {
        return static_cast<std::uint32_t>(
            std::lower_bound(touched.begin(), touched.end(), a) - touched.begin());
    };
    for (const auto& [a, b] : relation_edges) {
        const std::uint32_t ra = find(local(a)), rb = find(local(b));
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::vector<std::vector<AccountId>> by_root(touched.size());
    for (std::size_t i = 0; i < touched.size(); ++i)
        by_root[find(static_cast<std::uint32_t>(i))].push_back(touched[i]);
    for (auto& g : by_root) {
        if (g.size() < 2) continue;  // lone self-edge accounts are not groups
        out.groups.push_back(std::move(g));
    }
    // Roots are minima of their components and touched is sorted, so groups
    // are already ordered by smallest member.
    return out;
}

std::size_t GroupVector::count_ones() const {
    std::size_t ones = 0;
    for (std::uint8_t b : bits) ones += b;
    return ones;
}

GroupVector build_group_vector(const TransactionGraph& graph,
                               const GroupPartition& partition) {
    const std::size_t m = graph.transaction_count();
    for (const auto& g : partition.groups)
        for (AccountId a : g)
            if (a >= graph.account_count())
                throw DataError("group vector: partition references account " +
                                std::to_string(a) + " outside the graph");
    const auto member = partition.membership(graph.account_count());
    GroupVector out;
    out.bits.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::int32_t gs = member[graph.tx_src[i]];
        out.bits[i] = (gs >= 0 && gs == member[graph.tx_dst[i]]) ? 1 : 0;
    }
    out.degenerate = std::all_of(out.bits.begin(), out.bits.end(),
                                 [](std::uint8_t b) { return b == 1; });
    return out;
}

std::size_t LabelSet::count_labeled() const {
    std::size_t c = 0;
    for (std::int8_t l : laundering) c += (l != kLabelUnknown);
    return c;
}

std::pair<std::size_t, std::size_t> LabelSet::class_counts(
    std::span<const std::uint8_t> mask) const {
    std::size_t c0 = 0, c1 = 0;
    for (std::size_t i = 0; i < laundering.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        if (laundering[i] == 0) ++c0;
        if (laundering[i] == 1) ++c1;
    }
    return {c0, c1};
}

LabelSet split_labels(const LabelSet& labels, double train_ratio,
                      std::uint64_t seed) {
    if (!(train_ratio > 0.0 && train_ratio <= 1.0))
        throw ConfigError("split: train ratio " + std::to_string(train_ratio) +
                          " outside (0, 1]");
    const std::size_t m = labels.size();
    LabelSet out;
    out.laundering = labels.laundering;
    out.train_mask.assign(m, 0);
    out.test_mask.assign(m, 0);

    Rng rng(seed);
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::uint32_t> ids;
        for (std::size_t i = 0; i < m; ++i)
            if (labels.laundering[i] == cls) ids.push_back(static_cast<std::uint32_t>(i));
        if (ids.empty())
            throw ConfigError("split: class " + std::to_string(cls) +
                              " has no labeled transactions");
        rng.shuffle(ids);
        const auto take = static_cast<std::size_t>(
            std::lround(train_ratio * static_cast<double>(ids.size())));
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (k < take)
                out.train_mask[ids[k]] = 1;
            else
                out.test_mask[ids[k]] = 1;
        }
    }
    return out;
}

}  // namespace amlgraph
