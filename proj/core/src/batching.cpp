#include "amlgraph/batching.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amlgraph/errors.hpp"
#include "amlgraph/rng.hpp"

namespace amlgraph {

std::vector<SubgraphBatch> sample_subgraph_batches(const TransactionGraph& graph,
                                                   std::size_t batch_count,
                                                   std::uint64_t seed) {
    const std::size_t m = graph.transaction_count();
    if (batch_count == 0)
        throw ConfigError("batching: batch count must be positive");
    if (batch_count > m)
        throw ConfigError("batching: batch count " + std::to_string(batch_count) +
                          " exceeds transaction count " + std::to_string(m));

    std::vector<TxId> order(m);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<SubgraphBatch> batches;
    batches.reserve(batch_count);
    const std::size_t base = m / batch_count;
    const std::size_t extra = m % batch_count;  // first `extra` chunks get +1

    std::vector<std::uint8_t> in_account(graph.account_count(), 0);
    std::vector<std::uint8_t> in_tx(m, 0);
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < batch_count; ++b) {
        const std::size_t chunk = base + (b < extra ? 1 : 0);
        std::vector<TxId> loss_txs(order.begin() + cursor,
                                   order.begin() + cursor + chunk);
        cursor += chunk;
        std::sort(loss_txs.begin(), loss_txs.end());

        SubgraphBatch batch;

        // Account closure: chunk endpoints plus their one-hop neighbors.
        for (TxId t : loss_txs) {
            for (AccountId e : {graph.tx_src[t], graph.tx_dst[t]}) {
                if (!in_account[e]) {
                    in_account[e] = 1;
                    batch.accounts.push_back(e);
                }
            }
        }
        const std::size_t endpoint_count = batch.accounts.size();
        for (std::size_t k = 0; k < endpoint_count; ++k) {
            for (TxId t : graph.incident(batch.accounts[k])) {
                const AccountId s = graph.tx_src[t], d = graph.tx_dst[t];
                const AccountId peer = s == batch.accounts[k] ? d : s;
                if (!in_account[peer]) {
                    in_account[peer] = 1;
                    batch.accounts.push_back(peer);
                }
            }
        }
        std::sort(batch.accounts.begin(), batch.accounts.end());

        // Edge-induced view: every transaction with both endpoints inside.
        for (TxId t : loss_txs) in_tx[t] = 1;
        for (AccountId a : batch.accounts)
            for (TxId t : graph.incident(a)) {
                if (in_tx[t]) continue;
                if (in_account[graph.tx_src[t]] && in_account[graph.tx_dst[t]])
                    in_tx[t] = 1;
            }
        for (TxId t = 0; t < m; ++t)
            if (in_tx[t]) batch.transactions.push_back(t);

        std::vector<std::uint32_t> local_account(graph.account_count());
        for (std::size_t k = 0; k < batch.accounts.size(); ++k)
            local_account[batch.accounts[k]] = static_cast<std::uint32_t>(k);

        TransactionGraph& view = batch.graph;
        view.account_feature_dim = graph.account_feature_dim;
        for (AccountId a : batch.accounts) {
            view.account_labels.push_back(graph.account_labels[a]);
            const double* row = graph.account_features.data() +
                                std::size_t(a) * graph.account_feature_dim;
            view.account_features.insert(view.account_features.end(), row,
                                         row + graph.account_feature_dim);
        }
        view.tx_attribute_dim = graph.tx_attribute_dim;
        for (TxId t : batch.transactions) {
            view.tx_labels.push_back(graph.tx_labels[t]);
            view.tx_src.push_back(local_account[graph.tx_src[t]]);
            view.tx_dst.push_back(local_account[graph.tx_dst[t]]);
            const double* row = graph.tx_attributes.data() +
                                std::size_t(t) * graph.tx_attribute_dim;
            view.tx_attributes.insert(view.tx_attributes.end(), row,
                                      row + graph.tx_attribute_dim);
        }
        view.finalize();

        std::vector<std::uint8_t> is_loss(m, 0);
        for (TxId t : loss_txs) is_loss[t] = 1;
        for (std::uint32_t k = 0; k < batch.transactions.size(); ++k)
            if (is_loss[batch.transactions[k]]) batch.loss_rows.push_back(k);

        for (AccountId a : batch.accounts) in_account[a] = 0;
        for (TxId t : batch.transactions) in_tx[t] = 0;
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace amlgraph
