#include <algorithm>
#include <set>
#include <vector>

#include "amlgraph/batching.hpp"
#include "amlgraph/errors.hpp"
#include "amlgraph/rng.hpp"
#include "doctest.h"

using namespace amlgraph;

namespace {

TransactionGraph random_graph(std::uint64_t seed, std::size_t n, std::size_t m) {
    Rng rng(seed);
    TransactionGraph g;
    for (std::size_t i = 0; i < n; ++i) g.account_labels.push_back(std::to_string(i));
    g.account_feature_dim = 2;
    for (std::size_t i = 0; i < 2 * n; ++i) g.account_features.push_back(rng.normal());
    g.tx_attribute_dim = 3;
    for (std::size_t i = 0; i < m; ++i) {
        g.tx_src.push_back(static_cast<AccountId>(rng.uniform_int(n)));
        g.tx_dst.push_back(static_cast<AccountId>(rng.uniform_int(n)));
        for (int j = 0; j < 3; ++j) g.tx_attributes.push_back(rng.normal());
    }
    g.finalize();
    return g;
}

}  // namespace

TEST_CASE("a single batch is the whole graph") {
    TransactionGraph g = random_graph(1, 12, 30);
    auto batches = sample_subgraph_batches(g, 1, 7);
    REQUIRE(batches.size() == 1);
    const SubgraphBatch& b = batches[0];
    CHECK(b.transactions.size() == 30);
    CHECK(b.graph.transaction_count() == 30);
    CHECK(b.loss_rows.size() == 30);
    // Isolated accounts (if any) are absent, but every transaction is present
    // with matching attributes.
    for (std::size_t k = 0; k < b.transactions.size(); ++k) {
        const TxId t = b.transactions[k];
        CHECK(b.graph.account_labels[b.graph.tx_src[k]] ==
              g.account_labels[g.tx_src[t]]);
        CHECK(b.graph.account_labels[b.graph.tx_dst[k]] ==
              g.account_labels[g.tx_dst[t]]);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(b.graph.tx_attributes[k * 3 + j] == g.tx_attributes[t * 3 + j]);
    }
}

TEST_CASE("every transaction is a loss target in exactly one batch") {
    TransactionGraph g = random_graph(2, 20, 57);
    for (std::size_t batch_count : {2, 3, 5, 57}) {
        auto batches = sample_subgraph_batches(g, batch_count, 99);
        REQUIRE(batches.size() == batch_count);
        std::vector<int> seen(g.transaction_count(), 0);
        for (const auto& b : batches) {
            for (std::uint32_t row : b.loss_rows) {
                REQUIRE(row < b.transactions.size());
                seen[b.transactions[row]] += 1;
            }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        // Chunk sizes differ by at most one.
        std::size_t lo = g.transaction_count(), hi = 0;
        for (const auto& b : batches) {
            lo = std::min(lo, b.loss_rows.size());
            hi = std::max(hi, b.loss_rows.size());
        }
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("batch views contain the one-hop closure of their loss edges") {
    TransactionGraph g = random_graph(3, 15, 40);
    auto batches = sample_subgraph_batches(g, 4, 5);
    for (const auto& b : batches) {
        std::set<AccountId> members(b.accounts.begin(), b.accounts.end());

        // Loss-edge endpoints and all their graph neighbors must be present.
        std::set<AccountId> required;
        for (std::uint32_t row : b.loss_rows) {
            const TxId t = b.transactions[row];
            for (AccountId e : {g.tx_src[t], g.tx_dst[t]}) {
                required.insert(e);
                for (TxId inc : g.incident(e)) {
                    required.insert(g.tx_src[inc]);
                    required.insert(g.tx_dst[inc]);
                }
            }
        }
        for (AccountId a : required) CHECK(members.count(a) == 1);

        // The view is edge-induced: it carries every parent transaction whose
        // endpoints both fall inside the member set.
        std::set<TxId> view_txs(b.transactions.begin(), b.transactions.end());
        for (TxId t = 0; t < g.transaction_count(); ++t) {
            const bool inside = members.count(g.tx_src[t]) && members.count(g.tx_dst[t]);
            CHECK(view_txs.count(t) == (inside ? 1u : 0u));
        }

        // Local endpoint ids map back to the same parent accounts.
        for (std::size_t k = 0; k < b.transactions.size(); ++k) {
            CHECK(b.accounts[b.graph.tx_src[k]] == g.tx_src[b.transactions[k]]);
            CHECK(b.accounts[b.graph.tx_dst[k]] == g.tx_dst[b.transactions[k]]);
        }
    }
}

TEST_CASE("batching is deterministic in the seed") {
    TransactionGraph g = random_graph(4, 18, 44);
    auto a = sample_subgraph_batches(g, 3, 123);
    auto b = sample_subgraph_batches(g, 3, 123);
    auto c = sample_subgraph_batches(g, 3, 124);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].transactions == b[i].transactions);
        CHECK(a[i].accounts == b[i].accounts);
        CHECK(a[i].loss_rows == b[i].loss_rows);
    }
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        any_difference |= a[i].loss_rows != c[i].loss_rows ||
                          a[i].transactions != c[i].transactions;
    CHECK(any_difference);
}

TEST_CASE("invalid batch counts are config errors") {
    TransactionGraph g = random_graph(5, 6, 9);
    CHECK_THROWS_AS(sample_subgraph_batches(g, 0, 1), ConfigError);
    CHECK_THROWS_AS(sample_subgraph_batches(g, 10, 1), ConfigError);
}
