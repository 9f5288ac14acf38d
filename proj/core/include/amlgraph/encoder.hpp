#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "amlgraph/checkpoint.hpp"
#include "amlgraph/graph.hpp"
#include "amlgraph/rng.hpp"
#include "amlgraph/tensor.hpp"

namespace amlgraph {

/// Affine map x -> x.w + b.
struct LinearMap {
    Tensor w;
    Tensor b;

    static LinearMap create(std::size_t in, std::size_t out, Rng& rng);
    Tensor apply(const Tensor& x) const;
    void collect(ParamMap& params, const std::string& prefix) const;
};

/// Two-layer perceptron: ReLU hidden layer, linear output.
struct Perceptron {
    Tensor w1, b1;
    Tensor w2, b2;

    static Perceptron create(std::size_t in, std::size_t hidden, std::size_t out,
                             Rng& rng);
    Tensor apply(const Tensor& x) const;
    void collect(ParamMap& params, const std::string& prefix) const;
};

/// One message-passing layer over the three embedding levels.
struct EncoderLayer {
    LinearMap neighbor_transform;  // applied to neighbor account embeddings
    Tensor epsilon;                // 1x1 self-weight of the GIN update, init 0
    Perceptron account_update;     // d -> d
    Perceptron attribute_update;   // 2d -> d, on [W || T]
    Perceptron fusion;             // 4d -> d, on [T || W || endpoint pair]
};

/// Shared transaction-graph encoder. Raw account features and transaction
/// attributes enter through learned linear lifts; the fused transaction
/// state starts at zero and is rewritten by each layer.
struct EncoderParams {
    std::size_t embed_dim = 0;
    LinearMap account_lift;
    LinearMap attribute_lift;
    std::vector<EncoderLayer> layers;

    static EncoderParams create(std::size_t account_feature_dim,
                                std::size_t tx_attribute_dim,
                                std::size_t embed_dim, std::size_t layer_count,
                                Rng& rng);
    void collect(ParamMap& params) const;
};

/// Embeddings after one layer (or the lifted inputs for layer 0).
struct EmbeddingState {
    Tensor accounts;      // |A| x d
    Tensor attributes;    // m x d
    Tensor transactions;  // m x d fused state
};

/// Mean over each account's deduplicated neighbor set of the transformed
/// neighbor embeddings. Accounts without neighbors get a zero row, so the
/// result is invariant to duplicating a neighbor relation.
Tensor aggregate_neighbor_messages(const Tensor& accounts,
                                   const LinearMap& neighbor_transform,
                                   const TransactionGraph& graph);

/// GIN update: perceptron((1 + eps) * accounts + messages).
Tensor update_account_embedding(const Tensor& accounts, const Tensor& messages,
                                const Perceptron& update, const Tensor& epsilon);

/// perceptron([attributes || fused]) row-wise.
Tensor update_attribute_embedding(const Tensor& attributes, const Tensor& fused,
                                  const Perceptron& update);

/// Row per transaction: [accounts[src] || accounts[dst]], source first.
Tensor gather_endpoint_embeddings(const Tensor& accounts,
                                  const TransactionGraph& graph);

/// perceptron([fused || attributes || endpoint_pairs]) row-wise.
Tensor fuse_transaction_embedding(const Tensor& fused, const Tensor& attributes,
                                  const Tensor& endpoint_pairs,
                                  const Perceptron& fusion);

/// Lift raw features to width d; the fused state starts at zero.
EmbeddingState lift_inputs(const TransactionGraph& graph,
                           const EncoderParams& params);

/// One full layer pass.
EmbeddingState apply_layer(const EmbeddingState& state, const EncoderLayer& layer,
                           const TransactionGraph& graph);

/// Full encoder: lift, then every layer; returns the final fused transaction
/// embedding matrix (m x d) consumed by the classifier.
Tensor encode(const TransactionGraph& graph, const EncoderParams& params);

}  // namespace amlgraph
