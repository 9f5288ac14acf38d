#include "amlgraph/encoder.hpp"

#include <array>
#include <stdexcept>

#include "amlgraph/errors.hpp"

namespace amlgraph {

LinearMap LinearMap::create(std::size_t in, std::size_t out, Rng& rng) {
    LinearMap map;
    map.w = Tensor::glorot(in, out, rng);
    map.b = Tensor::zeros(1, out, /*tracked=*/true);
    return map;
}

Tensor LinearMap::apply(const Tensor& x) const {
    return add_row_broadcast(matmul(x, w), b);
}

void LinearMap::collect(ParamMap& params, const std::string& prefix) const {
    params.add(prefix + ".w", w);
    params.add(prefix + ".b", b);
}

Perceptron Perceptron::create(std::size_t in, std::size_t hidden,
                              std::size_t out, Rng& rng) {
    Perceptron p;
    p.w1 = Tensor::glorot(in, hidden, rng);
    p.b1 = Tensor::zeros(1, hidden, /*tracked=*/true);
    p.w2 = Tensor::glorot(hidden, out, rng);
    p.b2 = Tensor::zeros(1, out, /*tracked=*/true);
    return p;
}

Tensor Perceptron::apply(const Tensor& x) const {
    const Tensor hidden = relu(add_row_broadcast(matmul(x, w1), b1));
    return add_row_broadcast(matmul(hidden, w2), b2);
}

void Perceptron::collect(ParamMap& params, const std::string& prefix) const {
    params.add(prefix + ".w1", w1);
    params.add(prefix + ".b1", b1);
    params.add(prefix + ".w2", w2);
    params.add(prefix + ".b2", b2);
}

EncoderParams EncoderParams::create(std::size_t account_feature_dim,
                                    std::size_t tx_attribute_dim,
                                    std::size_t embed_dim,
                                    std::size_t layer_count, Rng& rng) {
    if (embed_dim == 0) throw ConfigError("encoder: embed_dim must be positive");
    if (layer_count == 0) throw ConfigError("encoder: layer count must be positive");
    EncoderParams params;
    params.embed_dim = embed_dim;
    params.account_lift = LinearMap::create(account_feature_dim, embed_dim, rng);
    params.attribute_lift = LinearMap::create(tx_attribute_dim, embed_dim, rng);
    params.layers.reserve(layer_count);
    for (std::size_t k = 0; k < layer_count; ++k) {
        EncoderLayer layer;
        layer.neighbor_transform = LinearMap::create(embed_dim, embed_dim, rng);
        layer.epsilon = Tensor::scalar(0.0, /*tracked=*/true);
        layer.account_update =
            Perceptron::create(embed_dim, embed_dim, embed_dim, rng);
        layer.attribute_update =
            Perceptron::create(2 * embed_dim, embed_dim, embed_dim, rng);
        layer.fusion = Perceptron::create(4 * embed_dim, embed_dim, embed_dim, rng);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

void EncoderParams::collect(ParamMap& params) const {
    account_lift.collect(params, "encoder.account_lift");
    attribute_lift.collect(params, "encoder.attribute_lift");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string prefix = "encoder.layer" + std::to_string(k);
        layers[k].neighbor_transform.collect(params, prefix + ".neighbor_transform");
        params.add(prefix + ".epsilon", layers[k].epsilon);
        layers[k].account_update.collect(params, prefix + ".account_update");
        layers[k].attribute_update.collect(params, prefix + ".attribute_update");
        layers[k].fusion.collect(params, prefix + ".fusion");
    }
}

Tensor aggregate_neighbor_messages(const Tensor& accounts,
                                   const LinearMap& neighbor_transform,
                                   const TransactionGraph& graph) {
    if (accounts.rows() != graph.account_count())
        throw std::invalid_argument("aggregate: account matrix rows do not match graph");
    const Tensor transformed = neighbor_transform.apply(accounts);
    const Tensor gathered = gather_rows(transformed, graph.neighbor_peer);
    return scatter_mean_rows(gathered, graph.neighbor_owner, graph.account_count());
}

Tensor update_account_embedding(const Tensor& accounts, const Tensor& messages,
                                const Perceptron& update, const Tensor& epsilon) {
    const Tensor self = add(accounts, scale_by(accounts, epsilon));
    return update.apply(add(self, messages));
}

Tensor update_attribute_embedding(const Tensor& attributes, const Tensor& fused,
                                  const Perceptron& update) {
    const std::array<Tensor, 2> parts = {attributes, fused};
    return update.apply(concat_cols(parts));
}

Tensor gather_endpoint_embeddings(const Tensor& accounts,
                                  const TransactionGraph& graph) {
    if (accounts.rows() != graph.account_count())
        throw std::invalid_argument("gather endpoints: account matrix rows do not match graph");
    const std::array<Tensor, 2> parts = {gather_rows(accounts, graph.tx_src),
                                         gather_rows(accounts, graph.tx_dst)};
    return concat_cols(parts);
}

Tensor fuse_transaction_embedding(const Tensor& fused, const Tensor& attributes,
                                  const Tensor& endpoint_pairs,
                                  const Perceptron& fusion) {
    const std::array<Tensor, 3> parts = {fused, attributes, endpoint_pairs};
    return fusion.apply(concat_cols(parts));
}

EmbeddingState lift_inputs(const TransactionGraph& graph,
                           const EncoderParams& params) {
    const std::size_t n = graph.account_count();
    const std::size_t m = graph.transaction_count();
    if (params.account_lift.w.rows() != graph.account_feature_dim)
        throw ConfigError("encoder: account feature width does not match parameters");
    if (params.attribute_lift.w.rows() != graph.tx_attribute_dim)
        throw ConfigError("encoder: transaction attribute width does not match parameters");

    EmbeddingState state;
    state.accounts = params.account_lift.apply(Tensor::from_values(
        n, graph.account_feature_dim, graph.account_features));
    state.attributes = params.attribute_lift.apply(
        Tensor::from_values(m, graph.tx_attribute_dim, graph.tx_attributes));
    state.transactions = Tensor::zeros(m, params.embed_dim);
    return state;
}

EmbeddingState apply_layer(const EmbeddingState& state, const EncoderLayer& layer,
                           const TransactionGraph& graph) {
    EmbeddingState next;
    const Tensor messages =
        aggregate_neighbor_messages(state.accounts, layer.neighbor_transform, graph);
    next.accounts = update_account_embedding(state.accounts, messages,
                                             layer.account_update, layer.epsilon);
    next.attributes = update_attribute_embedding(state.attributes,
                                                 state.transactions,
                                                 layer.attribute_update);
    const Tensor endpoint_pairs = gather_endpoint_embeddings(next.accounts, graph);
    next.transactions = fuse_transaction_embedding(state.transactions,
                                                   next.attributes, endpoint_pairs,
                                                   layer.fusion);
    return next;
}

Tensor encode(const TransactionGraph& graph, const EncoderParams& params) {
    EmbeddingState state = lift_inputs(graph, params);
    for (const EncoderLayer& layer : params.layers)
        state = apply_layer(state, layer, graph);
    return state.transactions;
}

}  // namespace amlgraph
