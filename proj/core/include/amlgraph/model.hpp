#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "amlgraph/encoder.hpp"
#include "amlgraph/graph.hpp"
#include "amlgraph/tensor.hpp"

namespace amlgraph {

/// Shared two-layer classifier head mapping transaction embeddings to four
/// logits per row: columns 0-1 score the laundering decision, columns 2-3
/// the in-group decision. Both tasks read the same weights.
struct ClassifierParams {
    Perceptron net;

    static ClassifierParams create(std::size_t embed_dim, Rng& rng);
    void collect(ParamMap& params) const;
};

/// m x 4 task logits plus derived per-task probabilities.
struct DetectionMatrix {
    Tensor logits;

    std::size_t rows() const { return logits.rows(); }
    /// Row-wise softmax over columns {0,1}.
    Tensor laundering_probs() const { return softmax_rows(slice_cols(logits, 0, 2)); }
    /// Row-wise softmax over columns {2,3}.
    Tensor group_probs() const { return softmax_rows(slice_cols(logits, 2, 4)); }
};

DetectionMatrix classify(const Tensor& embeddings, const ClassifierParams& classifier);

/// Everything the optimizer updates: encoder plus classifier.
struct ModelParams {
    EncoderParams encoder;
    ClassifierParams classifier;

    static ModelParams create(std::size_t account_feature_dim,
                              std::size_t tx_attribute_dim, std::size_t embed_dim,
                              std::size_t layer_count, Rng& rng);
    ParamMap collect() const;
};

/// Weighted cross-entropy over the rows where mask is set: the mean of
/// -w_y * log p_y with p from the laundering block. labels/mask run over the
/// rows of m. Throws ConfigError when the mask selects nothing.
Tensor laundering_loss(const DetectionMatrix& m, std::span<const std::int8_t> labels,
                       std::span<const std::uint8_t> mask, double weight0,
                       double weight1);

/// Unweighted cross-entropy of the group block against the in-group bits,
/// mean over all rows of m. An all-ones bit vector carries no signal; it is
/// rejected unless require_discriminative is false (batch slices of a
/// globally sound vector may legitimately be uniform).
Tensor group_loss(const DetectionMatrix& m, std::span<const std::uint8_t> bits,
                  bool require_discriminative = true);

/// L = L_m + lambda * L_g. lambda must be >= 0.
Tensor total_loss(const Tensor& laundering, const Tensor& group, double lambda);

/// Inverse class frequency on the train mask: w_j = n / (2 * count_j).
/// Throws ConfigError when a class is absent from the mask.
std::pair<double, double> compute_class_weights(const LabelSet& labels);

struct Predictions {
    std::vector<std::uint8_t> laundering;
    std::vector<std::uint8_t> group;
};

/// Row-wise argmax per task block; ties resolve to class 0.
Predictions predict(const DetectionMatrix& m);

/// Probability of laundering class 1 per row (the AUC score input).
std::vector<double> laundering_scores(const DetectionMatrix& m);

}  // namespace amlgraph
