#include "amlgraph/trainer.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "amlgraph/batching.hpp"
#include "amlgraph/errors.hpp"
#include "amlgraph/optimizer.hpp"

namespace amlgraph {

namespace {

void validate(const TransactionGraph& graph, const LabelSet& labels,
              const GroupVector* groups, const TrainConfig& config) {
    if (graph.transaction_count() == 0)
        throw DataError("train: graph has no transactions");
    if (labels.size() != graph.transaction_count())
        throw DataError("train: label set size does not match graph");
    if (groups && groups->bits.size() != graph.transaction_count())
        throw DataError("train: group vector size does not match graph");
    if (config.embed_dim == 0 || config.layer_count == 0 || config.epochs == 0)
        throw ConfigError("train: embed_dim, layer_count and epochs must be positive");
    if (!(config.learning_rate > 0.0))
        throw ConfigError("train: learning rate must be positive");
    if (config.lambda < 0.0)
        throw ConfigError("train: lambda must be non-negative");
}

}  // namespace

TrainResult train(const TransactionGraph& graph, const LabelSet& labels,
                  const GroupVector* groups, const TrainConfig& config) {
    validate(graph, labels, groups, config);

    TrainResult result;
    if (config.weight0 > 0.0 && config.weight1 > 0.0) {
        result.weight0 = config.weight0;
        result.weight1 = config.weight1;
    } else {
        std::tie(result.weight0, result.weight1) = compute_class_weights(labels);
    }
    result.group_task_active = groups != nullptr && !groups->degenerate;

    Rng rng(config.seed);
    result.model = ModelParams::create(graph.account_feature_dim,
                                       graph.tx_attribute_dim, config.embed_dim,
                                       config.layer_count, rng);
    ParamMap params = result.model.collect();
    AdamConfig adam;
    adam.lr = config.learning_rate;
    AdamOptimizer optimizer(params.tensors(), adam);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto batches = sample_subgraph_batches(graph, config.batch_count,
                                                     rng.derive(epoch + 1));
        EpochStats stats;
        stats.epoch = epoch;
        std::size_t laundering_batches = 0;

        for (std::size_t b = 0; b < batches.size(); ++b) {
            const SubgraphBatch& batch = batches[b];
            const std::size_t k = batch.loss_rows.size();

            std::vector<std::int8_t> batch_labels(k, kLabelUnknown);
            std::vector<std::uint8_t> batch_mask(k, 0);
            std::vector<std::uint8_t> batch_bits(k, 0);
            bool any_train = false;
            for (std::size_t r = 0; r < k; ++r) {
                const TxId t = batch.transactions[batch.loss_rows[r]];
                if (labels.train_mask[t] && labels.laundering[t] != kLabelUnknown) {
                    batch_labels[r] = labels.laundering[t];
                    batch_mask[r] = 1;
                    any_train = true;
                }
                if (result.group_task_active) batch_bits[r] = groups->bits[t];
            }

            const Tensor embeddings = encode(batch.graph, result.model.encoder);
            const DetectionMatrix full = classify(embeddings, result.model.classifier);
            const DetectionMatrix targets{gather_rows(full.logits, batch.loss_rows)};

            // The loss term structure must not depend on whether the group
            // head contributes zero: the optimizer step count is part of the
            // trajectory, so every batch steps exactly once.
            Tensor loss;
            double loss_m_value = 0.0, loss_g_value = 0.0;
            if (any_train) {
                const Tensor loss_m =
                    laundering_loss(targets, batch_labels, batch_mask,
                                    result.weight0, result.weight1);
                loss_m_value = loss_m.scalar_value();
                ++laundering_batches;
                loss = loss_m;
            }
            if (result.group_task_active) {
                const Tensor loss_g = group_loss(targets, batch_bits,
                                                 /*require_discriminative=*/false);
                loss_g_value = loss_g.scalar_value();
                loss = loss.defined() ? total_loss(loss, loss_g, config.lambda)
                                      : scale(loss_g, config.lambda);
            }
            if (!loss.defined()) loss = Tensor::zeros(1, 1);

            const double loss_value = loss.scalar_value();
            if (!std::isfinite(loss_value))
                throw NumericError("train: non-finite loss at epoch " +
                                   std::to_string(epoch) + " batch " +
                                   std::to_string(b));

            optimizer.zero_grad();
            backward(loss);
            try {
                optimizer.step();
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " (epoch " +
                                   std::to_string(epoch) + ", batch " +
                                   std::to_string(b) + ")");
            }

            stats.laundering_loss += loss_m_value;
            stats.group_loss += loss_g_value;
            stats.total_loss += loss_value;
        }

        if (laundering_batches > 0)
            stats.laundering_loss /= static_cast<double>(laundering_batches);
        stats.group_loss /= static_cast<double>(batches.size());
        stats.total_loss /= static_cast<double>(batches.size());
        result.history.push_back(stats);
    }
    return result;
}

}  // namespace amlgraph
