#pragma once

#include <cstdint>
#include <vector>

#include "amlgraph/graph.hpp"
#include "amlgraph/model.hpp"

namespace amlgraph {

struct TrainConfig {
    std::size_t embed_dim = 64;
    std::size_t layer_count = 2;
    double learning_rate = 0.006;
    double lambda = 0.5;  // group-loss weight
    std::size_t epochs = 40;
    std::size_t batch_count = 1;
    // Laundering class weights; values <= 0 mean "derive from the train-mask
    // class frequencies" (w_j = n / (2 * count_j)).
    double weight0 = 0.0;
    double weight1 = 0.0;
    std::uint64_t seed = 0;
};

struct EpochStats {
    std::size_t epoch = 0;
    double laundering_loss = 0.0;
    double group_loss = 0.0;  // 0 when the group task is off
    double total_loss = 0.0;
};

struct TrainResult {
    ModelParams model;
    std::vector<EpochStats> history;
    bool group_task_active = false;
    double weight0 = 1.0;
    double weight1 = 1.0;
};

/// Joint training per-epoch loop: sample subgraph batches, encode, classify,
/// apply the combined loss on each batch's loss-target rows, Adam-update.
/// `groups` may be null (no group information) or degenerate; either way the
/// run degrades to the laundering task alone and the result records the mode.
/// Deterministic for a fixed config. Throws NumericError (with epoch/batch
/// context) when a loss or gradient turns non-finite.
TrainResult train(const TransactionGraph& graph, const LabelSet& labels,
                  const GroupVector* groups, const TrainConfig& config);

}  // namespace amlgraph
