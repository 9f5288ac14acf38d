#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace amlgraph {

struct ConfusionCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
};

ConfusionCounts confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truth);

/// Precision and recall on class 1; 0/0 ratios map to 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);

/// F1 = 2PR / (P + R), with the 0/0 -> 0 convention.
double f1_score(std::span<const std::uint8_t> predictions,
                std::span<const std::uint8_t> truth);

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann-Whitney ranks, exact). Throws ConfigError when
/// truth is single-class.
double auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

struct MetricsReport {
    double f1 = 0.0;
    double auc = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    ConfusionCounts confusion;
    // Run metadata filled by the experiment harness.
    std::string dataset_id;
    std::string config_hash;
    std::uint64_t seed = 0;
};

}  // namespace amlgraph
