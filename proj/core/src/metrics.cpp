#include "amlgraph/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "amlgraph/errors.hpp"

namespace amlgraph {

ConfusionCounts confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truth) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("confusion: prediction/truth length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            ++(predictions[i] ? c.true_positive : c.false_negative);
        } else {
            ++(predictions[i] ? c.false_positive : c.true_negative);
        }
    }
    return c;
}

double precision(const ConfusionCounts& c) {
    const std::size_t denom = c.true_positive + c.false_positive;
    return denom == 0 ? 0.0
                      : static_cast<double>(c.true_positive) /
                            static_cast<double>(denom);
}

double recall(const ConfusionCounts& c) {
    const std::size_t denom = c.true_positive + c.false_negative;
    return denom == 0 ? 0.0
                      : static_cast<double>(c.true_positive) /
                            static_cast<double>(denom);
}

double f1_score(std::span<const std::uint8_t> predictions,
                std::span<const std::uint8_t> truth) {
    const ConfusionCounts c = confusion(predictions, truth);
    const double p = precision(c);
    const double r = recall(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size())
        throw std::invalid_argument("auc: score/truth length mismatch");
    std::size_t positives = 0;
    for (std::uint8_t t : truth) positives += (t != 0);
    const std::size_t negatives = truth.size() - positives;
    if (positives == 0 || negatives == 0)
        throw ConfigError("auc: truth contains a single class");

    // Average ranks; equal scores share the mean of their rank range, which
    // realizes the half-credit tie convention exactly.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            if (truth[order[k]]) positive_rank_sum += mean_rank;
        i = j + 1;
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace amlgraph
