#include "amlgraph/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "amlgraph/errors.hpp"

namespace amlgraph {

namespace {
constexpr double kProbFloor = 1e-12;  // keeps log() finite on saturated rows
}

ClassifierParams ClassifierParams::create(std::size_t embed_dim, Rng& rng) {
    ClassifierParams c;
    c.net = Perceptron::create(embed_dim, embed_dim, 4, rng);
    return c;
}

void ClassifierParams::collect(ParamMap& params) const {
    net.collect(params, "classifier");
}

DetectionMatrix classify(const Tensor& embeddings, const ClassifierParams& classifier) {
    DetectionMatrix m;
    m.logits = classifier.net.apply(embeddings);
    return m;
}

ModelParams ModelParams::create(std::size_t account_feature_dim,
                                std::size_t tx_attribute_dim,
                                std::size_t embed_dim, std::size_t layer_count,
                                Rng& rng) {
    ModelParams model;
    model.encoder = EncoderParams::create(account_feature_dim, tx_attribute_dim,
                                          embed_dim, layer_count, rng);
    model.classifier = ClassifierParams::create(embed_dim, rng);
    return model;
}

ParamMap ModelParams::collect() const {
    ParamMap params;
    encoder.collect(params);
    classifier.collect(params);
    return params;
}

Tensor laundering_loss(const DetectionMatrix& m, std::span<const std::int8_t> labels,
                       std::span<const std::uint8_t> mask, double weight0,
                       double weight1) {
    const std::size_t rows = m.rows();
    if (labels.size() != rows || mask.size() != rows)
        throw std::invalid_argument("laundering loss: label/mask length mismatch");
    if (!(weight0 > 0.0) || !(weight1 > 0.0))
        throw ConfigError("laundering loss: class weights must be positive");

    std::vector<std::uint32_t> selected;
    std::vector<double> weight_cells;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!mask[i]) continue;
        if (labels[i] == kLabelUnknown)
            throw std::invalid_argument(
                "laundering loss: masked row " + std::to_string(i) + " is unlabeled");
        selected.push_back(static_cast<std::uint32_t>(i));
        if (labels[i] == 0) {
            weight_cells.push_back(weight0);
            weight_cells.push_back(0.0);
        } else {
            weight_cells.push_back(0.0);
            weight_cells.push_back(weight1);
        }
    }
    if (selected.empty())
        throw ConfigError("laundering loss: training mask selects no transactions");

    const Tensor picked = gather_rows(m.laundering_probs(), selected);
    const Tensor log_p = log_elem(clamp_min(picked, kProbFloor));
    const Tensor weights =
        Tensor::from_values(selected.size(), 2, std::move(weight_cells));
    return scale(sum_all(mul(weights, log_p)),
                 -1.0 / static_cast<double>(selected.size()));
}

Tensor group_loss(const DetectionMatrix& m, std::span<const std::uint8_t> bits,
                  bool require_discriminative) {
    const std::size_t rows = m.rows();
    if (bits.size() != rows)
        throw std::invalid_argument("group loss: bit vector length mismatch");
    if (rows == 0) throw ConfigError("group loss: empty input");
    if (require_discriminative &&
        std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 1; }))
        throw ConfigError("group loss: degenerate all-in-group vector");

    std::vector<double> target_cells(rows * 2, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        target_cells[i * 2 + (bits[i] ? 1 : 0)] = 1.0;

    const Tensor log_p = log_elem(clamp_min(m.group_probs(), kProbFloor));
    const Tensor targets = Tensor::from_values(rows, 2, std::move(target_cells));
    return scale(sum_all(mul(targets, log_p)), -1.0 / static_cast<double>(rows));
}

Tensor total_loss(const Tensor& laundering, const Tensor& group, double lambda) {
    if (lambda < 0.0)
        throw ConfigError("total loss: lambda must be non-negative, got " +
                          std::to_string(lambda));
    return add(laundering, scale(group, lambda));
}

std::pair<double, double> compute_class_weights(const LabelSet& labels) {
    const auto [count0, count1] = labels.class_counts(labels.train_mask);
    if (count0 == 0 || count1 == 0)
        throw ConfigError("class weights: a class is absent from the train mask");
    const double n = static_cast<double>(count0 + count1);
    return {n / (2.0 * static_cast<double>(count0)),
            n / (2.0 * static_cast<double>(count1))};
}

Predictions predict(const DetectionMatrix& m) {
    if (m.logits.cols() != 4)
        throw std::invalid_argument("predict: expected 4 logit columns");
    const std::size_t rows = m.rows();
    const std::vector<double>& v = m.logits.values();
    Predictions out;
    out.laundering.resize(rows);
    out.group.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        out.laundering[i] = v[i * 4 + 1] > v[i * 4 + 0] ? 1 : 0;
        out.group[i] = v[i * 4 + 3] > v[i * 4 + 2] ? 1 : 0;
    }
    return out;
}

std::vector<double> laundering_scores(const DetectionMatrix& m) {
    const Tensor probs = m.laundering_probs();
    const std::size_t rows = probs.rows();
    std::vector<double> scores(rows);
    for (std::size_t i = 0; i < rows; ++i) scores[i] = probs.at(i, 1);
    return scores;
}

}  // namespace amlgraph
