#pragma once

#include <cstddef>
#include <vector>

#include "amlgraph/tensor.hpp"

namespace amlgraph {

struct AdamConfig {
    double lr = 0.006;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moment estimates mirror parameter shapes; the
/// step counter is strictly increasing. Throws NumericError on a non-finite
/// gradient (fail fast rather than training on garbage).
class AdamOptimizer {
public:
    explicit AdamOptimizer(std::vector<Tensor> params, AdamConfig config = {});

    /// One update over all parameters from their accumulated gradients.
    void step();
    void zero_grad();

    std::size_t step_count() const { return step_; }
    const AdamConfig& config() const { return config_; }

private:
    std::vector<Tensor> params_;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
    std::size_t step_ = 0;
    AdamConfig config_;
};

}  // namespace amlgraph
