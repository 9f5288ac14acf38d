#include "amlgraph/optimizer.hpp"

#include <cmath>
#include <string>

#include "amlgraph/errors.hpp"

namespace amlgraph {

AdamOptimizer::AdamOptimizer(std::vector<Tensor> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
    first_moment_.reserve(params_.size());
    second_moment_.reserve(params_.size());
    for (const auto& p : params_) {
        first_moment_.emplace_back(p.size(), 0.0);
        second_moment_.emplace_back(p.size(), 0.0);
    }
}

void AdamOptimizer::step() {
    ++step_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        auto& values = params_[k].mutable_values();
        const auto& grad = params_[k].grad();
        auto& m = first_moment_[k];
        auto& v = second_moment_[k];
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double g = grad[i];
            if (!std::isfinite(g)) {
                throw NumericError("adam: non-finite gradient in parameter " +
                                   std::to_string(k) + " at element " +
                                   std::to_string(i));
            }
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            values[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

void AdamOptimizer::zero_grad() {
    for (auto& p : params_) p.zero_grad();
}

}  // namespace amlgraph
