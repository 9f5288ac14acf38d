#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "amlgraph/rng.hpp"

namespace amlgraph {

namespace detail {

struct TensorNode {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<double> grad;  // empty until first accumulation
    bool tracked = false;
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(TensorNode&)> backprop;

    void ensure_grad() {
        if (grad.empty()) grad.assign(values.size(), 0.0);
    }
};

}  // namespace detail

/// Dense row-major matrix of doubles with reverse-mode autodiff. A Tensor is
/// a handle: copies share the underlying node, so parameter updates through
/// one handle are visible through all of them. Ops record parent links and a
/// pull-back closure whenever an input is tracked; backward() replays them
/// in reverse topological order.
///
/// Values are treated as immutable once an op has consumed them; only
/// optimizers (and tests) write through mutable_values() between steps.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::size_t rows, std::size_t cols, bool tracked = false);
    static Tensor full(std::size_t rows, std::size_t cols, double value);
    static Tensor from_values(std::size_t rows, std::size_t cols,
                              std::vector<double> values, bool tracked = false);
    static Tensor scalar(double value, bool tracked = false);
    /// 1 x n row vector.
    static Tensor row(std::vector<double> values, bool tracked = false);

    /// Glorot-style uniform init in +-sqrt(6 / (fan_in + fan_out)),
    /// shape fan_in x fan_out, tracked.
    static Tensor glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng);

    bool defined() const { return node_ != nullptr; }
    std::size_t rows() const;
    std::size_t cols() const;
    std::size_t size() const;
    bool tracked() const;

    double at(std::size_t r, std::size_t c) const;
    /// Value of a 1x1 tensor.
    double scalar_value() const;
    const std::vector<double>& values() const;
    std::vector<double>& mutable_values();
    /// Accumulated gradient; all-zero until backward() reaches this node.
    const std::vector<double>& grad();
    void zero_grad();

    detail::TensorNode* node() const { return node_.get(); }
    const std::shared_ptr<detail::TensorNode>& node_ptr() const { return node_; }

    explicit Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}

private:
    std::shared_ptr<detail::TensorNode> node_;
};

// Op family. Every function validates shapes and, when an input is tracked,
// records the pull-back for reverse-mode gradients.

/// (m x k) . (k x n) -> m x n
Tensor matmul(const Tensor& a, const Tensor& b);
/// Elementwise sum of same-shape tensors.
Tensor add(const Tensor& a, const Tensor& b);
/// m x n plus a 1 x n row vector broadcast over rows.
Tensor add_row_broadcast(const Tensor& m, const Tensor& row);
/// Elementwise product of same-shape tensors.
Tensor mul(const Tensor& a, const Tensor& b);
/// Multiply by a compile-time constant.
Tensor scale(const Tensor& a, double c);
/// Multiply by a 1x1 tensor (tracked scalars such as the GIN epsilon).
Tensor scale_by(const Tensor& a, const Tensor& s);
/// Column-wise concatenation [p0 || p1 || ...]; all parts share a row count.
Tensor concat_cols(std::span<const Tensor> parts);
/// Columns [begin, end) of a.
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
Tensor relu(const Tensor& a);
/// Row-wise softmax.
Tensor softmax_rows(const Tensor& a);
/// Elementwise natural log.
Tensor log_elem(const Tensor& a);
/// max(a, floor) elementwise; gradient is zero where the floor is active.
Tensor clamp_min(const Tensor& a, double floor);
/// Row i of the result is row index[i] of a.
Tensor gather_rows(const Tensor& a, std::span<const std::uint32_t> index);
/// Row k of the result is the mean of rows i with index[i] == k; slots that
/// receive no rows stay zero.
Tensor scatter_mean_rows(const Tensor& a, std::span<const std::uint32_t> index,
                         std::size_t out_rows);
/// Mean over all entries -> 1x1.
Tensor mean_all(const Tensor& a);
/// Sum over all entries -> 1x1.
Tensor sum_all(const Tensor& a);

/// Reverse-mode sweep from a scalar loss. Parameters not reachable from the
/// loss keep their (zero) gradient.
void backward(const Tensor& loss);

}  // namespace amlgraph
