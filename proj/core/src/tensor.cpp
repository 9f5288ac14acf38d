#include "amlgraph/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace amlgraph {

namespace {

using detail::TensorNode;
using NodePtr = std::shared_ptr<TensorNode>;

std::string shape_str(const TensorNode& n) {
    return "(" + std::to_string(n.rows) + "x" + std::to_string(n.cols) + ")";
}

std::string shape_str(const Tensor& t) { return shape_str(*t.node()); }

NodePtr make_node(std::size_t rows, std::size_t cols, bool tracked) {
    auto node = std::make_shared<TensorNode>();
    node->rows = rows;
    node->cols = cols;
    node->values.assign(rows * cols, 0.0);
    node->tracked = tracked;
    return node;
}

NodePtr op_node(std::size_t rows, std::size_t cols,
                std::vector<NodePtr> parents) {
    bool tracked = false;
    for (const auto& p : parents) tracked = tracked || p->tracked;
    auto node = make_node(rows, cols, tracked);
    if (tracked) node->parents = std::move(parents);
    return node;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Tensor Tensor::zeros(std::size_t rows, std::size_t cols, bool tracked) {
    return Tensor(make_node(rows, cols, tracked));
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value) {
    auto node = make_node(rows, cols, false);
    std::fill(node->values.begin(), node->values.end(), value);
    return Tensor(std::move(node));
}

Tensor Tensor::from_values(std::size_t rows, std::size_t cols,
                           std::vector<double> values, bool tracked) {
    require(values.size() == rows * cols,
            "from_values: " + std::to_string(values.size()) + " values for shape (" +
                std::to_string(rows) + "x" + std::to_string(cols) + ")");
    auto node = make_node(rows, cols, tracked);
    node->values = std::move(values);
    return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool tracked) {
    return from_values(1, 1, {value}, tracked);
}

Tensor Tensor::row(std::vector<double> values, bool tracked) {
    const std::size_t n = values.size();
    return from_values(1, n, std::move(values), tracked);
}

Tensor Tensor::glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    require(fan_in > 0 && fan_out > 0, "glorot: dimensions must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    auto node = make_node(fan_in, fan_out, true);
    for (double& v : node->values) v = rng.uniform(-bound, bound);
    return Tensor(std::move(node));
}

std::size_t Tensor::rows() const { return node_->rows; }
std::size_t Tensor::cols() const { return node_->cols; }
std::size_t Tensor::size() const { return node_->values.size(); }
bool Tensor::tracked() const { return node_->tracked; }

double Tensor::at(std::size_t r, std::size_t c) const {
    return node_->values[r * node_->cols + c];
}

double Tensor::scalar_value() const {
    require(node_->rows == 1 && node_->cols == 1,
            "scalar_value: tensor is " + shape_str(*node_));
    return node_->values[0];
}

const std::vector<double>& Tensor::values() const { return node_->values; }

std::vector<double>& Tensor::mutable_values() { return node_->values; }

const std::vector<double>& Tensor::grad() {
    node_->ensure_grad();
    return node_->grad;
}

void Tensor::zero_grad() {
    node_->grad.assign(node_->values.size(), 0.0);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require(a.cols() == b.rows(),
            "matmul: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    auto node = op_node(m, n, {a.node_ptr(), b.node_ptr()});
    {
        const double* av = a.values().data();
        const double* bv = b.values().data();
        double* cv = node->values.data();
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t p = 0; p < k; ++p) {
                const double aip = av[i * k + p];
                const double* brow = bv + p * n;
                double* crow = cv + i * n;
                for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
            }
        }
    }
    if (node->tracked) {
        auto pa = a.node_ptr(), pb = b.node_ptr();
        node->backprop = [pa, pb, m, k, n](TensorNode& self) {
            const double* g = self.grad.data();
            if (pa->tracked) {
                pa->ensure_grad();
                double* da = pa->grad.data();
                const double* bv = pb->values.data();
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t p = 0; p < k; ++p) {
                        double acc = 0.0;
                        const double* grow = g + i * n;
                        const double* brow = bv + p * n;
                        for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
                        da[i * k + p] += acc;
                    }
                }
            }
            if (pb->tracked) {
                pb->ensure_grad();
                double* db = pb->grad.data();
                const double* av = pa->values.data();
                for (std::size_t i = 0; i < m; ++i) {
                    const double* grow = g + i * n;
                    for (std::size_t p = 0; p < k; ++p) {
                        const double aip = av[i * k + p];
                        double* drow = db + p * n;
                        for (std::size_t j = 0; j < n; ++j) drow[j] += aip * grow[j];
                    }
                }
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor add(const Tensor& a, const Tensor& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(),
            "add: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr(), b.node_ptr()});
    const auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) node->values[i] = av[i] + bv[i];
    if (node->tracked) {
        auto pa = a.node_ptr(), pb = b.node_ptr();
        node->backprop = [pa, pb](TensorNode& self) {
            for (const auto& p : {pa, pb}) {
                if (!p->tracked) continue;
                p->ensure_grad();
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    p->grad[i] += self.grad[i];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor add_row_broadcast(const Tensor& m, const Tensor& row) {
    require(row.rows() == 1 && row.cols() == m.cols(),
            "add_row_broadcast: shape mismatch " + shape_str(m) + " vs " + shape_str(row));
    const std::size_t r = m.rows(), c = m.cols();
    auto node = op_node(r, c, {m.node_ptr(), row.node_ptr()});
    const auto& mv = m.values();
    const auto& rv = row.values();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            node->values[i * c + j] = mv[i * c + j] + rv[j];
    if (node->tracked) {
        auto pm = m.node_ptr(), pr = row.node_ptr();
        node->backprop = [pm, pr, r, c](TensorNode& self) {
            if (pm->tracked) {
                pm->ensure_grad();
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    pm->grad[i] += self.grad[i];
            }
            if (pr->tracked) {
                pr->ensure_grad();
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < c; ++j)
                        pr->grad[j] += self.grad[i * c + j];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(),
            "mul: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr(), b.node_ptr()});
    const auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) node->values[i] = av[i] * bv[i];
    if (node->tracked) {
        auto pa = a.node_ptr(), pb = b.node_ptr();
        node->backprop = [pa, pb](TensorNode& self) {
            if (pa->tracked) {
                pa->ensure_grad();
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    pa->grad[i] += self.grad[i] * pb->values[i];
            }
            if (pb->tracked) {
                pb->ensure_grad();
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    pb->grad[i] += self.grad[i] * pa->values[i];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor scale(const Tensor& a, double c) {
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < av.size(); ++i) node->values[i] = av[i] * c;
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa, c](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                pa->grad[i] += self.grad[i] * c;
        };
    }
    return Tensor(std::move(node));
}

Tensor scale_by(const Tensor& a, const Tensor& s) {
    require(s.rows() == 1 && s.cols() == 1,
            "scale_by: scalar must be (1x1), got " + shape_str(s));
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr(), s.node_ptr()});
    const double sv = s.values()[0];
    const auto& av = a.values();
    for (std::size_t i = 0; i < av.size(); ++i) node->values[i] = av[i] * sv;
    if (node->tracked) {
        auto pa = a.node_ptr(), ps = s.node_ptr();
        node->backprop = [pa, ps](TensorNode& self) {
            if (pa->tracked) {
                pa->ensure_grad();
                const double sv = ps->values[0];
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    pa->grad[i] += self.grad[i] * sv;
            }
            if (ps->tracked) {
                ps->ensure_grad();
                double acc = 0.0;
                for (std::size_t i = 0; i < self.grad.size(); ++i)
                    acc += self.grad[i] * pa->values[i];
                ps->grad[0] += acc;
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor concat_cols(std::span<const Tensor> parts) {
    require(!parts.empty(), "concat_cols: no inputs");
    const std::size_t r = parts[0].rows();
    std::size_t total_cols = 0;
    std::vector<NodePtr> parents;
    parents.reserve(parts.size());
    for (const auto& p : parts) {
        require(p.rows() == r, "concat_cols: row mismatch " + shape_str(parts[0]) +
                                   " vs " + shape_str(p));
        total_cols += p.cols();
        parents.push_back(p.node_ptr());
    }
    auto node = op_node(r, total_cols, parents);
    std::vector<std::size_t> offsets(parts.size());
    {
        std::size_t off = 0;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            offsets[k] = off;
            const std::size_t pc = parts[k].cols();
            const auto& pv = parts[k].values();
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < pc; ++j)
                    node->values[i * total_cols + off + j] = pv[i * pc + j];
            off += pc;
        }
    }
    if (node->tracked) {
        node->backprop = [parents, offsets, r, total_cols](TensorNode& self) {
            for (std::size_t k = 0; k < parents.size(); ++k) {
                const auto& p = parents[k];
                if (!p->tracked) continue;
                p->ensure_grad();
                const std::size_t pc = p->cols;
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < pc; ++j)
                        p->grad[i * pc + j] +=
                            self.grad[i * total_cols + offsets[k] + j];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
    require(begin < end && end <= a.cols(),
            "slice_cols: range [" + std::to_string(begin) + "," + std::to_string(end) +
                ") out of " + shape_str(a));
    const std::size_t r = a.rows(), c = a.cols(), w = end - begin;
    auto node = op_node(r, w, {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < w; ++j)
            node->values[i * w + j] = av[i * c + begin + j];
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa, begin, r, c, w](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    pa->grad[i * c + begin + j] += self.grad[i * w + j];
        };
    }
    return Tensor(std::move(node));
}

Tensor relu(const Tensor& a) {
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < av.size(); ++i)
        node->values[i] = av[i] > 0.0 ? av[i] : 0.0;
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                if (pa->values[i] > 0.0) pa->grad[i] += self.grad[i];
        };
    }
    return Tensor(std::move(node));
}

Tensor softmax_rows(const Tensor& a) {
    const std::size_t r = a.rows(), c = a.cols();
    auto node = op_node(r, c, {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < r; ++i) {
        const double* in = av.data() + i * c;
        double* out = node->values.data() + i * c;
        double mx = in[0];
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, in[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            out[j] = std::exp(in[j] - mx);
            sum += out[j];
        }
        for (std::size_t j = 0; j < c; ++j) out[j] /= sum;
    }
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa, r, c](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < r; ++i) {
                const double* y = self.values.data() + i * c;
                const double* g = self.grad.data() + i * c;
                double dot = 0.0;
                for (std::size_t j = 0; j < c; ++j) dot += g[j] * y[j];
                double* da = pa->grad.data() + i * c;
                for (std::size_t j = 0; j < c; ++j) da[j] += y[j] * (g[j] - dot);
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor log_elem(const Tensor& a) {
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < av.size(); ++i) node->values[i] = std::log(av[i]);
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                pa->grad[i] += self.grad[i] / pa->values[i];
        };
    }
    return Tensor(std::move(node));
}

Tensor clamp_min(const Tensor& a, double floor) {
    auto node = op_node(a.rows(), a.cols(), {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < av.size(); ++i)
        node->values[i] = av[i] > floor ? av[i] : floor;
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa, floor](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                if (pa->values[i] > floor) pa->grad[i] += self.grad[i];
        };
    }
    return Tensor(std::move(node));
}

Tensor gather_rows(const Tensor& a, std::span<const std::uint32_t> index) {
    const std::size_t c = a.cols(), n = index.size();
    for (std::uint32_t ix : index)
        require(ix < a.rows(), "gather_rows: index " + std::to_string(ix) +
                                   " out of " + shape_str(a));
    auto node = op_node(n, c, {a.node_ptr()});
    const auto& av = a.values();
    for (std::size_t i = 0; i < n; ++i)
        std::copy_n(av.data() + std::size_t{index[i]} * c, c,
                    node->values.data() + i * c);
    if (node->tracked) {
        auto pa = a.node_ptr();
        std::vector<std::uint32_t> idx(index.begin(), index.end());
        node->backprop = [pa, idx = std::move(idx), c](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                double* dst = pa->grad.data() + std::size_t{idx[i]} * c;
                const double* src = self.grad.data() + i * c;
                for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor scatter_mean_rows(const Tensor& a, std::span<const std::uint32_t> index,
                         std::size_t out_rows) {
    require(index.size() == a.rows(),
            "scatter_mean_rows: " + std::to_string(index.size()) + " indices for " +
                shape_str(a));
    const std::size_t c = a.cols(), n = a.rows();
    for (std::uint32_t ix : index)
        require(ix < out_rows, "scatter_mean_rows: index " + std::to_string(ix) +
                                   " out of " + std::to_string(out_rows) + " slots");
    auto node = op_node(out_rows, c, {a.node_ptr()});
    std::vector<double> counts(out_rows, 0.0);
    const auto& av = a.values();
    for (std::size_t i = 0; i < n; ++i) {
        counts[index[i]] += 1.0;
        double* dst = node->values.data() + std::size_t{index[i]} * c;
        const double* src = av.data() + i * c;
        for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
    }
    for (std::size_t k = 0; k < out_rows; ++k) {
        if (counts[k] == 0.0) continue;
        double* dst = node->values.data() + k * c;
        for (std::size_t j = 0; j < c; ++j) dst[j] /= counts[k];
    }
    if (node->tracked) {
        auto pa = a.node_ptr();
        std::vector<std::uint32_t> idx(index.begin(), index.end());
        node->backprop = [pa, idx = std::move(idx), counts = std::move(counts),
                          c](TensorNode& self) {
            pa->ensure_grad();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const double inv = 1.0 / counts[idx[i]];
                const double* src = self.grad.data() + std::size_t{idx[i]} * c;
                double* dst = pa->grad.data() + i * c;
                for (std::size_t j = 0; j < c; ++j) dst[j] += src[j] * inv;
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor mean_all(const Tensor& a) {
    require(a.size() > 0, "mean_all: empty tensor");
    auto node = op_node(1, 1, {a.node_ptr()});
    double acc = 0.0;
    for (double v : a.values()) acc += v;
    node->values[0] = acc / static_cast<double>(a.size());
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa](TensorNode& self) {
            pa->ensure_grad();
            const double g = self.grad[0] / static_cast<double>(pa->values.size());
            for (double& d : pa->grad) d += g;
        };
    }
    return Tensor(std::move(node));
}

Tensor sum_all(const Tensor& a) {
    auto node = op_node(1, 1, {a.node_ptr()});
    double acc = 0.0;
    for (double v : a.values()) acc += v;
    node->values[0] = acc;
    if (node->tracked) {
        auto pa = a.node_ptr();
        node->backprop = [pa](TensorNode& self) {
            pa->ensure_grad();
            const double g = self.grad[0];
            for (double& d : pa->grad) d += g;
        };
    }
    return Tensor(std::move(node));
}

void backward(const Tensor& loss) {
    require(loss.defined() && loss.rows() == 1 && loss.cols() == 1,
            "backward: loss must be a (1x1) scalar");
    TensorNode* root = loss.node();
    if (!root->tracked) return;

    // Reverse DFS post-order: every consumer runs before its inputs.
    std::vector<TensorNode*> order;
    std::unordered_set<TensorNode*> visited;
    struct Frame {
        TensorNode* node;
        std::size_t next;
    };
    std::vector<Frame> stack{{root, 0}};
    visited.insert(root);
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < f.node->parents.size()) {
            TensorNode* p = f.node->parents[f.next++].get();
            if (p->tracked && visited.insert(p).second) stack.push_back({p, 0});
        } else {
            order.push_back(f.node);
            stack.pop_back();
        }
    }

    root->ensure_grad();
    root->grad[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        TensorNode* n = *it;
        if (n->backprop) {
            n->ensure_grad();
            n->backprop(*n);
        }
    }
}

}  // namespace amlgraph
