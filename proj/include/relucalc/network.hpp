#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relucalc/errors.hpp"
#include "relucalc/matrix.hpp"

namespace relucalc {

/// One affine map W x + b. A ReLU follows it unless it is the final layer of
/// its network.
struct LayerParams {
    Matrix weights;
    std::vector<double> bias;

    LayerParams() = default;
    LayerParams(Matrix w, std::vector<double> b) : weights(std::move(w)), bias(std::move(b)) {
        if (weights.rows() != bias.size())
            throw InputError("layer weight rows (" + std::to_string(weights.rows()) +
                             ") do not match bias length (" + std::to_string(bias.size()) + ")");
        if (!weights.all_finite()) throw InputError("layer weights contain non-finite entries");
        for (double v : bias)
            if (!std::isfinite(v)) throw InputError("layer bias contains non-finite entries");
    }

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }
};

/// Feedforward ReLU network: an ordered list of L+1 affine layers with the
/// ReLU applied componentwise after every layer except the last. Depth L = 0
/// (a bare affine map) is permitted and accepted by every construction.
/// Networks are immutable after construction and safe to share across
/// threads; evaluate is pure.
class ReluNetwork {
  public:
    ReluNetwork(std::size_t input_dim, std::vector<LayerParams> layers)
        : input_dim_(input_dim), layers_(std::move(layers)) {
        if (input_dim_ == 0) throw InputError("network input dimension must be positive");
        if (layers_.empty()) throw InputError("network needs at least one layer");
        std::size_t cur = input_dim_;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            if (layers_[l].in_dim() != cur)
                throw InputError("layer " + std::to_string(l) + " expects input dim " +
                                 std::to_string(layers_[l].in_dim()) + ", got " +
                                 std::to_string(cur));
            cur = layers_[l].out_dim();
        }
    }

    /// Depth-0 network realizing x -> W x + b.
    static ReluNetwork affine(Matrix w, std::vector<double> b) {
        std::size_t in = w.cols();
        std::vector<LayerParams> ls;
        ls.emplace_back(std::move(w), std::move(b));
        return ReluNetwork(in, std::move(ls));
    }

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return layers_.back().out_dim(); }
    std::size_t depth() const { return layers_.size() - 1; }
    std::size_t layer_count() const { return layers_.size(); }
    const LayerParams& layer(std::size_t l) const { return layers_[l]; }
    const std::vector<LayerParams>& layers() const { return layers_; }

    /// x^(L+1) with ReLU after every affine map except the last.
    std::vector<double> evaluate(std::span<const double> x) const {
        if (x.size() != input_dim_)
            throw InputError("evaluate: input has dim " + std::to_string(x.size()) +
                             ", network expects " + std::to_string(input_dim_));
        std::vector<double> cur(x.begin(), x.end());
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            std::vector<double> next = layers_[l].weights.apply(cur);
            const auto& b = layers_[l].bias;
            for (std::size_t i = 0; i < next.size(); ++i) next[i] += b[i];
            if (l + 1 < layers_.size())
                for (double& v : next) v = v > 0.0 ? v : 0.0;
            cur = std::move(next);
        }
        return cur;
    }

    double evaluate_scalar(std::span<const double> x) const {
        std::vector<double> y = evaluate(x);
        if (y.size() != 1) throw InputError("evaluate_scalar on network with output dim != 1");
        return y[0];
    }

    double evaluate_scalar(double x) const {
        const double xs[1] = {x};
        return evaluate_scalar(std::span<const double>(xs, 1));
    }

  private:
    std::size_t input_dim_;
    std::vector<LayerParams> layers_;
};

/// size = number of nonzero weight and bias entries, width = largest hidden
/// layer, depth = number of hidden layers. A depth-0 network has width 0.
struct NetworkMetrics {
    std::size_t size = 0;
    std::size_t width = 0;
    std::size_t depth = 0;

    bool operator==(const NetworkMetrics&) const = default;
};

inline NetworkMetrics metrics(const ReluNetwork& net) {
    NetworkMetrics m;
    m.depth = net.depth();
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerParams& lay = net.layer(l);
        m.size += lay.weights.nonzeros();
        for (double v : lay.bias)
            if (v != 0.0) ++m.size;
        if (l + 1 < net.layer_count()) m.width = std::max(m.width, lay.out_dim());
    }
    return m;
}

} // namespace relucalc
