#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relucalc/certificate.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/matrix.hpp"
#include "relucalc/network.hpp"

// The four basic constructions every other builder is assembled from:
// exact identity, the two composition flavors, parallelization (plain and
// with shared inputs), and linear combinations. Each returns the network
// together with a certificate of its size/width/depth bounds.

namespace relucalc {

/// Exact identity on R^d as a depth-L network, via x = relu(x) - relu(-x).
/// Certified: size = 2d(L+1), width = 2d, depth = L.
inline CertifiedNet identity_net(std::size_t d, std::size_t depth) {
    if (d < 1) throw InputError("identity_net: dimension must be >= 1");
    if (depth < 1) throw InputError("identity_net: depth must be >= 1");
    Matrix eye = Matrix::identity(d);
    std::vector<LayerParams> layers;
    layers.emplace_back(Matrix::vstack(eye, eye.scaled(-1.0)), std::vector<double>(2 * d, 0.0));
    for (std::size_t l = 1; l < depth; ++l)
        layers.emplace_back(Matrix::identity(2 * d), std::vector<double>(2 * d, 0.0));
    layers.emplace_back(Matrix::hstack(eye, eye.scaled(-1.0)), std::vector<double>(d, 0.0));
    ReluNetwork net(d, std::move(layers));
    BoundCertificate cert = certify(net, 2 * d * (depth + 1), 2 * d, depth, "identity_net");
    return {std::move(net), cert};
}

/// Composition second(first(x)) that merges the interface layers:
/// the joint layer carries W2^(0) W1^(L1) and W2^(0) b1^(L1) + b2^(0).
/// Certified: depth = L1+L2, width <= max(w1, w2),
/// size <= size1 + size2 + (d + 1) d', where d is the input dim of first's
/// final layer and d' the output dim of second's initial layer.
inline CertifiedNet compose(const ReluNetwork& second, const ReluNetwork& first) {
    if (first.output_dim() != second.input_dim())
        throw InputError("compose: output dim " + std::to_string(first.output_dim()) +
                         " does not match input dim " + std::to_string(second.input_dim()));
    const LayerParams& last1 = first.layer(first.depth());
    const LayerParams& first2 = second.layer(0);

    std::vector<LayerParams> layers;
    for (std::size_t l = 0; l < first.depth(); ++l) layers.push_back(first.layer(l));
    Matrix w = first2.weights.multiply(last1.weights);
    std::vector<double> b = first2.weights.apply(last1.bias);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += first2.bias[i];
    layers.emplace_back(std::move(w), std::move(b));
    for (std::size_t l = 1; l < second.layer_count(); ++l) layers.push_back(second.layer(l));

    ReluNetwork net(first.input_dim(), std::move(layers));
    NetworkMetrics m1 = metrics(first), m2 = metrics(second);
    std::size_t size_bound = m1.size + m2.size + (last1.in_dim() + 1) * first2.out_dim();
    BoundCertificate cert = certify(net, size_bound, std::max(m1.width, m2.width),
                                    m1.depth + m2.depth, "compose");
    return {std::move(net), cert};
}

/// Composition with a depth-1 identity spliced in at the interface. Keeps the
/// operands' layers sparse instead of multiplying them out.
/// Certified: depth = L1+L2+1, size <= 2(size1+size2),
/// width <= 2 max(w1, w2, interface dim) -- the interface term covers the
/// spliced identity when both operands are shallower than it.
inline CertifiedNet sparse_compose(const ReluNetwork& second, const ReluNetwork& first) {
    if (first.output_dim() != second.input_dim())
        throw InputError("sparse_compose: output dim " + std::to_string(first.output_dim()) +
                         " does not match input dim " + std::to_string(second.input_dim()));
    const std::size_t mid = first.output_dim();
    ReluNetwork net =
        compose(second, compose(identity_net(mid, 1).net, first).net).net;
    NetworkMetrics m1 = metrics(first), m2 = metrics(second);
    BoundCertificate cert =
        certify(net, 2 * (m1.size + m2.size), 2 * std::max({m1.width, m2.width, mid}),
                m1.depth + m2.depth + 1, "sparse_compose");
    return {std::move(net), cert};
}

namespace detail {

// Equalizes depths by prepending identity networks at the output side.
inline std::vector<ReluNetwork> pad_to_common_depth(std::span<const ReluNetwork> nets,
                                                    std::size_t target_depth) {
    std::vector<ReluNetwork> out;
    out.reserve(nets.size());
    for (const ReluNetwork& n : nets) {
        if (n.depth() == target_depth)
            out.push_back(n);
        else
            out.push_back(compose(identity_net(n.output_dim(), target_depth - n.depth()).net, n).net);
    }
    return out;
}

inline std::size_t max_depth(std::span<const ReluNetwork> nets) {
    std::size_t d = 0;
    for (const ReluNetwork& n : nets) d = std::max(d, n.depth());
    return d;
}

// Paper-style size bound: twice the operand sizes plus the identity padding.
inline std::size_t parallel_size_bound(std::span<const ReluNetwork> nets, std::size_t depth) {
    std::size_t s = 0;
    for (const ReluNetwork& n : nets)
        s += 2 * metrics(n).size + 2 * (depth - n.depth()) * n.output_dim();
    return s;
}

// Width bound evaluated on the identity-extended operands, so that it also
// holds when a padded operand's output is wider than its hidden layers.
inline std::size_t parallel_width_bound(std::span<const ReluNetwork> padded) {
    std::size_t w = 0;
    for (const ReluNetwork& n : padded) w += 2 * metrics(n).width;
    return w;
}

inline LayerParams stack_layer(std::span<const ReluNetwork> padded, std::size_t l,
                               bool shared_first) {
    std::vector<Matrix> blocks;
    std::vector<double> bias;
    blocks.reserve(padded.size());
    for (const ReluNetwork& n : padded) {
        blocks.push_back(n.layer(l).weights);
        bias.insert(bias.end(), n.layer(l).bias.begin(), n.layer(l).bias.end());
    }
    Matrix w;
    if (shared_first) {
        w = blocks.front();
        for (std::size_t j = 1; j < blocks.size(); ++j) w = Matrix::vstack(w, blocks[j]);
    } else {
        w = Matrix::block_diag(blocks);
    }
    return LayerParams(std::move(w), std::move(bias));
}

} // namespace detail

/// (Phi_1,...,Phi_m): block-diagonal parallel evaluation. With shared inputs
/// all operands read the same x and the first layer stacks instead of
/// block-diagonalizing. Shorter operands are padded with identity networks at
/// the output side. Certified: depth = max depth, size <= 2 sum size_j +
/// 2 sum (Lmax-Lj) dout_j, width <= 2 sum width(padded_j).
inline CertifiedNet parallelize(std::span<const ReluNetwork> nets, bool shared_inputs) {
    if (nets.empty()) throw InputError("parallelize: empty operand list");
    if (shared_inputs)
        for (const ReluNetwork& n : nets)
            if (n.input_dim() != nets.front().input_dim())
                throw InputError("parallelize: shared inputs require equal input dims");

    const std::size_t depth = detail::max_depth(nets);
    std::vector<ReluNetwork> padded = detail::pad_to_common_depth(nets, depth);

    std::size_t in_dim = 0;
    if (shared_inputs) {
        in_dim = nets.front().input_dim();
    } else {
        for (const ReluNetwork& n : nets) in_dim += n.input_dim();
    }
    std::vector<LayerParams> layers;
    for (std::size_t l = 0; l <= depth; ++l)
        layers.push_back(detail::stack_layer(padded, l, shared_inputs && l == 0));

    ReluNetwork net(in_dim, std::move(layers));
    BoundCertificate cert =
        certify(net, detail::parallel_size_bound(nets, depth), detail::parallel_width_bound(padded),
                depth, "parallelize");
    return {std::move(net), cert};
}

inline CertifiedNet parallelize(const std::vector<ReluNetwork>& nets, bool shared_inputs) {
    return parallelize(std::span<const ReluNetwork>(nets), shared_inputs);
}

/// sum_j alpha_j Phi_j for operands with a common output dim. Identical to
/// parallelize except for the final layer, which concatenates alpha_j W_j and
/// sums the biases. Certified with the same bounds as parallelize.
inline CertifiedNet linear_combination(std::span<const ReluNetwork> nets,
                                       std::span<const double> coeffs, bool shared_inputs) {
    if (nets.empty()) throw InputError("linear_combination: empty operand list");
    if (nets.size() != coeffs.size())
        throw InputError("linear_combination: operand and coefficient counts differ");
    for (const ReluNetwork& n : nets) {
        if (n.output_dim() != nets.front().output_dim())
            throw InputError("linear_combination: output dims differ");
        if (shared_inputs && n.input_dim() != nets.front().input_dim())
            throw InputError("linear_combination: shared inputs require equal input dims");
    }

    const std::size_t depth = detail::max_depth(nets);
    std::vector<ReluNetwork> padded = detail::pad_to_common_depth(nets, depth);
    const std::size_t out_dim = nets.front().output_dim();

    std::size_t in_dim = 0;
    if (shared_inputs) {
        in_dim = nets.front().input_dim();
    } else {
        for (const ReluNetwork& n : nets) in_dim += n.input_dim();
    }

    std::vector<LayerParams> layers;
    for (std::size_t l = 0; l + 1 <= depth; ++l)
        layers.push_back(detail::stack_layer(padded, l, shared_inputs && l == 0));

    // Final layer: (alpha_1 W_1 ... alpha_m W_m), bias sum alpha_j b_j.
    std::vector<double> bias(out_dim, 0.0);
    Matrix w;
    for (std::size_t j = 0; j < padded.size(); ++j) {
        const LayerParams& lay = padded[j].layer(depth);
        Matrix scaled = lay.weights.scaled(coeffs[j]);
        if (depth == 0 && shared_inputs) {
            // Single shared affine layer: the weight matrices add up.
            if (j == 0) {
                w = std::move(scaled);
            } else {
                Matrix sum(w.rows(), w.cols());
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    std::vector<double> r = w.row_dense(i);
                    for (const Matrix::Entry& e : scaled.row_entries(i)) r[e.col] += e.val;
                    for (std::size_t c = 0; c < r.size(); ++c) sum.set(i, c, r[c]);
                }
                w = std::move(sum);
            }
        } else {
            w = (j == 0) ? std::move(scaled) : Matrix::hstack(w, scaled);
        }
        for (std::size_t i = 0; i < out_dim; ++i) bias[i] += coeffs[j] * lay.bias[i];
    }
    layers.emplace_back(std::move(w), std::move(bias));

    ReluNetwork net(in_dim, std::move(layers));
    BoundCertificate cert =
        certify(net, detail::parallel_size_bound(nets, depth), detail::parallel_width_bound(padded),
                depth, "linear_combination");
    return {std::move(net), cert};
}

inline CertifiedNet linear_combination(const std::vector<ReluNetwork>& nets,
                                       const std::vector<double>& coeffs, bool shared_inputs) {
    return linear_combination(std::span<const ReluNetwork>(nets),
                              std::span<const double>(coeffs), shared_inputs);
}

} // namespace relucalc
