#pragma once

#include <cstddef>
#include <vector>

#include "relucalc/calculus.hpp"
#include "relucalc/certificate.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"

// Exact minimum and maximum networks. Two inputs are handled by a single
// depth-1, size-7 block; n inputs by a binary tree of those blocks.

namespace relucalc {

/// min{x,y} = relu(y) - relu(-y) - relu(y-x). Depth 1, width 3, size 7.
inline ReluNetwork min2_net() {
    std::vector<LayerParams> layers;
    layers.emplace_back(Matrix::from_rows({{0, 1}, {0, -1}, {-1, 1}}), std::vector<double>(3, 0.0));
    layers.emplace_back(Matrix::from_rows({{1, -1, -1}}), std::vector<double>(1, 0.0));
    return ReluNetwork(2, std::move(layers));
}

/// max{x,y} = relu(y) - relu(-y) + relu(x-y). Depth 1, width 3, size 7.
inline ReluNetwork max2_net() {
    std::vector<LayerParams> layers;
    layers.emplace_back(Matrix::from_rows({{0, 1}, {0, -1}, {1, -1}}), std::vector<double>(3, 0.0));
    layers.emplace_back(Matrix::from_rows({{1, -1, 1}}), std::vector<double>(1, 0.0));
    return ReluNetwork(2, std::move(layers));
}

namespace detail {
inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}

/// Exact minimum of n scalars via a binary tree of min2 blocks. n = 1 is the
/// depth-0 scalar identity. Certified: size <= 16n, width <= 3n,
/// depth = ceil(log2 n).
inline CertifiedNet minn_net(std::size_t n) {
    if (n < 1) throw InputError("minn_net: n must be >= 1");
    if (n == 1) {
        ReluNetwork net = ReluNetwork::affine(Matrix::identity(1), {0.0});
        return {net, certify(net, 16, 3, 0, "minn_net")};
    }
    ReluNetwork net = [&] {
        if (n == 2) return min2_net();
        const std::size_t lo = n / 2, hi = n - n / 2;
        ReluNetwork left = minn_net(lo).net;
        ReluNetwork right = minn_net(hi).net;
        // For n = 2^k + 1 the halves differ in depth by one; the shallow
        // half gets an identity in front, as in the tree construction.
        if (detail::is_pow2(n - 1)) left = compose(identity_net(1, 1).net, left).net;
        std::vector<ReluNetwork> halves{std::move(left), std::move(right)};
        return compose(min2_net(), parallelize(halves, false).net).net;
    }();
    BoundCertificate cert = certify(net, 16 * n, 3 * n, ceil_log2(n), "minn_net");
    return {std::move(net), cert};
}

/// max_n(x) = -min_n(-x); same certified bounds as minn_net.
inline CertifiedNet maxn_net(std::size_t n) {
    if (n < 1) throw InputError("maxn_net: n must be >= 1");
    ReluNetwork negate_in = ReluNetwork::affine(Matrix::identity(n).scaled(-1.0),
                                                std::vector<double>(n, 0.0));
    ReluNetwork negate_out = ReluNetwork::affine(Matrix::from_rows({{-1}}), {0.0});
    ReluNetwork net = compose(negate_out, compose(minn_net(n).net, negate_in).net).net;
    BoundCertificate cert = certify(net, 16 * n, 3 * n, ceil_log2(n), "maxn_net");
    return {std::move(net), cert};
}

} // namespace relucalc
