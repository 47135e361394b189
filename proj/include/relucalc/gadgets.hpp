#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "relucalc/calculus.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"

// Quantitative approximation gadgets: the sawtooth family, the piecewise
// linear interpolants of x^2, approximate multiplication of two and of n
// factors, and polynomial emulation through a shared monomial tree.

namespace relucalc {

/// Accuracy bookkeeping for the multiplication gadget on [-1,1]^2:
/// n_levels is the smallest n with 4^-n <= epsilon.
struct ErrorBudget {
    double epsilon = 0.0;
    std::size_t n_levels = 0;
    double domain_radius = 1.0;

    static ErrorBudget for_mult(double eps) {
        if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("mult budget: eps must be in (0,1)");
        std::size_t n = 1;
        double p = 0.25;
        while (p > eps) {
            p *= 0.25;
            ++n;
        }
        return {eps, n, 1.0};
    }
};

/// n-fold composition of the unit hat h1(x) = relu(2x) - relu(4x-2),
/// merged into a depth-n, width-2 network. On [0,1] it is the sawtooth with
/// 2^n pieces; h_n(i 2^-n) alternates 0,1,0,...
inline ReluNetwork sawtooth_net(std::size_t n) {
    if (n < 1) throw InputError("sawtooth_net: n must be >= 1");
    std::vector<LayerParams> layers;
    layers.emplace_back(Matrix::from_rows({{2}, {4}}), std::vector<double>{0.0, -2.0});
    for (std::size_t l = 1; l < n; ++l)
        layers.emplace_back(Matrix::from_rows({{2, -2}, {4, -4}}), std::vector<double>{0.0, -2.0});
    layers.emplace_back(Matrix::from_rows({{1, -1}}), std::vector<double>{0.0});
    return ReluNetwork(1, std::move(layers));
}

/// s_n(x) = x - sum_{j<=n} h_j(x)/4^j: the piecewise linear interpolant of
/// x^2 at the dyadic nodes j 2^-n of [0,1], with sup error 2^(-2n-1).
/// Realized at depth n and width 3 by carrying the hat pair and the running
/// sum through each layer; exact (in floating point) at the dyadic nodes.
inline ReluNetwork square_net(std::size_t n) {
    if (n < 1) throw InputError("square_net: n must be >= 1");
    std::vector<LayerParams> layers;
    layers.emplace_back(Matrix::from_rows({{2}, {4}, {1}}), std::vector<double>{0.0, -2.0, 0.0});
    for (std::size_t l = 1; l < n; ++l) {
        const double q = std::ldexp(1.0, -2 * static_cast<int>(l)); // 4^-l
        layers.emplace_back(Matrix::from_rows({{2, -2, 0}, {4, -4, 0}, {-q, q, 1}}),
                            std::vector<double>{0.0, -2.0, 0.0});
    }
    const double qn = std::ldexp(1.0, -2 * static_cast<int>(n));
    layers.emplace_back(Matrix::from_rows({{-qn, qn, 1}}), std::vector<double>{0.0});
    return ReluNetwork(1, std::move(layers));
}

/// Approximate product on [-1,1]^2 with sup error <= eps, via the
/// polarization identity applied to two square interpolants:
///   s_n((relu(x+y)+relu(-x-y))/2) - s_n((relu(x-y)+relu(y-x))/2).
/// Output range is contained in [-1,1]. The subtraction joins the branches
/// through the sparse composition, so each interpolant value sits in a
/// neuron of its own before the difference is formed; when x = 0 or y = 0
/// the branches see bitwise equal inputs and the result is exactly zero.
inline ReluNetwork mult_net(double eps) {
    const ErrorBudget budget = ErrorBudget::for_mult(eps);
    std::vector<LayerParams> front_layers;
    front_layers.emplace_back(Matrix::from_rows({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}),
                              std::vector<double>(4, 0.0));
    front_layers.emplace_back(Matrix::from_rows({{0.5, 0.5, 0, 0}, {0, 0, 0.5, 0.5}}),
                              std::vector<double>(2, 0.0));
    ReluNetwork front(2, std::move(front_layers));

    std::vector<ReluNetwork> squares{square_net(budget.n_levels), square_net(budget.n_levels)};
    ReluNetwork pair = compose(parallelize(squares, false).net, front).net;
    ReluNetwork diff = ReluNetwork::affine(Matrix::from_rows({{1, -1}}), {0.0});
    return sparse_compose(diff, pair).net;
}

namespace detail {

inline ReluNetwork product_tree(std::size_t fan_in, const ReluNetwork& block) {
    if (fan_in == 1) return ReluNetwork::affine(Matrix::identity(1), {0.0});
    if (fan_in == 2) return block;
    std::vector<ReluNetwork> halves{product_tree(fan_in / 2, block),
                                    product_tree(fan_in - fan_in / 2, block)};
    return compose(block, parallelize(halves, false).net).net;
}

} // namespace detail

/// Approximate product of n factors on [-1,1]^n with sup error <= eps:
/// a binary tree of two-factor blocks at accuracy eps/n. Leafs that carry a
/// single factor pass it through identity blocks, so the exact-zero property
/// of the two-factor gadget propagates: any zero factor forces output zero.
inline ReluNetwork multn_net(std::size_t n, double eps) {
    if (n < 2) throw InputError("multn_net: n must be >= 2");
    if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("multn_net: eps must be in (0,1)");
    ReluNetwork block = mult_net(eps / static_cast<double>(n));
    return detail::product_tree(n, block);
}

struct PolynomialNet {
    ReluNetwork net;
    double measured_sup_error = 0.0;
};

/// Emulates p(x) = sum_j c_j x^j on [-1,1]. Degrees 0 and 1 are exact affine
/// layers. For degree n >= 2 all monomials x^1..x^n are grown level by level
/// in a shared binary tree (x^j = x^floor(j/2) * x^ceil(j/2), approximated at
/// accuracy eps/n) and combined in the output layer, so the total error stays
/// below eps * sum_j |c_j|. The reported error is measured against Horner
/// evaluation on a 2001-point grid.
inline PolynomialNet polynomial_net(const std::vector<double>& coeffs, double eps) {
    if (coeffs.empty()) throw InputError("polynomial_net: empty coefficient list");
    const std::size_t degree = coeffs.size() - 1;

    ReluNetwork net = [&] {
        if (degree == 0) return ReluNetwork::affine(Matrix(1, 1), {coeffs[0]});
        if (degree == 1) return ReluNetwork::affine(Matrix::from_rows({{coeffs[1]}}), {coeffs[0]});
        if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("polynomial_net: eps must be in (0,1)");

        ReluNetwork block = mult_net(eps / static_cast<double>(degree));
        ReluNetwork state = ReluNetwork::affine(Matrix::identity(1), {0.0}); // (x)
        std::size_t have = 1;
        while (have < degree) {
            const std::size_t next = std::min(2 * have, degree);
            std::vector<ReluNetwork> branches;
            branches.reserve(next);
            for (std::size_t j = 1; j <= next; ++j) {
                if (j <= have) {
                    Matrix sel(1, have);
                    sel.set(0, j - 1, 1.0);
                    branches.push_back(ReluNetwork::affine(std::move(sel), {0.0}));
                } else {
                    Matrix sel(2, have);
                    sel.set(0, j / 2 - 1, 1.0);
                    sel.set(1, (j - j / 2) - 1, 1.0);
                    branches.push_back(
                        compose(block, ReluNetwork::affine(std::move(sel), {0.0, 0.0})).net);
                }
            }
            state = compose(parallelize(branches, true).net, state).net;
            have = next;
        }
        Matrix out(1, degree);
        for (std::size_t j = 1; j <= degree; ++j) out.set(0, j - 1, coeffs[j]);
        return compose(ReluNetwork::affine(std::move(out), {coeffs[0]}), state).net;
    }();

    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -1.0 + 2.0 * i / 2000.0;
        double horner = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) horner = horner * x + coeffs[j];
        sup = std::max(sup, std::abs(horner - net.evaluate_scalar(x)));
    }
    return {std::move(net), sup};
}

} // namespace relucalc
