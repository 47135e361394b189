#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "relucalc/calculus.hpp"
#include "relucalc/gadgets.hpp"
#include "relucalc/minmax.hpp"
#include "relucalc/simplicial.hpp"

// Quantitative approximators built on the mesh compiler and the product
// gadgets: the nodal interpolant on a uniform simplicial grid for Hoelder
// targets, the partition-of-unity construction for C^{k,s} targets, and the
// optimal Lipschitz reconstruction network.

namespace relucalc {

namespace detail {

// Walks the multi-indices of {lo..hi}^d in lexicographic order.
template <typename F>
void for_each_grid_index(std::size_t d, long lo, long hi, F&& body) {
    std::vector<long> idx(d, lo);
    while (true) {
        body(std::span<const long>(idx));
        std::size_t axis = 0;
        while (axis < d) {
            if (++idx[axis] <= hi) break;
            idx[axis] = lo;
            ++axis;
        }
        if (axis == d) return;
    }
}

} // namespace detail

/// Uniform grid over the integer range {lo..hi}^d with spacing h, each cell
/// split into d! simplices along coordinate orderings (the standard Kuhn
/// split). Nodal values come from the callback, which sees the integer
/// multi-index.
inline Triangulation kuhn_mesh(std::size_t d, long lo, long hi, double h,
                               const std::function<double(std::span<const long>)>& value) {
    if (d == 0) throw InputError("kuhn_mesh: dimension must be positive");
    if (hi <= lo) throw InputError("kuhn_mesh: empty index range");

    Triangulation mesh;
    mesh.dim = d;
    const std::size_t per_axis = static_cast<std::size_t>(hi - lo) + 1;

    std::vector<std::size_t> stride(d, 1);
    for (std::size_t c = 1; c < d; ++c) stride[c] = stride[c - 1] * per_axis;
    auto flat = [&](std::span<const long> idx) {
        std::size_t f = 0;
        for (std::size_t c = 0; c < d; ++c)
            f += static_cast<std::size_t>(idx[c] - lo) * stride[c];
        return f;
    };

    mesh.vertices.resize(stride[d - 1] * per_axis);
    mesh.values.resize(mesh.vertices.size());
    detail::for_each_grid_index(d, lo, hi, [&](std::span<const long> idx) {
        std::vector<double> v(d);
        for (std::size_t c = 0; c < d; ++c) v[c] = idx[c] * h;
        mesh.vertices[flat(idx)] = std::move(v);
        mesh.values[flat(idx)] = value(idx);
    });

    std::vector<std::size_t> axes(d);
    std::iota(axes.begin(), axes.end(), 0);
    detail::for_each_grid_index(d, lo, hi - 1, [&](std::span<const long> base) {
        std::vector<std::size_t> perm = axes;
        do {
            std::vector<std::size_t> simplex;
            std::vector<long> cur(base.begin(), base.end());
            simplex.push_back(flat(cur));
            for (std::size_t j = 0; j < d; ++j) {
                ++cur[perm[j]];
                simplex.push_back(flat(cur));
            }
            mesh.simplices.push_back(std::move(simplex));
        } while (std::next_permutation(perm.begin(), perm.end()));
    });
    return mesh;
}

struct HolderTarget {
    std::function<double(std::span<const double>)> f;
    double exponent = 1.0;   // s in (0,1]
    double norm_bound = 1.0; // user-certified Hoelder norm bound
};

struct ErrorReport {
    double measured_sup_error = 0.0;
    double error_bound = 0.0;
    std::size_t sample_count = 0;
};

struct HolderResult {
    CertifiedNet compiled;
    ErrorReport report;
    std::size_t elements = 0;
};

namespace detail {

template <typename F>
void for_each_grid_point(std::size_t d, double lo, double hi, std::size_t per_axis, F&& body) {
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
        for (std::size_t c = 0; c < d; ++c)
            x[c] = lo + (hi - lo) * (per_axis == 1 ? 0.5 : idx[c] / double(per_axis - 1));
        body(std::span<const double>(x));
        std::size_t axis = 0;
        while (axis < d) {
            if (++idx[axis] < per_axis) break;
            idx[axis] = 0;
            ++axis;
        }
        if (axis == d) return;
    }
}

inline std::size_t default_grid(std::size_t d) { return d == 1 ? 2001 : (d == 2 ? 61 : 9); }

} // namespace detail

/// Interpolates the target at the nodes nu/M of a uniform Kuhn mesh padded by
/// one layer of zero-valued nodes, and compiles the result. The report pairs
/// the sup error measured on the interior box [1/M, 1-1/M]^d with the bound
/// 2 d^{s/2} |f| M^{-s}.
inline HolderResult holder_interpolant(const HolderTarget& target, std::size_t d, std::size_t M,
                                       std::size_t grid_per_axis = 0) {
    if (M < 2) throw InputError("holder_interpolant: M must be >= 2");
    if (!(target.exponent > 0.0) || target.exponent > 1.0)
        throw InputError("holder_interpolant: exponent must lie in (0,1]");
    if (!(target.norm_bound > 0.0)) throw InputError("holder_interpolant: norm bound must be positive");

    const double h = 1.0 / static_cast<double>(M);
    Triangulation mesh = kuhn_mesh(d, -1, static_cast<long>(M) + 1, h,
                                   [&](std::span<const long> idx) {
                                       std::vector<double> x(d);
                                       for (std::size_t c = 0; c < d; ++c) {
                                           if (idx[c] < 0 || idx[c] > static_cast<long>(M))
                                               return 0.0;
                                           x[c] = idx[c] * h;
                                       }
                                       return target.f(x);
                                   });

    HolderResult result{compile_mesh(mesh), {}, mesh.element_count()};
    if (grid_per_axis == 0) grid_per_axis = detail::default_grid(d);
    detail::for_each_grid_point(d, h, 1.0 - h, grid_per_axis, [&](std::span<const double> x) {
        const double err = std::abs(target.f(x) - result.compiled.net.evaluate(x)[0]);
        result.report.measured_sup_error = std::max(result.report.measured_sup_error, err);
        ++result.report.sample_count;
    });
    result.report.error_bound = 2.0 * std::pow(static_cast<double>(d), target.exponent / 2.0) *
                                target.norm_bound * std::pow(M, -target.exponent);
    return result;
}

/// Target with derivatives up to order k: deriv(x, alpha) returns
/// D^alpha f(x); the all-zero multi-index returns f itself.
struct CksTarget {
    std::function<double(std::span<const double>, std::span<const std::size_t>)> deriv;
    std::size_t k = 0;
    double smoothness = 0.0; // s in [0,1]
    double norm_bound = 1.0; // user-certified C^{k,s} norm bound
};

struct CksResult {
    ReluNetwork net;
    std::size_t M;
    double eps;
    double scale;       // internal normalization factor lambda
    ErrorReport report; // measured error is for the unscaled target
    double scaled_error;
};

namespace detail {

// Multi-indices with |alpha| <= k in graded lexicographic order.
inline std::vector<std::vector<std::size_t>> multi_indices_up_to(std::size_t d, std::size_t k) {
    std::vector<std::vector<std::size_t>> graded;
    std::vector<std::size_t> cur(d, 0);
    for (std::size_t deg = 0; deg <= k; ++deg) {
        std::vector<std::vector<std::size_t>> of_degree;
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                std::size_t left) {
            if (pos + 1 == d) {
                cur[pos] = left;
                of_degree.push_back(cur);
                return;
            }
            for (std::size_t a = 0; a <= left; ++a) {
                cur[pos] = a;
                rec(pos + 1, left - a);
            }
        };
        rec(0, deg);
        std::sort(of_degree.begin(), of_degree.end());
        graded.insert(graded.end(), of_degree.begin(), of_degree.end());
    }
    return graded;
}

inline double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

inline double multi_factorial(std::span<const std::size_t> alpha) {
    double f = 1.0;
    for (std::size_t a : alpha) f *= factorial(a);
    return f;
}

} // namespace detail

/// Partition-of-unity approximator: hats phi_nu on the uniform mesh of
/// resolution M = ceil(N^(1/d)) multiplied (through the product gadget at
/// accuracy eps = N^(-(k+s)/d)) with emulated local Taylor polynomials. The
/// target is normalized internally so the proof-exact additive bound
/// M^(-(k+s)) + (d+2) eps applies to the scaled error; the output layer
/// undoes the scaling.
inline CksResult cks_net(const CksTarget& target, std::size_t d, std::size_t N,
                         std::size_t grid_per_axis = 0) {
    if (N < 2) throw InputError("cks_net: N must be >= 2");
    if (target.smoothness < 0.0 || target.smoothness > 1.0)
        throw InputError("cks_net: smoothness must lie in [0,1]");
    if (target.k == 0 && target.smoothness == 0.0)
        throw InputError("cks_net: k + s must be positive");
    if (!(target.norm_bound > 0.0)) throw InputError("cks_net: norm bound must be positive");

    std::size_t M = 1;
    while (std::pow(static_cast<double>(M), static_cast<double>(d)) <
           static_cast<double>(N) - 1e-9)
        ++M;
    const double rate = (static_cast<double>(target.k) + target.smoothness) / d;
    const double eps = std::pow(static_cast<double>(N), -rate);

    const double norm_factor =
        std::max(std::pow(static_cast<double>(d), target.k + 0.5) / detail::factorial(target.k),
                 std::exp(static_cast<double>(d)));
    const double lambda = 1.0 / (norm_factor * std::max(1.0, target.norm_bound));

    const double h = 1.0 / static_cast<double>(M);
    Triangulation mesh = kuhn_mesh(d, -1, static_cast<long>(M) + 1, h,
                                   [](std::span<const long>) { return 0.0; });
    MeshTopology topo = MeshTopology::build(mesh);

    const std::size_t per_axis = static_cast<std::size_t>(M) + 3;
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t c = 1; c < d; ++c) stride[c] = stride[c - 1] * per_axis;
    auto node_of = [&](std::span<const long> nu) {
        std::size_t f = 0;
        for (std::size_t c = 0; c < d; ++c)
            f += static_cast<std::size_t>(nu[c] + 1) * stride[c];
        return f;
    };

    const auto alphas = detail::multi_indices_up_to(d, target.k);
    std::vector<ReluNetwork> blocks;
    std::vector<double> post_scale;

    detail::for_each_grid_index(d, 0, static_cast<long>(M), [&](std::span<const long> nu) {
        std::vector<double> center(d);
        for (std::size_t c = 0; c < d; ++c) center[c] = nu[c] * h;

        // Local Taylor emulation: exact affine part plus one product tree per
        // multi-index of order >= 2.
        Matrix aff_w(1, d);
        double aff_b = 0.0;
        std::vector<ReluNetwork> parts;
        std::vector<double> coeffs;
        for (const auto& alpha : alphas) {
            const std::size_t order = std::accumulate(alpha.begin(), alpha.end(), std::size_t{0});
            const double c_alpha =
                lambda * target.deriv(center, alpha) / detail::multi_factorial(alpha);
            if (order == 0) {
                aff_b += c_alpha;
            } else if (order == 1) {
                for (std::size_t c = 0; c < d; ++c)
                    if (alpha[c] == 1) {
                        aff_w.set(0, c, aff_w.at(0, c) + c_alpha);
                        aff_b -= c_alpha * center[c];
                    }
            } else {
                // Factor list: coordinate i repeated alpha_i times.
                Matrix sel(order, d);
                std::vector<double> shift(order, 0.0);
                std::size_t r = 0;
                for (std::size_t c = 0; c < d; ++c)
                    for (std::size_t rep = 0; rep < alpha[c]; ++rep) {
                        sel.set(r, c, 1.0);
                        shift[r] = -center[c];
                        ++r;
                    }
                ReluNetwork shifted = ReluNetwork::affine(std::move(sel), std::move(shift));
                parts.push_back(compose(multn_net(order, eps), shifted).net);
                coeffs.push_back(c_alpha);
            }
        }
        ReluNetwork taylor = ReluNetwork::affine(std::move(aff_w), {aff_b});
        if (!parts.empty()) {
            parts.insert(parts.begin(), std::move(taylor));
            coeffs.insert(coeffs.begin(), 1.0);
            taylor = linear_combination(parts, coeffs, true).net;
        }

        ReluNetwork hat = hat_basis_net(mesh, node_of(nu), topo).net;
        std::vector<ReluNetwork> pair{std::move(hat), std::move(taylor)};
        blocks.push_back(compose(mult_net(eps), parallelize(pair, true).net).net);
        post_scale.push_back(1.0 / lambda);
    });

    ReluNetwork net = linear_combination(blocks, post_scale, true).net;

    if (grid_per_axis == 0) grid_per_axis = detail::default_grid(d);
    const std::vector<std::size_t> zero_alpha(d, 0);
    ErrorReport report;
    detail::for_each_grid_point(d, 0.0, 1.0, grid_per_axis, [&](std::span<const double> x) {
        const double err = std::abs(target.deriv(x, zero_alpha) - net.evaluate(x)[0]);
        report.measured_sup_error = std::max(report.measured_sup_error, err);
        ++report.sample_count;
    });
    report.error_bound =
        std::pow(static_cast<double>(M), -(static_cast<double>(target.k) + target.smoothness)) +
        (d + 2) * eps;
    const double scaled = lambda * report.measured_sup_error;
    return CksResult{std::move(net), M, eps, lambda, report, scaled};
}

/// Scattered data with a Lipschitz budget under the 1-norm.
struct LipschitzSample {
    std::vector<std::vector<double>> points;
    std::vector<double> values;
    double budget = 0.0;

    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }

    /// Largest difference quotient of the data; the smallest admissible budget.
    double min_budget() const {
        double m = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                double dist = 0.0;
                for (std::size_t c = 0; c < points[i].size(); ++c)
                    dist += std::abs(points[i][c] - points[j][c]);
                if (dist == 0.0) throw InputError("lipschitz sample: duplicate points");
                m = std::max(m, std::abs(values[i] - values[j]) / dist);
            }
        return m;
    }

    void validate() const {
        if (points.empty()) throw InputError("lipschitz sample: empty");
        if (points.size() != values.size())
            throw InputError("lipschitz sample: point/value count mismatch");
        for (const auto& p : points) {
            if (p.size() != points.front().size())
                throw InputError("lipschitz sample: point dimension mismatch");
            for (double c : p)
                if (!std::isfinite(c)) throw InputError("lipschitz sample: non-finite point");
        }
        for (double v : values)
            if (!std::isfinite(v)) throw InputError("lipschitz sample: non-finite value");
        const double m = min_budget();
        if (budget < m * (1.0 - 1e-12))
            throw PreconditionError("lipschitz sample: budget " + std::to_string(budget) +
                                    " is below the data's minimum " + std::to_string(m));
    }
};

struct LipschitzBounds {
    double upper = 0.0, lower = 0.0, mid = 0.0;
};

/// Closed-form envelope of all budget-Lipschitz interpolants and its
/// midpoint, the optimal reconstruction.
inline LipschitzBounds lipschitz_bounds(const LipschitzSample& sample,
                                        std::span<const double> x) {
    sample.validate();
    if (x.size() != sample.dim()) throw InputError("lipschitz_bounds: point dimension mismatch");
    LipschitzBounds out;
    out.upper = std::numeric_limits<double>::infinity();
    out.lower = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sample.points.size(); ++k) {
        double dist = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) dist += std::abs(x[c] - sample.points[k][c]);
        out.upper = std::min(out.upper, sample.values[k] + sample.budget * dist);
        out.lower = std::max(out.lower, sample.values[k] - sample.budget * dist);
    }
    out.mid = 0.5 * (out.upper + out.lower);
    return out;
}

namespace detail {

// y_k +/- M ||x - x_k||_1 as a depth-1 network of width 2d.
inline ReluNetwork distance_cone(const std::vector<double>& point, double value, double budget,
                                 bool upper) {
    const std::size_t d = point.size();
    Matrix w0(2 * d, d);
    std::vector<double> b0(2 * d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        w0.set(2 * c, c, 1.0);
        b0[2 * c] = -point[c];
        w0.set(2 * c + 1, c, -1.0);
        b0[2 * c + 1] = point[c];
    }
    Matrix w1(1, 2 * d);
    const double slope = upper ? budget : -budget;
    for (std::size_t c = 0; c < 2 * d; ++c) w1.set(0, c, slope);
    std::vector<LayerParams> layers;
    layers.emplace_back(std::move(w0), std::move(b0));
    layers.emplace_back(std::move(w1), std::vector<double>{value});
    return ReluNetwork(d, std::move(layers));
}

} // namespace detail

/// Network realizing (f_upper + f_lower)/2 exactly: parallel distance cones,
/// a min tree over the upper cones, a max tree over the lower ones, then the
/// average. Interpolates the data and stays budget-Lipschitz in the 1-norm.
/// Certified: depth = 1 + ceil_log2(m) plus the combination-lemma size and
/// width bounds on the two halves.
inline CertifiedNet lipschitz_net(const LipschitzSample& sample) {
    sample.validate();
    const std::size_t m = sample.points.size();

    std::vector<ReluNetwork> uppers, lowers;
    for (std::size_t k = 0; k < m; ++k) {
        uppers.push_back(detail::distance_cone(sample.points[k], sample.values[k], sample.budget,
                                               true));
        lowers.push_back(detail::distance_cone(sample.points[k], sample.values[k], sample.budget,
                                               false));
    }
    ReluNetwork up = compose(minn_net(m).net, parallelize(uppers, true).net).net;
    ReluNetwork lo = compose(maxn_net(m).net, parallelize(lowers, true).net).net;
    NetworkMetrics mu = metrics(up), ml = metrics(lo);

    std::vector<ReluNetwork> halves{std::move(up), std::move(lo)};
    ReluNetwork net = linear_combination(halves, {0.5, 0.5}, true).net;
    BoundCertificate cert = certify(net, 2 * (mu.size + ml.size), 2 * (mu.width + ml.width),
                                    1 + ceil_log2(m), "lipschitz_net");
    return {std::move(net), cert};
}

/// Largest absolute weight or bias entry; the reconstruction theorem bounds
/// this by max(budget, max |y|).
inline double max_abs_parameter(const ReluNetwork& net) {
    double m = 0.0;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        for (std::size_t r = 0; r < net.layer(l).weights.rows(); ++r)
            for (const Matrix::Entry& e : net.layer(l).weights.row_entries(r))
                m = std::max(m, std::abs(e.val));
        for (double b : net.layer(l).bias) m = std::max(m, std::abs(b));
    }
    return m;
}

} // namespace relucalc
