#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "relucalc/cpwl.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"

// Reference oracles and fixture generators shared by the test suites. The
// oracles deliberately share no code with the constructions they check: the
// evaluator below walks dense rows entry by entry, the closed forms are
// plain arithmetic.

namespace relucalc::testkit {

// Tolerance tiers; every assertion in the suites names one of these.
struct Tol {
    static constexpr double exact = 0.0;
    static constexpr double tight = 1e-12;
    static constexpr double standard = 1e-9;
};

/// Straightforward dense loop over layers, kept independent of
/// ReluNetwork::evaluate.
inline std::vector<double> reference_evaluate(const ReluNetwork& net, std::span<const double> x) {
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerParams& lay = net.layer(l);
        std::vector<double> next(lay.out_dim(), 0.0);
        for (std::size_t i = 0; i < lay.out_dim(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < lay.in_dim(); ++j) acc += lay.weights.at(i, j) * cur[j];
            next[i] = acc + lay.bias[i];
        }
        if (l + 1 < net.layer_count())
            for (double& v : next) v = std::max(v, 0.0);
        cur = std::move(next);
    }
    return cur;
}

inline double oracle_square(double x) { return x * x; }

inline double oracle_product(std::span<const double> xs) {
    double p = 1.0;
    for (double x : xs) p *= x;
    return p;
}

inline double oracle_min(std::span<const double> xs) {
    double m = xs.front();
    for (double x : xs) m = std::min(m, x);
    return m;
}

inline double oracle_max(std::span<const double> xs) {
    double m = xs.front();
    for (double x : xs) m = std::max(m, x);
    return m;
}

inline double norm1(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

struct LipschitzOracleValues {
    double upper, lower, mid;
};

/// Closed-form optimal reconstruction under the 1-norm.
inline LipschitzOracleValues oracle_lipschitz(const std::vector<std::vector<double>>& points,
                                              const std::vector<double>& values, double budget,
                                              std::span<const double> x) {
    double up = std::numeric_limits<double>::infinity();
    double lo = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
        double dist = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) dist += std::abs(x[i] - points[k][i]);
        up = std::min(up, values[k] + budget * dist);
        lo = std::max(lo, values[k] - budget * dist);
    }
    return {up, lo, 0.5 * (up + lo)};
}

/// Exact number of affine pieces of a 1D cpwl function restricted to
/// [lo, hi]: one plus the number of genuine slope changes strictly inside.
inline std::size_t oracle_pieces_1d(const Cpwl1D& f, double lo, double hi,
                                    double slope_tol = 1e-10) {
    std::vector<double> cuts{lo};
    for (double b : f.breakpoints())
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::size_t pieces = 0;
    double prev_slope = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double h = 1e-7 * (1.0 + std::abs(mid));
        const double slope = (f.eval(mid + h) - f.eval(mid - h)) / (2 * h);
        if (pieces == 0 || std::abs(slope - prev_slope) > slope_tol) ++pieces;
        prev_slope = slope;
    }
    return pieces;
}

/// Deterministic continuous random 1D cpwl fixture with pairwise distinct
/// slopes; at most max_pieces affine pieces.
inline Cpwl1D random_cpwl_1d(std::uint64_t seed, std::size_t max_pieces) {
    if (max_pieces < 1 || max_pieces > 8)
        throw InputError("random_cpwl_1d: max_pieces must be in [1,8]");
    std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ULL + 1);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);

    for (int attempt = 0; attempt < 256; ++attempt) {
        std::size_t nb = 1;
        if (max_pieces >= 2)
            nb = 1 + static_cast<std::size_t>(eng() % static_cast<std::uint64_t>(max_pieces - 1));
        std::vector<double> bps(nb);
        for (double& b : bps) b = coord(eng);
        std::sort(bps.begin(), bps.end());
        bool spaced = true;
        for (std::size_t i = 0; i + 1 < bps.size(); ++i)
            if (bps[i + 1] - bps[i] < 0.05) spaced = false;
        if (!spaced) continue;

        std::vector<double> vals(nb);
        for (double& v : vals) v = coord(eng);
        double ls = slope(eng), rs = slope(eng);
        if (max_pieces == 1) rs = ls; // single affine piece

        Cpwl1D f(bps, vals, ls, rs);
        std::vector<double> slopes;
        for (const AffineMap& g : f.pieces_in_order()) slopes.push_back(g.w[0]);
        bool distinct = true;
        if (max_pieces >= 2) {
            for (std::size_t i = 0; i < slopes.size() && distinct; ++i)
                for (std::size_t j = i + 1; j < slopes.size(); ++j)
                    if (std::abs(slopes[i] - slopes[j]) < 1e-2) {
                        distinct = false;
                        break;
                    }
        }
        if (distinct) return f;
    }
    throw InternalError("random_cpwl_1d: failed to draw a distinct-slope fixture");
}

/// Random network fixture for the calculus bookkeeping checks. Hidden layers
/// are at least as wide as the output so the parallelization width bound of
/// the composition rules applies verbatim.
inline ReluNetwork random_net(std::uint64_t seed, std::size_t in_dim, std::size_t out_dim,
                              std::size_t depth, std::size_t max_width) {
    std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ULL + 17);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto weight = [&]() { return (eng() % 4 == 0) ? 0.0 : unit(eng); };

    std::vector<std::size_t> dims{in_dim};
    for (std::size_t l = 0; l < depth; ++l) {
        std::size_t lo = std::max<std::size_t>(out_dim, 1);
        std::size_t hi = std::max(lo, max_width);
        dims.push_back(lo + eng() % (hi - lo + 1));
    }
    dims.push_back(out_dim);

    std::vector<LayerParams> layers;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Matrix w(dims[l + 1], dims[l]);
        for (std::size_t i = 0; i < dims[l + 1]; ++i)
            for (std::size_t j = 0; j < dims[l]; ++j) w.set(i, j, weight());
        std::vector<double> b(dims[l + 1]);
        for (double& v : b) v = weight();
        layers.emplace_back(std::move(w), std::move(b));
    }
    return ReluNetwork(in_dim, std::move(layers));
}

} // namespace relucalc::testkit
