#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"

// Exact counting of the affine pieces a network produces along a line
// segment, the (2 width)^depth ceiling, and the random-bias experiment that
// probes how many pieces typical networks actually generate.

namespace relucalc {

struct Segment {
    std::vector<double> a, b;

    Segment(std::vector<double> a_, std::vector<double> b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a.size() != b.size() || a.empty()) throw InputError("segment: endpoint dims differ");
        bool distinct = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
                throw InputError("segment: non-finite endpoint");
            if (a[i] != b[i]) distinct = true;
        }
        if (!distinct) throw InputError("segment: endpoints coincide");
    }

    std::size_t dim() const { return a.size(); }
};

struct PieceCountConfig {
    double param_tol = 1e-12; // breakpoints closer than this merge
    double merge_tol = 1e-10; // slope/value agreement that merges intervals
};

/// (2 width)^depth, saturated; the most pieces a scalar ReLU network of this
/// architecture can produce on a line.
inline std::uint64_t piece_upper_bound(const ReluNetwork& net) {
    const NetworkMetrics m = metrics(net);
    if (m.depth == 0) return 1;
    std::uint64_t bound = 1;
    for (std::size_t l = 0; l < m.depth; ++l) {
        const std::uint64_t factor = 2 * static_cast<std::uint64_t>(m.width);
        if (bound > std::numeric_limits<std::uint64_t>::max() / factor)
            return std::numeric_limits<std::uint64_t>::max();
        bound *= factor;
    }
    return bound;
}

struct PieceReport {
    std::size_t exact_count = 0;
    std::vector<double> breakpoints; // interior parameters in (0,1)
    std::uint64_t upper_bound = 0;
};

/// Exact piece count of the network restricted to the segment: the segment
/// is pushed through the layers, splitting whenever a pre-activation crosses
/// zero inside a sub-interval, and adjacent intervals whose affine
/// restrictions agree are merged at the end.
inline PieceReport count_pieces_on_segment(const ReluNetwork& net, const Segment& seg,
                                           const PieceCountConfig& cfg = {}) {
    if (net.input_dim() != seg.dim())
        throw InputError("count_pieces_on_segment: segment dimension mismatch");

    struct Interval {
        double t0, t1;
        std::vector<double> slope, offset; // activation(t) = offset + t * slope
    };

    std::vector<double> dir(seg.dim());
    for (std::size_t i = 0; i < seg.dim(); ++i) dir[i] = seg.b[i] - seg.a[i];
    std::vector<Interval> intervals{{0.0, 1.0, dir, seg.a}};

    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerParams& lay = net.layer(l);
        const bool hidden = l + 1 < net.layer_count();
        std::vector<Interval> next;
        next.reserve(intervals.size());
        for (const Interval& iv : intervals) {
            std::vector<double> zs = lay.weights.apply(iv.slope);
            std::vector<double> zo = lay.weights.apply(iv.offset);
            for (std::size_t i = 0; i < zo.size(); ++i) zo[i] += lay.bias[i];

            if (!hidden) {
                next.push_back({iv.t0, iv.t1, std::move(zs), std::move(zo)});
                continue;
            }

            std::vector<double> cuts;
            for (std::size_t i = 0; i < zs.size(); ++i) {
                if (zs[i] == 0.0) continue;
                const double t = -zo[i] / zs[i];
                if (t > iv.t0 + cfg.param_tol && t < iv.t1 - cfg.param_tol) cuts.push_back(t);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end(),
                                   [&](double x, double y) { return y - x <= cfg.param_tol; }),
                       cuts.end());

            double lo = iv.t0;
            for (std::size_t c = 0; c <= cuts.size(); ++c) {
                const double hi = c < cuts.size() ? cuts[c] : iv.t1;
                const double mid = 0.5 * (lo + hi);
                Interval piece{lo, hi, zs, zo};
                for (std::size_t i = 0; i < zs.size(); ++i) {
                    if (zo[i] + mid * zs[i] <= 0.0) {
                        piece.slope[i] = 0.0;
                        piece.offset[i] = 0.0;
                    }
                }
                next.push_back(std::move(piece));
                lo = hi;
            }
        }
        intervals = std::move(next);
    }

    // Merge adjacent intervals carrying the same affine restriction.
    PieceReport report;
    report.upper_bound = piece_upper_bound(net);
    std::vector<Interval> merged;
    for (Interval& iv : intervals) {
        bool same = false;
        if (!merged.empty()) {
            const Interval& prev = merged.back();
            same = true;
            for (std::size_t i = 0; i < iv.slope.size() && same; ++i) {
                if (std::abs(iv.slope[i] - prev.slope[i]) > cfg.merge_tol) same = false;
                const double at = iv.t0;
                const double va = prev.offset[i] + at * prev.slope[i];
                const double vb = iv.offset[i] + at * iv.slope[i];
                if (std::abs(va - vb) > cfg.merge_tol * (1.0 + std::abs(va))) same = false;
            }
        }
        if (same)
            merged.back().t1 = iv.t1;
        else
            merged.push_back(std::move(iv));
    }
    report.exact_count = merged.size();
    for (std::size_t i = 1; i < merged.size(); ++i) report.breakpoints.push_back(merged[i].t0);
    return report;
}

/// Fixed weight matrices whose biases get redrawn uniformly from
/// [-delta/2, delta/2] each trial. The maximal internal derivative along the
/// segment is either supplied or estimated from a small bias lattice.
struct RandomBiasConfig {
    std::vector<Matrix> weights;
    double delta = 0.5;
    std::size_t trials = 100;
    std::optional<double> c_nu;
};

struct RandomBiasStats {
    double mean_pieces = 0.0;
    double bound = 0.0;
    double c_nu = 0.0;
    std::vector<std::size_t> counts;
};

namespace detail {

inline ReluNetwork with_biases(const std::vector<Matrix>& weights,
                               const std::vector<std::vector<double>>& biases) {
    std::vector<LayerParams> layers;
    for (std::size_t l = 0; l < weights.size(); ++l) layers.emplace_back(weights[l], biases[l]);
    return ReluNetwork(weights.front().cols(), std::move(layers));
}

// Largest derivative of any pre-activation coordinate along the segment,
// maximized over a small lattice of bias draws; conservative factor 1.1.
inline double estimate_c_nu(const std::vector<Matrix>& weights, const Segment& seg, double delta,
                            std::uint64_t seed) {
    const double lattice[4] = {-delta / 2, -delta / 6, delta / 6, delta / 2};
    double worst = 0.0;
    for (int rep = 0; rep < 16; ++rep) {
        std::mt19937_64 eng(seed ^ (0xB5297A4D3F84D5B5ULL + 77771ULL * rep));
        std::vector<std::vector<double>> biases;
        for (const Matrix& w : weights) {
            std::vector<double> b(w.rows());
            for (double& v : b) v = lattice[eng() % 4];
            biases.push_back(std::move(b));
        }
        for (int s = 0; s < 512; ++s) {
            const double t = (s + 0.5) / 512.0;
            std::vector<double> x(seg.dim()), slope(seg.dim());
            for (std::size_t i = 0; i < seg.dim(); ++i) {
                x[i] = seg.a[i] + t * (seg.b[i] - seg.a[i]);
                slope[i] = seg.b[i] - seg.a[i];
            }
            for (std::size_t l = 0; l < weights.size(); ++l) {
                std::vector<double> z = weights[l].apply(x);
                std::vector<double> zs = weights[l].apply(slope);
                for (std::size_t i = 0; i < z.size(); ++i) {
                    z[i] += biases[l][i];
                    worst = std::max(worst, std::abs(zs[i]));
                }
                if (l + 1 == weights.size()) break;
                std::vector<double> nx(z.size(), 0.0), ns(z.size(), 0.0);
                for (std::size_t i = 0; i < z.size(); ++i) {
                    if (z[i] > 0.0) {
                        nx[i] = z[i];
                        ns[i] = zs[i];
                    }
                }
                x = std::move(nx);
                slope = std::move(ns);
            }
        }
    }
    return 1.1 * worst;
}

} // namespace detail

/// Monte-Carlo mean of the segment piece count over fresh bias draws,
/// together with the expectation bound
///   1 + d_1 + C_nu/delta (1 + (L-1) ln(2 width)) sum_{j>=2} d_j.
inline RandomBiasStats random_bias_experiment(const RandomBiasConfig& cfg, const Segment& seg,
                                              std::uint64_t seed) {
    if (!(cfg.delta > 0.0) || cfg.delta > 1.0)
        throw InputError("random_bias_experiment: delta must lie in (0,1]");
    if (cfg.trials < 1) throw InputError("random_bias_experiment: trials must be >= 1");
    if (cfg.weights.size() < 2)
        throw InputError("random_bias_experiment: need at least one hidden layer");
    if (cfg.weights.back().rows() != 1)
        throw InputError("random_bias_experiment: output dimension must be 1");
    for (std::size_t l = 0; l + 1 < cfg.weights.size(); ++l)
        if (cfg.weights[l].rows() != cfg.weights[l + 1].cols())
            throw InputError("random_bias_experiment: weight shapes do not chain");
    if (cfg.weights.front().cols() != seg.dim())
        throw InputError("random_bias_experiment: segment dimension mismatch");

    RandomBiasStats stats;
    stats.c_nu = cfg.c_nu ? *cfg.c_nu : detail::estimate_c_nu(cfg.weights, seg, cfg.delta, seed);

    std::size_t total = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 eng(seed ^ (0x9E3779B97F4A7C15ULL * (trial + 1)));
        std::uniform_real_distribution<double> u(-cfg.delta / 2.0, cfg.delta / 2.0);
        std::vector<std::vector<double>> biases;
        for (const Matrix& w : cfg.weights) {
            std::vector<double> b(w.rows());
            for (double& v : b) v = u(eng);
            biases.push_back(std::move(b));
        }
        ReluNetwork net = detail::with_biases(cfg.weights, biases);
        const std::size_t pieces = count_pieces_on_segment(net, seg).exact_count;
        stats.counts.push_back(pieces);
        total += pieces;
    }
    stats.mean_pieces = static_cast<double>(total) / static_cast<double>(cfg.trials);

    const std::size_t hidden_layers = cfg.weights.size() - 1; // L
    std::size_t width = 0, d1 = cfg.weights.front().rows(), tail = 0;
    for (std::size_t l = 0; l + 1 < cfg.weights.size(); ++l) {
        width = std::max(width, cfg.weights[l].rows());
        if (l >= 1) tail += cfg.weights[l].rows();
    }
    stats.bound = 1.0 + static_cast<double>(d1);
    if (hidden_layers >= 2)
        stats.bound += stats.c_nu / cfg.delta *
                       (1.0 + (hidden_layers - 1.0) * std::log(2.0 * width)) *
                       static_cast<double>(tail);
    return stats;
}

/// He-style fixed weights for the experiment: N(0, 2/fan_in) entries.
inline std::vector<Matrix> he_weights(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.size() < 3) throw InputError("he_weights: need input, hidden, output dims");
    std::mt19937_64 eng(seed * 0x2545F4914F6CDD1DULL + 3);
    std::vector<Matrix> weights;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(2.0 / dims[l]));
        Matrix w(dims[l + 1], dims[l]);
        for (std::size_t i = 0; i < dims[l + 1]; ++i)
            for (std::size_t j = 0; j < dims[l]; ++j) w.set(i, j, gauss(eng));
        weights.push_back(std::move(w));
    }
    return weights;
}

} // namespace relucalc
