#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "relucalc/calculus.hpp"
#include "relucalc/certificate.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/minmax.hpp"
#include "relucalc/network.hpp"

// Continuous piecewise linear functions: the max-min representation, its
// derivation for one-dimensional inputs (and a grid-based variant used for
// higher-dimensional hat functions), and the compiler that turns a max-min
// form into a network with certified cost bounds.

namespace relucalc {

/// g(x) = w . x + b.
struct AffineMap {
    std::vector<double> w;
    double b = 0.0;

    AffineMap() = default;
    AffineMap(std::vector<double> w_, double b_) : w(std::move(w_)), b(b_) {
        for (double v : w)
            if (!std::isfinite(v)) throw InputError("affine map has non-finite weight");
        if (!std::isfinite(b)) throw InputError("affine map has non-finite offset");
    }

    double eval(std::span<const double> x) const {
        double acc = b;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i];
        return acc;
    }
};

struct Box {
    std::vector<double> lo, hi;
};

/// A cpwl function of dimension d as affine pieces g_1..g_n, optionally with
/// the index sets s_j of its representation
///   f(x) = max_j min_{i in s_j} g_i(x).
/// Indices are 0-based in memory (the document format is 1-based).
struct CpwlSpec {
    std::size_t dim = 0;
    std::vector<AffineMap> pieces;
    std::vector<std::vector<std::size_t>> maxmin;
    std::optional<Box> domain;

    void check_indices() const {
        for (const auto& s : maxmin) {
            if (s.empty()) throw InputError("cpwl spec: empty max-min index set");
            for (std::size_t i : s)
                if (i >= pieces.size())
                    throw InputError("cpwl spec: max-min index " + std::to_string(i + 1) +
                                     " out of range");
        }
    }
};

/// 1D cpwl function in breakpoint form: values at strictly increasing
/// breakpoints, linear interpolation between them, and the two outer slopes.
class Cpwl1D {
  public:
    Cpwl1D(std::vector<double> breakpoints, std::vector<double> values, double left_slope,
           double right_slope)
        : bp_(std::move(breakpoints)), val_(std::move(values)), ls_(left_slope),
          rs_(right_slope) {
        if (bp_.empty()) throw InputError("cpwl1d: needs at least one breakpoint");
        if (bp_.size() != val_.size()) throw InputError("cpwl1d: breakpoint/value count mismatch");
        for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
            if (!(bp_[i] < bp_[i + 1]))
                throw InputError("cpwl1d: breakpoints must be strictly increasing");
        for (double v : bp_)
            if (!std::isfinite(v)) throw InputError("cpwl1d: non-finite breakpoint");
        for (double v : val_)
            if (!std::isfinite(v)) throw InputError("cpwl1d: non-finite value");
        if (!std::isfinite(ls_) || !std::isfinite(rs_))
            throw InputError("cpwl1d: non-finite outer slope");
    }

    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<double>& values() const { return val_; }
    double left_slope() const { return ls_; }
    double right_slope() const { return rs_; }

    double eval(double x) const {
        if (x <= bp_.front()) return val_.front() + ls_ * (x - bp_.front());
        if (x >= bp_.back()) return val_.back() + rs_ * (x - bp_.back());
        auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - bp_.begin()); // bp_[i-1] < x < bp_[i]
        const double t = (x - bp_[i - 1]) / (bp_[i] - bp_[i - 1]);
        return val_[i - 1] + t * (val_[i] - val_[i - 1]);
    }

    /// The k+1 affine pieces from left to right (possibly with repeats when a
    /// listed breakpoint is not a genuine kink).
    std::vector<AffineMap> pieces_in_order() const {
        std::vector<AffineMap> out;
        out.emplace_back(std::vector<double>{ls_}, val_.front() - ls_ * bp_.front());
        for (std::size_t i = 1; i < bp_.size(); ++i) {
            const double m = (val_[i] - val_[i - 1]) / (bp_[i] - bp_[i - 1]);
            out.emplace_back(std::vector<double>{m}, val_[i] - m * bp_[i]);
        }
        out.emplace_back(std::vector<double>{rs_}, val_.back() - rs_ * bp_.back());
        return out;
    }

  private:
    std::vector<double> bp_, val_;
    double ls_, rs_;
};

inline double eval_maxmin(const CpwlSpec& spec, std::span<const double> x) {
    if (spec.maxmin.empty()) throw InputError("eval_maxmin: spec carries no max-min form");
    spec.check_indices();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : spec.maxmin) {
        double inner = std::numeric_limits<double>::infinity();
        for (std::size_t i : s) inner = std::min(inner, spec.pieces[i].eval(x));
        best = std::max(best, inner);
    }
    return best;
}

namespace detail {

inline bool same_piece(const AffineMap& a, const AffineMap& b, double tol) {
    if (std::abs(a.b - b.b) > tol) return false;
    for (std::size_t i = 0; i < a.w.size(); ++i)
        if (std::abs(a.w[i] - b.w[i]) > tol) return false;
    return true;
}

// Collects the distinct active-majorant index sets over the given sample
// points: s_x = { j : g_j(x) >= f(x) }, with a relative slack absorbing
// float noise at breakpoints.
inline std::vector<std::vector<std::size_t>> collect_sets(
    const std::vector<AffineMap>& pieces, const std::function<double(std::span<const double>)>& f,
    const std::vector<std::vector<double>>& samples) {
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> sets;
    for (const auto& x : samples) {
        const double fx = f(x);
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < pieces.size(); ++j)
            if (pieces[j].eval(x) >= fx - 1e-9 * (1.0 + std::abs(fx))) s.push_back(j);
        if (!s.empty() && seen.insert(s).second) sets.push_back(std::move(s));
    }
    return sets;
}

} // namespace detail

/// Derives the max-min form of a 1D cpwl function: deduplicates its pieces,
/// sweeps one sample per interval between consecutive crossings of the piece
/// lines (plus one beyond each end), records the distinct sets
/// s_x = { j : g_j(x) >= f(x) }, and verifies the resulting form against f on
/// a refinement grid.
inline CpwlSpec derive_maxmin_1d(const Cpwl1D& f) {
    std::vector<AffineMap> pieces;
    for (const AffineMap& g : f.pieces_in_order()) {
        bool dup = false;
        for (const AffineMap& h : pieces)
            if (detail::same_piece(g, h, 1e-12)) dup = true;
        if (!dup) pieces.push_back(g);
    }

    // Crossings of the distinct lines delimit the intervals on which the
    // active-majorant set is constant.
    std::vector<double> cuts;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            const double dw = pieces[i].w[0] - pieces[j].w[0];
            if (std::abs(dw) > 1e-12) cuts.push_back((pieces[j].b - pieces[i].b) / dw);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               cuts.end());

    std::vector<std::vector<double>> samples;
    if (cuts.empty()) {
        samples.push_back({f.breakpoints().front()});
    } else {
        const double pad = 1.0 + (cuts.back() - cuts.front());
        samples.push_back({cuts.front() - pad});
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            samples.push_back({0.5 * (cuts[i] + cuts[i + 1])});
        samples.push_back({cuts.back() + pad});
    }

    auto fwrap = [&f](std::span<const double> x) { return f.eval(x[0]); };
    CpwlSpec spec{1, pieces, detail::collect_sets(pieces, fwrap, samples), std::nullopt};

    // Refinement-grid check: the derived form must reproduce f everywhere.
    double lo = f.breakpoints().front(), hi = f.breakpoints().back();
    if (!cuts.empty()) {
        lo = std::min(lo, cuts.front());
        hi = std::max(hi, cuts.back());
    }
    const double pad = 1.0 + (hi - lo);
    for (int i = 0; i <= 1000; ++i) {
        const double x = (lo - pad) + (hi - lo + 2 * pad) * i / 1000.0;
        const double want = f.eval(x);
        const double got = eval_maxmin(spec, std::span<const double>(&x, 1));
        if (std::abs(want - got) > 1e-9 * (1.0 + std::abs(want)))
            throw InternalError("derive_maxmin_1d: derived form fails refinement check");
    }
    return spec;
}

/// Grid-based variant for dimension > 1: collects candidate sets from the
/// sample points and accepts the form only if it matches the reference on
/// every validation point. Returns nothing when validation fails.
inline std::optional<CpwlSpec> derive_maxmin_grid(
    std::size_t dim, const std::vector<AffineMap>& pieces,
    const std::function<double(std::span<const double>)>& f,
    const std::vector<std::vector<double>>& samples,
    const std::vector<std::vector<double>>& validation, double tol = 1e-9) {
    CpwlSpec spec{dim, pieces, detail::collect_sets(pieces, f, samples), std::nullopt};
    if (spec.maxmin.empty()) return std::nullopt;
    for (const auto& x : validation) {
        const double want = f(x);
        const double got = eval_maxmin(spec, x);
        if (std::abs(want - got) > tol * (1.0 + std::abs(want))) return std::nullopt;
    }
    return spec;
}

/// Compiles a max-min form into a network:
///   max_m  o  (min_|s_1|, ..., min_|s_m|)  o  (affine rows),
/// with the sparse composition flavor at both joints. Exactly realizes f on
/// its (convex) domain. Certified:
///   depth = 2 + ceil_log2(max_j |s_j|) + ceil_log2(m),
///   size <= 4 (16m + sum_j 2(16|s_j| + 2 ceil_log2 n) + n m (d+1)),
///   width <= 2 max(3m, 3mn, mnd).
inline CertifiedNet compile_cpwl(const CpwlSpec& spec) {
    if (spec.maxmin.empty()) throw InputError("compile_cpwl: spec carries no max-min form");
    if (spec.pieces.empty()) throw InputError("compile_cpwl: no pieces");
    if (spec.dim == 0) throw InputError("compile_cpwl: dimension must be positive");
    spec.check_indices();
    for (const AffineMap& g : spec.pieces)
        if (g.w.size() != spec.dim) throw InputError("compile_cpwl: piece dimension mismatch");

    const std::size_t m = spec.maxmin.size();
    const std::size_t n = spec.pieces.size();
    const std::size_t d = spec.dim;

    std::size_t total_rows = 0, max_set = 0;
    for (const auto& s : spec.maxmin) {
        total_rows += s.size();
        max_set = std::max(max_set, s.size());
    }

    Matrix front_w(total_rows, d);
    std::vector<double> front_b(total_rows, 0.0);
    std::size_t r = 0;
    for (const auto& s : spec.maxmin)
        for (std::size_t i : s) {
            for (std::size_t c = 0; c < d; ++c) front_w.set(r, c, spec.pieces[i].w[c]);
            front_b[r] = spec.pieces[i].b;
            ++r;
        }
    ReluNetwork front = ReluNetwork::affine(std::move(front_w), std::move(front_b));

    std::vector<ReluNetwork> mins;
    mins.reserve(m);
    for (const auto& s : spec.maxmin) mins.push_back(minn_net(s.size()).net);
    ReluNetwork mid = parallelize(mins, false).net;
    ReluNetwork net = sparse_compose(maxn_net(m).net, sparse_compose(mid, front).net).net;

    std::size_t size_bound = 16 * m + n * m * (d + 1);
    for (const auto& s : spec.maxmin) size_bound += 2 * (16 * s.size() + 2 * ceil_log2(n));
    size_bound *= 4;
    const std::size_t width_bound = 2 * std::max({3 * m, 3 * m * n, m * n * d});
    const std::size_t depth_value = 2 + ceil_log2(max_set) + ceil_log2(m);
    BoundCertificate cert = certify(net, size_bound, width_bound, depth_value, "compile_cpwl");
    return {std::move(net), cert};
}

} // namespace relucalc
