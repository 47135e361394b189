#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relucalc/cpwl.hpp"
#include "relucalc/errors.hpp"
#include "relucalc/minmax.hpp"
#include "relucalc/network.hpp"

// Regular triangulations, nodal hat functions, and the compiler that turns a
// mesh function vanishing on the boundary into a network whose size is
// linear in the element count.

namespace relucalc {

namespace detail {

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> a,
                                                      std::vector<double> b,
                                                      double rel_tol = 1e-12) {
    const std::size_t n = a.size();
    double scale = 1.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) <= rel_tol * scale) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

} // namespace detail

/// Simplicial mesh with nodal values: vertices, (d+1)-vertex elements, and
/// one real value per node.
struct Triangulation {
    std::size_t dim = 0;
    std::vector<std::vector<double>> vertices;
    std::vector<std::vector<std::size_t>> simplices;
    std::vector<double> values;

    std::size_t node_count() const { return vertices.size(); }
    std::size_t element_count() const { return simplices.size(); }

    void validate() const {
        if (dim == 0) throw InputError("mesh: dimension must be positive");
        if (vertices.empty() || simplices.empty()) throw InputError("mesh: empty");
        if (values.size() != vertices.size())
            throw InputError("mesh: one nodal value per vertex required");
        for (const auto& v : vertices) {
            if (v.size() != dim) throw InputError("mesh: vertex dimension mismatch");
            for (double c : v)
                if (!std::isfinite(c)) throw InputError("mesh: non-finite vertex");
        }
        for (std::size_t t = 0; t < simplices.size(); ++t) {
            const auto& s = simplices[t];
            if (s.size() != dim + 1)
                throw InputError("mesh: simplex " + std::to_string(t) + " needs " +
                                 std::to_string(dim + 1) + " vertices");
            for (std::size_t i : s)
                if (i >= vertices.size())
                    throw InputError("mesh: simplex " + std::to_string(t) + " vertex out of range");
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j)
                    if (s[i] == s[j])
                        throw InputError("mesh: simplex " + std::to_string(t) +
                                         " repeats a vertex");
            if (degenerate(t))
                throw InputError("mesh: simplex " + std::to_string(t) + " is degenerate");
        }
    }

    // Edge vectors v_i - v_0 linearly dependent?
    bool degenerate(std::size_t t) const {
        const auto& s = simplices[t];
        std::vector<std::vector<double>> a(dim, std::vector<double>(dim));
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t r = 0; r < dim; ++r)
                a[r][c] = vertices[s[c + 1]][r] - vertices[s[0]][r];
        return !detail::solve_dense(std::move(a), std::vector<double>(dim, 0.0)).has_value();
    }
};

/// Node-to-element incidence plus the boundary classification derived from
/// facet counts: a facet belonging to exactly one element lies on the mesh
/// boundary, and so does every node on such a facet.
struct MeshTopology {
    std::vector<std::vector<std::size_t>> incident;
    std::vector<bool> boundary_node;
    std::map<std::vector<std::size_t>, std::size_t> facet_count;

    static MeshTopology build(const Triangulation& mesh) {
        MeshTopology topo;
        topo.incident.assign(mesh.node_count(), {});
        topo.boundary_node.assign(mesh.node_count(), false);
        for (std::size_t t = 0; t < mesh.element_count(); ++t) {
            for (std::size_t i : mesh.simplices[t]) topo.incident[i].push_back(t);
            for (std::size_t drop = 0; drop < mesh.simplices[t].size(); ++drop) {
                std::vector<std::size_t> facet;
                for (std::size_t j = 0; j < mesh.simplices[t].size(); ++j)
                    if (j != drop) facet.push_back(mesh.simplices[t][j]);
                std::sort(facet.begin(), facet.end());
                ++topo.facet_count[facet];
            }
        }
        for (const auto& [facet, count] : topo.facet_count)
            if (count == 1)
                for (std::size_t i : facet) topo.boundary_node[i] = true;
        return topo;
    }
};

struct PatchInfo {
    std::size_t node = 0;
    std::vector<std::size_t> incident;
    std::size_t k_local = 0;
    bool interior = false;
    // One face co(V(tau) \ {node}) per incident element.
    std::vector<std::vector<std::size_t>> boundary_faces;
};

inline PatchInfo patch_info(const Triangulation& mesh, std::size_t node,
                            const MeshTopology& topo) {
    if (node >= mesh.node_count()) throw InputError("patch_info: node out of range");
    PatchInfo p;
    p.node = node;
    p.incident = topo.incident[node];
    p.k_local = p.incident.size();
    p.interior = !topo.boundary_node[node] && !p.incident.empty();
    for (std::size_t t : p.incident) {
        std::vector<std::size_t> face;
        for (std::size_t i : mesh.simplices[t])
            if (i != node) face.push_back(i);
        p.boundary_faces.push_back(std::move(face));
    }
    return p;
}

inline PatchInfo patch_info(const Triangulation& mesh, std::size_t node) {
    return patch_info(mesh, node, MeshTopology::build(mesh));
}

/// Maximal number of elements sharing one node.
inline std::size_t k_T(const Triangulation& mesh) {
    MeshTopology topo = MeshTopology::build(mesh);
    std::size_t k = 0;
    for (const auto& inc : topo.incident) k = std::max(k, inc.size());
    return k;
}

/// The unique affine map matching the given values at the d+1 vertices of a
/// non-degenerate simplex.
inline AffineMap affine_from_vertices(const std::vector<std::vector<double>>& verts,
                                      const std::vector<double>& vals) {
    const std::size_t d = verts.front().size();
    std::vector<std::vector<double>> a(d + 1, std::vector<double>(d + 1));
    std::vector<double> rhs(d + 1);
    for (std::size_t r = 0; r <= d; ++r) {
        for (std::size_t c = 0; c < d; ++c) a[r][c] = verts[r][c];
        a[r][d] = 1.0;
        rhs[r] = vals[r];
    }
    auto sol = detail::solve_dense(std::move(a), std::move(rhs));
    if (!sol) throw InputError("affine_from_vertices: degenerate simplex");
    std::vector<double> w(sol->begin(), sol->begin() + d);
    return AffineMap(std::move(w), (*sol)[d]);
}

inline AffineMap affine_on_simplex(const Triangulation& mesh, std::size_t t,
                                   const std::vector<double>& vertex_values) {
    if (t >= mesh.element_count()) throw InputError("affine_on_simplex: element out of range");
    std::vector<std::vector<double>> verts;
    for (std::size_t i : mesh.simplices[t]) verts.push_back(mesh.vertices[i]);
    return affine_from_vertices(verts, vertex_values);
}

/// g_{tau,node}: 1 at the node, 0 at the other vertices of tau.
inline AffineMap nodal_affine(const Triangulation& mesh, std::size_t t, std::size_t node) {
    std::vector<double> vals;
    for (std::size_t i : mesh.simplices[t]) vals.push_back(i == node ? 1.0 : 0.0);
    return affine_on_simplex(mesh, t, vals);
}

namespace detail {

inline std::optional<std::vector<double>> barycentric_coords(const Triangulation& mesh,
                                                             std::size_t t,
                                                             std::span<const double> x) {
    const std::size_t d = mesh.dim;
    std::vector<std::vector<double>> a(d + 1, std::vector<double>(d + 1));
    std::vector<double> rhs(d + 1);
    for (std::size_t c = 0; c <= d; ++c) {
        for (std::size_t r = 0; r < d; ++r) a[r][c] = mesh.vertices[mesh.simplices[t][c]][r];
        a[d][c] = 1.0;
    }
    for (std::size_t r = 0; r < d; ++r) rhs[r] = x[r];
    rhs[d] = 1.0;
    return solve_dense(std::move(a), std::move(rhs));
}

} // namespace detail

/// Point location by barycentric sign tests, then the nodal interpolant via
/// the barycentric weights. Returns nothing for points outside the mesh; the
/// caller decides about zero extension.
inline std::optional<double> barycentric_eval(const Triangulation& mesh,
                                              std::span<const double> x,
                                              double boundary_tol = 1e-12) {
    if (x.size() != mesh.dim) throw InputError("barycentric_eval: point dimension mismatch");
    for (std::size_t t = 0; t < mesh.element_count(); ++t) {
        auto lam = detail::barycentric_coords(mesh, t, x);
        if (!lam) continue;
        bool inside = true;
        for (double l : *lam)
            if (l < -boundary_tol) inside = false;
        if (!inside) continue;
        double v = 0.0;
        for (std::size_t c = 0; c <= mesh.dim; ++c)
            v += (*lam)[c] * mesh.values[mesh.simplices[t][c]];
        return v;
    }
    return std::nullopt;
}

/// Value of the hat function of `node` at x, extended by zero outside the
/// patch: the barycentric weight of the node inside incident elements.
inline double hat_value(const Triangulation& mesh, std::size_t node, std::span<const double> x,
                        const MeshTopology& topo) {
    for (std::size_t t : topo.incident[node]) {
        auto lam = detail::barycentric_coords(mesh, t, x);
        if (!lam) continue;
        bool inside = true;
        for (double l : *lam)
            if (l < -1e-12) inside = false;
        if (!inside) continue;
        for (std::size_t c = 0; c <= mesh.dim; ++c)
            if (mesh.simplices[t][c] == node) return (*lam)[c];
    }
    return 0.0;
}

/// True iff every vertex of every incident element lies on the nonnegative
/// side of every incident g_{tau,node}; for interior nodes this is the
/// half-space criterion for a convex patch.
inline bool is_locally_convex(const Triangulation& mesh, std::size_t node,
                              const MeshTopology& topo) {
    PatchInfo p = patch_info(mesh, node, topo);
    if (!p.interior) throw InputError("is_locally_convex: node " + std::to_string(node) +
                                      " is not an interior node");
    for (std::size_t tprime : p.incident) {
        AffineMap g = nodal_affine(mesh, tprime, node);
        for (std::size_t t : p.incident)
            for (std::size_t i : mesh.simplices[t])
                if (g.eval(mesh.vertices[i]) < -1e-12) return false;
    }
    return true;
}

inline bool is_locally_convex(const Triangulation& mesh, std::size_t node) {
    return is_locally_convex(mesh, node, MeshTopology::build(mesh));
}

namespace detail {

// Deterministic sample clouds around a patch, used to derive and to validate
// a max-min form for non-convex hats. `phase` decorrelates the two clouds.
inline std::vector<std::vector<double>> patch_sample_cloud(const Triangulation& mesh,
                                                           std::size_t node,
                                                           const MeshTopology& topo, int phase) {
    const std::size_t d = mesh.dim;
    std::vector<std::vector<double>> pts;

    // Interior points of each incident element: barycenter and vertex-biased
    // combinations.
    for (std::size_t t : topo.incident[node]) {
        const auto& s = mesh.simplices[t];
        std::vector<double> bary(d, 0.0);
        for (std::size_t i : s)
            for (std::size_t c = 0; c < d; ++c) bary[c] += mesh.vertices[i][c] / (d + 1.0);
        pts.push_back(bary);
        for (std::size_t pick : s) {
            for (double wmain : {0.55, 0.8, 0.95}) {
                std::vector<double> p(d, 0.0);
                for (std::size_t i : s) {
                    const double w = (i == pick) ? wmain : (1.0 - wmain) / d;
                    for (std::size_t c = 0; c < d; ++c) p[c] += w * mesh.vertices[i][c];
                }
                pts.push_back(std::move(p));
            }
        }
    }

    // Rings around the node, reaching past the patch boundary.
    const auto& center = mesh.vertices[node];
    double reach = 0.0;
    for (std::size_t t : topo.incident[node])
        for (std::size_t i : mesh.simplices[t]) {
            double dist = 0.0;
            for (std::size_t c = 0; c < d; ++c)
                dist += (mesh.vertices[i][c] - center[c]) * (mesh.vertices[i][c] - center[c]);
            reach = std::max(reach, std::sqrt(dist));
        }
    std::vector<double> radii{0.07, 0.23, 0.46, 0.71, 0.93, 1.08, 1.45, 2.3, 4.1};
    const std::size_t dirs = (d == 1) ? 2 : (d == 2 ? 160 : 400);
    std::mt19937_64 eng(0xC0FFEEULL + phase);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double rr : radii) {
        for (std::size_t a = 0; a < dirs; ++a) {
            std::vector<double> dir(d, 0.0);
            if (d == 1) {
                dir[0] = (a == 0) ? 1.0 : -1.0;
            } else if (d == 2) {
                const double ang = (2.0 * std::acos(-1.0)) * (a + 0.5 * phase) / dirs;
                dir[0] = std::cos(ang);
                dir[1] = std::sin(ang);
            } else {
                double norm = 0.0;
                for (double& v : dir) {
                    v = gauss(eng);
                    norm += v * v;
                }
                norm = std::sqrt(norm);
                for (double& v : dir) v /= norm;
            }
            std::vector<double> p(d);
            for (std::size_t c = 0; c < d; ++c) p[c] = center[c] + rr * reach * dir[c];
            pts.push_back(std::move(p));
        }
    }

    // Barycenters of every mesh element cover the zero region.
    for (std::size_t t = 0; t < mesh.element_count(); ++t) {
        std::vector<double> bary(d, 0.0);
        for (std::size_t i : mesh.simplices[t])
            for (std::size_t c = 0; c < d; ++c) bary[c] += mesh.vertices[i][c] / (d + 1.0);
        pts.push_back(std::move(bary));
    }
    return pts;
}

} // namespace detail

/// Network realizing the hat function of an interior node on all of R^d
/// (zero extension). Locally convex patches use
///     relu . min_k . (g_{tau,node} rows),
/// certified within size 4(2 + 16 k_T + k_T d) and depth 3 + ceil_log2(k).
/// Non-convex patches go through a grid-derived max-min form and the cpwl
/// compiler; when no form validates, the patch is reported unsupported.
inline CertifiedNet hat_basis_net(const Triangulation& mesh, std::size_t node,
                                  const MeshTopology& topo) {
    PatchInfo p = patch_info(mesh, node, topo);
    if (!p.interior)
        throw InputError("hat_basis_net: node " + std::to_string(node) +
                         " is not an interior node");
    const std::size_t k = p.k_local;
    const std::size_t kt = k_T(mesh);

    if (is_locally_convex(mesh, node, topo)) {
        Matrix front_w(k, mesh.dim);
        std::vector<double> front_b(k, 0.0);
        for (std::size_t r = 0; r < k; ++r) {
            AffineMap g = nodal_affine(mesh, p.incident[r], node);
            for (std::size_t c = 0; c < mesh.dim; ++c) front_w.set(r, c, g.w[c]);
            front_b[r] = g.b;
        }
        ReluNetwork front = ReluNetwork::affine(std::move(front_w), std::move(front_b));

        std::vector<LayerParams> relu_layers;
        relu_layers.emplace_back(Matrix::from_rows({{1}}), std::vector<double>{0.0});
        relu_layers.emplace_back(Matrix::from_rows({{1}}), std::vector<double>{0.0});
        ReluNetwork relu1(1, std::move(relu_layers));

        ReluNetwork net =
            sparse_compose(relu1, sparse_compose(minn_net(k).net, front).net).net;
        BoundCertificate cert =
            certify(net, 4 * (2 + 16 * kt + kt * mesh.dim), std::max({std::size_t{1}, 3 * kt, mesh.dim}),
                    3 + ceil_log2(k), "hat_basis_net");
        return {std::move(net), cert};
    }

    std::vector<AffineMap> pieces;
    for (std::size_t t : p.incident) pieces.push_back(nodal_affine(mesh, t, node));
    pieces.emplace_back(std::vector<double>(mesh.dim, 0.0), 0.0);

    auto oracle = [&](std::span<const double> x) { return hat_value(mesh, node, x, topo); };
    auto derived = derive_maxmin_grid(mesh.dim, pieces, oracle,
                                      detail::patch_sample_cloud(mesh, node, topo, 0),
                                      detail::patch_sample_cloud(mesh, node, topo, 1));
    if (!derived)
        throw UnsupportedError("hat_basis_net: no max-min form found for the non-convex patch of node " +
                               std::to_string(node));
    return compile_cpwl(*derived);
}

inline CertifiedNet hat_basis_net(const Triangulation& mesh, std::size_t node) {
    return hat_basis_net(mesh, node, MeshTopology::build(mesh));
}

namespace detail {

inline double dist_point_segment(std::span<const double> p, std::span<const double> a,
                                 std::span<const double> b) {
    double ab2 = 0.0, ap_ab = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        ab2 += (b[c] - a[c]) * (b[c] - a[c]);
        ap_ab += (p[c] - a[c]) * (b[c] - a[c]);
    }
    double t = ab2 > 0.0 ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double proj = a[c] + t * (b[c] - a[c]);
        d2 += (p[c] - proj) * (p[c] - proj);
    }
    return std::sqrt(d2);
}

// Sutherland-Hodgman clip of a convex polygon by a triangle.
inline std::vector<std::vector<double>> clip_polygon(std::vector<std::vector<double>> poly,
                                                     std::vector<std::vector<double>> tri) {
    const double area2 = (tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) -
                         (tri[1][1] - tri[0][1]) * (tri[2][0] - tri[0][0]);
    if (area2 < 0.0) std::swap(tri[1], tri[2]);
    for (std::size_t e = 0; e < 3 && !poly.empty(); ++e) {
        const auto& a = tri[e];
        const auto& b = tri[(e + 1) % 3];
        auto side = [&](const std::vector<double>& p) {
            return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        };
        std::vector<std::vector<double>> next;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& cur = poly[i];
            const auto& prv = poly[(i + poly.size() - 1) % poly.size()];
            const double sc = side(cur), sp = side(prv);
            const bool in_c = sc >= -1e-12, in_p = sp >= -1e-12;
            if (in_c != in_p && sc != sp) {
                const double t = sp / (sp - sc);
                next.push_back({prv[0] + t * (cur[0] - prv[0]), prv[1] + t * (cur[1] - prv[1])});
            }
            if (in_c) next.push_back(cur);
        }
        poly = std::move(next);
    }
    return poly;
}

inline double polygon_area(const std::vector<std::vector<double>>& poly) {
    double a2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        a2 += p[0] * q[1] - p[1] * q[0];
    }
    return std::abs(a2) / 2.0;
}

} // namespace detail

/// Checks the shared-face condition: any two elements intersect exactly in
/// the convex hull of their shared vertices. The 1D and 2D checks are
/// geometric (interval arithmetic resp. polygon clipping); higher dimensions
/// verify facet conformity. Intended for meshes up to about 10^3 elements.
inline bool is_regular(const Triangulation& mesh, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    mesh.validate();

    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        for (std::size_t j = i + 1; j < mesh.node_count(); ++j) {
            double d = 0.0;
            for (std::size_t c = 0; c < mesh.dim; ++c)
                d = std::max(d, std::abs(mesh.vertices[i][c] - mesh.vertices[j][c]));
            if (d <= 1e-12)
                return fail("vertices " + std::to_string(i) + " and " + std::to_string(j) +
                            " coincide");
        }

    MeshTopology topo = MeshTopology::build(mesh);
    for (const auto& [facet, count] : topo.facet_count)
        if (count > 2) return fail("a facet is shared by more than two elements");

    for (std::size_t s = 0; s < mesh.element_count(); ++s) {
        for (std::size_t t = s + 1; t < mesh.element_count(); ++t) {
            std::vector<std::size_t> shared;
            for (std::size_t i : mesh.simplices[s])
                for (std::size_t j : mesh.simplices[t])
                    if (i == j) shared.push_back(i);
            const std::string pair_name =
                "elements " + std::to_string(s) + " and " + std::to_string(t);

            if (mesh.dim == 1) {
                auto lohi = [&](std::size_t e) {
                    const double a = mesh.vertices[mesh.simplices[e][0]][0];
                    const double b = mesh.vertices[mesh.simplices[e][1]][0];
                    return std::pair<double, double>{std::min(a, b), std::max(a, b)};
                };
                auto [lo1, hi1] = lohi(s);
                auto [lo2, hi2] = lohi(t);
                const double overlap = std::min(hi1, hi2) - std::max(lo1, lo2);
                if (shared.empty() && overlap > -1e-12)
                    return fail(pair_name + " touch without a shared vertex");
                if (shared.size() == 1) {
                    if (overlap > 1e-12) return fail(pair_name + " overlap beyond the shared vertex");
                    if (std::abs(std::max(lo1, lo2) - mesh.vertices[shared[0]][0]) > 1e-12)
                        return fail(pair_name + " meet away from their shared vertex");
                }
            } else if (mesh.dim == 2) {
                auto tri_of = [&](std::size_t e) {
                    std::vector<std::vector<double>> v;
                    for (std::size_t i : mesh.simplices[e]) v.push_back(mesh.vertices[i]);
                    return v;
                };
                auto poly = detail::clip_polygon(tri_of(s), tri_of(t));
                if (shared.empty()) {
                    if (!poly.empty()) return fail(pair_name + " intersect without shared vertices");
                } else if (shared.size() == 1) {
                    for (const auto& p : poly) {
                        double d = std::hypot(p[0] - mesh.vertices[shared[0]][0],
                                              p[1] - mesh.vertices[shared[0]][1]);
                        if (d > 1e-9)
                            return fail(pair_name + " intersect beyond their shared vertex");
                    }
                } else if (shared.size() == 2) {
                    if (detail::polygon_area(poly) > 1e-12)
                        return fail(pair_name + " overlap beyond their shared edge");
                    for (const auto& p : poly)
                        if (detail::dist_point_segment(p, mesh.vertices[shared[0]],
                                                       mesh.vertices[shared[1]]) > 1e-9)
                            return fail(pair_name + " intersect beyond their shared edge");
                }
            } else {
                // d >= 3: facet conformity only; pairs sharing a facet must
                // open to opposite sides.
                if (shared.size() == mesh.dim) {
                    std::vector<std::vector<double>> verts;
                    std::vector<double> vals;
                    std::size_t opp_s = 0;
                    for (std::size_t i : mesh.simplices[s])
                        if (std::find(shared.begin(), shared.end(), i) == shared.end()) opp_s = i;
                    std::size_t opp_t = 0;
                    for (std::size_t i : mesh.simplices[t])
                        if (std::find(shared.begin(), shared.end(), i) == shared.end()) opp_t = i;
                    for (std::size_t i : shared) {
                        verts.push_back(mesh.vertices[i]);
                        vals.push_back(0.0);
                    }
                    verts.push_back(mesh.vertices[opp_s]);
                    vals.push_back(1.0);
                    AffineMap g = affine_from_vertices(verts, vals);
                    if (g.eval(mesh.vertices[opp_t]) > -1e-12)
                        return fail(pair_name + " lie on the same side of their shared facet");
                }
            }
        }
    }
    return true;
}

/// Network equal on the mesh domain to the cpwl interpolant of the nodal
/// values; requires all boundary values to vanish. Built as the linear
/// combination sum f(node) * hat_node over the interior nodes, so the size
/// scales linearly in the element count. The certificate carries the
/// combination-lemma bounds evaluated on the hat networks.
inline CertifiedNet compile_mesh(const Triangulation& mesh) {
    mesh.validate();
    if (mesh.element_count() <= 1000) {
        std::string why;
        if (!is_regular(mesh, &why)) throw InputError("compile_mesh: " + why);
    }
    MeshTopology topo = MeshTopology::build(mesh);

    std::vector<std::size_t> interior;
    for (std::size_t v = 0; v < mesh.node_count(); ++v) {
        if (topo.incident[v].empty()) continue;
        if (topo.boundary_node[v]) {
            if (std::abs(mesh.values[v]) > 1e-12)
                throw PreconditionError("compile_mesh: nonzero value " +
                                        std::to_string(mesh.values[v]) + " at boundary node " +
                                        std::to_string(v) + " (boundary values must vanish)");
        } else {
            interior.push_back(v);
        }
    }

    if (interior.empty()) {
        ReluNetwork zero = ReluNetwork::affine(Matrix(1, mesh.dim), {0.0});
        return {zero, certify(zero, 0, 0, 0, "compile_mesh")};
    }

    std::vector<ReluNetwork> hats;
    std::vector<double> coeffs;
    hats.reserve(interior.size());
    for (std::size_t v : interior) {
        hats.push_back(hat_basis_net(mesh, v, topo).net);
        coeffs.push_back(mesh.values[v]);
    }
    return linear_combination(hats, coeffs, true);
}

} // namespace relucalc
