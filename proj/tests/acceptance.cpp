// Acceptance suite: one pass/fail line per criterion, exit nonzero when any
// selected criterion fails. `--only N` runs a single criterion; `--cli PATH`
// points at the command-line binary (needed by criterion 12).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relucalc/relucalc.hpp"
#include "relucalc/testkit.hpp"

using namespace relucalc;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
    void note(const std::string& msg) {
        if (detail.empty()) detail = msg;
    }
};

std::string cli_path;

// ---------------------------------------------------------------- 1
void criterion_identity(Check& c) {
    std::mt19937_64 eng(1);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (std::size_t d : {1, 2, 5}) {
        for (std::size_t L : {1, 3}) {
            CertifiedNet id = identity_net(d, L);
            c.expect(metrics(id.net).size == 2 * d * (L + 1), "identity size != 2d(L+1)");
            for (int t = 0; t < 1000; ++t) {
                std::vector<double> x(d);
                for (double& v : x) v = u(eng);
                std::vector<double> y = id.net.evaluate(x);
                for (std::size_t i = 0; i < d; ++i)
                    c.expect(y[i] == x[i], "identity is not exact");
            }
        }
    }
}

// ---------------------------------------------------------------- 2
void criterion_calculus(Check& c) {
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        ReluNetwork f = testkit::random_net(40 + 3 * s, 3, 2, 1 + s % 3, 4);
        ReluNetwork g = testkit::random_net(41 + 3 * s, 2, 2, 1 + (s + 1) % 3, 4);
        ReluNetwork h = testkit::random_net(42 + 3 * s, 3, 2, 1 + (s + 2) % 3, 4);
        NetworkMetrics mf = metrics(f), mg = metrics(g), mh = metrics(h);

        CertifiedNet comp = compose(g, f);
        c.expect(comp.net.depth() == mf.depth + mg.depth, "depth(compose) != L1+L2");

        CertifiedNet sp = sparse_compose(g, f);
        c.expect(sp.net.depth() == mf.depth + mg.depth + 1, "depth(sparse) != L1+L2+1");
        c.expect(metrics(sp.net).size <= 2 * (mf.size + mg.size), "size(sparse) bound");

        std::vector<ReluNetwork> pair{f, h}; // equal input dims; shared-input flavor
        CertifiedNet par = parallelize(pair, true);
        NetworkMetrics mp = metrics(par.net);
        const std::size_t lmax = std::max(mf.depth, mh.depth);
        c.expect(mp.depth == lmax, "depth(parallel) != max");
        c.expect(mp.width <= 2 * (mf.width + mh.width), "width(parallel) bound");
        c.expect(mp.size <= 2 * (mf.size + mh.size) + 2 * (lmax - mf.depth) * f.output_dim() +
                                2 * (lmax - mh.depth) * h.output_dim(),
                 "size(parallel) bound");

        CertifiedNet lin = linear_combination(pair, {1.5, -0.5}, true);
        NetworkMetrics mlin = metrics(lin.net);
        c.expect(mlin.depth == lmax, "depth(lincomb) != max");
        c.expect(mlin.width <= 2 * (mf.width + mh.width), "width(lincomb) bound");
        c.expect(mlin.size <= 2 * (mf.size + mh.size) + 2 * (lmax - mf.depth) * f.output_dim() +
                                  2 * (lmax - mh.depth) * h.output_dim(),
                 "size(lincomb) bound");

        for (int t = 0; t < 4; ++t) {
            std::vector<double> x{u(eng), u(eng), u(eng)};
            std::vector<double> nested = g.evaluate(f.evaluate(x));
            std::vector<double> merged = comp.net.evaluate(x);
            std::vector<double> spliced = sp.net.evaluate(x);
            for (std::size_t i = 0; i < nested.size(); ++i) {
                const double tol = 1e-9 * (1.0 + std::abs(nested[i]));
                c.expect(std::abs(merged[i] - nested[i]) <= tol, "compose evaluation mismatch");
                c.expect(std::abs(spliced[i] - nested[i]) <= tol,
                         "sparse compose evaluation mismatch");
            }
        }
    }
}

// ---------------------------------------------------------------- 3
void criterion_minmax(Check& c) {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (std::size_t n = 1; n <= 64; ++n) {
        CertifiedNet lo = minn_net(n);
        CertifiedNet hi = maxn_net(n);
        NetworkMetrics ml = metrics(lo.net);
        c.expect(ml.depth == ceil_log2(n), "depth(min_n) != ceil(log2 n)");
        c.expect(ml.size <= 16 * n, "size(min_n) > 16n");
        c.expect(ml.width <= 3 * n, "width(min_n) > 3n");
        c.expect(metrics(hi.net).size <= 16 * n, "size(max_n) > 16n");
        for (int t = 0; t < 200; ++t) {
            std::vector<double> x(n);
            for (double& v : x) v = u(eng);
            c.expect(std::abs(lo.net.evaluate(x)[0] - testkit::oracle_min(x)) <= 1e-12,
                     "min_n not exact at 1e-12");
            c.expect(std::abs(hi.net.evaluate(x)[0] - testkit::oracle_max(x)) <= 1e-12,
                     "max_n not exact at 1e-12");
        }
    }
}

// ---------------------------------------------------------------- 4
void criterion_square(Check& c) {
    for (std::size_t n = 1; n <= 10; ++n) {
        ReluNetwork s = square_net(n);
        const std::size_t nodes = std::size_t{1} << n;
        for (std::size_t k = 0; k <= nodes; ++k) {
            const double x = std::ldexp(static_cast<double>(k), -static_cast<int>(n));
            c.expect(std::abs(s.evaluate_scalar(x) - x * x) <= 1e-12,
                     "square interpolant not exact at dyadic nodes");
        }
        const double bound = std::ldexp(1.0, -2 * static_cast<int>(n) - 1);
        double sup = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double x = i / 10000.0;
            sup = std::max(sup, std::abs(x * x - s.evaluate_scalar(x)));
        }
        c.expect(sup <= bound, "square interpolant sup error exceeds 2^(-2n-1)");
    }
}

// ---------------------------------------------------------------- 5
void criterion_mult(Check& c) {
    for (double eps : {0.1, 0.01, 0.001}) {
        ReluNetwork g = mult_net(eps);
        double sup = 0.0;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                std::vector<double> xy{-1.0 + i / 100.0, -1.0 + j / 100.0};
                sup = std::max(sup, std::abs(xy[0] * xy[1] - g.evaluate(xy)[0]));
            }
        c.expect(sup <= eps, "product gadget sup error exceeds eps");
        for (int j = 0; j <= 200; ++j) {
            std::vector<double> axis{0.0, -1.0 + j / 100.0};
            c.expect(g.evaluate(axis)[0] == 0.0, "product gadget nonzero on the axis");
        }
    }
    for (std::size_t n : {3, 4, 5}) {
        for (double eps : {0.1, 0.02}) {
            ReluNetwork tree = multn_net(n, eps);
            double sup = 0.0;
            std::vector<std::size_t> idx(n, 0);
            const std::size_t per_axis = n <= 4 ? 7 : 5;
            std::vector<double> x(n);
            while (true) {
                for (std::size_t a = 0; a < n; ++a)
                    x[a] = -1.0 + 2.0 * idx[a] / double(per_axis - 1);
                sup = std::max(sup, std::abs(testkit::oracle_product(x) - tree.evaluate(x)[0]));
                std::size_t axis = 0;
                while (axis < n) {
                    if (++idx[axis] < per_axis) break;
                    idx[axis] = 0;
                    ++axis;
                }
                if (axis == n) break;
            }
            c.expect(sup <= eps, "n-factor product grid error exceeds eps");
        }
    }
}

// ---------------------------------------------------------------- 6
void criterion_cpwl(Check& c) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Cpwl1D f = testkit::random_cpwl_1d(seed, 8);
        ReluNetwork net = compile_cpwl(derive_maxmin_1d(f)).net;
        for (int i = 0; i <= 1000; ++i) {
            const double x = -4.0 + i * 8.0 / 1000.0;
            const double want = f.eval(x);
            c.expect(std::abs(net.evaluate_scalar(x) - want) <= 1e-9 * (1.0 + std::abs(want)),
                     "compiled cpwl differs from the symbolic function");
        }
        Segment seg({-4.0}, {4.0});
        PieceReport r = count_pieces_on_segment(net, seg);
        c.expect(r.exact_count <= r.upper_bound, "piece count exceeds the width-depth bound");
        c.expect(r.exact_count == testkit::oracle_pieces_1d(f, -4.0, 4.0),
                 "piece count differs from the symbolic count");
    }

    // Composition/sum piece bounds on gadget combinations.
    Segment unit({0.0}, {1.0});
    ReluNetwork h2 = sawtooth_net(2), h3 = sawtooth_net(3);
    const std::size_t p2 = count_pieces_on_segment(h2, unit).exact_count;
    const std::size_t p3 = count_pieces_on_segment(h3, unit).exact_count;
    c.expect(count_pieces_on_segment(compose(h3, h2).net, unit).exact_count <= p2 * p3,
             "composition piece bound fails");
    std::vector<ReluNetwork> pair{h2, h3};
    c.expect(count_pieces_on_segment(linear_combination(pair, {1.0, 1.0}, true).net, unit)
                     .exact_count <= p2 + p3 - 1,
             "sum piece bound fails");
}

// ---------------------------------------------------------------- 7
void criterion_simplicial(Check& c) {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> val(-1.0, 1.0), u01(0.0, 1.0);

    // 1D mesh with 64 elements, 2D Kuhn mesh with 2*15^2 = 450 elements.
    for (std::size_t d : {1, 2}) {
        const std::size_t M = d == 1 ? 64 : 15;
        Triangulation mesh = kuhn_mesh(d, 0, static_cast<long>(M), 1.0 / M,
                                       [](std::span<const long>) { return 0.0; });
        c.expect(mesh.element_count() <= 512, "mesh larger than intended");
        MeshTopology topo = MeshTopology::build(mesh);
        for (std::size_t v = 0; v < mesh.node_count(); ++v)
            if (!topo.boundary_node[v]) mesh.values[v] = val(eng);

        ReluNetwork net = compile_mesh(mesh).net;
        std::size_t checked = 0;
        while (checked < 1000) {
            std::vector<double> x(d);
            for (double& q : x) q = u01(eng);
            auto want = barycentric_eval(mesh, x);
            if (!want) continue;
            ++checked;
            c.expect(std::abs(net.evaluate(x)[0] - *want) <= 1e-9 * (1.0 + std::abs(*want)),
                     "mesh compilation differs from the barycentric oracle");
        }

        // Hat properties on every interior node of a coarser mesh.
        const std::size_t Mh = d == 1 ? 8 : 5;
        Triangulation hmesh = kuhn_mesh(d, 0, static_cast<long>(Mh), 1.0 / Mh,
                                        [](std::span<const long>) { return 0.0; });
        MeshTopology htopo = MeshTopology::build(hmesh);
        const std::size_t kt = k_T(hmesh);
        for (std::size_t v = 0; v < hmesh.node_count(); ++v) {
            if (htopo.boundary_node[v]) continue;
            CertifiedNet hat = hat_basis_net(hmesh, v, htopo);
            c.expect(is_locally_convex(hmesh, v, htopo), "Kuhn patch unexpectedly non-convex");
            c.expect(metrics(hat.net).size <= 4 * (2 + 16 * kt + kt * d),
                     "hat size exceeds 4(2+16kT+kT d)");
            c.expect(metrics(hat.net).depth <= 4 + ceil_log2(kt),
                     "hat depth exceeds 4+ceil(log2 kT)");
            for (std::size_t w = 0; w < hmesh.node_count(); ++w) {
                const double want = (w == v) ? 1.0 : 0.0;
                c.expect(std::abs(hat.net.evaluate(hmesh.vertices[w])[0] - want) <= 1e-9,
                         "hat violates the Kronecker property");
            }
            for (int t = 0; t < 50; ++t) {
                std::vector<double> x(d);
                for (double& q : x) q = -0.2 + 1.4 * u01(eng);
                c.expect(hat.net.evaluate(x)[0] >= -1e-9, "hat takes a negative value");
            }
            PatchInfo p = patch_info(hmesh, v, htopo);
            for (const auto& face : p.boundary_faces) {
                for (int t = 0; t < 10; ++t) {
                    std::vector<double> wts(face.size());
                    double sum = 0.0;
                    for (double& wq : wts) {
                        wq = u01(eng);
                        sum += wq;
                    }
                    std::vector<double> x(d, 0.0);
                    for (std::size_t i = 0; i < face.size(); ++i)
                        for (std::size_t q = 0; q < d; ++q)
                            x[q] += wts[i] / sum * hmesh.vertices[face[i]][q];
                    c.expect(std::abs(hat.net.evaluate(x)[0]) <= 1e-9,
                             "hat does not vanish on the patch boundary");
                }
            }
        }
    }
}

// ---------------------------------------------------------------- 8
void criterion_holder(Check& c) {
    struct Case {
        const char* name;
        std::function<double(double)> f;
        double s, bound;
    };
    const Case cases[] = {
        {"|x-1/3|", [](double x) { return std::abs(x - 1.0 / 3.0); }, 1.0, 2.0},
        {"sqrt|x-1/2|", [](double x) { return std::sqrt(std::abs(x - 0.5)); }, 0.5, 1.75},
    };
    for (const Case& cs : cases) {
        double first_err = 0.0, last_err = 0.0;
        for (std::size_t M : {4, 8, 16}) {
            HolderTarget target{[&cs](std::span<const double> x) { return cs.f(x[0]); }, cs.s,
                                cs.bound};
            HolderResult res = holder_interpolant(target, 1, M, 10001);
            c.expect(res.report.measured_sup_error <= res.report.error_bound,
                     std::string(cs.name) + ": interior error exceeds 2 d^{s/2} |f| M^{-s}");
            if (M == 4) first_err = res.report.measured_sup_error;
            if (M == 16) last_err = res.report.measured_sup_error;
        }
        c.expect(last_err < first_err, std::string(cs.name) + ": error does not shrink with M");
    }
}

// ---------------------------------------------------------------- 9
void criterion_cks(Check& c) {
    CksTarget square{[](std::span<const double> x, std::span<const std::size_t> alpha) {
                         switch (alpha[0]) {
                             case 0: return x[0] * x[0];
                             case 1: return 2.0 * x[0];
                             case 2: return 2.0;
                             default: return 0.0;
                         }
                     },
                     2, 0.0, 2.0};
    for (std::size_t N : {16, 64, 256}) {
        CksResult res = cks_net(square, 1, N, 2001);
        const double bound =
            std::pow(static_cast<double>(res.M), -2.0) + 3.0 * res.eps;
        c.expect(res.scaled_error <= bound, "scaled error exceeds M^-2 + 3 eps at N=" +
                                                std::to_string(N));
    }
}

// ---------------------------------------------------------------- 10
void criterion_lipschitz(Check& c) {
    std::mt19937_64 eng(10);
    std::uniform_real_distribution<double> u01(0.0, 1.0), lab(-1.0, 1.0);
    double c_depth = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = 1 + rep % 3;
        const std::size_t m = 2 + eng() % 11; // up to 12 points
        LipschitzSample sample;
        for (std::size_t k = 0; k < m; ++k) {
            std::vector<double> p(d);
            for (double& q : p) q = u01(eng);
            sample.points.push_back(std::move(p));
            sample.values.push_back(lab(eng));
        }
        double ymax = 0.0;
        for (double y : sample.values) ymax = std::max(ymax, std::abs(y));
        if (ymax > 0.0)
            for (double& y : sample.values) y *= 1.5 / ymax; // pin |y|_inf = 1.5
        sample.budget = 2.0 * sample.min_budget();

        CertifiedNet net = lipschitz_net(sample);
        for (std::size_t k = 0; k < m; ++k)
            c.expect(std::abs(net.net.evaluate(sample.points[k])[0] - sample.values[k]) <= 1e-9,
                     "reconstruction does not interpolate the data");
        for (int t = 0; t < 1000; ++t) {
            std::vector<double> x(d);
            for (double& q : x) q = -0.5 + 2.0 * u01(eng);
            const double want = lipschitz_bounds(sample, x).mid;
            c.expect(std::abs(net.net.evaluate(x)[0] - want) <= 1e-9 * (1.0 + std::abs(want)),
                     "reconstruction differs from the closed-form midpoint");
        }
        for (int t = 0; t < 10000; ++t) {
            std::vector<double> x(d), y(d);
            double dist = 0.0;
            for (std::size_t q = 0; q < d; ++q) {
                x[q] = -0.5 + 2.0 * u01(eng);
                y[q] = -0.5 + 2.0 * u01(eng);
                dist += std::abs(x[q] - y[q]);
            }
            if (dist == 0.0) continue;
            const double diff = std::abs(net.net.evaluate(x)[0] - net.net.evaluate(y)[0]);
            c.expect(diff / dist <= sample.budget + 1e-9,
                     "difference quotient exceeds the budget");
        }
        double ynorm = 0.0;
        for (double y : sample.values) ynorm = std::max(ynorm, std::abs(y));
        c.expect(max_abs_parameter(net.net) <= std::max(sample.budget, ynorm),
                 "a weight exceeds max(budget, |y|_inf)");

        const double depth_ratio =
            static_cast<double>(net.net.depth()) / (1.0 + std::log2(static_cast<double>(m)));
        c_depth = std::max(c_depth, depth_ratio);
        c.expect(net.net.depth() <= 2 * (1 + ceil_log2(m)), "depth grows faster than log m");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "depth constant c = %.3f", c_depth);
    c.note(buf);
}

// ---------------------------------------------------------------- 11
void criterion_regions(Check& c) {
    Segment unit({0.0}, {1.0});
    for (std::size_t n = 1; n <= 12; ++n) {
        PieceReport r = count_pieces_on_segment(sawtooth_net(n), unit);
        c.expect(r.exact_count == (std::size_t{1} << n), "sawtooth pieces != 2^n");
    }

    // Corpus bound check: gadgets, compiled cpwl, min trees.
    std::vector<ReluNetwork> corpus;
    for (std::size_t n : {1, 3, 6}) corpus.push_back(sawtooth_net(n));
    for (std::size_t n : {1, 4}) corpus.push_back(square_net(n));
    corpus.push_back(mult_net(0.05));
    for (std::uint64_t s = 0; s < 10; ++s)
        corpus.push_back(compile_cpwl(derive_maxmin_1d(testkit::random_cpwl_1d(s, 6))).net);
    for (const ReluNetwork& net : corpus) {
        std::vector<double> a(net.input_dim(), 0.0), b(net.input_dim(), 0.0);
        b[0] = 1.0;
        if (net.input_dim() > 1) b[net.input_dim() - 1] = 0.5;
        PieceReport r = count_pieces_on_segment(net, Segment(a, b));
        c.expect(r.exact_count <= r.upper_bound, "corpus network exceeds the piece bound");
    }

    Segment seg2({0.0, 0.0}, {1.0, 0.0});
    RandomBiasConfig shallow{he_weights({2, 5, 5, 5, 1}, 77), 0.5, 200, std::nullopt};
    RandomBiasStats s3 = random_bias_experiment(shallow, seg2, 2024);
    c.expect(s3.mean_pieces <= s3.bound, "mean pieces exceed the expectation bound (L=3)");

    RandomBiasConfig deep{he_weights({2, 5, 5, 5, 5, 5, 5, 1}, 78), 0.5, 200, std::nullopt};
    RandomBiasStats s6 = random_bias_experiment(deep, seg2, 2024);
    c.expect(s6.mean_pieces <= s6.bound, "mean pieces exceed the expectation bound (L=6)");
    c.expect(s6.mean_pieces <= 4.0 * s3.mean_pieces,
             "mean pieces grow super-linearly between L=3 and L=6");
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean(L=3) = %.2f, mean(L=6) = %.2f", s3.mean_pieces,
                  s6.mean_pieces);
    c.note(buf);
}

// ---------------------------------------------------------------- 12
struct CmdResult {
    int code = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult res;
    std::FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_cli(Check& c) {
    if (cli_path.empty()) {
        c.expect(false, "no --cli path given");
        return;
    }
    fs::path dir = fs::temp_directory_path() / "relucalc_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cd = "cd " + dir.string() + " && " + cli_path + " ";

    // Documents used by the commands below.
    {
        Triangulation mesh;
        mesh.dim = 1;
        mesh.vertices = {{0.0}, {0.5}, {1.0}};
        mesh.simplices = {{0, 1}, {1, 2}};
        mesh.values = {0.0, 1.0, 0.0};
        save_document((dir / "hat_mesh.json").string(), mesh_to_json(mesh));
        mesh.values = {0.5, 1.0, 0.0};
        save_document((dir / "bad_mesh.json").string(), mesh_to_json(mesh));

        CpwlSpec vee;
        vee.dim = 1;
        vee.pieces = {AffineMap({1.0}, 0.0), AffineMap({-1.0}, 0.0)};
        vee.maxmin = {{0}, {1}};
        save_document((dir / "vee.json").string(), cpwl_spec_to_json(vee));

        LipschitzSample two{{{0.0}, {1.0}}, {0.0, 1.0}, 1.0};
        save_document((dir / "two.json").string(), lipschitz_to_json(two));
        LipschitzSample bad{{{0.0}, {1.0}}, {0.0, 2.0}, 1.0};
        save_document((dir / "bad_sample.json").string(), lipschitz_to_json(bad));
    }

    const std::vector<std::string> commands = {
        "gadget square --n 3 -o sq3.json",
        "gadget min --n 1 -o min1.json",
        "gadget max --n 5 -o max5.json",
        "gadget identity --dim 2 --depth 2 --hexfloat -o id.json",
        "gadget sawtooth --n 4 -o saw4.json",
        "gadget mult --eps 0.01 -o mult.json",
        "gadget multn --n 3 --eps 0.1 -o m3.json",
        "gadget poly --coeffs 1,0,1 --eps 0.05 -o poly.json",
        "gadget square --n 4 -o sq4.json",
        "eval mult.json --at 0,1",
        "compile-cpwl vee.json -o vee_net.json",
        "eval vee_net.json --at -2",
        "compile-mesh hat_mesh.json -o hat_net.json",
        "eval hat_net.json --at 0.75",
        "lipschitz two.json -o lip_net.json",
        "eval lip_net.json --at 2",
        "verify sq4.json --against builtin:square --grid 10001 --tol 0.00195312500001",
        "verify vee_net.json --against maxmin:vee.json --grid 101 --report vee_report.csv",
        "verify hat_net.json --against mesh:hat_mesh.json --grid 101",
        "verify lip_net.json --against lipschitz:two.json --grid 101",
        "approx-hoelder --target abs-shift --s 1 --norm-bound 2 --M 4 --grid 201 -o hold.json "
        "--report hold.csv",
        "approx-cks --target square --k 2 --s 0 --norm-bound 2 --N 16 --grid 201 -o cks.json",
        "count-regions sq3.json --from 0 --to 1",
        "count-regions saw4.json --from 0 --to 1",
        "random-pieces --widths 2,5,5,1 --delta 0.5 --trials 20 --seed 7 --csv pieces.csv",
    };
    const std::vector<std::string> artifacts = {
        "sq3.json",       "sq3.cert.json", "min1.json",    "min1.cert.json",
        "max5.json",      "max5.cert.json", "id.json",     "id.cert.json",
        "saw4.json",      "saw4.cert.json", "mult.json",   "mult.cert.json",
        "m3.json",        "m3.cert.json",  "poly.json",    "poly.cert.json",
        "vee_net.json",   "vee_net.cert.json", "hat_net.json", "hat_net.cert.json",
        "lip_net.json",   "lip_net.cert.json", "hold.json", "hold.cert.json",
        "hold.csv",       "cks.json",      "cks.cert.json", "vee_report.csv",
        "pieces.csv",
    };

    std::vector<std::string> first_out, first_files;
    for (int round = 0; round < 2; ++round) {
        std::vector<std::string> outs, files;
        for (const std::string& cmd : commands) {
            CmdResult r = run_cmd(cd + cmd);
            c.expect(r.code == 0, "command failed: " + cmd);
            outs.push_back(r.out);
        }
        for (const std::string& name : artifacts) files.push_back(slurp(dir / name));
        if (round == 0) {
            first_out = std::move(outs);
            first_files = std::move(files);
        } else {
            c.expect(first_out == outs, "stdout differs between identical runs");
            c.expect(first_files == files, "output files differ between identical runs");
        }
    }

    // Spot-check the documented values.
    c.expect(first_out[9] == "0\n", "product gadget at (0,1) should print 0");
    c.expect(first_out[11] == "2\n", "compiled |x| at -2 should print 2");
    c.expect(first_out[13] == "0.5\n", "compiled hat at 0.75 should print 0.5");
    c.expect(first_out[15] == "1\n", "reconstruction at 2 should print 1");
    c.expect(first_out[22].find("pieces 8") == 0, "square region count should report 8");
    c.expect(first_out[23].find("pieces 16") == 0, "sawtooth region count should report 16");
    c.expect(network_from_json(load_document((dir / "sq3.json").string())).depth() == 3,
             "square gadget document should hold a depth-3 network");
    c.expect(network_from_json(load_document((dir / "min1.json").string())).depth() == 0,
             "min with n=1 should be a depth-0 affine map");

    // Documented exit codes on crafted violations.
    c.expect(run_cmd(cd + "gadget mult --eps 2 -o x.json").code == 2,
             "gadget with bad eps should exit 2");
    c.expect(run_cmd(cd + "gadget sawtooth -o x.json").code == 2,
             "missing required flag should exit 2");
    c.expect(run_cmd(cd + "compile-mesh bad_mesh.json -o x.json").code == 3,
             "nonzero boundary values should exit 3");
    c.expect(run_cmd(cd + "lipschitz bad_sample.json -o x.json").code == 3,
             "budget below the data minimum should exit 3");
    c.expect(run_cmd(cd + "verify sq4.json --against builtin:square --grid 101 --tol 1e-9").code ==
                 4,
             "verification beyond tolerance should exit 4");
    c.expect(run_cmd(cd + "eval hat_net.json --at 0.5,0.5").code == 3,
             "evaluating with the wrong dimension should exit 3");
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "identity exactness and size", criterion_identity},
        {2, "calculus bookkeeping", criterion_calculus},
        {3, "min/max trees", criterion_minmax},
        {4, "square interpolant", criterion_square},
        {5, "product gadgets", criterion_mult},
        {6, "cpwl compiler round trip", criterion_cpwl},
        {7, "simplicial compiler", criterion_simplicial},
        {8, "Hoelder interpolation bound", criterion_holder},
        {9, "C^{k,s} additive bound", criterion_cks},
        {10, "optimal Lipschitz reconstruction", criterion_lipschitz},
        {11, "region counting", criterion_regions},
        {12, "CLI determinism and exit codes", criterion_cli},
    };

    bool all_ok = true;
    for (const Criterion& cr : criteria) {
        if (only != 0 && cr.id != only) continue;
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %02d %s%s%s (%.2fs)\n", check.ok ? "PASS" : "FAIL", cr.id, cr.name,
                    check.detail.empty() ? "" : ": ", check.detail.c_str(), secs);
        all_ok = all_ok && check.ok;
    }
    return all_ok ? 0 : 1;
}
