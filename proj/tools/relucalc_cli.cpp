// Command-line front end: constructors, compilers, verifiers, and the
// region-counting experiments, all reading and writing the JSON documents
// described in the README. Exit codes: 0 success, 2 usage error,
// 3 violated data precondition, 4 verification failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relucalc/relucalc.hpp"

namespace rc = relucalc;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_vector(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        try {
            out.push_back(std::stod(csv.substr(pos, next - pos)));
        } catch (const std::exception&) {
            throw rc::InputError("cannot parse number list '" + csv + "'");
        }
        pos = next + 1;
    }
    if (out.empty()) throw rc::InputError("empty number list");
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
    std::vector<std::size_t> out;
    for (double v : parse_vector(csv)) {
        if (v < 1 || v != std::floor(v)) throw rc::InputError("expected positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string sidecar_path(const std::string& out) {
    const std::string suffix = ".json";
    if (out.size() > suffix.size() && out.substr(out.size() - suffix.size()) == suffix)
        return out.substr(0, out.size() - suffix.size()) + ".cert.json";
    return out + ".cert.json";
}

void write_network(const std::string& path, const rc::ReluNetwork& net, bool hexfloat,
                   const std::optional<rc::BoundCertificate>& cert,
                   const rc::json& extra = rc::json::object()) {
    rc::save_document(path, rc::network_to_json(net, hexfloat));
    rc::json side;
    side["metrics"] = rc::metrics_to_json(rc::metrics(net));
    if (cert) side["certificate"] = rc::certificate_to_json(*cert);
    for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
    rc::save_document(sidecar_path(path), side);
    std::printf("wrote %s and %s\n", path.c_str(), sidecar_path(path).c_str());
}

// Built-in scalar targets on [0,1]; derivatives up to order 2 where the
// target is smooth enough.
struct BuiltinTarget {
    std::function<double(double)> f;
    std::vector<std::function<double(double)>> derivs; // f', f''
};

BuiltinTarget builtin_target(const std::string& name) {
    const double pi = std::acos(-1.0);
    if (name == "const")
        return {[](double) { return 0.7; },
                {[](double) { return 0.0; }, [](double) { return 0.0; }}};
    if (name == "linear")
        return {[](double x) { return x; },
                {[](double) { return 1.0; }, [](double) { return 0.0; }}};
    if (name == "abs-shift") return {[](double x) { return std::abs(x - 1.0 / 3.0); }, {}};
    if (name == "square")
        return {[](double x) { return x * x; },
                {[](double x) { return 2.0 * x; }, [](double) { return 2.0; }}};
    if (name == "sin-pi")
        return {[pi](double x) { return std::sin(pi * x); },
                {[pi](double x) { return pi * std::cos(pi * x); },
                 [pi](double x) { return -pi * pi * std::sin(pi * x); }}};
    throw rc::InputError("unknown builtin target '" + name +
                         "' (known: const, linear, abs-shift, square, sin-pi)");
}

struct VerifySettings {
    std::string net_path, against, report_path;
    std::size_t grid = 101;
    double tol = 1e-9;
};

int run_verify(const VerifySettings& vs) {
    rc::ReluNetwork net = rc::network_from_json(rc::load_document(vs.net_path));
    const std::size_t d = net.input_dim();
    if (net.output_dim() != 1)
        throw rc::PreconditionError("verify: network must have one output");

    const std::size_t colon = vs.against.find(':');
    if (colon == std::string::npos)
        throw rc::InputError("--against must look like kind:argument");
    const std::string kind = vs.against.substr(0, colon);
    const std::string arg = vs.against.substr(colon + 1);

    std::function<std::optional<double>(std::span<const double>)> oracle;
    std::vector<double> lo(d, -1.0), hi(d, 1.0);

    if (kind == "builtin") {
        if (d != 1)
            throw rc::PreconditionError("verify: builtin oracles expect a one-input network");
        BuiltinTarget target = builtin_target(arg);
        oracle = [target](std::span<const double> x) -> std::optional<double> {
            return target.f(x[0]);
        };
        lo.assign(1, 0.0);
        hi.assign(1, 1.0);
    } else if (kind == "maxmin") {
        rc::CpwlSpec spec = rc::cpwl_spec_from_json(rc::load_document(arg));
        if (spec.maxmin.empty())
            throw rc::PreconditionError("verify: cpwl document carries no max-min form");
        if (spec.dim != d)
            throw rc::PreconditionError("verify: oracle dimension " + std::to_string(spec.dim) +
                                        " does not match network input " + std::to_string(d));
        if (spec.domain) {
            lo = spec.domain->lo;
            hi = spec.domain->hi;
        }
        oracle = [spec](std::span<const double> x) -> std::optional<double> {
            return rc::eval_maxmin(spec, x);
        };
    } else if (kind == "mesh") {
        rc::Triangulation mesh = rc::mesh_from_json(rc::load_document(arg));
        if (mesh.dim != d)
            throw rc::PreconditionError("verify: oracle dimension " + std::to_string(mesh.dim) +
                                        " does not match network input " + std::to_string(d));
        lo.assign(d, std::numeric_limits<double>::infinity());
        hi.assign(d, -std::numeric_limits<double>::infinity());
        for (const auto& v : mesh.vertices)
            for (std::size_t c = 0; c < d; ++c) {
                lo[c] = std::min(lo[c], v[c]);
                hi[c] = std::max(hi[c], v[c]);
            }
        oracle = [mesh](std::span<const double> x) { return rc::barycentric_eval(mesh, x); };
    } else if (kind == "lipschitz") {
        rc::LipschitzSample sample = rc::lipschitz_from_json(rc::load_document(arg));
        sample.validate();
        if (sample.dim() != d)
            throw rc::PreconditionError("verify: oracle dimension " +
                                        std::to_string(sample.dim()) +
                                        " does not match network input " + std::to_string(d));
        lo.assign(d, std::numeric_limits<double>::infinity());
        hi.assign(d, -std::numeric_limits<double>::infinity());
        for (const auto& p : sample.points)
            for (std::size_t c = 0; c < d; ++c) {
                lo[c] = std::min(lo[c], p[c]);
                hi[c] = std::max(hi[c], p[c]);
            }
        for (std::size_t c = 0; c < d; ++c) {
            const double pad = 0.25 * (1.0 + hi[c] - lo[c]);
            lo[c] -= pad;
            hi[c] += pad;
        }
        oracle = [sample](std::span<const double> x) -> std::optional<double> {
            return rc::lipschitz_bounds(sample, x).mid;
        };
    } else {
        throw rc::InputError("unknown oracle kind '" + kind +
                             "' (known: maxmin, mesh, lipschitz, builtin)");
    }

    std::FILE* report = nullptr;
    if (!vs.report_path.empty()) {
        report = std::fopen(vs.report_path.c_str(), "w");
        if (!report) throw rc::ParseError(vs.report_path + ": cannot open for writing");
        for (std::size_t c = 0; c < d; ++c) std::fprintf(report, "x%zu,", c + 1);
        std::fprintf(report, "f,phi,abs_error\n");
    }

    double max_err = 0.0;
    std::size_t used = 0;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
        for (std::size_t c = 0; c < d; ++c)
            x[c] = lo[c] + (hi[c] - lo[c]) *
                               (vs.grid == 1 ? 0.5 : static_cast<double>(idx[c]) / (vs.grid - 1));
        std::optional<double> want = oracle(x);
        if (want) {
            const double got = net.evaluate(x)[0];
            const double err = std::abs(got - *want);
            max_err = std::max(max_err, err);
            ++used;
            if (report) {
                for (std::size_t c = 0; c < d; ++c) std::fprintf(report, "%s,", fmt(x[c]).c_str());
                std::fprintf(report, "%s,%s,%s\n", fmt(*want).c_str(), fmt(got).c_str(),
                             fmt(err).c_str());
            }
        }
        std::size_t axis = 0;
        while (axis < d) {
            if (++idx[axis] < vs.grid) break;
            idx[axis] = 0;
            ++axis;
        }
        if (axis == d) break;
    }
    if (report) std::fclose(report);

    std::printf("points %zu\nmax_abs_error %s\ntolerance %s\n%s\n", used, fmt(max_err).c_str(),
                fmt(vs.tol).c_str(), max_err <= vs.tol ? "PASS" : "FAIL");
    return max_err <= vs.tol ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relucalc: constructive ReLU network toolkit"};
    app.require_subcommand(1);
    std::function<int()> run;

    // ---- gadget ------------------------------------------------------
    auto* gadget = app.add_subcommand("gadget", "build a named network gadget");
    gadget->require_subcommand(1);
    std::string g_out = "net.json";
    bool g_hex = false;
    std::size_t g_dim = 1, g_depth = 1, g_n = 1;
    double g_eps = 0.1;
    std::string g_coeffs;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", g_out, "network document to write");
        cmd->add_flag("--hexfloat", g_hex, "encode numbers as hex-float strings");
    };
    auto* g_id = gadget->add_subcommand("identity", "exact identity network");
    g_id->add_option("--dim", g_dim, "input dimension")->required();
    g_id->add_option("--depth", g_depth, "depth")->required();
    add_common(g_id);
    g_id->callback([&] {
        run = [&] {
            rc::CertifiedNet c = rc::identity_net(g_dim, g_depth);
            write_network(g_out, c.net, g_hex, c.cert);
            return 0;
        };
    });
    auto* g_min = gadget->add_subcommand("min", "exact minimum of n inputs");
    g_min->add_option("--n", g_n, "fan-in")->required();
    add_common(g_min);
    g_min->callback([&] {
        run = [&] {
            rc::CertifiedNet c = rc::minn_net(g_n);
            write_network(g_out, c.net, g_hex, c.cert);
            return 0;
        };
    });
    auto* g_max = gadget->add_subcommand("max", "exact maximum of n inputs");
    g_max->add_option("--n", g_n, "fan-in")->required();
    add_common(g_max);
    g_max->callback([&] {
        run = [&] {
            rc::CertifiedNet c = rc::maxn_net(g_n);
            write_network(g_out, c.net, g_hex, c.cert);
            return 0;
        };
    });
    auto* g_saw = gadget->add_subcommand("sawtooth", "n-fold hat composition");
    g_saw->add_option("--n", g_n, "composition count")->required();
    add_common(g_saw);
    g_saw->callback([&] {
        run = [&] {
            write_network(g_out, rc::sawtooth_net(g_n), g_hex, std::nullopt);
            return 0;
        };
    });
    auto* g_sq = gadget->add_subcommand("square", "interpolant of x^2 at level n");
    g_sq->add_option("--n", g_n, "refinement level")->required();
    add_common(g_sq);
    g_sq->callback([&] {
        run = [&] {
            write_network(g_out, rc::square_net(g_n), g_hex, std::nullopt);
            return 0;
        };
    });
    auto* g_mult = gadget->add_subcommand("mult", "approximate product of two factors");
    g_mult->add_option("--eps", g_eps, "sup-error budget on [-1,1]^2")->required();
    add_common(g_mult);
    g_mult->callback([&] {
        run = [&] {
            rc::json extra;
            extra["eps"] = g_eps;
            write_network(g_out, rc::mult_net(g_eps), g_hex, std::nullopt, extra);
            return 0;
        };
    });
    auto* g_multn = gadget->add_subcommand("multn", "approximate product of n factors");
    g_multn->add_option("--n", g_n, "fan-in")->required();
    g_multn->add_option("--eps", g_eps, "sup-error budget on [-1,1]^n")->required();
    add_common(g_multn);
    g_multn->callback([&] {
        run = [&] {
            rc::json extra;
            extra["eps"] = g_eps;
            write_network(g_out, rc::multn_net(g_n, g_eps), g_hex, std::nullopt, extra);
            return 0;
        };
    });
    auto* g_poly = gadget->add_subcommand("poly", "polynomial emulation on [-1,1]");
    g_poly->add_option("--coeffs", g_coeffs, "comma list c0,c1,...")->required();
    g_poly->add_option("--eps", g_eps, "per-monomial budget");
    add_common(g_poly);
    g_poly->callback([&] {
        run = [&] {
            rc::PolynomialNet p = rc::polynomial_net(parse_vector(g_coeffs), g_eps);
            rc::json extra;
            extra["eps"] = g_eps;
            extra["measured_sup_error"] = p.measured_sup_error;
            write_network(g_out, p.net, g_hex, std::nullopt, extra);
            return 0;
        };
    });

    // ---- compilers ----------------------------------------------------
    std::string in_path, out_path = "net.json";
    auto* ccpwl = app.add_subcommand("compile-cpwl", "compile a max-min cpwl document");
    ccpwl->add_option("spec", in_path, "cpwl document")->required();
    ccpwl->add_option("-o,--output", out_path, "network document to write");
    ccpwl->callback([&] {
        run = [&] {
            rc::CpwlSpec spec = rc::cpwl_spec_from_json(rc::load_document(in_path));
            if (spec.maxmin.empty())
                throw rc::PreconditionError(
                    "compile-cpwl: document carries no max-min form (max-min representation "
                    "required)");
            rc::CertifiedNet c = rc::compile_cpwl(spec);
            write_network(out_path, c.net, false, c.cert);
            return 0;
        };
    });
    auto* cmesh = app.add_subcommand("compile-mesh", "compile mesh nodal values");
    cmesh->add_option("mesh", in_path, "mesh document")->required();
    cmesh->add_option("-o,--output", out_path, "network document to write");
    cmesh->callback([&] {
        run = [&] {
            rc::Triangulation mesh = rc::mesh_from_json(rc::load_document(in_path));
            rc::CertifiedNet c = rc::compile_mesh(mesh);
            rc::json extra;
            extra["elements"] = mesh.element_count();
            write_network(out_path, c.net, false, c.cert, extra);
            return 0;
        };
    });
    auto* clip = app.add_subcommand("lipschitz", "optimal Lipschitz reconstruction network");
    clip->add_option("data", in_path, "sample document")->required();
    clip->add_option("-o,--output", out_path, "network document to write");
    clip->callback([&] {
        run = [&] {
            rc::LipschitzSample sample = rc::lipschitz_from_json(rc::load_document(in_path));
            rc::CertifiedNet c = rc::lipschitz_net(sample);
            rc::json extra;
            extra["max_abs_parameter"] = rc::max_abs_parameter(c.net);
            write_network(out_path, c.net, false, c.cert, extra);
            return 0;
        };
    });

    // ---- eval / verify ---------------------------------------------------
    std::string at_csv;
    auto* ev = app.add_subcommand("eval", "evaluate a network document at a point");
    ev->add_option("net", in_path, "network document")->required();
    ev->add_option("--at", at_csv, "comma-separated input")->required();
    ev->callback([&] {
        run = [&] {
            rc::ReluNetwork net = rc::network_from_json(rc::load_document(in_path));
            std::vector<double> y = net.evaluate(parse_vector(at_csv));
            std::string line;
            for (std::size_t i = 0; i < y.size(); ++i) line += (i ? " " : "") + fmt(y[i]);
            std::printf("%s\n", line.c_str());
            return 0;
        };
    });

    VerifySettings vs;
    auto* vf = app.add_subcommand("verify", "compare a network against an oracle on a grid");
    vf->add_option("net", vs.net_path, "network document")->required();
    vf->add_option("--against", vs.against,
                   "oracle: maxmin:f.json | mesh:f.json | lipschitz:f.json | builtin:<name>")
        ->required();
    vf->add_option("--grid", vs.grid, "grid points per axis");
    vf->add_option("--tol", vs.tol, "pass/fail tolerance");
    vf->add_option("--report", vs.report_path, "CSV error report to write");
    vf->callback([&] {
        run = [&] { return run_verify(vs); };
    });

    // ---- approximators -------------------------------------------------
    std::string target_name = "square";
    double t_s = 1.0, t_norm = 1.0;
    std::size_t t_M = 4, t_k = 2, t_N = 16, t_d = 1, t_grid = 0;
    std::string report_path;

    auto* ah = app.add_subcommand("approx-hoelder", "uniform-mesh interpolant of a builtin target");
    ah->add_option("--target", target_name, "builtin target name")->required();
    ah->add_option("--s", t_s, "Hoelder exponent in (0,1]");
    ah->add_option("--norm-bound", t_norm, "certified Hoelder norm bound")->required();
    ah->add_option("--M", t_M, "mesh resolution")->required();
    ah->add_option("--d", t_d, "dimension (target reads the first coordinate)");
    ah->add_option("--grid", t_grid, "measurement grid per axis");
    ah->add_option("-o,--output", out_path, "network document to write");
    ah->add_option("--report", report_path, "CSV error report to write");
    ah->callback([&] {
        run = [&] {
            BuiltinTarget bt = builtin_target(target_name);
            rc::HolderTarget target{[bt](std::span<const double> x) { return bt.f(x[0]); }, t_s,
                                    t_norm};
            rc::HolderResult res = rc::holder_interpolant(target, t_d, t_M, t_grid);
            rc::json extra;
            extra["measured_sup_error"] = res.report.measured_sup_error;
            extra["error_bound"] = res.report.error_bound;
            extra["elements"] = res.elements;
            write_network(out_path, res.compiled.net, false, res.compiled.cert, extra);
            if (!report_path.empty()) {
                std::FILE* f = std::fopen(report_path.c_str(), "w");
                if (!f) throw rc::ParseError(report_path + ": cannot open for writing");
                std::fprintf(f, "x1,f,phi,abs_error\n");
                const std::size_t n = t_grid ? t_grid : 2001;
                const double h = 1.0 / static_cast<double>(t_M);
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = h + (1.0 - 2.0 * h) * i / (n - 1);
                    const double want = bt.f(x);
                    const double got = res.compiled.net.evaluate_scalar(x);
                    std::fprintf(f, "%s,%s,%s,%s\n", fmt(x).c_str(), fmt(want).c_str(),
                                 fmt(got).c_str(), fmt(std::abs(want - got)).c_str());
                }
                std::fclose(f);
            }
            std::printf("measured_sup_error %s\nerror_bound %s\n",
                        fmt(res.report.measured_sup_error).c_str(),
                        fmt(res.report.error_bound).c_str());
            return 0;
        };
    });

    auto* ac =
        app.add_subcommand("approx-cks", "partition-of-unity approximator of a builtin target");
    ac->add_option("--target", target_name, "builtin target name")->required();
    ac->add_option("--k", t_k, "Taylor order");
    ac->add_option("--s", t_s, "Hoelder exponent of the top derivatives");
    ac->add_option("--norm-bound", t_norm, "certified C^{k,s} norm bound")->required();
    ac->add_option("--N", t_N, "size parameter")->required();
    ac->add_option("--grid", t_grid, "measurement grid per axis");
    ac->add_option("-o,--output", out_path, "network document to write");
    ac->add_option("--report", report_path, "CSV error report to write");
    ac->callback([&] {
        run = [&] {
            BuiltinTarget bt = builtin_target(target_name);
            if (bt.derivs.size() < t_k)
                throw rc::InputError("target '" + target_name +
                                     "' does not provide derivatives up to order " +
                                     std::to_string(t_k));
            rc::CksTarget target{
                [bt](std::span<const double> x, std::span<const std::size_t> alpha) {
                    const std::size_t order = alpha[0];
                    if (order == 0) return bt.f(x[0]);
                    return bt.derivs[order - 1](x[0]);
                },
                t_k, t_s, t_norm};
            rc::CksResult res = rc::cks_net(target, 1, t_N, t_grid);
            rc::json extra;
            extra["M"] = res.M;
            extra["eps"] = res.eps;
            extra["scale"] = res.scale;
            extra["measured_sup_error"] = res.report.measured_sup_error;
            extra["scaled_error"] = res.scaled_error;
            extra["error_bound"] = res.report.error_bound;
            write_network(out_path, res.net, false, std::nullopt, extra);
            if (!report_path.empty()) {
                std::FILE* f = std::fopen(report_path.c_str(), "w");
                if (!f) throw rc::ParseError(report_path + ": cannot open for writing");
                std::fprintf(f, "x1,f,phi,abs_error\n");
                const std::size_t n = t_grid ? t_grid : 2001;
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = static_cast<double>(i) / (n - 1);
                    const double want = bt.f(x);
                    const double got = res.net.evaluate_scalar(x);
                    std::fprintf(f, "%s,%s,%s,%s\n", fmt(x).c_str(), fmt(want).c_str(),
                                 fmt(got).c_str(), fmt(std::abs(want - got)).c_str());
                }
                std::fclose(f);
            }
            std::printf("M %zu\neps %s\nscaled_error %s\nerror_bound %s\n", res.M,
                        fmt(res.eps).c_str(), fmt(res.scaled_error).c_str(),
                        fmt(res.report.error_bound).c_str());
            return 0;
        };
    });

    // ---- region counting ------------------------------------------------
    std::string from_csv, to_csv, csv_path, widths_csv, weights_path;
    double delta = 0.5;
    std::size_t trials = 100;
    std::uint64_t seed = 1;

    auto* cr = app.add_subcommand("count-regions", "exact pieces of a network on a segment");
    cr->add_option("net", in_path, "network document")->required();
    cr->add_option("--from", from_csv, "segment start (comma list)")->required();
    cr->add_option("--to", to_csv, "segment end (comma list)")->required();
    cr->callback([&] {
        run = [&] {
            rc::ReluNetwork net = rc::network_from_json(rc::load_document(in_path));
            rc::Segment seg(parse_vector(from_csv), parse_vector(to_csv));
            rc::PieceReport r = rc::count_pieces_on_segment(net, seg);
            std::printf("pieces %zu\nupper_bound %llu\n", r.exact_count,
                        static_cast<unsigned long long>(r.upper_bound));
            return 0;
        };
    });

    auto* rp = app.add_subcommand("random-pieces", "piece statistics of random-bias networks");
    rp->add_option("--widths", widths_csv, "architecture, e.g. 2,5,5,5,1");
    rp->add_option("--weights", weights_path, "network document supplying fixed weights");
    rp->add_option("--delta", delta, "bias half-interval scale in (0,1]");
    rp->add_option("--trials", trials, "number of bias draws");
    rp->add_option("--seed", seed, "random seed");
    rp->add_option("--from", from_csv, "segment start (default origin)");
    rp->add_option("--to", to_csv, "segment end (default unit step on axis 1)");
    rp->add_option("--csv", csv_path, "per-trial CSV to write");
    rp->callback([&] {
        run = [&] {
            rc::RandomBiasConfig cfg;
            cfg.delta = delta;
            cfg.trials = trials;
            if (!weights_path.empty()) {
                rc::ReluNetwork net = rc::network_from_json(rc::load_document(weights_path));
                for (std::size_t l = 0; l < net.layer_count(); ++l)
                    cfg.weights.push_back(net.layer(l).weights);
            } else if (!widths_csv.empty()) {
                cfg.weights = rc::he_weights(parse_sizes(widths_csv), seed);
            } else {
                throw rc::InputError("random-pieces: pass --widths or --weights");
            }
            const std::size_t d = cfg.weights.front().cols();
            std::vector<double> from(d, 0.0), to(d, 0.0);
            to[0] = 1.0;
            if (!from_csv.empty()) from = parse_vector(from_csv);
            if (!to_csv.empty()) to = parse_vector(to_csv);
            rc::RandomBiasStats stats =
                rc::random_bias_experiment(cfg, rc::Segment(from, to), seed);
            if (!csv_path.empty()) {
                std::FILE* f = std::fopen(csv_path.c_str(), "w");
                if (!f) throw rc::ParseError(csv_path + ": cannot open for writing");
                std::fprintf(f, "trial,pieces\n");
                for (std::size_t t = 0; t < stats.counts.size(); ++t)
                    std::fprintf(f, "%zu,%zu\n", t, stats.counts[t]);
                std::fclose(f);
            }
            std::printf("mean_pieces %s\nbound %s\nc_nu %s\n", fmt(stats.mean_pieces).c_str(),
                        fmt(stats.bound).c_str(), fmt(stats.c_nu).c_str());
            return 0;
        };
    });

    bool is_gadget_like = false;
    try {
        app.parse(argc, argv);
        is_gadget_like = gadget->parsed() || ah->parsed() || ac->parsed();
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const rc::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        return run();
    } catch (const rc::PreconditionError& e) {
        std::fprintf(stderr, "precondition violated: %s\n", e.what());
        return 3;
    } catch (const rc::ParseError& e) {
        std::fprintf(stderr, "document error: %s\n", e.what());
        return 3;
    } catch (const rc::UnsupportedError& e) {
        std::fprintf(stderr, "unsupported: %s\n", e.what());
        return 3;
    } catch (const rc::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_gadget_like ? 2 : 3;
    } catch (const rc::InternalError& e) {
        std::fprintf(stderr, "internal error (library bug): %s\n", e.what());
        return 1;
    }
}
