#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "relucalc/calculus.hpp"
#include "relucalc/minmax.hpp"
#include "relucalc/serialize.hpp"
#include "relucalc/testkit.hpp"

using namespace relucalc;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool networks_bit_equal(const ReluNetwork& a, const ReluNetwork& b) {
    if (a.input_dim() != b.input_dim() || a.layer_count() != b.layer_count()) return false;
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
        const LayerParams& la = a.layer(l);
        const LayerParams& lb = b.layer(l);
        if (la.out_dim() != lb.out_dim() || la.in_dim() != lb.in_dim()) return false;
        for (std::size_t r = 0; r < la.out_dim(); ++r) {
            if (!bit_equal(la.bias[r], lb.bias[r])) return false;
            for (std::size_t c = 0; c < la.in_dim(); ++c)
                if (!bit_equal(la.weights.at(r, c), lb.weights.at(r, c))) return false;
        }
    }
    return true;
}

ReluNetwork awkward_net() {
    // Entries without short decimal expansions.
    Matrix w0 = Matrix::from_rows({{0.1, 1.0 / 3.0}, {-2.5e-17, 7.1e11}});
    Matrix w1 = Matrix::from_rows({{std::nextafter(1.0, 2.0), -0.3}});
    std::vector<LayerParams> layers;
    layers.emplace_back(std::move(w0), std::vector<double>{1e-300, 0.2});
    layers.emplace_back(std::move(w1), std::vector<double>{-1.0 / 7.0});
    return ReluNetwork(2, std::move(layers));
}

} // namespace

TEST_CASE("network documents round-trip bit-exactly") {
    ReluNetwork id = identity_net(2, 1).net;
    CHECK(networks_bit_equal(network_from_json(network_to_json(id)), id));

    ReluNetwork nasty = awkward_net();
    CHECK(networks_bit_equal(network_from_json(network_to_json(nasty, false)), nasty));
    CHECK(networks_bit_equal(network_from_json(network_to_json(nasty, true)), nasty));

    // Text round trip, as the CLI writes it.
    const std::string text = network_to_json(nasty).dump(2);
    CHECK(networks_bit_equal(network_from_json(parse_document(text, "mem")), nasty));
}

TEST_CASE("reparsed gadgets keep their metrics") {
    ReluNetwork back = network_from_json(network_to_json(min2_net()));
    CHECK(metrics(back).size == 7);
    CHECK(metrics(back).depth == 1);
}

TEST_CASE("parse errors name the offending layer") {
    json doc = network_to_json(identity_net(2, 1).net);
    doc["layers"][1]["weights"][0] = json::array({1.0, 0.0, 5.0}); // wrong row length
    try {
        network_from_json(doc);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
    }

    json bias_mismatch = network_to_json(identity_net(2, 1).net);
    bias_mismatch["layers"][0]["bias"] = json::array({0.0});
    CHECK_THROWS_AS(network_from_json(bias_mismatch), ParseError);

    CHECK_THROWS_AS(parse_document("{not json", "buf"), ParseError);
    CHECK_THROWS_AS(network_from_json(json::object()), ParseError);
}

TEST_CASE("cpwl documents use one-based max-min indices") {
    CpwlSpec spec;
    spec.dim = 1;
    spec.pieces = {AffineMap({1.0}, 0.0), AffineMap({-1.0}, 0.0)};
    spec.maxmin = {{0}, {1}};
    json doc = cpwl_spec_to_json(spec);
    CHECK(doc["maxmin"][0][0] == 1);
    CHECK(doc["maxmin"][1][0] == 2);

    CpwlSpec back = cpwl_spec_from_json(doc);
    CHECK(back.maxmin == spec.maxmin);
    CHECK(back.pieces.size() == 2);

    doc["maxmin"][0][0] = 3; // out of range for two pieces
    CHECK_THROWS_AS(cpwl_spec_from_json(doc), ParseError);
}

TEST_CASE("breakpoint, mesh, and sample documents round-trip") {
    Cpwl1D f({0.0, 1.0}, {0.5, 1.5}, -1.0, 2.0);
    Cpwl1D back = cpwl1d_from_json(cpwl1d_to_json(f));
    CHECK(back.breakpoints() == f.breakpoints());
    CHECK(back.values() == f.values());
    CHECK(back.left_slope() == f.left_slope());

    Triangulation mesh;
    mesh.dim = 1;
    mesh.vertices = {{0.0}, {0.5}, {1.0}};
    mesh.simplices = {{0, 1}, {1, 2}};
    mesh.values = {0.0, 1.0, 0.0};
    Triangulation mback = mesh_from_json(mesh_to_json(mesh));
    CHECK(mback.vertices == mesh.vertices);
    CHECK(mback.simplices == mesh.simplices);

    json bad_mesh = mesh_to_json(mesh);
    bad_mesh["simplices"][0] = json::array({0, 7});
    CHECK_THROWS_AS(mesh_from_json(bad_mesh), ParseError);

    LipschitzSample sample{{{0.0}, {1.0}}, {0.0, 1.0}, 1.5};
    LipschitzSample sback = lipschitz_from_json(lipschitz_to_json(sample));
    CHECK(sback.points == sample.points);
    CHECK(sback.budget == sample.budget);
    CHECK_THROWS_AS(lipschitz_from_json(json::object()), ParseError);
}
