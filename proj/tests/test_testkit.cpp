#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relucalc/testkit.hpp"

using namespace relucalc;
using testkit::Tol;

TEST_CASE("random cpwl fixtures are deterministic, continuous, and bounded") {
    Cpwl1D a = testkit::random_cpwl_1d(1, 6);
    Cpwl1D b = testkit::random_cpwl_1d(1, 6);
    CHECK(a.breakpoints() == b.breakpoints());
    CHECK(a.values() == b.values());
    CHECK(a.left_slope() == b.left_slope());

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Cpwl1D f = testkit::random_cpwl_1d(seed, 8);
        CHECK(f.pieces_in_order().size() <= 8);
        // Continuity across breakpoints.
        for (double bp : f.breakpoints()) {
            const double l = f.eval(bp - 1e-9), r = f.eval(bp + 1e-9);
            CHECK(std::abs(l - r) <= 1e-7);
        }
    }
    CHECK_THROWS_AS(testkit::random_cpwl_1d(0, 9), InputError);
    CHECK_THROWS_AS(testkit::random_cpwl_1d(0, 0), InputError);
}

TEST_CASE("closed-form oracles") {
    CHECK(testkit::oracle_square(0.3) == 0.09);
    std::vector<double> v{1.0, 4.0, 2.0};
    CHECK(testkit::oracle_min(v) == 1.0);
    CHECK(testkit::oracle_max(v) == 4.0);
    std::vector<double> p{0.5, -0.5, 2.0};
    CHECK(testkit::oracle_product(p) == -0.5);

    // Midpoint of the Lipschitz envelope formulas.
    std::vector<std::vector<double>> pts{{0.0}, {1.0}};
    std::vector<double> ys{0.0, 1.0};
    const double x = 2.0;
    auto lb = testkit::oracle_lipschitz(pts, ys, 1.0, std::span<const double>(&x, 1));
    CHECK(lb.upper == 2.0);
    CHECK(lb.lower == 0.0);
    CHECK(lb.mid == 1.0);
}

TEST_CASE("symbolic 1d piece counting oracle") {
    Cpwl1D hat({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}, 0.0, 0.0);
    CHECK(testkit::oracle_pieces_1d(hat, -1.0, 2.0) == 4);
    CHECK(testkit::oracle_pieces_1d(hat, 0.1, 0.4) == 1);
    CHECK(testkit::oracle_pieces_1d(hat, 0.1, 0.9) == 2);

    Cpwl1D affine({0.0}, {1.0}, 2.0, 2.0);
    CHECK(testkit::oracle_pieces_1d(affine, -1.0, 1.0) == 1);
}
