#include <catch2/catch_amalgamated.hpp>

#include <gheat/operators.hpp>

#include "support/random_graph.hpp"

using namespace gheat;

TEST_CASE("laplacian and gradient form on the 6-cycle, worked by hand", "[operators]") {
    const Graph g = build_cycle(6, MeasureMode::normalized);  // mu = 2, w = 1
    Field f(6);
    for (int x = 0; x < 6; ++x) f[x] = x + 1.0;

    // Vertex 0 neighbors carry f = 2 and 6: ((2-1)+(6-1))/2 = 3.
    const Field lap = laplacian(g, f);
    CHECK(lap[0] == Catch::Approx(3.0).margin(1e-15));
    // Vertex 1 neighbors carry f = 1 and 3: ((1-2)+(3-2))/2 = 0.
    CHECK(lap[1] == Catch::Approx(0.0).margin(1e-15));
    // Vertex 5 neighbors carry f = 5 and 1: ((5-6)+(1-6))/2 = -3.
    CHECK(lap[5] == Catch::Approx(-3.0).margin(1e-15));

    // Gamma(f)(x_1) = (1/(2*2))*((1-2)^2 + (3-2)^2) = 1/2.
    const Field gam = gamma(g, f);
    CHECK(gam[1] == Catch::Approx(0.5).margin(1e-15));
    // At the wrap vertex the jumps are -1 and -5: (1+25)/4 = 6.5.
    CHECK(gam[5] == Catch::Approx(6.5).margin(1e-15));
}

TEST_CASE("constant fields are harmonic with vanishing gradient form", "[operators]") {
    const Graph g = testing::random_connected_graph(3);
    const Field ones = Field::Constant(g.vertex_count(), 4.2);
    CHECK(laplacian(g, ones).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(gamma(g, ones).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(gamma2(g, ones).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("laplacian integrates to zero and gamma obeys the green identity",
          "[operators]") {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const Graph g = testing::random_connected_graph(seed);
        const Field f = testing::random_field(g, seed);
        const Field h = testing::random_field(g, seed + 100);

        // No boundary: the laplacian of anything has zero mean.
        CHECK(std::abs(integrate(g, laplacian(g, f))) < 1e-12);

        // Summation by parts: int Gamma(f,h) dmu = -int f (Lh) dmu.
        const double lhs = integrate(g, gamma(g, f, h));
        const double rhs = -integrate(g, Field(f.cwiseProduct(laplacian(g, h))));
        CHECK(lhs == Catch::Approx(rhs).margin(1e-11));
    }
}

TEST_CASE("gamma is symmetric, bilinear and nonnegative on the diagonal", "[operators]") {
    const Graph g = testing::random_connected_graph(21);
    const Field f = testing::random_field(g, 1);
    const Field h = testing::random_field(g, 2);
    const Field k = testing::random_field(g, 3);

    const Field fh = gamma(g, f, h);
    const Field hf = gamma(g, h, f);
    CHECK((fh - hf).cwiseAbs().maxCoeff() < 1e-14);

    // Gamma(f, 2h + k) = 2 Gamma(f,h) + Gamma(f,k)
    const Field combo = gamma(g, f, Field(2.0 * h + k));
    const Field split = 2.0 * fh + gamma(g, f, k);
    CHECK((combo - split).cwiseAbs().maxCoeff() < 1e-13);

    CHECK(gamma(g, f).minCoeff() >= 0.0);
    CHECK((gamma(g, f) - gamma(g, f, f)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gamma2 matches its definition and scales quadratically", "[operators]") {
    const Graph g = testing::random_connected_graph(33);
    const Field f = testing::random_field(g, 4);

    const Field direct = gamma2(g, f);
    const Field by_parts =
        0.5 * (laplacian(g, gamma(g, f)) - 2.0 * gamma(g, f, laplacian(g, f)));
    CHECK((direct - by_parts).cwiseAbs().maxCoeff() < 1e-13);

    const Field scaled = gamma2(g, Field(3.0 * f));
    CHECK((scaled - 9.0 * direct).cwiseAbs().maxCoeff() < 1e-12);

    // Linear-in-index field on the 2-clique: Gamma2 = 1 at both vertices.
    const Graph k2 = build_complete(2, MeasureMode::normalized);
    Field step(2);
    step << 0.0, 1.0;
    const Field g2 = gamma2(k2, step);
    CHECK(g2[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(g2[1] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("integrate is the mu-weighted sum", "[operators]") {
    const Graph g = build_cycle(4, MeasureMode::unit);
    Field f(4);
    f << 1.0, 2.0, 3.0, 4.0;
    CHECK(integrate(g, f) == Catch::Approx(10.0).margin(1e-15));

    const Graph gn = build_cycle(4, MeasureMode::normalized);
    CHECK(integrate(gn, f) == Catch::Approx(20.0).margin(1e-15));
}

TEST_CASE("operators reject fields of the wrong size", "[operators]") {
    const Graph g = build_cycle(4, MeasureMode::unit);
    const Field wrong = Field::Ones(5);
    CHECK_THROWS_AS(laplacian(g, wrong), error);
    CHECK_THROWS_AS(gamma(g, wrong), error);
    CHECK_THROWS_AS(gamma2(g, wrong), error);
    CHECK_THROWS_AS(integrate(g, wrong), error);
    try {
        laplacian(g, wrong);
    } catch (const error& e) {
        CHECK(e.code() == errc::dimension_mismatch);
    }
}
