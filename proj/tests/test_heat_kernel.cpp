#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <gheat/heat_kernel.hpp>
#include <gheat/operators.hpp>

#include "support/random_graph.hpp"

using namespace gheat;

TEST_CASE("spectrum of the normalized 6-cycle is the cosine ladder", "[heat_kernel]") {
    const Graph g = build_cycle(6, MeasureMode::normalized);
    const HeatKernelOperator hk(g);
    const double expected[6] = {0.0, -0.5, -0.5, -1.5, -1.5, -2.0};
    REQUIRE(hk.eigenvalues().size() == 6);
    CHECK(hk.eigenvalues()[0] == 0.0);  // stationary mode pinned exactly
    for (int k = 0; k < 6; ++k)
        CHECK(hk.eigenvalues()[k] == Catch::Approx(expected[k]).margin(1e-13));
}

TEST_CASE("2-clique kernel matches the closed form", "[heat_kernel]") {
    const Graph g = build_complete(2, MeasureMode::normalized);
    const HeatKernelOperator hk(g);
    for (double t : {0.1, 1.0, 10.0}) {
        const double diag = 0.5 * (1.0 + std::exp(-2.0 * t));
        const double off = 0.5 * (1.0 - std::exp(-2.0 * t));
        CHECK(std::abs(hk.value(t, 0, 0) - diag) < 1e-12);
        CHECK(std::abs(hk.value(t, 1, 1) - diag) < 1e-12);
        CHECK(std::abs(hk.value(t, 0, 1) - off) < 1e-12);
    }
    CHECK(hk.value(1.0, 0, 0) == Catch::Approx(0.5676676416183064).margin(1e-15));
}

TEST_CASE("kernel matrix, diagonal and pointwise value agree", "[heat_kernel]") {
    const Graph g = testing::random_connected_graph(11);
    const HeatKernelOperator hk(g);
    const int n = g.vertex_count();
    const Eigen::MatrixXd p = hk.kernel_matrix(0.7);
    const Eigen::VectorXd d = hk.diagonal(0.7);
    for (int x = 0; x < n; ++x) {
        CHECK(p(x, x) == Catch::Approx(d[x]).margin(1e-14));
        for (int y = 0; y < n; ++y)
            CHECK(p(x, y) == Catch::Approx(hk.value(0.7, x, y)).margin(1e-14));
    }
}

TEST_CASE("semigroup preserves mass, constants and positivity", "[heat_kernel]") {
    const Graph g = testing::random_connected_graph(12);
    const HeatKernelOperator hk(g);
    const Field f = testing::random_positive_field(g, 3);

    const Field pf = hk.apply(2.3, f);
    CHECK(integrate(g, pf) == Catch::Approx(integrate(g, f)).margin(1e-11));
    CHECK(pf.minCoeff() > 0.0);

    const Field ones = Field::Ones(g.vertex_count());
    CHECK((hk.apply(5.0, ones) - ones).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("semigroup composes: P_t P_s = P_{t+s}", "[heat_kernel]") {
    const Graph g = testing::random_connected_graph(13);
    const HeatKernelOperator hk(g);
    const Field f = testing::random_field(g, 8);
    const Field two_step = hk.apply(0.4, hk.apply(0.9, f));
    const Field one_step = hk.apply(1.3, f);
    CHECK((two_step - one_step).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("semigroup solves the heat equation in quadrature", "[heat_kernel]") {
    const Graph g = testing::random_connected_graph(14);
    const HeatKernelOperator hk(g);
    const Field f = testing::random_field(g, 9);
    const double t = 0.8, h = 1e-5;
    const Field dot = (hk.apply(t + h, f) - hk.apply(t - h, f)) / (2.0 * h);
    const Field lap = laplacian(g, hk.apply(t, f));
    CHECK((dot - lap).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("axiom verification passes on random graphs", "[heat_kernel]") {
    for (std::uint64_t seed : {101u, 102u, 103u}) {
        const Graph g = testing::random_connected_graph(seed);
        const HeatKernelOperator hk(g);
        const KernelAxiomReport rep = verify_kernel_axioms(hk, {0.1, 0.5, 1.0, 5.0});
        CHECK(rep.max_symmetry_error <= 1e-10);
        CHECK(rep.min_kernel_value > 0.0);
        CHECK(rep.max_conservation_defect <= 1e-9);
        CHECK(rep.max_semigroup_defect <= 1e-9);
        CHECK(rep.max_heat_equation_residual <= 1e-5);
    }
}

TEST_CASE("series evaluation agrees with the spectral route", "[heat_kernel]") {
    const Graph g = testing::random_connected_graph(15, 8, 20);
    const HeatKernelOperator hk(g);
    const Field f = testing::random_field(g, 10);

    SeriesMethod method;
    method.order = 60;
    method.tolerance = 1e-9;
    const Field series = apply_semigroup(hk, 0.5, f, method);
    const Field spectral = hk.apply(0.5, f);
    CHECK((series - spectral).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("series refuses when its remainder bound cannot meet tolerance", "[heat_kernel]") {
    const Graph g = build_cycle(8, MeasureMode::normalized);
    const HeatKernelOperator hk(g);
    const Field f = Field::Ones(8);
    SeriesMethod weak;
    weak.order = 3;
    weak.tolerance = 1e-12;
    try {
        apply_semigroup(hk, 5.0, f, weak);
        FAIL("expected truncation_insufficient");
    } catch (const error& e) {
        CHECK(e.code() == errc::truncation_insufficient);
    }
}

TEST_CASE("kernel rejects bad times, vertices, caps and sizes", "[heat_kernel]") {
    const Graph g = build_cycle(6, MeasureMode::normalized);
    try {
        HeatKernelOperator(g, 4);
        FAIL("expected size_over_cap");
    } catch (const error& e) {
        CHECK(e.code() == errc::size_over_cap);
    }

    const HeatKernelOperator hk(g);
    CHECK_THROWS_AS(hk.value(0.0, 0, 0), error);
    CHECK_THROWS_AS(hk.value(-1.0, 0, 0), error);
    CHECK_THROWS_AS(hk.value(1.0, 0, 99), error);
    CHECK_THROWS_AS(hk.apply(1.0, Field::Ones(7)), error);
    CHECK_THROWS_AS(verify_kernel_axioms(hk, {}), error);
}
