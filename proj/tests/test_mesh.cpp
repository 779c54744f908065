#include "hjbfit/mesh.hpp"

#include <doctest.h>

#include <stdexcept>

#include <array>
#include <random>

using namespace hjbfit;

TEST_CASE("uniform axis construction") {
    const Axis ax = Axis::uniform(0.0, 0.5, 10);
    REQUIRE(ax.intervals() == 10);
    for (int k = 0; k <= 10; ++k)
        CHECK(ax.node(k) == doctest::Approx(0.05 * k).epsilon(1e-15));
    CHECK(ax.lo() == 0.0);
    CHECK(ax.hi() == 0.5);

    CHECK_THROWS_AS(Axis::uniform(1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Axis::uniform(1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Axis::uniform(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("clamped midpoints on a two-interval axis") {
    const Axis ax = Axis::uniform(0.0, 1.0, 2);
    // midpoint partition {0, 0.25, 0.75, 1} with clamped ends
    CHECK(ax.mid_below(0) == 0.0);
    CHECK(ax.mid_above(0) == doctest::Approx(0.25));
    CHECK(ax.mid_below(1) == doctest::Approx(0.25));
    CHECK(ax.mid_above(1) == doctest::Approx(0.75));
    CHECK(ax.mid_above(2) == 1.0);
}

TEST_CASE("interior spacing on a uniform axis") {
    const Axis ax = Axis::uniform(0.0, 0.25, 10);
    for (int k = 1; k < 10; ++k)
        CHECK(ax.spacing(k) == doctest::Approx(0.025).epsilon(1e-14));
    // boundary cells carry half widths from the clamped midpoints
    CHECK(ax.spacing(0) == doctest::Approx(0.0125));
    CHECK(ax.spacing(10) == doctest::Approx(0.0125));
}

TEST_CASE("node ordering is enforced") {
    CHECK_THROWS_AS(Axis({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Axis({-0.1, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Axis({0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("interior linearization on a 10x10x10 mesh") {
    std::vector<Axis> axes;
    for (int d = 0; d < 3; ++d) axes.push_back(Axis::uniform(0.0, 1.0, 10));
    const TensorMesh mesh(std::move(axes)); // n1 = n2 = n3 = 9
    CHECK(mesh.linearize(std::array{1, 1, 1}) == 1);
    CHECK(mesh.linearize(std::array{2, 1, 1}) == 2);
    CHECK(mesh.linearize(std::array{1, 2, 1}) == 10); // i + (j-1) n1 with n1 = 9
    CHECK(mesh.interior_count() == 729);

    CHECK_THROWS_AS(mesh.linearize(std::array{0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(mesh.linearize(std::array{10, 1, 1}), std::invalid_argument);
}

TEST_CASE("linearize and delinearize are inverse bijections") {
    std::mt19937 rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_int_distribution<int> nd(2, 6);
        std::vector<Axis> axes;
        const int dim = 1 + static_cast<int>(rng() % 4);
        for (int d = 0; d < dim; ++d) axes.push_back(Axis::uniform(0.0, 1.0 + d, nd(rng)));
        const TensorMesh mesh(std::move(axes));

        std::vector<int> idx(static_cast<size_t>(dim));
        for (long f = 1; f <= mesh.interior_count(); ++f) {
            mesh.delinearize(f, idx);
            CHECK(mesh.linearize(idx) == f);
        }
    }
}

TEST_CASE("cell volumes") {
    {
        std::vector<Axis> axes;
        for (int d = 0; d < 3; ++d) axes.push_back(Axis::uniform(0.0, 1.0, 4));
        const TensorMesh mesh(std::move(axes));
        CHECK(mesh.cell_volume(std::array{2, 2, 2}) == doctest::Approx(0.25 * 0.25 * 0.25));
        // next to the boundary the spacing still comes from the clamped midpoints
        CHECK(mesh.cell_volume(std::array{1, 2, 3}) == doctest::Approx(0.25 * 0.25 * 0.25));
    }
    {
        // per-axis interior spacings 0.1, 0.2, 0.3
        std::vector<Axis> axes{Axis::uniform(0.0, 0.4, 4), Axis::uniform(0.0, 0.8, 4),
                               Axis::uniform(0.0, 1.2, 4)};
        const TensorMesh mesh(std::move(axes));
        CHECK(mesh.cell_volume(std::array{2, 2, 2}) == doctest::Approx(0.006).epsilon(1e-12));
    }
}

TEST_CASE("spacings tile the axis and midpoints interleave") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> nodes{rep % 2 == 0 ? 0.0 : u(rng)};
        const int n = 2 + static_cast<int>(rng() % 9);
        for (int k = 0; k < n; ++k) nodes.push_back(nodes.back() + u(rng));
        const Axis ax(nodes);

        double total = 0.0;
        for (int k = 0; k <= ax.intervals(); ++k) total += ax.spacing(k);
        CHECK(total == doctest::Approx(ax.hi() - ax.lo()).epsilon(1e-13));

        for (int k = 0; k < ax.intervals(); ++k) {
            CHECK(ax.node(k) <= ax.mid_above(k));
            CHECK(ax.mid_above(k) <= ax.node(k + 1));
        }
        CHECK(ax.mid_below(0) == ax.node(0));
        CHECK(ax.mid_above(ax.intervals()) == ax.node(ax.intervals()));
    }
}
