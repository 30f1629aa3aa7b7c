#include <doctest.h>

#include <bif/grid.hpp>

#include <stdexcept>
#include <vector>

using bif::AxisSpec;
using bif::Grid;

TEST_CASE("uniform axis endpoints and spacing") {
    Grid g = Grid::uniform({{0.0, 0.9, 10}});
    REQUIRE(g.dims() == 1);
    REQUIRE(g.size() == 10);
    CHECK(g.axis(0)[0] == doctest::Approx(0.0));
    CHECK(g.axis(0)[9] == doctest::Approx(0.9));
    CHECK(g.axis(0)[1] == doctest::Approx(0.1));
}

TEST_CASE("flatten and unflatten are inverse, last dimension fastest") {
    Grid g = Grid::uniform({{0.0, 1.0, 3}, {0.0, 1.0, 4}});
    REQUIRE(g.size() == 12);
    std::vector<int> i00{0, 0}, i01{0, 1}, i10{1, 0}, i23{2, 3};
    // flat index walks the last axis fastest.
    CHECK(g.flatten(i00) == 0);
    CHECK(g.flatten(i01) == 1);
    CHECK(g.flatten(i10) == 4);
    CHECK(g.flatten(i23) == 11);
    for (int f = 0; f < g.size(); ++f) {
        CHECK(g.flatten(g.unflatten(f)) == f);
    }
}

TEST_CASE("component extracts a single axis index") {
    Grid g = Grid::uniform({{0.0, 1.0, 3}, {0.0, 1.0, 4}, {0.0, 1.0, 5}});
    for (int f = 0; f < g.size(); ++f) {
        auto idx = g.unflatten(f);
        for (int d = 0; d < g.dims(); ++d) {
            CHECK(g.component(f, d) == idx[d]);
        }
    }
}

TEST_CASE("coord maps axis indices to physical values") {
    Grid g = Grid::uniform({{0.0, 0.9, 10}, {1.0, 2.0, 5}});
    CHECK(g.coord(0, 3) == doctest::Approx(0.3));
    CHECK(g.coord(1, 2) == doctest::Approx(1.5));
}

TEST_CASE("axis_grid builds the one-dimensional child domain") {
    Grid g = Grid::uniform({{0.0, 0.9, 10}, {1.0, 2.0, 5}});
    Grid a1 = g.axis_grid(1);
    REQUIRE(a1.dims() == 1);
    REQUIRE(a1.size() == 5);
    CHECK(a1.coord(0, 2) == doctest::Approx(1.5));
    CHECK(a1 == Grid({{1.0, 1.25, 1.5, 1.75, 2.0}}));
}

TEST_CASE("contains accepts exactly the valid flat range") {
    Grid g = Grid::uniform({{0.0, 1.0, 3}, {0.0, 1.0, 4}});
    CHECK(g.contains(0));
    CHECK(g.contains(11));
    CHECK_FALSE(g.contains(-1));
    CHECK_FALSE(g.contains(12));
}

TEST_CASE("equality compares axis labels") {
    Grid a = Grid::uniform({{0.0, 1.0, 3}});
    Grid b = Grid::uniform({{0.0, 1.0, 3}});
    Grid c = Grid::uniform({{0.0, 1.0, 4}});
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("invalid specs and indices throw") {
    CHECK_THROWS_AS(Grid::uniform({{0.0, 1.0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Grid::uniform({{1.0, 0.0, 3}}), std::invalid_argument);
    Grid g = Grid::uniform({{0.0, 1.0, 3}});
    std::vector<int> bad{3};
    CHECK_THROWS_AS(g.flatten(bad), std::invalid_argument);
    CHECK_THROWS_AS(g.unflatten(3), std::invalid_argument);
    std::vector<std::vector<double>> empty_axis(1);
    CHECK_THROWS_AS(Grid{empty_axis}, std::invalid_argument);
}
