#include <doctest.h>

#include <bif/environment.hpp>
#include <bif/rng.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace bif;

namespace {

int flat_at(const Grid& g, std::vector<int> idx) { return g.flatten(idx); }

}  // namespace

TEST_CASE("two-dimensional benchmark values") {
    auto env = synth2d(0.0);
    REQUIRE(env->grid().dims() == 2);
    REQUIRE(env->grid().size() == 100);
    CHECK(env->grid().coord(0, 9) == doctest::Approx(0.9));

    // f(0) = sin(0)/(0-1) + 2 and g at the sine zero are both exactly 2.
    CHECK(env->child_value(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(env->child_value(1, 5) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(env->child_value(0, 2) == doctest::Approx(0.8111793546310582).epsilon(1e-14));
    CHECK(env->child_value(1, 7) == doctest::Approx(2.7315819356116564).epsilon(1e-14));
    CHECK(env->parent_value(flat_at(env->grid(), {2, 7})) ==
          doctest::Approx(4.723681720323619).epsilon(1e-14));
}

TEST_CASE("three-dimensional benchmark values") {
    auto env = synth3d(0.0);
    REQUIRE(env->grid().dims() == 3);
    REQUIRE(env->grid().size() == 1000);
    CHECK(env->child_value(0, 0) == doctest::Approx(32.0).epsilon(1e-14));
    CHECK(env->child_value(1, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(env->child_value(2, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(env->child_value(2, 9) == doctest::Approx(0.8641336243012605).epsilon(1e-14));
    CHECK(env->parent_value(flat_at(env->grid(), {0, 0, 0})) ==
          doctest::Approx(1091.0).epsilon(1e-14));
}

TEST_CASE("nonlinearity variants reduce to the additive combination") {
    auto exp1 = nonlinear_env({NonlinearitySpec::Variant::kExponential, 1.0}, 0.0);
    auto inside1 = nonlinear_env({NonlinearitySpec::Variant::kExponentialInside, 1.0}, 0.0);
    auto mult0 = nonlinear_env({NonlinearitySpec::Variant::kMultiplicative, 0.0}, 0.0);
    for (int s = 0; s < exp1->grid().size(); ++s) {
        const double f = exp1->child_value(0, exp1->grid().component(s, 0));
        const double g = exp1->child_value(1, exp1->grid().component(s, 1));
        CHECK(exp1->parent_value(s) == doctest::Approx(f + g).epsilon(1e-14));
        CHECK(inside1->parent_value(s) == doctest::Approx(f + g).epsilon(1e-14));
        CHECK(mult0->parent_value(s) == doctest::Approx(f + g).epsilon(1e-14));
    }
}

TEST_CASE("multiplicative interaction at alpha 2") {
    auto env = nonlinear_env({NonlinearitySpec::Variant::kMultiplicative, 2.0}, 0.0);
    // Grid point (3,3) sits at coordinates (1,1) on [0,3] with 10 points.
    CHECK(env->grid().coord(0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(env->parent_value(flat_at(env->grid(), {3, 3})) ==
          doctest::Approx(2.8847839096357335).epsilon(1e-14));
}

TEST_CASE("exponential clamp fires only for negative base and fractional exponent") {
    bool clamped = false;
    const double v =
        nonlinear_combine({NonlinearitySpec::Variant::kExponential, 0.5}, -1.0, 0.2, &clamped);
    CHECK(clamped);
    CHECK(v == 0.0);

    clamped = false;
    const double w =
        nonlinear_combine({NonlinearitySpec::Variant::kExponential, 2.0}, -1.0, 0.2, &clamped);
    CHECK_FALSE(clamped);
    CHECK(w == doctest::Approx(0.64).epsilon(1e-14));

    clamped = false;
    nonlinear_combine({NonlinearitySpec::Variant::kMultiplicative, 4.0}, -1.0, 0.2, &clamped);
    CHECK_FALSE(clamped);

    clamped = false;
    const double inside = nonlinear_combine({NonlinearitySpec::Variant::kExponentialInside, 1.5},
                                            -2.0, 0.3, &clamped);
    CHECK(clamped);
    CHECK(inside == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("variant names parse") {
    CHECK(parse_nonlinearity_variant("exponential") == NonlinearitySpec::Variant::kExponential);
    CHECK(parse_nonlinearity_variant("exponential_inside") ==
          NonlinearitySpec::Variant::kExponentialInside);
    CHECK(parse_nonlinearity_variant("multiplicative") ==
          NonlinearitySpec::Variant::kMultiplicative);
    CHECK_THROWS_AS(parse_nonlinearity_variant("cubic"), std::invalid_argument);
}

TEST_CASE("modularity tasks share children pointwise") {
    auto t1 = modularity_env(1, 0.0);
    auto t2 = modularity_env(2, 0.0);
    auto t3 = modularity_env(3, 0.0);

    CHECK(t1->child_value(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(t1->parent_value(flat_at(t1->grid(), {0, 0})) == doctest::Approx(-0.125).epsilon(1e-14));

    // Task 3 borrows child 0 from task 1 and child 1 from task 2.
    for (int i = 0; i < 10; ++i) {
        CHECK(t3->child_value(0, i) == t1->child_value(0, i));
        CHECK(t3->child_value(1, i) == t2->child_value(1, i));
    }
    // Its combiner carries an extra +2 in the denominator.
    CHECK(t3->parent_value(flat_at(t3->grid(), {0, 0})) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const double f = t3->child_value(0, 4);
    const double g = t3->child_value(1, 7);
    const double d = t3->grid().coord(0, 4) - t3->grid().coord(1, 7);
    CHECK(t3->parent_value(flat_at(t3->grid(), {4, 7})) ==
          doctest::Approx((f + g) / (d * d + 2.5)).epsilon(1e-14));

    CHECK_THROWS_AS(modularity_env(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(modularity_env(4, 0.0), std::invalid_argument);
}

TEST_CASE("zero noise queries return exact values") {
    auto env = synth2d(0.0);
    auto rng = derive_rng(0, "noise");
    for (int s = 0; s < env->grid().size(); s += 13) {
        auto r = env->query(s, rng, true);
        CHECK(r.parent == env->parent_value(s));
        for (int d = 0; d < 2; ++d)
            CHECK(r.children[d] == env->child_value(d, env->grid().component(s, d)));
    }
}

TEST_CASE("noise scale and unbiasedness by monte carlo") {
    auto env = synth2d(0.1);
    const double want_sd = 0.1 * env->response_range();
    auto rng = derive_rng(1234, "noise");
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    const double truth = env->parent_value(42);
    for (int i = 0; i < n; ++i) {
        const double eps = env->query(42, rng, false).parent - truth;
        sum += eps;
        sumsq += eps * eps;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(sd - want_sd) < 0.03 * want_sd);
    CHECK(std::abs(mean) < 3.0 * want_sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("child noise uses the child's own range") {
    auto env = synth2d(0.1);
    const double want_sd = 0.1 * env->child_range(0);
    auto rng = derive_rng(77, "noise");
    const int n = 100000;
    const double truth = env->child_value(0, env->grid().component(5, 0));
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double eps = env->query(5, rng, true).children[0] - truth;
        sum += eps;
        sumsq += eps * eps;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(sd - want_sd) < 0.03 * want_sd);
}

TEST_CASE("queries without children leave the child vector empty") {
    auto env = synth3d(0.1);
    auto rng = derive_rng(3, "noise");
    CHECK(env->query(0, rng, false).children.empty());
    CHECK(env->query(0, rng, true).children.size() == 3);
}

TEST_CASE("identical noise streams reproduce identical draws") {
    auto env = synth2d(0.3);
    auto a = derive_rng(9, "noise");
    auto b = derive_rng(9, "noise");
    for (int i = 0; i < 50; ++i) {
        CHECK(env->query(i, a, true).parent == env->query(i, b, true).parent);
    }
}

TEST_CASE("response range spans the noiseless parent map") {
    auto env = synth2d(0.0);
    const auto& m = env->parent_map();
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    CHECK(env->response_range() == doctest::Approx(*hi - *lo).epsilon(1e-15));
    CHECK(env->response_range() > 0.0);
}

TEST_CASE("dataset environment validates and serves its tables") {
    Grid g = Grid::uniform({{0.0, 1.0, 2}, {0.0, 1.0, 2}});
    std::vector<double> parent{1.0, 2.0, 3.0, 4.0};
    std::vector<std::vector<double>> kids{{0.1, 0.2}, {0.3, 0.4}};
    DatasetEnv env(g, parent, kids, 0.0);
    CHECK(env.parent_value(3) == 4.0);
    CHECK(env.child_value(1, 0) == 0.3);
    CHECK(env.response_range() == doctest::Approx(3.0));

    CHECK_THROWS_AS(DatasetEnv(g, {1.0, 2.0}, kids, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DatasetEnv(g, parent, {{0.1, 0.2}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DatasetEnv(g, parent, {{0.1}, {0.3, 0.4}}, 0.0), std::invalid_argument);
}

TEST_CASE("negative noise scale is rejected") {
    CHECK_THROWS_AS(synth2d(-0.1), std::invalid_argument);
}

TEST_CASE("off-grid queries are rejected") {
    auto env = synth2d(0.0);
    auto rng = derive_rng(0, "noise");
    CHECK_THROWS_AS(env->query(100, rng, false), std::invalid_argument);
    CHECK_THROWS_AS(env->query(-1, rng, false), std::invalid_argument);
}
