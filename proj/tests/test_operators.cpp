#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aamr/operators.hpp"
#include "support.hpp"

#include <cmath>
#include <string>

using namespace aamr;
using testgen::Gen;
using testgen::Variant;

namespace {

bool near(const Vector& a, const Vector& b, double tol) { return (a - b).norm() <= tol; }

SetPtr whole(Index n) { return std::make_shared<LinearSubspace>(LinearSubspace::whole_space(n)); }

// Hand projection onto a Euclidean ball.
Vector ball_proj(const Vector& c, double r, const Vector& x)
{
    const double d = (x - c).norm();
    return d <= r ? x : Vector(c + r * (x - c) / d);
}

} // namespace

TEST_CASE("construction enforces parameter ranges")
{
    const SetPtr a = whole(2);
    CHECK_NOTHROW(AamrOperator(a, a, 1.0, 0.5));
    CHECK_THROWS_AS(AamrOperator(a, a, 0.0, 0.5), ParameterError);
    CHECK_THROWS_AS(AamrOperator(a, a, 1.1, 0.5), ParameterError);
    CHECK_THROWS_AS(AamrOperator(a, a, 0.5, 0.0), ParameterError);
    try {
        AamrOperator(a, a, 0.5, 1.0);
        FAIL("beta = 1 must be rejected");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()) == "beta must lie in (0,1); use --method drm for beta=1");
    }
    CHECK_THROWS_AS(AamrOperator(a, whole(3), 0.5, 0.5), DimensionError);
    CHECK_THROWS_AS(DrOperator(a, a, 1.0), ParameterError);
    CHECK_THROWS_AS(DrOperator(a, a, 0.0), ParameterError);
    CHECK_NOTHROW(DrOperator(a, a, 0.5));
}

TEST_CASE("operator examples")
{
    const SetPtr r2 = whole(2);
    const SetPtr line = std::make_shared<Hyperplane>(Eigen::Vector2d(1, 0), 1.0); // {x_1 = 1}

    SUBCASE("A = R^2, B = {x_1 = 1}: (1,0) is the fixed point")
    {
        for (const double alpha : {0.3, 0.9, 1.0}) {
            for (const double beta : {0.2, 0.5, 0.8}) {
                const AamrOperator t(r2, line, alpha, beta);
                CHECK(near(t.apply(Eigen::Vector2d(1, 0)), Eigen::Vector2d(1, 0), 1e-15));
                CHECK(t.fixed_point_residual(Eigen::Vector2d(1, 0)) <= 1e-15);
            }
        }
    }

    SUBCASE("A = B = R^n scales by (1 - alpha) + alpha (2 beta - 1)^2")
    {
        Gen g(1);
        for (int i = 0; i < 20; ++i) {
            const double alpha = g.uniform(0.01, 1.0);
            const double beta = g.uniform(0.01, 0.99);
            const SetPtr rn = whole(4);
            const AamrOperator t(rn, rn, alpha, beta);
            const Vector x = g.vec(4, 3.0);
            const double f = (1 - alpha) + alpha * (2 * beta - 1) * (2 * beta - 1);
            CHECK(near(t.apply(x), f * x, 1e-13 * x.norm()));
            CHECK(near(t.apply(Vector::Zero(4)), Vector::Zero(4), 0.0));
        }
    }

    SUBCASE("(2 beta - 1) P_A(0) is fixed when P_A(0) lies in B")
    {
        const SetPtr a = std::make_shared<Ball>(Eigen::Vector2d(3, 0), 1.0);
        for (const double beta : {0.2, 0.5, 0.7, 0.95}) {
            const AamrOperator t(a, r2, 0.9, beta);
            const Vector p = (2 * beta - 1) * Eigen::Vector2d(2, 0);
            CHECK(near(t.apply(p), p, 1e-14));
        }
    }

    SUBCASE("fixed_point_residual on two balls by hand, beta = 0.5")
    {
        const Vector ca = Eigen::Vector2d(1, 1);
        const Vector cb = Eigen::Vector2d(-1, 1);
        const AamrOperator t(std::make_shared<Ball>(ca, 1.0), std::make_shared<Ball>(cb, 1.0), 0.9, 0.5);
        const Vector x = Vector::Zero(2);
        const Vector pa = ball_proj(ca, 1.0, x); // (1 - 1/sqrt2, 1 - 1/sqrt2)
        CHECK(near(pa, Vector::Constant(2, 1 - 1 / std::sqrt(2.0)), 1e-15));
        const Vector pb = ball_proj(cb, 1.0, 2 * 0.5 * pa - x);
        CHECK(std::abs(t.fixed_point_residual(x) - (pb - pa).norm()) <= 1e-15);
        CHECK(t.fixed_point_residual(x) > 0.1);
    }

    SUBCASE("A = B = span{e1}: 0 has zero residual")
    {
        const SetPtr l = std::make_shared<LinearSubspace>(LinearSubspace::from_spanning(Eigen::Vector2d(1, 0)));
        CHECK(AamrOperator(l, l, 0.5, 0.5).fixed_point_residual(Vector::Zero(2)) == 0.0);
    }
}

TEST_CASE("nonexpansiveness and the drift identity")
{
    Gen g(31);
    const auto& variants = testgen::all_variants();
    for (int inst = 0; inst < 40; ++inst) {
        const Index n = g.integer(1, 5);
        const Variant va = variants[static_cast<std::size_t>(g.integer(0, 7))];
        const Variant vb = variants[static_cast<std::size_t>(g.integer(0, 7))];
        const SetPtr a = testgen::random_set(g, va, n);
        const SetPtr b = testgen::random_set(g, vb, n);
        const double alpha = g.uniform(0.01, 1.0);
        const double beta = g.uniform(0.01, 0.99);
        CAPTURE(testgen::name(va));
        CAPTURE(testgen::name(vb));
        const AamrOperator t(a, b, alpha, beta);
        const DrOperator dr(a, b, std::min(alpha, 0.99));
        for (int i = 0; i < 1000; ++i) {
            const Vector x = g.vec(n, 5.0);
            const Vector y = g.vec(n, 5.0);
            const Vector tx = t.apply(x);
            REQUIRE((tx - t.apply(y)).norm() <= (x - y).norm() + 1e-10);
            REQUIRE((dr.apply(x) - dr.apply(y)).norm() <= (x - y).norm() + 1e-10);

            // x - T x = 2 alpha beta (P_A x - P_B(2 beta P_A x - x))
            const Vector direct = x - tx;
            const double scale = std::max({1.0, x.norm(), tx.norm()});
            REQUIRE((direct - t.displacement(x)).norm() <= 1e-12 * scale);

            // the residual is the displacement norm over 2 alpha beta
            REQUIRE(std::abs(direct.norm() / (2 * alpha * beta) - t.fixed_point_residual(x)) <=
                    1e-12 * scale / (2 * alpha * beta));
        }
    }
}

TEST_CASE("residual vanishes exactly on fixed points")
{
    Gen g(17);
    for (int inst = 0; inst < 50; ++inst) {
        const Index n = g.integer(2, 5);
        const Vector p = g.vec(n);
        const auto& variants = testgen::all_variants();
        const SetPtr a = testgen::random_set_through(g, variants[static_cast<std::size_t>(g.integer(0, 7))], p);
        const SetPtr b = testgen::random_set_through(g, variants[static_cast<std::size_t>(g.integer(0, 7))], p);
        const double alpha = g.uniform(0.3, 1.0);
        const double beta = g.uniform(0.3, 0.95);
        const AamrOperator t(a, b, alpha, beta);

        // Drive to a fixed point, then compare both characterizations.
        Vector x = g.vec(n, 3.0);
        for (int k = 0; k < 20000 && (t.apply(x) - x).norm() > 1e-13; ++k) {
            x = t.apply(x);
        }
        const double res = t.fixed_point_residual(x);
        const double step = (t.apply(x) - x).norm();
        CHECK(res <= 1e-9);
        CHECK(step <= 2 * alpha * beta * 1e-9);

        // A point off the fixed-point set has both quantities positive and tied by 2 alpha beta.
        const Vector y = x + g.vec(n);
        CHECK(std::abs((t.apply(y) - y).norm() - 2 * alpha * beta * t.fixed_point_residual(y)) <= 1e-12);
    }
}

TEST_CASE("modified-reflector fixed point for every variant")
{
    Gen g(23);
    for (const Variant v : testgen::all_variants()) {
        CAPTURE(testgen::name(v));
        for (int t = 0; t < 100; ++t) {
            const Index n = g.integer(1, 5);
            const SetPtr c = testgen::random_set(g, v, n);
            const double beta = g.uniform(0.01, 1.0);
            const Vector z = beta * c->project(Vector::Zero(n));
            CHECK(near(2 * beta * c->project(z) - z, z, 1e-10 * (1 + z.norm())));
        }
    }
}

TEST_CASE("affine translation formula")
{
    // T_{A,B}(x) = T_{A-y,B-y}(x) + T_{A,B}(0) for affine A, B and y in A ∩ B.
    Gen g(61);
    for (int t = 0; t < 200; ++t) {
        const Index n = g.integer(2, 8);
        const Vector y = g.vec(n, 2.0);
        auto make = [&](int kind) -> SetPtr {
            if (kind == 0) {
                return std::make_shared<AffineSubspace>(y, testgen::random_subspace(g, n, g.integer(0, static_cast<int>(n))));
            }
            const Vector a = g.vec(n);
            return std::make_shared<Hyperplane>(a, a.dot(y));
        };
        const SetPtr a = make(g.integer(0, 1));
        const SetPtr b = make(g.integer(0, 1));
        const double alpha = g.uniform(0.01, 1.0);
        const double beta = g.uniform(0.01, 0.99);
        const AamrOperator tab(a, b, alpha, beta);
        const AamrOperator shifted(std::make_shared<Translate>(a, y), std::make_shared<Translate>(b, y), alpha, beta);
        const Vector x = g.vec(n, 4.0);
        CHECK(near(tab.apply(x), shifted.apply(x) + tab.apply(Vector::Zero(n)), 1e-10 * (1 + x.norm() + y.norm())));
    }
}

TEST_CASE("per-call alpha")
{
    const SetPtr a = std::make_shared<Ball>(Eigen::Vector2d(0, 0), 1.0);
    const SetPtr b = std::make_shared<Halfspace>(Eigen::Vector2d(1, 1), 0.5);
    const AamrOperator t(a, b, 0.9, 0.7);
    const AamrOperator t2(a, b, 0.4, 0.7);
    const Vector x = Eigen::Vector2d(2, -3);
    CHECK(near(t.apply(x, 0.4), t2.apply(x), 0.0));
    CHECK_THROWS_AS(t.apply(x, 0.0), ParameterError);
}
