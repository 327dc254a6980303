#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aamr/sets.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace aamr;
using testgen::Gen;
using testgen::Variant;

namespace {

bool near(const Vector& a, const Vector& b, double tol) { return (a - b).norm() <= tol; }

// Membership checked from each set's own description, not through its projector.
bool contains(const ConvexSet& c, const Vector& p, double tol)
{
    if (auto s = dynamic_cast<const LinearSubspace*>(&c)) {
        return s->subspace_dim() == 0 ? p.norm() <= tol
                                      : (p - s->basis() * (s->basis().transpose() * p)).norm() <= tol;
    }
    if (auto a = dynamic_cast<const AffineSubspace*>(&c)) {
        return contains(a->direction(), p - a->offset(), tol);
    }
    if (auto b = dynamic_cast<const Ball*>(&c)) {
        return (p - b->center()).norm() <= b->radius() + tol;
    }
    if (auto h = dynamic_cast<const Halfspace*>(&c)) {
        return h->normal().dot(p) <= h->offset() + tol * h->normal().norm();
    }
    if (auto h = dynamic_cast<const Hyperplane*>(&c)) {
        return std::abs(h->normal().dot(p) - h->offset()) <= tol * h->normal().norm();
    }
    if (auto b = dynamic_cast<const Box*>(&c)) {
        return ((b->lower().array() - tol) <= p.array()).all() && (p.array() <= (b->upper().array() + tol)).all();
    }
    if (auto t = dynamic_cast<const Translate*>(&c)) {
        return contains(*t->inner(), p + t->shift(), tol);
    }
    return true; // Scaled: covered by the explicit-construction comparisons below.
}

} // namespace

TEST_CASE("projection examples")
{
    const Ball ball(Eigen::Vector2d(1, 1), 1.0);
    CHECK(near(ball.project(Eigen::Vector2d(1, 1)), Eigen::Vector2d(1, 1), 0.0));
    CHECK(near(ball.project(Eigen::Vector2d(1, -1)), Eigen::Vector2d(1, 0), 1e-15));

    const auto line = LinearSubspace::from_spanning(Eigen::Vector2d(1, 0));
    CHECK(near(line.project(Eigen::Vector2d(3, 4)), Eigen::Vector2d(3, 0), 1e-15));

    const Halfspace h(Eigen::Vector2d(1, 0), 0.0);
    CHECK(near(h.project(Eigen::Vector2d(2, 3)), Eigen::Vector2d(0, 3), 1e-15));
    CHECK(near(h.project(Eigen::Vector2d(-2, 3)), Eigen::Vector2d(-2, 3), 0.0));
}

TEST_CASE("closed-form projections against hand formulas")
{
    SUBCASE("ball outside point")
    {
        const Vector c = Eigen::Vector3d(1, -2, 0.5);
        const Vector x = Eigen::Vector3d(4, 2, 0.5);
        // c + r (x - c)/|x - c| with |x - c| = 5
        CHECK(near(Ball(c, 2.0).project(x), Eigen::Vector3d(1 + 2 * 3.0 / 5, -2 + 2 * 4.0 / 5, 0.5), 1e-14));
    }
    SUBCASE("zero-radius ball is a point")
    {
        CHECK(near(Ball(Eigen::Vector2d(1, 2), 0.0).project(Eigen::Vector2d(5, 5)), Eigen::Vector2d(1, 2), 0.0));
    }
    SUBCASE("hyperplane")
    {
        const Hyperplane hp(Eigen::Vector2d(3, 4), 10.0);
        // x - (<a,x> - b) a / |a|^2 at x = 0: 0 + 10/25 (3,4)
        CHECK(near(hp.project(Eigen::Vector2d(0, 0)), Eigen::Vector2d(1.2, 1.6), 1e-15));
    }
    SUBCASE("box clamps each coordinate")
    {
        const Box box(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 2, 3));
        CHECK(near(box.project(Eigen::Vector3d(-1, 1, 7)), Eigen::Vector3d(0, 1, 3), 0.0));
    }
    SUBCASE("affine subspace fixes its offset")
    {
        Gen g(11);
        for (int t = 0; t < 20; ++t) {
            const Vector y = g.vec(5);
            const AffineSubspace a(y, testgen::random_subspace(g, 5, g.integer(0, 5)));
            CHECK(near(a.project(y), y, 1e-12 * (1 + y.norm())));
        }
    }
    SUBCASE("trivial subspace projects to zero")
    {
        const auto z = LinearSubspace::zero(3);
        CHECK(z.subspace_dim() == 0);
        CHECK(near(z.project(Eigen::Vector3d(1, 2, 3)), Vector::Zero(3), 0.0));
    }
}

TEST_CASE("subspace bases are orthonormalized at construction")
{
    Matrix span(4, 3);
    span << 1, 2, 0, //
        0, 0, 1,     //
        1, 2, 0,     //
        0, 0, 0;
    const auto s = LinearSubspace::from_spanning(span);
    CHECK(s.subspace_dim() == 2); // second column is twice the first
    CHECK(orthonormality_defect(s.basis()) <= 1e-12 * 4);

    Matrix bad(2, 2);
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(LinearSubspace::from_orthonormal(bad), ParameterError);
    CHECK_NOTHROW(LinearSubspace::from_orthonormal(Matrix::Identity(3, 2)));
}

TEST_CASE("degenerate descriptions are rejected at construction")
{
    CHECK_THROWS_AS(Ball(Eigen::Vector2d(0, 0), -1.0), ParameterError);
    CHECK_THROWS_AS(Halfspace(Eigen::Vector2d(0, 0), 1.0), ParameterError);
    CHECK_THROWS_AS(Hyperplane(Eigen::Vector2d(0, 0), 1.0), ParameterError);
    CHECK_THROWS_AS(Box(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)), ParameterError);
    auto ball = std::make_shared<Ball>(Eigen::Vector2d(0, 0), 1.0);
    CHECK_THROWS_AS(Scaled(ball, 0.0), ParameterError);
    CHECK_THROWS_AS(Translate(ball, Eigen::Vector3d(0, 0, 0)), DimensionError);
    CHECK_THROWS_AS(ball->project(Eigen::Vector3d(0, 0, 0)), DimensionError);
    CHECK_THROWS_AS(Ball(Eigen::Vector2d(0, std::numeric_limits<double>::quiet_NaN()), 1.0), ParameterError);
}

TEST_CASE("projector properties for every variant")
{
    Gen g(2024);
    for (const Variant v : testgen::all_variants()) {
        CAPTURE(testgen::name(v));
        for (int t = 0; t < 1000; ++t) {
            const Index n = g.integer(1, 6);
            const SetPtr c = testgen::random_set(g, v, n);
            const Vector x = g.vec(n, 5.0);
            const Vector y = g.vec(n, 5.0);
            const Vector px = c->project(x);
            const Vector py = c->project(y);

            // idempotence
            REQUIRE((c->project(px) - px).norm() <= 1e-10 * (1 + x.norm()));
            // membership
            REQUIRE(contains(*c, px, membership_tolerance(px)));
            // firm nonexpansiveness
            REQUIRE((x - y).dot(px - py) >= (px - py).squaredNorm() - 1e-10);
            // variational inequality against a sampled point of the set
            REQUIRE((py - px).dot(x - px) <= 1e-9 * (1 + x.norm() * (1 + py.norm())));
            // ray invariance
            for (const double lambda : {0.0, 0.5, 1.0, 2.0, 10.0}) {
                const Vector ray = px + lambda * (x - px);
                REQUIRE((c->project(ray) - px).norm() <= 1e-10 * (1 + ray.norm()));
            }
        }
    }
}

TEST_CASE("translation formula")
{
    Gen g(7);
    for (const Variant v : testgen::all_variants()) {
        CAPTURE(testgen::name(v));
        for (int t = 0; t < 200; ++t) {
            const Index n = g.integer(1, 5);
            const SetPtr c = testgen::random_set(g, v, n);
            const Vector s = g.vec(n, 3.0);
            const Vector x = g.vec(n, 5.0);
            const Translate shifted(c, s);
            // P_{C - s}(x) = P_C(x + s) - s
            CHECK(near(shifted.project(x), c->project(x + s) - s, 1e-10 * (1 + x.norm() + s.norm())));
        }
    }

    SUBCASE("matches explicit translated constructions")
    {
        for (int t = 0; t < 200; ++t) {
            const Index n = g.integer(1, 5);
            const Vector c = g.vec(n);
            const Vector s = g.vec(n);
            const Vector x = g.vec(n, 4.0);
            const double r = g.uniform(0.1, 2.0);
            const auto ball = std::make_shared<Ball>(c, r);
            CHECK(near(Translate(ball, s).project(x), Ball(c - s, r).project(x), 1e-12 * (1 + x.norm())));

            const Vector a = g.vec(n);
            const double b = g.normal();
            const auto half = std::make_shared<Halfspace>(a, b);
            // {z : <a, z> <= b} - s = {w : <a, w> <= b - <a, s>}
            CHECK(near(Translate(half, s).project(x), Halfspace(a, b - a.dot(s)).project(x),
                       1e-12 * (1 + x.norm() + s.norm())));
        }
    }
}

TEST_CASE("scaling formula")
{
    Gen g(99);
    for (const double f : {-2.0, -1.0, 0.5, 3.0}) {
        CAPTURE(f);
        for (const Variant v : testgen::all_variants()) {
            CAPTURE(testgen::name(v));
            for (int t = 0; t < 100; ++t) {
                const Index n = g.integer(1, 5);
                const SetPtr c = testgen::random_set(g, v, n);
                const Vector x = g.vec(n, 5.0);
                // P_{f C}(f x) = f P_C(x)
                CHECK(near(Scaled(c, f).project(f * x), f * c->project(x), 1e-10 * (1 + std::abs(f) * x.norm())));
            }
        }

        for (int t = 0; t < 100; ++t) {
            const Index n = g.integer(1, 5);
            const Vector x = g.vec(n, 5.0);

            const Vector c = g.vec(n);
            const double r = g.uniform(0.0, 2.0);
            CHECK(near(Scaled(std::make_shared<Ball>(c, r), f).project(x), Ball(f * c, std::abs(f) * r).project(x),
                       1e-10 * (1 + x.norm())));

            const Vector lo = g.vec(n);
            const Vector hi = lo + g.vec(n).cwiseAbs();
            CHECK(near(Scaled(std::make_shared<Box>(lo, hi), f).project(x),
                       Box((f * lo).cwiseMin(f * hi), (f * lo).cwiseMax(f * hi)).project(x), 1e-10 * (1 + x.norm())));

            const Vector a = g.vec(n);
            const double b = g.normal();
            // f {<a,z> <= b} = {<a,w> <= f b} for f > 0 and {<-a,w> <= -f b} for f < 0
            const Halfspace explicit_half = f > 0 ? Halfspace(a, f * b) : Halfspace(-a, -f * b);
            CHECK(near(Scaled(std::make_shared<Halfspace>(a, b), f).project(x), explicit_half.project(x),
                       1e-10 * (1 + x.norm())));
            CHECK(near(Scaled(std::make_shared<Hyperplane>(a, b), f).project(x), Hyperplane(a, f * b).project(x),
                       1e-10 * (1 + x.norm())));

            const auto dir = testgen::random_subspace(g, n, g.integer(0, static_cast<int>(n)));
            const Vector y = g.vec(n);
            CHECK(near(Scaled(std::make_shared<LinearSubspace>(dir), f).project(x), dir.project(x),
                       1e-10 * (1 + x.norm())));
            CHECK(near(Scaled(std::make_shared<AffineSubspace>(y, dir), f).project(x),
                       AffineSubspace(f * y, dir).project(x), 1e-10 * (1 + x.norm() + std::abs(f) * y.norm())));
        }
    }
}

TEST_CASE("product and diagonal projections")
{
    SUBCASE("product is blockwise")
    {
        Gen g(5);
        for (int t = 0; t < 100; ++t) {
            std::vector<SetPtr> factors;
            Index total = 0;
            const int r = g.integer(1, 4);
            for (int i = 0; i < r; ++i) {
                const Index n = g.integer(1, 4);
                factors.push_back(testgen::random_set(g, testgen::all_variants()[g.integer(0, 7)], n));
                total += n;
            }
            const ProductSet prod(factors);
            REQUIRE(prod.dim() == total);
            const Vector x = g.vec(total, 3.0);
            const Vector p = prod.project(x);
            Index off = 0;
            for (const auto& f : factors) {
                CHECK(near(p.segment(off, f->dim()), f->project(x.segment(off, f->dim())), 0.0));
                off += f->dim();
            }
        }
    }

    SUBCASE("diagonal replicates the blockwise mean")
    {
        const Diagonal d(3, 2);
        Vector x(6);
        x << 1, 2, 3, 4, 8, 0;
        const Vector p = d.project(x);
        Vector expected(6);
        expected << 4, 2, 4, 2, 4, 2;
        CHECK(near(p, expected, 1e-15));
        CHECK(near(block_mean(x, 3), Eigen::Vector2d(4, 2), 1e-15));
        CHECK(near(replicate(Eigen::Vector2d(4, 2), 3), expected, 0.0));
        CHECK_THROWS_AS(block_mean(x, 4), DimensionError);
    }

    // Brute force: minimize |c - x| over a fine grid of each 2-D factor.
    SUBCASE("product of 2-D factors against grid search")
    {
        const auto ball = std::make_shared<Ball>(Eigen::Vector2d(0.3, -0.2), 0.8);
        const auto box = std::make_shared<Box>(Eigen::Vector2d(-0.5, 0.1), Eigen::Vector2d(0.4, 0.9));
        const ProductSet prod({ball, box});
        const double h = 0.002;
        std::vector<Eigen::Vector2d> ball_pts;
        std::vector<Eigen::Vector2d> box_pts;
        for (double u = -1.5; u <= 1.5; u += h) {
            for (double w = -1.5; w <= 1.5; w += h) {
                const Eigen::Vector2d c(u, w);
                if ((c - Eigen::Vector2d(0.3, -0.2)).norm() <= 0.8) {
                    ball_pts.push_back(c);
                }
                if (u >= -0.5 && u <= 0.4 && w >= 0.1 && w <= 0.9) {
                    box_pts.push_back(c);
                }
            }
        }
        Gen g(3);
        for (int t = 0; t < 5; ++t) {
            const Vector x = g.vec(4, 1.5);
            // The squared distance to (c1, c2) splits, so the 4-D grid minimum is found factor by factor;
            // each factor's minimum is still an exhaustive search over its own grid.
            double best1 = std::numeric_limits<double>::infinity();
            for (const auto& c1 : ball_pts) {
                best1 = std::min(best1, (c1 - x.head<2>()).squaredNorm());
            }
            double best2 = std::numeric_limits<double>::infinity();
            for (const auto& c2 : box_pts) {
                best2 = std::min(best2, (c2 - x.tail<2>()).squaredNorm());
            }
            const double grid_dist = std::sqrt(best1 + best2);
            const Vector p = prod.project(x);
            CHECK(contains(*ball, p.head<2>(), 1e-12));
            CHECK(contains(*box, p.tail<2>(), 1e-12));
            // No grid point of the set is closer, and the grid gets within its resolution.
            CHECK((p - x).norm() <= grid_dist + 1e-12);
            CHECK(grid_dist <= (p - x).norm() + 2 * h);
        }
    }

    SUBCASE("diagonal against grid search")
    {
        const Diagonal d(2, 2);
        Gen g(4);
        const double h = 0.002;
        for (int t = 0; t < 5; ++t) {
            const Vector x = g.vec(4);
            double best = std::numeric_limits<double>::infinity();
            for (double u = -3; u <= 3; u += h) {
                for (double w = -3; w <= 3; w += h) {
                    Vector c(4);
                    c << u, w, u, w;
                    best = std::min(best, (c - x).squaredNorm());
                }
            }
            const Vector p = d.project(x);
            CHECK(near(p.head<2>(), p.tail<2>(), 0.0));
            CHECK((p - x).norm() <= std::sqrt(best) + 1e-12);
            CHECK(std::sqrt(best) <= (p - x).norm() + 2 * h);
        }
    }
}

TEST_CASE("modified reflector")
{
    // B = {x : x_1 = 1} in R^2
    const Hyperplane b(Eigen::Vector2d(1, 0), 1.0);
    for (const double beta : {0.1, 0.5, 0.9}) {
        CHECK(near(modified_reflect(b, beta, Eigen::Vector2d(0, 0)), Eigen::Vector2d(2 * beta, 0), 1e-15));
        // unique fixed point (beta, 0)
        const Eigen::Vector2d fp(beta, 0);
        CHECK(near(modified_reflect(b, beta, fp), fp, 1e-15));
    }

    const auto zero = LinearSubspace::zero(2);
    CHECK(near(modified_reflect(zero, 0.5, Eigen::Vector2d(4, -2)), Eigen::Vector2d(-4, 2), 0.0));

    Gen g(8);
    for (const Variant v : testgen::all_variants()) {
        CAPTURE(testgen::name(v));
        for (int t = 0; t < 50; ++t) {
            const Index n = g.integer(1, 5);
            const SetPtr c = testgen::random_set(g, v, n);
            const Vector inside = c->project(g.vec(n, 3.0));
            // beta = 1 fixes points of the set
            CHECK(near(modified_reflect(*c, 1.0, inside), inside, 1e-10 * (1 + inside.norm())));
            // beta P_C(0) is the fixed point of 2 beta P_C - I
            const double beta = g.uniform(0.05, 0.95);
            const Vector z = beta * c->project(Vector::Zero(n));
            CHECK(near(modified_reflect(*c, beta, z), z, 1e-10 * (1 + z.norm())));
        }
    }

    CHECK_THROWS_AS(modified_reflect(b, 0.0, Eigen::Vector2d(0, 0)), ParameterError);
    CHECK_THROWS_AS(modified_reflect(b, 1.5, Eigen::Vector2d(0, 0)), ParameterError);
}
