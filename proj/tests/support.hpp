#pragma once

// Hand-rolled random generators shared by the property tests.

#include "aamr/sets.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testgen {

using aamr::Index;
using aamr::Matrix;
using aamr::SetPtr;
using aamr::Vector;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double normal() { return std::normal_distribution<double>()(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Vector vec(Index n, double scale = 1.0)
    {
        Vector v(n);
        for (Index i = 0; i < n; ++i) {
            v(i) = scale * normal();
        }
        return v;
    }

    Matrix mat(Index rows, Index cols)
    {
        Matrix m(rows, cols);
        for (Index j = 0; j < cols; ++j) {
            for (Index i = 0; i < rows; ++i) {
                m(i, j) = normal();
            }
        }
        return m;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

enum class Variant { Subspace, Affine, Ball, Halfspace, Hyperplane, Box, Translate, Scaled };

inline const std::vector<Variant>& all_variants()
{
    static const std::vector<Variant> v{Variant::Subspace,   Variant::Affine, Variant::Ball,      Variant::Halfspace,
                                        Variant::Hyperplane, Variant::Box,    Variant::Translate, Variant::Scaled};
    return v;
}

inline std::string name(Variant v)
{
    switch (v) {
    case Variant::Subspace:
        return "subspace";
    case Variant::Affine:
        return "affine";
    case Variant::Ball:
        return "ball";
    case Variant::Halfspace:
        return "halfspace";
    case Variant::Hyperplane:
        return "hyperplane";
    case Variant::Box:
        return "box";
    case Variant::Translate:
        return "translate";
    case Variant::Scaled:
        return "scaled";
    }
    return "?";
}

inline aamr::LinearSubspace random_subspace(Gen& g, Index n, Index d)
{
    return aamr::LinearSubspace::from_spanning(g.mat(n, d));
}

/// A random set of the given variant in R^n. Translate and Scaled wrap a
/// random ball or box.
inline SetPtr random_set(Gen& g, Variant v, Index n)
{
    using namespace aamr;
    switch (v) {
    case Variant::Subspace:
        return std::make_shared<LinearSubspace>(random_subspace(g, n, g.integer(0, static_cast<int>(n))));
    case Variant::Affine:
        return std::make_shared<AffineSubspace>(g.vec(n, 2.0),
                                                random_subspace(g, n, g.integer(0, static_cast<int>(n))));
    case Variant::Ball:
        return std::make_shared<Ball>(g.vec(n, 2.0), g.uniform(0.0, 3.0));
    case Variant::Halfspace:
        return std::make_shared<Halfspace>(g.vec(n), g.normal());
    case Variant::Hyperplane:
        return std::make_shared<Hyperplane>(g.vec(n), g.normal());
    case Variant::Box: {
        const Vector c = g.vec(n, 2.0);
        Vector w(n);
        for (Index i = 0; i < n; ++i) {
            w(i) = g.uniform(0.0, 2.0);
        }
        return std::make_shared<Box>(c - w, c + w);
    }
    case Variant::Translate:
        return std::make_shared<Translate>(random_set(g, g.integer(0, 1) ? Variant::Ball : Variant::Box, n),
                                           g.vec(n, 2.0));
    case Variant::Scaled: {
        double f = g.uniform(-3.0, 3.0);
        if (std::abs(f) < 0.2) {
            f = 0.2;
        }
        return std::make_shared<Scaled>(random_set(g, g.integer(0, 1) ? Variant::Ball : Variant::Halfspace, n), f);
    }
    }
    return nullptr;
}

/// A random set of the variant whose relative interior contains p.
inline SetPtr random_set_through(Gen& g, Variant v, const Vector& p)
{
    using namespace aamr;
    const Index n = p.size();
    switch (v) {
    case Variant::Subspace: {
        Matrix span(n, 1 + g.integer(0, static_cast<int>(n) - 1));
        span.col(0) = p;
        span.rightCols(span.cols() - 1) = g.mat(n, span.cols() - 1);
        return std::make_shared<LinearSubspace>(LinearSubspace::from_spanning(span));
    }
    case Variant::Affine:
        return std::make_shared<AffineSubspace>(p, random_subspace(g, n, g.integer(0, static_cast<int>(n) - 1)));
    case Variant::Ball: {
        const Vector c = p + g.vec(n);
        return std::make_shared<Ball>(c, (c - p).norm() + g.uniform(0.2, 2.0));
    }
    case Variant::Halfspace: {
        const Vector a = g.vec(n);
        return std::make_shared<Halfspace>(a, a.dot(p) + g.uniform(0.1, 2.0));
    }
    case Variant::Hyperplane: {
        const Vector a = g.vec(n);
        return std::make_shared<Hyperplane>(a, a.dot(p));
    }
    case Variant::Box: {
        Vector lo(n);
        Vector hi(n);
        for (Index i = 0; i < n; ++i) {
            lo(i) = p(i) - g.uniform(0.1, 2.0);
            hi(i) = p(i) + g.uniform(0.1, 2.0);
        }
        return std::make_shared<Box>(lo, hi);
    }
    case Variant::Translate: {
        // inner - s contains p  <=>  inner contains p + s.
        const Vector s = g.vec(n, 2.0);
        return std::make_shared<Translate>(random_set_through(g, Variant::Ball, p + s), s);
    }
    case Variant::Scaled: {
        double f = g.uniform(0.3, 3.0) * (g.integer(0, 1) ? 1.0 : -1.0);
        return std::make_shared<Scaled>(random_set_through(g, Variant::Box, p / f), f);
    }
    }
    return nullptr;
}

} // namespace testgen
