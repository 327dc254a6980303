#pragma once

#include "aamr/sets.hpp"

namespace aamr {

/// T = (1 - alpha) I + alpha (2 beta P_B - I)(2 beta P_A - I),
/// with alpha in (0, 1] and beta in (0, 1). beta = 1 is DrOperator.
class AamrOperator {
public:
    AamrOperator(SetPtr a, SetPtr b, double alpha, double beta);

    Index dim() const { return a_->dim(); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const ConvexSet& first() const { return *a_; }
    const ConvexSet& second() const { return *b_; }

    Vector apply(const Vector& x) const { return apply(x, alpha_); }
    /// Same operator with a per-call relaxation (must lie in (0, 1]).
    Vector apply(const Vector& x, double alpha) const;

    /// x - T(x), evaluated as 2 alpha beta (P_A x - P_B(2 beta P_A x - x)).
    Vector displacement(const Vector& x) const;

    /// |P_B(2 beta P_A x - x) - P_A x|; zero exactly on Fix T.
    double fixed_point_residual(const Vector& x) const;

private:
    SetPtr a_;
    SetPtr b_;
    double alpha_;
    double beta_;
};

/// (1 - alpha) I + alpha R_B R_A with alpha in (0, 1).
class DrOperator {
public:
    DrOperator(SetPtr a, SetPtr b, double alpha);

    Index dim() const { return a_->dim(); }
    double alpha() const { return alpha_; }
    Vector apply(const Vector& x) const;

private:
    SetPtr a_;
    SetPtr b_;
    double alpha_;
};

void validate_aamr_parameters(double alpha, double beta);

} // namespace aamr
