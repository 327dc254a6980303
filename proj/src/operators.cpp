#include "aamr/operators.hpp"

#include <string>

namespace aamr {

namespace {

void require_pair(const SetPtr& a, const SetPtr& b)
{
    if (!a || !b) {
        throw ParameterError("operator needs two non-null sets");
    }
    require_dim(a->dim(), b->dim(), "operator sets");
}

void require_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in (0,1], got " + std::to_string(alpha));
    }
}

} // namespace

void validate_aamr_parameters(double alpha, double beta)
{
    require_alpha(alpha);
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ParameterError("beta must lie in (0,1); use --method drm for beta=1");
    }
}

AamrOperator::AamrOperator(SetPtr a, SetPtr b, double alpha, double beta)
    : a_(std::move(a)), b_(std::move(b)), alpha_(alpha), beta_(beta)
{
    require_pair(a_, b_);
    validate_aamr_parameters(alpha_, beta_);
}

Vector AamrOperator::apply(const Vector& x, double alpha) const
{
    require_alpha(alpha);
    const Vector reflected_a = modified_reflect(*a_, beta_, x);
    const Vector reflected_b = modified_reflect(*b_, beta_, reflected_a);
    return (1.0 - alpha) * x + alpha * reflected_b;
}

Vector AamrOperator::displacement(const Vector& x) const
{
    const Vector pa = a_->project(x);
    const Vector pb = b_->project(2.0 * beta_ * pa - x);
    return 2.0 * alpha_ * beta_ * (pa - pb);
}

double AamrOperator::fixed_point_residual(const Vector& x) const
{
    const Vector pa = a_->project(x);
    return (b_->project(2.0 * beta_ * pa - x) - pa).norm();
}

DrOperator::DrOperator(SetPtr a, SetPtr b, double alpha) : a_(std::move(a)), b_(std::move(b)), alpha_(alpha)
{
    require_pair(a_, b_);
    if (!(alpha_ > 0.0 && alpha_ < 1.0)) {
        throw ParameterError("Douglas-Rachford alpha must lie in (0,1), got " + std::to_string(alpha_));
    }
}

Vector DrOperator::apply(const Vector& x) const
{
    const Vector ra = modified_reflect(*a_, 1.0, x);
    return (1.0 - alpha_) * x + alpha_ * modified_reflect(*b_, 1.0, ra);
}

} // namespace aamr
