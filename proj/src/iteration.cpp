#include "aamr/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aamr {

std::string_view to_string(Status status)
{
    switch (status) {
    case Status::Converged:
        return "converged";
    case Status::Diverged:
        return "diverged";
    case Status::BudgetExhausted:
        return "budget_exhausted";
    case Status::NumericalFailure:
        return "numerical_failure";
    }
    return "unknown";
}

StoppingPolicy StoppingPolicy::true_error(ErrorFunction error, double eps, std::size_t max_iter, Index target_dim)
{
    StoppingPolicy p;
    p.target_dim = target_dim;
    p.mode = Mode::TrueError;
    p.error = std::move(error);
    p.eps = eps;
    p.max_iter = max_iter;
    return p;
}

StoppingPolicy StoppingPolicy::residual(double eps, std::size_t max_iter)
{
    StoppingPolicy p;
    p.mode = Mode::Residual;
    p.eps = eps;
    p.max_iter = max_iter;
    return p;
}

StoppingPolicy StoppingPolicy::budget_only(std::size_t max_iter)
{
    StoppingPolicy p;
    p.mode = Mode::BudgetOnly;
    p.max_iter = max_iter;
    return p;
}

void StoppingPolicy::validate() const
{
    if (!(eps > 0.0)) {
        throw ParameterError("stopping tolerance eps must be positive");
    }
    if (max_iter < 1) {
        throw ParameterError("max_iter must be at least 1");
    }
    if (!(divergence_threshold > 0.0)) {
        throw ParameterError("divergence threshold must be positive");
    }
    if (mode == Mode::TrueError && !error) {
        throw ParameterError("true-error stopping needs an error function");
    }
}

SolveResult iterate(const StepFunction& step, const Vector& x0, const StoppingPolicy& policy,
                    const MonitorFunction& monitor, const IterateOptions& options)
{
    policy.validate();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const Index dim = x0.size();

    SolveResult result;
    Vector x = x0;
    Vector drift = Vector::Zero(dim);
    std::size_t growth_run = 0;

    for (std::size_t k = 0;; ++k) {
        const Vector z = monitor(x);
        if (k == 0 && policy.target_dim >= 0) {
            require_dim(policy.target_dim, z.size(), "monitored point");
        }

        const bool need_step = policy.mode == StoppingPolicy::Mode::Residual || k < policy.max_iter;
        Vector next;
        double step_norm = nan;
        bool failed = false;
        if (need_step) {
            try {
                next = step(x, k);
            } catch (const NumericalFailure&) {
                failed = true;
            }
            if (!failed) {
                require_dim(dim, next.size(), "iteration step");
                step_norm = (next - x).norm();
            }
        }

        double error = nan;
        switch (policy.mode) {
        case StoppingPolicy::Mode::TrueError:
            error = policy.error(z);
            break;
        case StoppingPolicy::Mode::Residual:
            error = step_norm;
            break;
        case StoppingPolicy::Mode::BudgetOnly:
            break;
        }
        if (options.keep_trace) {
            result.trace.push_back({k, error, step_norm});
        }
        if (!failed && need_step) {
            drift = x - next;
        }

        auto finish = [&](Status status) {
            result.status = status;
            result.iterations = k;
            result.shadow = z;
            result.iterate = x;
            result.drift = drift;
            result.final_error = error;
            return std::move(result);
        };

        if (policy.mode != StoppingPolicy::Mode::BudgetOnly && error < policy.eps) {
            return finish(Status::Converged);
        }
        if (failed || !x.allFinite()) {
            return finish(Status::NumericalFailure);
        }
        if (k > 0 && x.norm() > policy.divergence_threshold && growth_run >= std::min(policy.divergence_window, k)) {
            return finish(Status::Diverged);
        }
        if (k >= policy.max_iter) {
            return finish(Status::BudgetExhausted);
        }

        growth_run = next.norm() > x.norm() ? growth_run + 1 : 0;
        x = std::move(next);
    }
}

ErrorFunction distance_to_point(Vector target)
{
    return [target = std::move(target)](const Vector& z) { return (z - target).norm(); };
}

ErrorFunction distance_to_span(Matrix basis)
{
    return [basis = std::move(basis)](const Vector& z) {
        if (basis.cols() == 0) {
            return z.norm();
        }
        return (z - basis * (basis.transpose() * z)).norm();
    };
}

} // namespace aamr
