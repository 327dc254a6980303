#include "aamr/solvers.hpp"

#include <cmath>
#include <string>

namespace aamr {

namespace {

void require_same_dim(const SetPtr& a, const SetPtr& b, const Vector& q)
{
    if (!a || !b) {
        throw ParameterError("solver needs non-null sets");
    }
    require_dim(a->dim(), b->dim(), "solver sets");
    require_dim(a->dim(), q.size(), "point to project");
}

void require_family(std::span<const SetPtr> sets, const Vector& q)
{
    if (sets.empty()) {
        throw ParameterError("solver needs at least one set");
    }
    for (const auto& s : sets) {
        if (!s) {
            throw ParameterError("solver set is null");
        }
        require_dim(q.size(), s->dim(), "solver sets");
    }
}

IterateOptions engine_options(const SolveOptions& options) { return IterateOptions{options.keep_trace}; }

} // namespace

SolveResult aamr_solve(const SetPtr& a, const SetPtr& b, const Vector& q, const Vector& x0, double alpha,
                       double beta, const StoppingPolicy& policy, const SolveOptions& options)
{
    require_same_dim(a, b, q);
    require_dim(q.size(), x0.size(), "starting point");
    const AamrOperator op(std::make_shared<Translate>(a, q), std::make_shared<Translate>(b, q), alpha, beta);

    StepFunction step;
    if (options.alpha_schedule) {
        step = [&op, schedule = options.alpha_schedule](const Vector& x, std::size_t k) {
            return op.apply(x, schedule(k));
        };
    } else {
        step = [&op](const Vector& x, std::size_t) { return op.apply(x); };
    }
    const auto monitor = [&a, &q](const Vector& x) { return a->project(x + q); };
    return iterate(step, x0, policy, monitor, engine_options(options));
}

SolveResult aamr_product_solve(std::span<const SetPtr> sets, const Vector& q, std::span<const Vector> x0,
                               double alpha, double beta, const StoppingPolicy& policy, const SolveOptions& options)
{
    require_family(sets, q);
    const auto r = static_cast<Index>(sets.size());
    const Index n = q.size();

    std::vector<SetPtr> shifted;
    shifted.reserve(sets.size());
    for (const auto& s : sets) {
        shifted.push_back(std::make_shared<Translate>(s, q));
    }
    const AamrOperator op(std::make_shared<Diagonal>(r, n), std::make_shared<ProductSet>(std::move(shifted)), alpha,
                          beta);

    Vector start;
    if (x0.empty()) {
        start = replicate(q, r);
    } else {
        if (x0.size() != sets.size()) {
            throw DimensionError("product start needs one block per set");
        }
        start.resize(r * n);
        for (Index i = 0; i < r; ++i) {
            require_dim(n, x0[static_cast<std::size_t>(i)].size(), "product start block");
            start.segment(i * n, n) = x0[static_cast<std::size_t>(i)];
        }
    }

    StepFunction step;
    if (options.alpha_schedule) {
        step = [&op, schedule = options.alpha_schedule](const Vector& x, std::size_t k) {
            return op.apply(x, schedule(k));
        };
    } else {
        step = [&op](const Vector& x, std::size_t) { return op.apply(x); };
    }
    const auto monitor = [&q, r](const Vector& x) -> Vector { return q + block_mean(x, r); };
    return iterate(step, start, policy, monitor, engine_options(options));
}

SolveResult rap_solve(const SetPtr& u, const SetPtr& v, const Vector& q, double mu, const StoppingPolicy& policy,
                      const SolveOptions& options)
{
    require_same_dim(u, v, q);
    if (!(mu > 0.0 && mu < 2.0)) {
        throw ParameterError("relaxation mu must lie in (0,2), got " + std::to_string(mu));
    }
    const auto step = [&u, &v, mu](const Vector& x, std::size_t) -> Vector {
        return (1.0 - mu) * x + mu * v->project(u->project(x));
    };
    const auto monitor = [](const Vector& x) { return x; };
    return iterate(step, q, policy, monitor, engine_options(options));
}

SolveResult map_solve(const SetPtr& u, const SetPtr& v, const Vector& q, const StoppingPolicy& policy,
                      const SolveOptions& options)
{
    return rap_solve(u, v, q, 1.0, policy, options);
}

SolveResult dr_solve(const SetPtr& a, const SetPtr& b, const Vector& q, double alpha, const StoppingPolicy& policy,
                     const SolveOptions& options)
{
    require_same_dim(a, b, q);
    const DrOperator op(a, b, alpha);
    const auto step = [&op](const Vector& x, std::size_t) { return op.apply(x); };
    const auto monitor = [&a](const Vector& x) { return a->project(x); };
    return iterate(step, q, policy, monitor, engine_options(options));
}

Vector haugazeau_projection(const Vector& x, const Vector& y, const Vector& z)
{
    const Vector xy = x - y;
    const Vector yz = y - z;
    const double pi = xy.dot(yz);
    const double mu = xy.squaredNorm();
    const double nu = yz.squaredNorm();
    double rho = mu * nu - pi * pi;
    // Cauchy-Schwarz makes rho >= 0; rounding may leave a tiny negative.
    if (std::abs(rho) <= 1e-14 * mu * nu) {
        rho = 0.0;
    }

    if (rho == 0.0 && pi >= 0.0) {
        return z;
    }
    if (rho > 0.0 && pi * nu >= rho) {
        return x + (1.0 + pi / nu) * (z - y);
    }
    if (rho > 0.0 && pi * nu < rho) {
        return y + (nu / rho) * (pi * xy + mu * (z - y));
    }
    throw NumericalFailure("Haugazeau step: halfspace intersection is empty");
}

SolveResult haugazeau_solve(const SetPtr& u, const SetPtr& v, const Vector& q, const StoppingPolicy& policy,
                            const SolveOptions& options)
{
    require_same_dim(u, v, q);
    const auto step = [&u, &v, &q](const Vector& x, std::size_t k) {
        const Vector z = (k % 2 == 0) ? u->project(x) : v->project(x);
        return haugazeau_projection(q, x, z);
    };
    const auto monitor = [](const Vector& x) { return x; };
    return iterate(step, q, policy, monitor, engine_options(options));
}

SolveResult hlwb_solve(std::span<const SetPtr> sets, const Vector& q, const StoppingPolicy& policy,
                       const SolveOptions& options)
{
    require_family(sets, q);
    const auto step = [sets, &q](const Vector& x, std::size_t k) -> Vector {
        const double lambda = 1.0 / static_cast<double>(k + 1);
        return lambda * q + (1.0 - lambda) * sets[k % sets.size()]->project(x);
    };
    const auto monitor = [](const Vector& x) { return x; };
    return iterate(step, q, policy, monitor, engine_options(options));
}

// ---------------------------------------------------------------------------

CombettesScheme::CombettesScheme(std::vector<SetPtr> sets, Vector q, double gamma)
    : sets_(std::move(sets)), q_(std::move(q)), gamma_(gamma)
{
    require_family(sets_, q_);
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
        throw ParameterError("gamma must be positive");
    }
    const auto r = copies();
    q_lifted_ = replicate(q_, r);
    product_ = std::make_shared<ProductSet>(sets_);
    diagonal_ = std::make_shared<Diagonal>(r, base_dim());

    const double b = beta();
    std::vector<SetPtr> recast;
    recast.reserve(sets_.size());
    for (const auto& s : sets_) {
        auto dilated = std::make_shared<Scaled>(s, 1.0 / b);
        recast.push_back(std::make_shared<Translate>(std::move(dilated), ((1.0 - b) / b) * q_));
    }
    recast_product_ = std::make_shared<ProductSet>(std::move(recast));
}

Vector CombettesScheme::direct_step(const Vector& z, double lambda) const
{
    if (!(lambda > 0.0 && lambda <= 2.0)) {
        throw ParameterError("CM relaxation lambda must lie in (0,2]");
    }
    const Vector w = 2.0 * product_->project((z + gamma_ * q_lifted_) / (gamma_ + 1.0)) - z;
    return (1.0 - lambda / 2.0) * z + (lambda / 2.0) * modified_reflect(*diagonal_, 1.0, w);
}

Vector CombettesScheme::recast_step(const Vector& z, double lambda) const
{
    const double b = beta();
    const double a = lambda / 2.0;
    const AamrOperator op(recast_product_, diagonal_, a, b);
    const Vector inner = 2.0 * b * recast_product_->project(z) - z + q_lifted_;
    return op.apply(z) + 2.0 * (1.0 - b) * a * diagonal_->project(inner);
}

Vector CombettesScheme::monitor(const Vector& z) const
{
    return block_mean(product_->project((z + gamma_ * q_lifted_) / (gamma_ + 1.0)), copies());
}

SolveResult cm_solve(std::span<const SetPtr> sets, const Vector& q, double gamma, const Schedule& lambda,
                     const StoppingPolicy& policy, const SolveOptions& options, std::span<const Vector> z0)
{
    const CombettesScheme scheme(std::vector<SetPtr>(sets.begin(), sets.end()), q, gamma);
    const Index r = scheme.copies();
    const Index n = scheme.base_dim();

    Vector start;
    if (z0.empty()) {
        start = replicate(q, r);
    } else {
        if (static_cast<Index>(z0.size()) != r) {
            throw DimensionError("CM start needs one block per set");
        }
        start.resize(r * n);
        for (Index i = 0; i < r; ++i) {
            require_dim(n, z0[static_cast<std::size_t>(i)].size(), "CM start block");
            start.segment(i * n, n) = z0[static_cast<std::size_t>(i)];
        }
    }

    const auto step = [&scheme, &lambda](const Vector& z, std::size_t k) {
        return scheme.direct_step(z, lambda ? lambda(k) : 1.8);
    };
    const auto monitor = [&scheme](const Vector& z) { return scheme.monitor(z); };
    return iterate(step, start, policy, monitor, engine_options(options));
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_two(std::span<const SetPtr> sets, const char* name)
{
    if (sets.size() != 2) {
        throw ParameterError(std::string(name) + " needs exactly two sets, got " + std::to_string(sets.size()));
    }
}

} // namespace

void validate(const MethodSpec& spec)
{
    std::visit(Overloaded{
                   [](const method::Aamr& m) { validate_aamr_parameters(m.alpha, m.beta); },
                   [](const method::Drm& m) {
                       if (!(m.alpha > 0.0 && m.alpha < 1.0)) {
                           throw ParameterError("drm alpha must lie in (0,1)");
                       }
                   },
                   [](const method::Map&) {},
                   [](const method::Rap& m) {
                       if (!(m.mu > 0.0 && m.mu < 2.0)) {
                           throw ParameterError("rap mu must lie in (0,2)");
                       }
                   },
                   [](const method::Haugazeau&) {},
                   [](const method::Hlwb&) {},
                   [](const method::Cm& m) {
                       if (!(m.gamma > 0.0)) {
                           throw ParameterError("cm gamma must be positive");
                       }
                       if (!(m.lambda > 0.0 && m.lambda <= 2.0)) {
                           throw ParameterError("cm lambda must lie in (0,2]");
                       }
                   },
               },
               spec);
}

std::string method_name(const MethodSpec& spec)
{
    return std::visit(Overloaded{
                          [](const method::Aamr&) { return std::string("aamr"); },
                          [](const method::Drm&) { return std::string("drm"); },
                          [](const method::Map&) { return std::string("map"); },
                          [](const method::Rap&) { return std::string("rap"); },
                          [](const method::Haugazeau&) { return std::string("haugazeau"); },
                          [](const method::Hlwb&) { return std::string("hlwb"); },
                          [](const method::Cm&) { return std::string("cm"); },
                      },
                      spec);
}

MethodParameters parameters_of(const MethodSpec& spec)
{
    return std::visit(Overloaded{
                          [](const method::Aamr& m) { return MethodParameters{m.alpha, m.beta, {}, {}}; },
                          [](const method::Drm& m) { return MethodParameters{m.alpha, {}, {}, {}}; },
                          [](const method::Map&) { return MethodParameters{{}, {}, 1.0, {}}; },
                          [](const method::Rap& m) { return MethodParameters{{}, {}, m.mu, {}}; },
                          [](const method::Haugazeau&) { return MethodParameters{}; },
                          [](const method::Hlwb&) { return MethodParameters{}; },
                          [](const method::Cm& m) {
                              return MethodParameters{m.lambda / 2.0, 1.0 / (1.0 + m.gamma), {}, m.gamma};
                          },
                      },
                      spec);
}

SolveResult solve(const MethodSpec& spec, std::span<const SetPtr> sets, const Vector& q,
                  const StoppingPolicy& policy, const SolveOptions& options)
{
    validate(spec);
    return std::visit(
        Overloaded{
            [&](const method::Aamr& m) {
                if (sets.size() == 2) {
                    return aamr_solve(sets[0], sets[1], q, q, m.alpha, m.beta, policy, options);
                }
                return aamr_product_solve(sets, q, {}, m.alpha, m.beta, policy, options);
            },
            [&](const method::Drm& m) {
                require_two(sets, "drm");
                return dr_solve(sets[0], sets[1], q, m.alpha, policy, options);
            },
            [&](const method::Map&) {
                require_two(sets, "map");
                return map_solve(sets[0], sets[1], q, policy, options);
            },
            [&](const method::Rap& m) {
                require_two(sets, "rap");
                return rap_solve(sets[0], sets[1], q, m.mu, policy, options);
            },
            [&](const method::Haugazeau&) {
                require_two(sets, "haugazeau");
                return haugazeau_solve(sets[0], sets[1], q, policy, options);
            },
            [&](const method::Hlwb&) { return hlwb_solve(sets, q, policy, options); },
            [&](const method::Cm& m) {
                const double lambda = m.lambda;
                return cm_solve(sets, q, m.gamma, [lambda](std::size_t) { return lambda; }, policy, options);
            },
        },
        spec);
}

} // namespace aamr
