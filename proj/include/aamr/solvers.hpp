#pragma once

#include "aamr/iteration.hpp"
#include "aamr/operators.hpp"
#include "aamr/sets.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace aamr {

/// Per-iteration parameter schedule k -> value.
using Schedule = std::function<double(std::size_t)>;

struct SolveOptions {
    bool keep_trace = false;
    /// Optional per-iteration alpha for AAMR; values must stay in (0, 1] with a
    /// positive infimum. Empty means the constant alpha passed to the solver.
    Schedule alpha_schedule;
};

// --- Best-approximation methods ---------------------------------------------
//
// Every solver returns the monitored ("shadow") point in SolveResult::shadow;
// on Converged it approximates P_{A∩B}(q). Comparison methods start at q.

/// Iterates x_{k+1} = T_{A-q, B-q, alpha, beta}(x_k) from any x0; monitors P_A(x_k + q).
SolveResult aamr_solve(const SetPtr& a, const SetPtr& b, const Vector& q, const Vector& x0, double alpha,
                       double beta, const StoppingPolicy& policy, const SolveOptions& options = {});

/// AAMR in (R^n)^r with A = diagonal, B = prod (C_i - q). The monitored point is
/// q + mean of the blocks, always a base-space vector. Empty `x0` starts at (q, ..., q).
SolveResult aamr_product_solve(std::span<const SetPtr> sets, const Vector& q, std::span<const Vector> x0,
                               double alpha, double beta, const StoppingPolicy& policy,
                               const SolveOptions& options = {});

/// Relaxed alternating projections x_{k+1} = (1 - mu) x_k + mu P_V P_U x_k, mu in (0, 2).
SolveResult rap_solve(const SetPtr& u, const SetPtr& v, const Vector& q, double mu, const StoppingPolicy& policy,
                      const SolveOptions& options = {});

/// Alternating projections (RAP with mu = 1).
SolveResult map_solve(const SetPtr& u, const SetPtr& v, const Vector& q, const StoppingPolicy& policy,
                      const SolveOptions& options = {});

/// Douglas-Rachford on the unshifted sets from x0 = q; monitors P_A(x_k).
SolveResult dr_solve(const SetPtr& a, const SetPtr& b, const Vector& q, double alpha, const StoppingPolicy& policy,
                     const SolveOptions& options = {});

/// Projection of x onto H(x, y) ∩ H(y, z), where H(a, b) = {w : <w - b, a - b> <= 0}.
/// Throws NumericalFailure when the two halfspaces do not meet.
Vector haugazeau_projection(const Vector& x, const Vector& y, const Vector& z);

/// x_{k+1} = Q(x_0, x_k, P_{C(k)} x_k) with C(k) alternating U, V; x_0 = q.
SolveResult haugazeau_solve(const SetPtr& u, const SetPtr& v, const Vector& q, const StoppingPolicy& policy,
                            const SolveOptions& options = {});

/// Halpern-type cyclic projections x_{k+1} = l_k q + (1 - l_k) P_{C(k mod r)} x_k,
/// l_k = 1/(k+1), x_0 = q.
SolveResult hlwb_solve(std::span<const SetPtr> sets, const Vector& q, const StoppingPolicy& policy,
                       const SolveOptions& options = {});

/// Combettes' product-space Douglas-Rachford scheme for the resolvent of the sum of normal cones.
///
/// Direct form:
///   z+ = (1 - l/2) z + (l/2) R_D(2 P_C((z + g q)/(g + 1)) - z)
/// Recast form, with beta = 1/(1 + g), alpha = l/2 and C' = (1/beta) C - ((1 - beta)/beta) q:
///   z+ = T_{C', D, alpha, beta}(z) + 2 (1 - beta) alpha P_D(2 beta P_{C'} z - z + q)
/// Both produce the same sequence. The monitored point is the common block of
/// P_D P_C((z + g q)/(g + 1)).
class CombettesScheme {
public:
    CombettesScheme(std::vector<SetPtr> sets, Vector q, double gamma);

    Index base_dim() const { return q_.size(); }
    Index copies() const { return static_cast<Index>(sets_.size()); }
    double gamma() const { return gamma_; }
    double beta() const { return 1.0 / (1.0 + gamma_); }

    Vector direct_step(const Vector& z, double lambda) const;
    Vector recast_step(const Vector& z, double lambda) const;
    Vector monitor(const Vector& z) const;

private:
    std::vector<SetPtr> sets_;
    Vector q_;
    Vector q_lifted_;
    double gamma_;
    SetPtr product_;
    SetPtr diagonal_;
    SetPtr recast_product_;
};

/// Runs the direct form of CombettesScheme. lambda must stay in (0, 2]; an
/// empty schedule means the constant 1.8. Empty `z0` starts at (q, ..., q).
SolveResult cm_solve(std::span<const SetPtr> sets, const Vector& q, double gamma, const Schedule& lambda,
                     const StoppingPolicy& policy, const SolveOptions& options = {},
                     std::span<const Vector> z0 = {});

// --- Method descriptions ------------------------------------------------------

namespace method {
struct Aamr {
    double alpha = 0.9;
    double beta = 0.7;
};
struct Drm {
    double alpha = 0.5;
};
struct Map {};
struct Rap {
    double mu = 1.0;
};
struct Haugazeau {};
struct Hlwb {};
struct Cm {
    double gamma = 0.25;
    double lambda = 1.8;
};
} // namespace method

using MethodSpec =
    std::variant<method::Aamr, method::Drm, method::Map, method::Rap, method::Haugazeau, method::Hlwb, method::Cm>;

/// Throws ParameterError when a parameter is out of range.
void validate(const MethodSpec& spec);

/// Short lowercase identifier: aamr, drm, map, rap, haugazeau, hlwb, cm.
std::string method_name(const MethodSpec& spec);

struct MethodParameters {
    std::optional<double> alpha, beta, mu, gamma;
};
MethodParameters parameters_of(const MethodSpec& spec);

/// Dispatches to the matching solver with x0 = q. AAMR with r != 2 sets uses
/// the product form; DRM, MAP, RAP and Haugazeau require exactly two sets.
SolveResult solve(const MethodSpec& spec, std::span<const SetPtr> sets, const Vector& q,
                  const StoppingPolicy& policy, const SolveOptions& options = {});

} // namespace aamr
