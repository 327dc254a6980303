#pragma once

#include "aamr/types.hpp"

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace aamr {

enum class Status {
    Converged,
    /// Heuristic: |x_k| passed the threshold while growing monotonically.
    Diverged,
    BudgetExhausted,
    /// The step could not be evaluated (e.g. an empty halfspace intersection).
    NumericalFailure,
};

std::string_view to_string(Status status);

/// Raised by a step function when its update is undefined; the engine turns it
/// into Status::NumericalFailure.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

using ErrorFunction = std::function<double(const Vector&)>;

struct StoppingPolicy {
    enum class Mode {
        TrueError, ///< error(monitor(x_k)) < eps
        Residual,  ///< |x_{k+1} - x_k| < eps
        BudgetOnly ///< run exactly max_iter steps (unless divergence fires)
    };

    Mode mode = Mode::Residual;
    ErrorFunction error;
    double eps = 1e-3;
    std::size_t max_iter = 100000;
    double divergence_threshold = 1e6;
    std::size_t divergence_window = 100;
    /// Expected dimension of monitored points, checked once; -1 skips the check.
    Index target_dim = -1;

    static StoppingPolicy true_error(ErrorFunction error, double eps, std::size_t max_iter,
                                     Index target_dim = -1);
    static StoppingPolicy residual(double eps, std::size_t max_iter);
    static StoppingPolicy budget_only(std::size_t max_iter);

    void validate() const;
};

/// |z - target|.
ErrorFunction distance_to_point(Vector target);
/// Distance from z to the span of an orthonormal basis.
ErrorFunction distance_to_span(Matrix basis);

struct TraceEntry {
    std::size_t k = 0;
    double error = 0;     ///< policy error at x_k (NaN in budget-only mode)
    double step_norm = 0; ///< |x_{k+1} - x_k| (NaN when no step was taken)
};

struct SolveResult {
    Status status = Status::BudgetExhausted;
    std::size_t iterations = 0;
    Vector shadow;  ///< monitored point at the final iterate
    Vector iterate; ///< final x_k
    Vector drift;   ///< last x_k - x_{k+1}
    double final_error = 0;
    std::vector<TraceEntry> trace;
};

/// Step function: x_k, k -> x_{k+1}.
using StepFunction = std::function<Vector(const Vector&, std::size_t)>;
using MonitorFunction = std::function<Vector(const Vector&)>;

struct IterateOptions {
    bool keep_trace = false;
};

/// Generic fixed-point driver shared by every method.
///
/// At each k the monitored point z_k = monitor(x_k) is checked first, so the
/// reported iteration count is the first k that meets the policy. Divergence is
/// declared when |x_k| exceeds the threshold and |x_j| grew at each of the last
/// min(window, k) steps, k >= 1.
SolveResult iterate(const StepFunction& step, const Vector& x0, const StoppingPolicy& policy,
                    const MonitorFunction& monitor, const IterateOptions& options = {});

} // namespace aamr
