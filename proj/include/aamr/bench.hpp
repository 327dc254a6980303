#pragma once

#include "aamr/geometry.hpp"
#include "aamr/solvers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace aamr::bench {

/// 0.01, 0.02, ..., 1.00.
std::vector<double> default_alpha_grid();
/// 0.40, 0.45, ..., 0.95, 0.99 (13 values).
std::vector<double> default_beta_grid();

struct SweepConfig {
    Index n = 50;
    int n_instances = 20;
    int n_starts = 10;
    double start_norm = 10.0;
    double eps = 1e-3;
    std::size_t max_iter = 100000;
    std::vector<double> alpha_grid = default_alpha_grid();
    std::vector<double> beta_grid = default_beta_grid();
    std::vector<double> mu_grid;
    std::vector<double> gamma_grid;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    int angle_bins = 20;

    /// Throws ParameterError.
    void validate() const;
};

/// Independent RNG stream for one (instance, start) task. Depends only on the
/// three integers, so results do not depend on scheduling order.
std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t instance_id, std::uint64_t stream_id);

struct Instance {
    int id = 0;
    geometry::SubspacePair pair;
    SetPtr u;
    SetPtr v;
};

/// Subspace pairs in R^n with Friedrichs angles stratified over (0, pi/2):
/// instance i draws its angle from the i-th of n_instances equal strata
/// (skipping the lowest quarter of the first stratum to keep iteration counts finite).
std::vector<Instance> make_instances(const SweepConfig& config);

/// Starting point (and point to project) for one start: norm start_norm.
Vector start_point(const SweepConfig& config, int instance_id, int start_id);

struct RunRecord {
    int instance_id = 0;
    double theta_f = 0;
    std::string method;
    MethodParameters params;
    int start_id = 0;
    Status status = Status::BudgetExhausted;
    std::size_t iterations = 0;
    double final_error = 0;
    std::uint64_t seed = 0;
    std::vector<TraceEntry> trace; ///< filled only when requested
};

/// Runs `spec` on one instance and start with the true-error rule d_{U∩V}(z) < eps.
RunRecord run_one(const SweepConfig& config, const Instance& instance, const MethodSpec& spec, int start_id,
                  bool keep_trace = false);

struct Task {
    const Instance* instance;
    MethodSpec spec;
    int start_id;
};

/// Runs every task on up to config.jobs threads; output order equals input order.
std::vector<RunRecord> run_tasks(const SweepConfig& config, std::span<const Task> tasks);

/// Per (instance, method, parameters) statistics.
struct ExperimentRecord {
    int instance_id = 0;
    double theta_f = 0;
    std::string method;
    MethodParameters params;
    int n_starts = 0;
    double median_iters = 0; ///< over Converged runs only; NaN if none converged
    double std_iters = 0;    ///< population std over Converged runs; NaN if none
    std::map<Status, int> status_counts;
    std::uint64_t seed = 0;
};

/// Groups consecutive runs sharing instance, method and parameters.
std::vector<ExperimentRecord> summarize(std::span<const RunRecord> runs);

double median(std::vector<double> values);
double population_std(std::span<const double> values);

/// Human label such as "aamr(beta=0.9)" used in tables and plot legends.
std::string method_label(const std::string& method, const MethodParameters& params);

// --- Sweeps -------------------------------------------------------------------

struct AngleProfile {
    std::vector<RunRecord> runs;
    std::vector<ExperimentRecord> records;
};

/// Every method on every instance from n_starts seeded starts.
AngleProfile angle_profile(const SweepConfig& config, std::span<const MethodSpec> methods);

enum class AlphaFamily { Aamr, Drm, Cm };

struct BestAlpha {
    int instance_id = 0;
    double theta_f = 0;
    std::string method;
    std::optional<double> beta;       ///< AAMR beta, or CM's 1/(1+gamma); empty for DRM
    std::optional<double> best_alpha; ///< empty when no alpha converged on every start
    double iterations = 0;            ///< median iterations at best_alpha
};

struct AlphaSweep {
    std::vector<RunRecord> runs;
    std::vector<BestAlpha> best;
};

/// For each instance (and beta for AAMR/CM) the alpha of the grid with the
/// fewest median iterations. Only alphas that converged on every start are
/// eligible; ties go to the smaller alpha. The DRM grid drops alpha = 1.
/// For CM, alpha is lambda/2 and gamma = 1/beta - 1.
AlphaSweep sweep_alpha(const SweepConfig& config, AlphaFamily family);

struct ExponentialFit {
    double a = 0, b = 0, c = 0;
    double rss = 0;
    double operator()(double theta) const;
};

/// Least-squares fit of y = a exp(b x) + c: 1-D search over b with (a, c)
/// solved linearly. Empty when there are fewer than 3 distinct x or the data
/// are degenerate.
std::optional<ExponentialFit> fit_exponential(std::span<const double> x, std::span<const double> y);

/// Published optimal-beta curve: 0.596 exp(-1.387 theta) + 0.393.
double published_beta_curve(double theta);

struct BestBeta {
    int instance_id = 0;
    double theta_f = 0;
    int bin = 0;
    std::optional<double> best_beta;
    double iterations = 0;
};

struct BetaSweep {
    std::vector<RunRecord> runs;
    std::vector<BestBeta> best;
    std::optional<ExponentialFit> fit;
    std::string fit_message; ///< reason when the fit is missing
};

/// AAMR(alpha = config.alpha_grid.front() if it has one entry, otherwise 0.9)
/// over the beta grid; per instance the beta minimizing the median iteration count.
BetaSweep sweep_beta(const SweepConfig& config);

/// Least-squares slope of log(error_k) against k, exponentiated. Only finite
/// samples above 1e2 * machine epsilon count; at least 20 are required, and
/// the fit uses the last half of them. Throws ParameterError otherwise.
double estimate_rate(std::span<const double> errors);
double estimate_rate(std::span<const TraceEntry> trace);

struct RateRow {
    double theta = 0;
    std::string method;
    double estimated = 0;
    std::optional<double> expected;
};

struct RateCheck {
    std::vector<RunRecord> runs;
    std::vector<RateRow> rows;
};

/// Lines span{e1} and span{(cos t, sin t)} in R^2 from q = (10, 0): empirical
/// rates of MAP (expected cos^2 t), DRM with alpha 0.5 (expected cos t) and
/// AAMR(0.9, 0.7) (no closed form).
RateCheck rate_check(std::span<const double> thetas, std::uint64_t seed);

// --- Output -------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "instance_id,theta_F,method,alpha,beta,mu,gamma,start_id,status,iterations,final_error,seed";

void write_runs_csv(std::ostream& out, std::span<const RunRecord> runs);
void write_summary_csv(std::ostream& out, std::span<const ExperimentRecord> records);

} // namespace aamr::bench
