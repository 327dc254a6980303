#include "aamr/bench.hpp"

#include "aamr/problem_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

namespace aamr::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream ids past any realistic start count, reserved for instance generation.
constexpr std::uint64_t kInstanceStream = 0xFFFF'FFFFull;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<double> grid(double first, double step, int count)
{
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Round to a clean decimal so that printed grids read 0.07, not 0.07000000000000001.
        g.push_back(std::round((first + step * i) * 1e6) / 1e6);
    }
    return g;
}

bool converged(const RunRecord& r) { return r.status == Status::Converged; }

double median_converged(std::span<const RunRecord> runs, bool* all_converged)
{
    std::vector<double> its;
    for (const auto& r : runs) {
        if (converged(r)) {
            its.push_back(static_cast<double>(r.iterations));
        }
    }
    if (all_converged) {
        *all_converged = its.size() == runs.size() && !runs.empty();
    }
    return its.empty() ? kNaN : median(std::move(its));
}

} // namespace

std::vector<double> default_alpha_grid() { return grid(0.01, 0.01, 100); }

std::vector<double> default_beta_grid()
{
    auto g = grid(0.40, 0.05, 12);
    g.push_back(0.99);
    return g;
}

void SweepConfig::validate() const
{
    if (n < 3) {
        throw ParameterError("ambient dimension n must be at least 3");
    }
    if (n_instances < 1 || n_starts < 1) {
        throw ParameterError("instance and start counts must be positive");
    }
    if (!(start_norm > 0.0)) {
        throw ParameterError("start norm must be positive");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("eps must lie in (0,1)");
    }
    if (max_iter < 1) {
        throw ParameterError("max_iter must be positive");
    }
    if (angle_bins < 1) {
        throw ParameterError("angle bin count must be positive");
    }
    for (double a : alpha_grid) {
        if (!(a > 0.0 && a <= 1.0)) {
            throw ParameterError("alpha grid values must lie in (0,1]");
        }
    }
    for (double b : beta_grid) {
        if (!(b > 0.0 && b < 1.0)) {
            throw ParameterError("beta grid values must lie in (0,1)");
        }
    }
    for (double m : mu_grid) {
        if (!(m > 0.0 && m < 2.0)) {
            throw ParameterError("mu grid values must lie in (0,2)");
        }
    }
    for (double g : gamma_grid) {
        if (!(g > 0.0)) {
            throw ParameterError("gamma grid values must be positive");
        }
    }
}

std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t instance_id, std::uint64_t stream_id)
{
    return std::mt19937_64(derive_seed(seed, instance_id, stream_id));
}

std::vector<Instance> make_instances(const SweepConfig& config)
{
    config.validate();
    const double width = (std::numbers::pi / 2.0) / config.n_instances;
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(config.n_instances));
    for (int i = 0; i < config.n_instances; ++i) {
        auto rng = task_rng(config.seed, static_cast<std::uint64_t>(i), kInstanceStream);
        const double lo = (i == 0) ? width / 4.0 : width * i;
        const double theta = std::uniform_real_distribution<double>(lo, width * (i + 1))(rng);
        Instance inst;
        inst.id = i;
        inst.pair = geometry::constructed_subspace_pair(config.n, rng(), theta);
        inst.u = std::make_shared<LinearSubspace>(LinearSubspace::from_orthonormal(inst.pair.qu));
        inst.v = std::make_shared<LinearSubspace>(LinearSubspace::from_orthonormal(inst.pair.qv));
        out.push_back(std::move(inst));
    }
    return out;
}

Vector start_point(const SweepConfig& config, int instance_id, int start_id)
{
    auto rng = task_rng(config.seed, static_cast<std::uint64_t>(instance_id), static_cast<std::uint64_t>(start_id));
    return geometry::random_vector_with_norm(config.n, config.start_norm, rng);
}

RunRecord run_one(const SweepConfig& config, const Instance& instance, const MethodSpec& spec, int start_id,
                  bool keep_trace)
{
    const Vector q = start_point(config, instance.id, start_id);
    const auto policy = StoppingPolicy::true_error(distance_to_span(instance.pair.qi), config.eps, config.max_iter,
                                                   q.size());
    const SetPtr sets[] = {instance.u, instance.v};
    SolveOptions options;
    options.keep_trace = keep_trace;
    const SolveResult result = solve(spec, sets, q, policy, options);

    RunRecord r;
    r.instance_id = instance.id;
    r.theta_f = instance.pair.theta_f;
    r.method = method_name(spec);
    r.params = parameters_of(spec);
    r.start_id = start_id;
    r.status = result.status;
    r.iterations = result.iterations;
    r.final_error = result.final_error;
    r.seed = config.seed;
    r.trace = result.trace;
    return r;
}

std::vector<RunRecord> run_tasks(const SweepConfig& config, std::span<const Task> tasks)
{
    std::vector<RunRecord> out(tasks.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1))));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                out[i] = run_one(config, *tasks[i].instance, tasks[i].spec, tasks[i].start_id);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        return kNaN;
    }
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double population_std(std::span<const double> values)
{
    if (values.empty()) {
        return kNaN;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size()));
}

namespace {

bool same_params(const MethodParameters& a, const MethodParameters& b)
{
    return a.alpha == b.alpha && a.beta == b.beta && a.mu == b.mu && a.gamma == b.gamma;
}

bool same_group(const RunRecord& a, const RunRecord& b)
{
    return a.instance_id == b.instance_id && a.method == b.method && same_params(a.params, b.params);
}

} // namespace

std::vector<ExperimentRecord> summarize(std::span<const RunRecord> runs)
{
    std::vector<ExperimentRecord> out;
    std::size_t begin = 0;
    while (begin < runs.size()) {
        std::size_t end = begin + 1;
        while (end < runs.size() && same_group(runs[begin], runs[end])) {
            ++end;
        }
        ExperimentRecord rec;
        rec.instance_id = runs[begin].instance_id;
        rec.theta_f = runs[begin].theta_f;
        rec.method = runs[begin].method;
        rec.params = runs[begin].params;
        rec.seed = runs[begin].seed;
        rec.n_starts = static_cast<int>(end - begin);
        std::vector<double> its;
        for (std::size_t i = begin; i < end; ++i) {
            ++rec.status_counts[runs[i].status];
            if (converged(runs[i])) {
                its.push_back(static_cast<double>(runs[i].iterations));
            }
        }
        rec.std_iters = population_std(its);
        rec.median_iters = median(std::move(its));
        out.push_back(std::move(rec));
        begin = end;
    }
    return out;
}

std::string method_label(const std::string& method, const MethodParameters& params)
{
    if (method == "aamr" && params.alpha && params.beta) {
        return "aamr(alpha=" + format_number(*params.alpha) + ",beta=" + format_number(*params.beta) + ")";
    }
    if (method == "drm" && params.alpha) {
        return "drm(alpha=" + format_number(*params.alpha) + ")";
    }
    if (method == "rap" && params.mu) {
        return "rap(mu=" + format_number(*params.mu) + ")";
    }
    if (method == "cm" && params.gamma) {
        return "cm(gamma=" + format_number(*params.gamma) + ")";
    }
    return method;
}

// --- Sweeps -------------------------------------------------------------------

AngleProfile angle_profile(const SweepConfig& config, std::span<const MethodSpec> methods)
{
    for (const auto& m : methods) {
        validate(m);
    }
    const auto instances = make_instances(config);
    std::vector<Task> tasks;
    for (const auto& inst : instances) {
        for (const auto& m : methods) {
            for (int s = 0; s < config.n_starts; ++s) {
                tasks.push_back({&inst, m, s});
            }
        }
    }
    AngleProfile out;
    out.runs = run_tasks(config, tasks);
    out.records = summarize(out.runs);
    return out;
}

AlphaSweep sweep_alpha(const SweepConfig& config, AlphaFamily family)
{
    config.validate();
    std::vector<double> alphas = config.alpha_grid;
    if (family == AlphaFamily::Drm) {
        std::erase_if(alphas, [](double a) { return a >= 1.0; });
        if (alphas.empty()) {
            throw ParameterError("DRM alpha grid is empty once alpha = 1 is removed");
        }
    }
    std::vector<std::optional<double>> betas;
    if (family == AlphaFamily::Drm) {
        betas.push_back(std::nullopt);
    } else {
        if (config.beta_grid.empty()) {
            throw ParameterError("beta grid is empty");
        }
        betas.assign(config.beta_grid.begin(), config.beta_grid.end());
    }

    auto make_spec = [family](double alpha, const std::optional<double>& beta) -> MethodSpec {
        switch (family) {
        case AlphaFamily::Aamr:
            return method::Aamr{alpha, *beta};
        case AlphaFamily::Drm:
            return method::Drm{alpha};
        case AlphaFamily::Cm:
            return method::Cm{1.0 / *beta - 1.0, 2.0 * alpha};
        }
        return method::Map{};
    };

    const auto instances = make_instances(config);
    std::vector<Task> tasks;
    for (const auto& inst : instances) {
        for (const auto& beta : betas) {
            for (double alpha : alphas) {
                for (int s = 0; s < config.n_starts; ++s) {
                    tasks.push_back({&inst, make_spec(alpha, beta), s});
                }
            }
        }
    }

    AlphaSweep out;
    out.runs = run_tasks(config, tasks);
    const std::span<const RunRecord> runs(out.runs);
    const auto starts = static_cast<std::size_t>(config.n_starts);
    std::size_t pos = 0;
    for (const auto& inst : instances) {
        for (const auto& beta : betas) {
            BestAlpha best;
            best.instance_id = inst.id;
            best.theta_f = inst.pair.theta_f;
            best.method = method_name(make_spec(alphas.front(), beta));
            best.beta = beta;
            best.iterations = kNaN;
            for (double alpha : alphas) {
                bool all = false;
                const double med = median_converged(runs.subspan(pos, starts), &all);
                pos += starts;
                // Strict comparison keeps the smaller alpha on ties.
                if (all && (!best.best_alpha || med < best.iterations)) {
                    best.best_alpha = alpha;
                    best.iterations = med;
                }
            }
            out.best.push_back(best);
        }
    }
    return out;
}

double ExponentialFit::operator()(double theta) const { return a * std::exp(b * theta) + c; }

std::optional<ExponentialFit> fit_exponential(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 3) {
        return std::nullopt;
    }
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3) {
        return std::nullopt;
    }
    const double span_x = xs.back() - xs.front();

    const auto m = static_cast<Index>(x.size());
    const Eigen::Map<const Vector> yv(y.data(), m);
    auto solve_for = [&](double b) -> std::optional<ExponentialFit> {
        Matrix design(m, 2);
        for (Index i = 0; i < m; ++i) {
            design(i, 0) = std::exp(b * x[static_cast<std::size_t>(i)]);
            design(i, 1) = 1.0;
        }
        const auto qr = design.colPivHouseholderQr();
        if (qr.rank() < 2) {
            return std::nullopt;
        }
        const Eigen::Vector2d coef = qr.solve(yv);
        ExponentialFit fit{coef(0), b, coef(1), (design * coef - yv).squaredNorm()};
        return std::isfinite(fit.rss) ? std::optional(fit) : std::nullopt;
    };

    // Coarse scan of the rate, then golden-section refinement around the best cell.
    const double b_max = 50.0 / span_x;
    const int cells = 400;
    std::optional<ExponentialFit> best;
    int best_cell = 0;
    for (int i = 0; i <= cells; ++i) {
        const double b = -b_max + 2.0 * b_max * i / cells;
        if (b == 0.0) {
            continue;
        }
        const auto f = solve_for(b);
        if (f && (!best || f->rss < best->rss)) {
            best = f;
            best_cell = i;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    const double h = 2.0 * b_max / cells;
    double lo = -b_max + h * (best_cell - 1);
    double hi = -b_max + h * (best_cell + 1);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    auto rss_at = [&](double b) {
        const auto f = solve_for(b);
        return f ? f->rss : std::numeric_limits<double>::infinity();
    };
    double c = hi - ratio * (hi - lo);
    double d = lo + ratio * (hi - lo);
    double fc = rss_at(c);
    double fd = rss_at(d);
    for (int it = 0; it < 100; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = rss_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = rss_at(d);
        }
    }
    if (const auto refined = solve_for(0.5 * (lo + hi)); refined && refined->rss <= best->rss) {
        best = refined;
    }
    return best;
}

double published_beta_curve(double theta) { return 0.596 * std::exp(-1.387 * theta) + 0.393; }

BetaSweep sweep_beta(const SweepConfig& config)
{
    config.validate();
    if (config.beta_grid.empty()) {
        throw ParameterError("beta grid is empty");
    }
    const double alpha = config.alpha_grid.size() == 1 ? config.alpha_grid.front() : 0.9;
    const auto instances = make_instances(config);
    std::vector<Task> tasks;
    for (const auto& inst : instances) {
        for (double beta : config.beta_grid) {
            for (int s = 0; s < config.n_starts; ++s) {
                tasks.push_back({&inst, method::Aamr{alpha, beta}, s});
            }
        }
    }

    BetaSweep out;
    out.runs = run_tasks(config, tasks);
    const std::span<const RunRecord> runs(out.runs);
    const auto starts = static_cast<std::size_t>(config.n_starts);
    const double bin_width = (std::numbers::pi / 2.0) / config.angle_bins;
    std::size_t pos = 0;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& inst : instances) {
        BestBeta best;
        best.instance_id = inst.id;
        best.theta_f = inst.pair.theta_f;
        best.bin = std::min(config.angle_bins - 1, static_cast<int>(inst.pair.theta_f / bin_width));
        best.iterations = kNaN;
        for (double beta : config.beta_grid) {
            bool all = false;
            const double med = median_converged(runs.subspan(pos, starts), &all);
            pos += starts;
            if (all && (!best.best_beta || med < best.iterations)) {
                best.best_beta = beta;
                best.iterations = med;
            }
        }
        if (best.best_beta) {
            xs.push_back(best.theta_f);
            ys.push_back(*best.best_beta);
        }
        out.best.push_back(best);
    }
    out.fit = fit_exponential(xs, ys);
    if (!out.fit) {
        out.fit_message = "exponential fit failed: need at least 3 distinct angles with a best beta";
    }
    return out;
}

double estimate_rate(std::span<const double> errors)
{
    const double floor = 1e2 * std::numeric_limits<double>::epsilon();
    std::vector<double> ks;
    std::vector<double> logs;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (std::isfinite(errors[k]) && errors[k] > floor) {
            ks.push_back(static_cast<double>(k));
            logs.push_back(std::log(errors[k]));
        }
    }
    if (ks.size() < 20) {
        throw ParameterError("rate estimate needs at least 20 error samples above the floating floor, got " +
                             std::to_string(ks.size()));
    }
    const std::size_t first = ks.size() / 2;
    const auto count = static_cast<double>(ks.size() - first);
    const double mk = std::accumulate(ks.begin() + static_cast<long>(first), ks.end(), 0.0) / count;
    const double ml = std::accumulate(logs.begin() + static_cast<long>(first), logs.end(), 0.0) / count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = first; i < ks.size(); ++i) {
        sxy += (ks[i] - mk) * (logs[i] - ml);
        sxx += (ks[i] - mk) * (ks[i] - mk);
    }
    return std::exp(sxy / sxx);
}

double estimate_rate(std::span<const TraceEntry> trace)
{
    std::vector<double> errors;
    errors.reserve(trace.size());
    for (const auto& t : trace) {
        errors.push_back(t.error);
    }
    return estimate_rate(errors);
}

RateCheck rate_check(std::span<const double> thetas, std::uint64_t seed)
{
    RateCheck out;
    int id = 0;
    for (double theta : thetas) {
        if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
            throw ParameterError("rate check angles must lie in (0, pi/2)");
        }
        Matrix u(2, 1);
        u << 1.0, 0.0;
        Matrix v(2, 1);
        v << std::cos(theta), std::sin(theta);
        const SetPtr sets[] = {std::make_shared<LinearSubspace>(LinearSubspace::from_orthonormal(u)),
                               std::make_shared<LinearSubspace>(LinearSubspace::from_orthonormal(v))};
        const Vector q = Eigen::Vector2d(10.0, 0.0);
        // The lines meet only at 0; run down to the floating floor so the fit sees the asymptotic regime.
        const auto policy = StoppingPolicy::true_error(distance_to_point(Vector::Zero(2)), 1e-14, 100000, 2);
        SolveOptions options;
        options.keep_trace = true;

        const std::pair<MethodSpec, std::optional<double>> cases[] = {
            {method::Map{}, std::cos(theta) * std::cos(theta)},
            {method::Drm{0.5}, std::cos(theta)},
            {method::Aamr{0.9, 0.7}, std::nullopt},
        };
        for (const auto& [spec, expected] : cases) {
            const SolveResult result = solve(spec, sets, q, policy, options);
            RunRecord r;
            r.instance_id = id;
            r.theta_f = theta;
            r.method = method_name(spec);
            r.params = parameters_of(spec);
            r.status = result.status;
            r.iterations = result.iterations;
            r.final_error = result.final_error;
            r.seed = seed;
            r.trace = result.trace;
            out.rows.push_back({theta, method_label(r.method, r.params), estimate_rate(r.trace), expected});
            out.runs.push_back(std::move(r));
        }
        ++id;
    }
    return out;
}

// --- Output -------------------------------------------------------------------

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

} // namespace

void write_runs_csv(std::ostream& out, std::span<const RunRecord> runs)
{
    out << kCsvHeader << '\n';
    for (const auto& r : runs) {
        out << r.instance_id << ',' << format_number(r.theta_f) << ',' << r.method << ','
            << optional_number(r.params.alpha) << ',' << optional_number(r.params.beta) << ','
            << optional_number(r.params.mu) << ',' << optional_number(r.params.gamma) << ',' << r.start_id << ','
            << to_string(r.status) << ',' << r.iterations << ',' << format_number(r.final_error) << ',' << r.seed
            << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const ExperimentRecord> records)
{
    out << "instance_id,theta_F,method,alpha,beta,mu,gamma,n_starts,median_iters,std_iters,converged,diverged,"
           "budget_exhausted,numerical_failure,seed\n";
    for (const auto& r : records) {
        auto count = [&r](Status s) {
            const auto it = r.status_counts.find(s);
            return it == r.status_counts.end() ? 0 : it->second;
        };
        out << r.instance_id << ',' << format_number(r.theta_f) << ',' << r.method << ','
            << optional_number(r.params.alpha) << ',' << optional_number(r.params.beta) << ','
            << optional_number(r.params.mu) << ',' << optional_number(r.params.gamma) << ',' << r.n_starts << ','
            << format_number(r.median_iters) << ',' << format_number(r.std_iters) << ','
            << count(Status::Converged) << ',' << count(Status::Diverged) << ',' << count(Status::BudgetExhausted)
            << ',' << count(Status::NumericalFailure) << ',' << r.seed << '\n';
    }
}

} // namespace aamr::bench
