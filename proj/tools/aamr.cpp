// Command-line front end: solve, angle, bench.

#include "aamr/bench.hpp"
#include "aamr/geometry.hpp"
#include "aamr/problem_io.hpp"
#include "aamr/solvers.hpp"
#include "aamr/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace aamr;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDiverged = 2, kBudget = 3, kNumerical = 4 };

int exit_code(Status s)
{
    switch (s) {
    case Status::Converged:
        return kOk;
    case Status::Diverged:
        return kDiverged;
    case Status::BudgetExhausted:
        return kBudget;
    case Status::NumericalFailure:
        return kNumerical;
    }
    return kUsage;
}

std::string join(const Vector& v)
{
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + format_number(v(i));
    }
    return out;
}

std::vector<double> parse_list(const std::string& text)
{
    const Vector v = parse_vector(text);
    return {v.data(), v.data() + v.size()};
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.imbue(std::locale::classic());
    return out;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error("cannot create output directory " + dir.string());
    }
}

// --- solve ----------------------------------------------------------------------

struct SolveArgs {
    std::string problem;
    std::string method = "aamr";
    std::optional<double> alpha, beta, mu, gamma, lambda;
    std::string q;
    std::string x0;
    double eps = 1e-6;
    std::size_t max_iter = 100000;
    double divergence_threshold = 1e6;
    bool trace = false;
    std::string out = ".";
};

MethodSpec method_from_args(const SolveArgs& a)
{
    if (a.method == "aamr") {
        return method::Aamr{a.alpha.value_or(0.9), a.beta.value_or(0.7)};
    }
    if (a.method == "drm") {
        return method::Drm{a.alpha.value_or(0.5)};
    }
    if (a.method == "map") {
        return method::Map{};
    }
    if (a.method == "rap") {
        return method::Rap{a.mu.value_or(1.0)};
    }
    if (a.method == "haugazeau") {
        return method::Haugazeau{};
    }
    if (a.method == "hlwb") {
        return method::Hlwb{};
    }
    if (a.method == "cm") {
        return method::Cm{a.gamma.value_or(0.25), a.lambda.value_or(1.8)};
    }
    throw ParameterError("unknown method \"" + a.method + "\" (aamr, drm, map, rap, haugazeau, hlwb, cm)");
}

std::vector<Vector> split_start(const Vector& x0, Index n, std::size_t copies)
{
    if (x0.size() == n) {
        return std::vector<Vector>(copies, x0);
    }
    if (x0.size() == n * static_cast<Index>(copies)) {
        std::vector<Vector> blocks;
        for (std::size_t i = 0; i < copies; ++i) {
            blocks.push_back(x0.segment(static_cast<Index>(i) * n, n));
        }
        return blocks;
    }
    throw DimensionError("--x0 needs " + std::to_string(n) + " or " + std::to_string(n * static_cast<Index>(copies)) +
                         " values, got " + std::to_string(x0.size()));
}

int cmd_solve(const SolveArgs& a)
{
    const MethodSpec spec = method_from_args(a);
    validate(spec);
    const Problem problem = load_problem(a.problem);
    const Vector q = parse_vector(a.q);
    require_dim(problem.dim, q.size(), "--q");

    StoppingPolicy policy;
    std::string mode;
    try {
        const Vector target = project_intersection_oracle(problem.sets, q);
        policy = StoppingPolicy::true_error(distance_to_point(target), a.eps, a.max_iter, problem.dim);
        mode = "true_error";
    } catch (const NoOracleError&) {
        policy = StoppingPolicy::residual(a.eps, a.max_iter);
        mode = "residual";
    }
    policy.divergence_threshold = a.divergence_threshold;

    SolveOptions options;
    options.keep_trace = a.trace;

    SolveResult result;
    const bool custom_start = !a.x0.empty();
    if (custom_start && std::holds_alternative<method::Aamr>(spec)) {
        const auto& m = std::get<method::Aamr>(spec);
        const Vector x0 = parse_vector(a.x0);
        if (problem.sets.size() == 2) {
            require_dim(problem.dim, x0.size(), "--x0");
            result = aamr_solve(problem.sets[0], problem.sets[1], q, x0, m.alpha, m.beta, policy, options);
        } else {
            const auto blocks = split_start(x0, problem.dim, problem.sets.size());
            result = aamr_product_solve(problem.sets, q, blocks, m.alpha, m.beta, policy, options);
        }
    } else if (custom_start && std::holds_alternative<method::Cm>(spec)) {
        const auto& m = std::get<method::Cm>(spec);
        const auto blocks = split_start(parse_vector(a.x0), problem.dim, problem.sets.size());
        const double lambda = m.lambda;
        result = cm_solve(problem.sets, q, m.gamma, [lambda](std::size_t) { return lambda; }, policy, options,
                          blocks);
    } else {
        if (custom_start) {
            throw ParameterError("--x0 applies to aamr and cm only; other methods start at q");
        }
        result = solve(spec, problem.sets, q, policy, options);
    }

    std::cout << "method: " << bench::method_label(method_name(spec), parameters_of(spec)) << '\n'
              << "stopping: " << mode << '\n'
              << "status: " << to_string(result.status) << '\n'
              << "iterations: " << result.iterations << '\n'
              << "shadow: " << join(result.shadow) << '\n'
              << "final_error: " << format_number(result.final_error) << '\n';

    if (a.trace) {
        ensure_dir(a.out);
        const fs::path path = fs::path(a.out) / "trace.csv";
        auto out = open_out(path);
        out << "k,error,step_norm\n";
        for (const auto& t : result.trace) {
            out << t.k << ',' << format_number(t.error) << ',' << format_number(t.step_norm) << '\n';
        }
        std::cout << "trace: " << path.string() << '\n';
    }
    return exit_code(result.status);
}

// --- angle ----------------------------------------------------------------------

int cmd_angle(const std::string& file)
{
    const Problem problem = load_problem(file);
    if (problem.sets.size() != 2) {
        throw ParseError("sets: angle needs exactly two subspaces, got " + std::to_string(problem.sets.size()));
    }
    Matrix bases[2];
    for (int i = 0; i < 2; ++i) {
        const auto* sub = dynamic_cast<const LinearSubspace*>(problem.sets[static_cast<std::size_t>(i)].get());
        if (!sub) {
            throw ParseError("sets[" + std::to_string(i) + "].type: angle needs type \"subspace\"");
        }
        bases[i] = sub->basis();
    }
    const auto angles = geometry::principal_angles(bases[0], bases[1]);
    const Matrix inter = geometry::subspace_intersection(bases[0], bases[1]);
    const double theta = geometry::friedrichs_angle(bases[0], bases[1]);

    std::cout << "principal_angles:";
    for (double t : angles) {
        std::cout << ' ' << format_fixed(t, 6);
    }
    std::cout << '\n'
              << "theta_F: " << format_fixed(theta, 6) << '\n'
              << "intersection_dim: " << inter.cols() << '\n';
    return kOk;
}

// --- bench ----------------------------------------------------------------------

struct BenchArgs {
    std::string sweep;
    std::uint64_t seed = 1;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string out = "bench_out";
    std::string theta = "0.2,0.5,1.0";
    std::optional<int> n, instances, starts, bins;
    std::optional<double> start_norm, eps;
    std::optional<std::size_t> max_iter;
    std::string alphas;
    std::string betas;
    std::string methods;
    bool full = false;
};

void write_plot(const fs::path& path, const svg::Plot& plot)
{
    auto out = open_out(path);
    svg::write(out, plot);
}

void write_runs(const fs::path& dir, std::span<const bench::RunRecord> runs)
{
    auto out = open_out(dir / "runs.csv");
    bench::write_runs_csv(out, runs);
}

std::string cell(double v, int decimals = 1) { return std::isfinite(v) ? format_fixed(v, decimals) : "-"; }

bench::SweepConfig config_from(const BenchArgs& a)
{
    bench::SweepConfig c;
    c.seed = a.seed;
    c.jobs = a.jobs;
    if (a.full) {
        // Full-scale settings; hours of compute.
        if (a.sweep == "alpha") {
            c.n_instances = 1000;
            c.n_starts = 1;
        } else if (a.sweep == "beta") {
            c.n_instances = 100;
            c.n_starts = 100;
            c.angle_bins = 100;
            c.beta_grid.clear();
            for (int i = 0; i <= 119; ++i) {
                c.beta_grid.push_back(std::round((0.4 + 0.005 * i) * 1e6) / 1e6);
            }
        } else {
            c.n_instances = 100;
        }
    } else if (a.sweep == "alpha") {
        c.n_starts = 1;
    }
    if (a.sweep == "alpha") {
        c.beta_grid = {0.6, 0.7, 0.8, 0.9};
    }
    if (a.n) c.n = *a.n;
    if (a.instances) c.n_instances = *a.instances;
    if (a.starts) c.n_starts = *a.starts;
    if (a.bins) c.angle_bins = *a.bins;
    if (a.start_norm) c.start_norm = *a.start_norm;
    if (a.eps) c.eps = *a.eps;
    if (a.max_iter) c.max_iter = *a.max_iter;
    if (!a.alphas.empty()) c.alpha_grid = parse_list(a.alphas);
    if (!a.betas.empty()) c.beta_grid = parse_list(a.betas);
    c.validate();
    return c;
}

std::vector<std::string> split_names(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int bench_alpha(const BenchArgs& a, const fs::path& dir)
{
    const auto c = config_from(a);
    const std::string family_name = a.methods.empty() ? "aamr" : a.methods;
    bench::AlphaFamily family;
    if (family_name == "aamr") {
        family = bench::AlphaFamily::Aamr;
    } else if (family_name == "drm") {
        family = bench::AlphaFamily::Drm;
    } else if (family_name == "cm") {
        family = bench::AlphaFamily::Cm;
    } else {
        throw ParameterError("bench alpha --methods must be one of aamr, drm, cm");
    }
    const auto sweep = bench::sweep_alpha(c, family);
    write_runs(dir, sweep.runs);
    {
        auto out = open_out(dir / "best_alpha.csv");
        out << "instance_id,theta_F,method,beta,best_alpha,median_iters\n";
        for (const auto& b : sweep.best) {
            out << b.instance_id << ',' << format_number(b.theta_f) << ',' << b.method << ','
                << (b.beta ? format_number(*b.beta) : "") << ',' << (b.best_alpha ? format_number(*b.best_alpha) : "")
                << ',' << format_number(b.iterations) << '\n';
        }
    }

    std::map<std::string, svg::Series> series;
    std::map<std::string, std::pair<double, int>> mean;
    std::cout << "instance  theta_F   beta   best_alpha  median_iters\n";
    for (const auto& b : sweep.best) {
        const std::string key = b.beta ? "beta=" + format_number(*b.beta) : family_name;
        std::cout << b.instance_id << "  " << format_fixed(b.theta_f, 4) << "  "
                  << (b.beta ? format_fixed(*b.beta, 2) : std::string("-")) << "  "
                  << (b.best_alpha ? format_fixed(*b.best_alpha, 2) : std::string("-")) << "  "
                  << cell(b.iterations) << '\n';
        auto& s = series[key];
        s.name = key;
        s.lines = false;
        s.markers = true;
        if (b.best_alpha) {
            s.points.emplace_back(b.theta_f, *b.best_alpha);
            mean[key].first += *b.best_alpha;
            ++mean[key].second;
        }
    }
    for (const auto& [key, m] : mean) {
        std::cout << "mean best alpha (" << key << "): " << format_fixed(m.first / m.second, 3) << '\n';
    }
    svg::Plot plot{"Best alpha (" + family_name + ")", "Friedrichs angle (radians)", "best alpha", false, {}};
    for (auto& [key, s] : series) {
        plot.series.push_back(std::move(s));
    }
    write_plot(dir / "best_alpha.svg", plot);
    return kOk;
}

std::vector<MethodSpec> profile_methods(const BenchArgs& a, const bench::SweepConfig& c)
{
    const auto names = split_names(a.methods.empty() ? "map,drm,haugazeau,cm,aamr" : a.methods);
    std::vector<double> betas = a.betas.empty() ? std::vector<double>{0.5, 0.6, 0.7, 0.8, 0.9, 0.99} : c.beta_grid;
    std::vector<MethodSpec> out;
    for (const auto& name : names) {
        if (name == "map") {
            out.push_back(method::Map{});
        } else if (name == "drm") {
            out.push_back(method::Drm{0.5});
        } else if (name == "haugazeau") {
            out.push_back(method::Haugazeau{});
        } else if (name == "hlwb") {
            out.push_back(method::Hlwb{});
        } else if (name == "aamr") {
            for (double b : betas) {
                out.push_back(method::Aamr{0.9, b});
            }
        } else if (name == "cm") {
            for (double b : betas) {
                out.push_back(method::Cm{1.0 / b - 1.0, 1.8});
            }
        } else {
            throw ParameterError("unknown method \"" + name + "\" in --methods");
        }
    }
    return out;
}

int bench_profile(const BenchArgs& a, const fs::path& dir)
{
    const auto c = config_from(a);
    const auto methods = profile_methods(a, c);
    const auto profile = bench::angle_profile(c, methods);
    write_runs(dir, profile.runs);
    {
        auto out = open_out(dir / "summary.csv");
        bench::write_summary_csv(out, profile.records);
    }

    std::vector<std::string> labels;
    std::map<std::string, svg::Series> med;
    std::map<std::string, svg::Series> sd;
    std::map<int, std::map<std::string, double>> table;
    std::map<int, double> thetas;
    for (const auto& r : profile.records) {
        const std::string label = bench::method_label(r.method, r.params);
        if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
            labels.push_back(label);
        }
        med[label].name = label;
        med[label].points.emplace_back(r.theta_f, r.median_iters);
        sd[label].name = label;
        sd[label].points.emplace_back(r.theta_f, r.std_iters);
        table[r.instance_id][label] = r.median_iters;
        thetas[r.instance_id] = r.theta_f;
    }

    std::cout << "median iterations per instance\ninstance  theta_F";
    for (const auto& l : labels) {
        std::cout << "  " << l;
    }
    std::cout << '\n';
    for (const auto& [id, row] : table) {
        std::cout << id << "  " << format_fixed(thetas[id], 4);
        for (const auto& l : labels) {
            const auto it = row.find(l);
            std::cout << "  " << (it == row.end() ? std::string("-") : cell(it->second));
        }
        std::cout << '\n';
    }

    svg::Plot pm{"Median iterations vs Friedrichs angle", "Friedrichs angle (radians)", "median iterations", true, {}};
    svg::Plot ps{"Std of iterations vs Friedrichs angle", "Friedrichs angle (radians)", "std of iterations", true, {}};
    for (const auto& l : labels) {
        pm.series.push_back(med[l]);
        ps.series.push_back(sd[l]);
    }
    write_plot(dir / "median_vs_angle.svg", pm);
    write_plot(dir / "std_vs_angle.svg", ps);

    // Error curves on the smallest-angle instance, first start, first 100 iterates.
    const auto instances = bench::make_instances(c);
    const auto smallest = std::min_element(instances.begin(), instances.end(), [](const auto& x, const auto& y) {
        return x.pair.theta_f < y.pair.theta_f;
    });
    svg::Plot pe{"Error vs iteration (theta_F = " + format_fixed(smallest->pair.theta_f, 4) + " rad)", "iteration",
                 "distance to the intersection", true, {}};
    auto trace_config = c;
    trace_config.max_iter = std::min<std::size_t>(c.max_iter, 100);
    for (const auto& m : methods) {
        const auto run = bench::run_one(trace_config, *smallest, m, 0, true);
        svg::Series s{bench::method_label(run.method, run.params), {}, true, false};
        for (const auto& t : run.trace) {
            s.points.emplace_back(static_cast<double>(t.k), t.error);
        }
        pe.series.push_back(std::move(s));
    }
    write_plot(dir / "error_vs_iteration.svg", pe);
    return kOk;
}

int bench_beta(const BenchArgs& a, const fs::path& dir)
{
    const auto c = config_from(a);
    const auto sweep = bench::sweep_beta(c);
    write_runs(dir, sweep.runs);
    {
        auto out = open_out(dir / "best_beta.csv");
        out << "instance_id,theta_F,bin,best_beta,median_iters,published_beta\n";
        for (const auto& b : sweep.best) {
            out << b.instance_id << ',' << format_number(b.theta_f) << ',' << b.bin << ','
                << (b.best_beta ? format_number(*b.best_beta) : "") << ',' << format_number(b.iterations) << ','
                << format_number(bench::published_beta_curve(b.theta_f)) << '\n';
        }
    }
    std::cout << "instance  theta_F  bin  best_beta  median_iters  published_g(theta)\n";
    svg::Series pts{"best beta", {}, false, true};
    for (const auto& b : sweep.best) {
        std::cout << b.instance_id << "  " << format_fixed(b.theta_f, 4) << "  " << b.bin << "  "
                  << (b.best_beta ? format_fixed(*b.best_beta, 3) : std::string("-")) << "  " << cell(b.iterations)
                  << "  " << format_fixed(bench::published_beta_curve(b.theta_f), 3) << '\n';
        if (b.best_beta) {
            pts.points.emplace_back(b.theta_f, *b.best_beta);
        }
    }
    svg::Series published{"0.596 exp(-1.387 t) + 0.393", {}, true, false};
    svg::Series fitted{"least-squares fit", {}, true, false};
    for (int i = 0; i <= 100; ++i) {
        const double t = (std::numbers::pi / 2.0) * i / 100.0;
        published.points.emplace_back(t, bench::published_beta_curve(t));
        if (sweep.fit) {
            fitted.points.emplace_back(t, (*sweep.fit)(t));
        }
    }
    if (sweep.fit) {
        std::cout << "fit: beta = " << format_fixed(sweep.fit->a, 4) << " exp(" << format_fixed(sweep.fit->b, 4)
                  << " theta) + " << format_fixed(sweep.fit->c, 4) << "  (rss " << format_number(sweep.fit->rss)
                  << ")\n";
    } else {
        std::cout << sweep.fit_message << '\n';
    }
    std::cout << "published: beta = 0.596 exp(-1.387 theta) + 0.393\n";
    svg::Plot plot{"Best beta vs Friedrichs angle", "Friedrichs angle (radians)", "best beta", false,
                   {pts, published}};
    if (sweep.fit) {
        plot.series.push_back(fitted);
    }
    write_plot(dir / "best_beta.svg", plot);
    return kOk;
}

int bench_rates(const BenchArgs& a, const fs::path& dir)
{
    const auto thetas = parse_list(a.theta);
    const auto check = bench::rate_check(thetas, a.seed);
    write_runs(dir, check.runs);
    {
        auto out = open_out(dir / "rates.csv");
        out << "theta,method,estimated_rate,expected_rate\n";
        for (const auto& r : check.rows) {
            out << format_number(r.theta) << ',' << r.method << ',' << format_number(r.estimated) << ','
                << (r.expected ? format_number(*r.expected) : "") << '\n';
        }
    }
    std::cout << "theta  method  estimated  expected  rel_diff\n";
    for (const auto& r : check.rows) {
        std::cout << format_fixed(r.theta, 4) << "  " << r.method << "  " << format_fixed(r.estimated, 4) << "  "
                  << (r.expected ? format_fixed(*r.expected, 4) : std::string("-")) << "  "
                  << (r.expected ? format_fixed(std::abs(r.estimated / *r.expected - 1.0), 4) : std::string("-"))
                  << '\n';
    }
    svg::Plot plot{"Error vs iteration, planar lines (theta = " + format_fixed(thetas.front(), 4) + " rad)",
                   "iteration", "distance to the solution", true, {}};
    for (const auto& r : check.runs) {
        if (r.instance_id != 0) {
            continue;
        }
        svg::Series s{bench::method_label(r.method, r.params), {}, true, false};
        for (const auto& t : r.trace) {
            s.points.emplace_back(static_cast<double>(t.k), t.error);
        }
        plot.series.push_back(std::move(s));
    }
    write_plot(dir / "error_vs_iteration.svg", plot);
    return kOk;
}

int cmd_bench(const BenchArgs& a)
{
    static const std::set<std::string> sweeps{"alpha", "beta", "angle-profile", "rates"};
    if (!sweeps.count(a.sweep)) {
        throw ParameterError("unknown sweep \"" + a.sweep + "\" (alpha, beta, angle-profile, rates)");
    }
    const fs::path dir(a.out);
    ensure_dir(dir);
    int code = kOk;
    if (a.sweep == "alpha") {
        code = bench_alpha(a, dir);
    } else if (a.sweep == "beta") {
        code = bench_beta(a, dir);
    } else if (a.sweep == "angle-profile") {
        code = bench_profile(a, dir);
    } else {
        code = bench_rates(a, dir);
    }
    std::cout << "artifacts: " << dir.string() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    std::cout.imbue(std::locale::classic());
    std::cerr.imbue(std::locale::classic());

    CLI::App app{"Best approximation by averaged alternating modified reflections"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Project a point onto the intersection of the sets in a problem file");
    solve_cmd->add_option("problem", sa.problem, "Problem file (JSON)")->required();
    solve_cmd->add_option("--method", sa.method, "aamr, drm, map, rap, haugazeau, hlwb or cm")->capture_default_str();
    solve_cmd->add_option("--alpha", sa.alpha, "Averaging parameter (aamr, drm)");
    solve_cmd->add_option("--beta", sa.beta, "Reflection parameter in (0,1) (aamr)");
    solve_cmd->add_option("--mu", sa.mu, "Relaxation in (0,2) (rap)");
    solve_cmd->add_option("--gamma", sa.gamma, "Resolvent parameter > 0 (cm)");
    solve_cmd->add_option("--lambda", sa.lambda, "Relaxation in (0,2] (cm)");
    solve_cmd->add_option("--q", sa.q, "Point to project, comma-separated")->required();
    solve_cmd->add_option("--x0", sa.x0, "Starting point for aamr/cm (n values, or r*n for product forms)");
    solve_cmd->add_option("--eps", sa.eps, "Stopping tolerance")->capture_default_str();
    solve_cmd->add_option("--max-iter", sa.max_iter, "Iteration budget")->capture_default_str();
    solve_cmd->add_option("--divergence-threshold", sa.divergence_threshold, "Norm that flags divergence")
        ->capture_default_str();
    solve_cmd->add_flag("--trace", sa.trace, "Write trace.csv to the output directory");
    solve_cmd->add_option("--out", sa.out, "Output directory")->capture_default_str();

    std::string angle_file;
    auto* angle_cmd = app.add_subcommand("angle", "Principal and Friedrichs angles between two subspaces");
    angle_cmd->add_option("problem", angle_file, "Problem file with two subspace sets")->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Seeded benchmark sweeps writing CSV and SVG");
    bench_cmd->add_option("sweep", ba.sweep, "alpha, beta, angle-profile or rates")->required();
    bench_cmd->add_option("--seed", ba.seed, "Master seed")->envname("AAMR_SEED")->capture_default_str();
    bench_cmd->add_option("--jobs", ba.jobs, "Worker threads")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", ba.out, "Output directory")->capture_default_str();
    bench_cmd->add_option("--theta", ba.theta, "Angles for the rates sweep, comma-separated")->capture_default_str();
    bench_cmd->add_option("--n", ba.n, "Ambient dimension");
    bench_cmd->add_option("--instances", ba.instances, "Number of subspace pairs");
    bench_cmd->add_option("--starts", ba.starts, "Random starts per pair");
    bench_cmd->add_option("--start-norm", ba.start_norm, "Norm of each start");
    bench_cmd->add_option("--bins", ba.bins, "Angle bins for the beta sweep");
    bench_cmd->add_option("--eps", ba.eps, "True-error tolerance");
    bench_cmd->add_option("--max-iter", ba.max_iter, "Iteration budget per run");
    bench_cmd->add_option("--alphas", ba.alphas, "Alpha grid, comma-separated");
    bench_cmd->add_option("--betas", ba.betas, "Beta grid, comma-separated");
    bench_cmd->add_option("--methods", ba.methods,
                          "alpha: one of aamr, drm, cm; angle-profile: list from map, drm, haugazeau, hlwb, cm, aamr");
    bench_cmd->add_flag("--full", ba.full, "Full-scale instance and start counts (slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) {
            return cmd_solve(sa);
        }
        if (*angle_cmd) {
            return cmd_angle(angle_file);
        }
        return cmd_bench(ba);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
