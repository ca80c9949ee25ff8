#ifndef RATEMETA_EXPERIMENTS_HPP
#define RATEMETA_EXPERIMENTS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratemeta/analytics.hpp"
#include "ratemeta/ccdf.hpp"
#include "ratemeta/params.hpp"
#include "ratemeta/simulator.hpp"

namespace ratemeta {

/// Bad flags, bad config values, unknown keys: the CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t points = 101;

    std::vector<double> values() const { return linear_grid(min, max, points); }

    bool operator==(const GridSpec&) const = default;
};

struct ScenarioConfig {
    NetworkParams params;
    SchemeConfig scheme;
    InterferenceModel model = InterferenceModel::CI;
    Statistic metric = Statistic::RATE;
    std::size_t n_realizations = 5000;
    GridSpec grid;
    RngSeed seed;
    std::filesystem::path output_path = "ratemeta_out";
    std::optional<double> tolerance; ///< max sup-deviation; unset means report only
    std::vector<double> spots;       ///< axis values reported in the spot table
    double window_radius = 0.0;      ///< 0 selects the simulator default
    unsigned threads = 0;

    bool operator==(const ScenarioConfig&) const = default;
};

inline GridSpec default_grid(Statistic metric, double K)
{
    return metric == Statistic::COVERAGE ? GridSpec{0.0, 1.0, 101} : GridSpec{0.0, K / 10.0, 201};
}

namespace detail {

inline double parse_real(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        throw UsageError(key + ": expected a finite number, got '" + v + "'");
    }
    return out;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

inline std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace detail

/// Builds a validated config from flat key=value pairs. alpha and N are
/// required; lambda defaults to 1 and K to 75. The grid defaults by metric.
inline ScenarioConfig parse_config(const std::map<std::string, std::string>& kv)
{
    static const std::vector<std::string> known = {
        "lambda", "alpha", "K", "N", "rho", "scheme", "model", "metric", "amc_levels", "time_grid",
        "realizations", "seed", "stream", "grid_min", "grid_max", "grid_points", "out", "tolerance", "spot",
        "window_radius", "threads"};
    for (const auto& [k, v] : kv) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw UsageError("unknown configuration key '" + k + "'");
        }
    }
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = kv.find(k);
        return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    for (const char* required : {"alpha", "N"}) {
        if (!get(required)) {
            throw UsageError(std::string("missing required field '") + required + "'");
        }
    }

    ScenarioConfig c;
    try {
        c.params.alpha = detail::parse_real("alpha", *get("alpha"));
        c.params.N = detail::parse_real("N", *get("N"));
        if (auto v = get("lambda")) {
            c.params.lambda = detail::parse_real("lambda", *v);
        }
        if (auto v = get("K")) {
            c.params.K = detail::parse_real("K", *v);
        }
        if (auto v = get("rho")) {
            c.params.rho = detail::parse_real("rho", *v);
        }
        c.params.validate();
        if (auto v = get("scheme")) {
            c.scheme.kind = parse_scheme_kind(*v);
        }
        if (auto v = get("model")) {
            c.model = parse_interference_model(*v);
        }
        if (auto v = get("metric")) {
            c.metric = parse_statistic(*v);
        }
        if (auto v = get("amc_levels")) {
            const auto l = detail::parse_unsigned("amc_levels", *v);
            if (l < 1 || l > 100000) {
                throw UsageError("amc_levels must be in [1, 100000]");
            }
            c.scheme.amc_levels = static_cast<int>(l);
        }
        if (auto v = get("time_grid")) {
            if (*v == "continuous") {
                c.scheme.time_grid = TimeGrid::CONTINUOUS;
            } else if (*v == "integer") {
                c.scheme.time_grid = TimeGrid::INTEGER;
            } else {
                throw UsageError("time_grid must be continuous or integer");
            }
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (c.scheme.time_grid == TimeGrid::INTEGER && std::floor(c.params.N) != c.params.N) {
        throw UsageError("time_grid=integer needs an integer N");
    }

    if (auto v = get("realizations")) {
        c.n_realizations = detail::parse_unsigned("realizations", *v);
    }
    if (c.n_realizations < 100) {
        throw UsageError("realizations must be >= 100");
    }
    if (auto v = get("seed")) {
        c.seed.master_seed = detail::parse_unsigned("seed", *v);
    }
    if (auto v = get("stream")) {
        c.seed.stream_id = detail::parse_unsigned("stream", *v);
    }

    c.grid = default_grid(c.metric, c.params.K);
    if (auto v = get("grid_min")) {
        c.grid.min = detail::parse_real("grid_min", *v);
    }
    if (auto v = get("grid_max")) {
        c.grid.max = detail::parse_real("grid_max", *v);
    }
    if (auto v = get("grid_points")) {
        c.grid.points = detail::parse_unsigned("grid_points", *v);
    }
    if (c.grid.points < 2 || !(c.grid.max > c.grid.min) || c.grid.min < 0.0) {
        throw UsageError("grid needs grid_points >= 2 and 0 <= grid_min < grid_max");
    }
    if (c.metric == Statistic::COVERAGE && c.grid.max > 1.0) {
        throw UsageError("grid_max must be <= 1 for the coverage metric");
    }

    if (auto v = get("out")) {
        if (v->empty()) {
            throw UsageError("out must not be empty");
        }
        c.output_path = *v;
    }
    if (auto v = get("tolerance")) {
        c.tolerance = detail::parse_real("tolerance", *v);
        if (!(*c.tolerance >= 0.0)) {
            throw UsageError("tolerance must be >= 0");
        }
    }
    if (auto v = get("spot")) {
        std::stringstream ss(*v);
        for (std::string item; std::getline(ss, item, ',');) {
            const double x = detail::parse_real("spot", detail::trim(item));
            if (x < 0.0) {
                throw UsageError("spot values must be >= 0");
            }
            c.spots.push_back(x);
        }
    } else {
        c.spots = c.metric == Statistic::RATE ? std::vector<double>{3.0} : std::vector<double>{0.5};
    }
    if (auto v = get("window_radius")) {
        c.window_radius = detail::parse_real("window_radius", *v);
        if (c.window_radius < 0.0) {
            throw UsageError("window_radius must be >= 0 (0 selects the default)");
        }
    }
    if (auto v = get("threads")) {
        c.threads = static_cast<unsigned>(detail::parse_unsigned("threads", *v));
    }
    return c;
}

inline std::map<std::string, std::string> to_key_values(const ScenarioConfig& c)
{
    using detail::format_real;
    std::map<std::string, std::string> kv{
        {"lambda", format_real(c.params.lambda)},
        {"alpha", format_real(c.params.alpha)},
        {"K", format_real(c.params.K)},
        {"N", format_real(c.params.N)},
        {"rho", format_real(c.params.rho)},
        {"scheme", std::string(to_string(c.scheme.kind))},
        {"model", std::string(to_string(c.model))},
        {"metric", std::string(to_string(c.metric))},
        {"amc_levels", std::to_string(c.scheme.amc_levels)},
        {"time_grid", c.scheme.time_grid == TimeGrid::INTEGER ? "integer" : "continuous"},
        {"realizations", std::to_string(c.n_realizations)},
        {"seed", std::to_string(c.seed.master_seed)},
        {"stream", std::to_string(c.seed.stream_id)},
        {"grid_min", format_real(c.grid.min)},
        {"grid_max", format_real(c.grid.max)},
        {"grid_points", std::to_string(c.grid.points)},
        {"out", c.output_path.string()},
        {"window_radius", format_real(c.window_radius)},
        {"threads", std::to_string(c.threads)},
    };
    if (c.tolerance) {
        kv["tolerance"] = format_real(*c.tolerance);
    }
    std::string spots;
    for (double s : c.spots) {
        spots += (spots.empty() ? "" : ",") + format_real(s);
    }
    kv["spot"] = spots;
    return kv;
}

inline std::string to_config_text(const ScenarioConfig& c)
{
    std::string out;
    for (const auto& [k, v] : to_key_values(c)) {
        out += k + "=" + v + "\n";
    }
    return out;
}

/// Flat key=value text; '#' starts a comment line, blank lines are skipped.
inline std::map<std::string, std::string> parse_key_values(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(n) + ": expected key=value");
        }
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

inline std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file " + path.string());
    }
    return parse_key_values(in);
}

inline void write_config_file(const ScenarioConfig& c, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << to_config_text(c);
}

/// CSV with header axis,ccdf,ci_halfwidth,n_samples; 12 significant digits, LF endings.
inline void emit_csv(const CcdfCurve& curve, const std::filesystem::path& path)
{
    curve.validate();
    std::string text = "axis,ccdf,ci_halfwidth,n_samples\n";
    char buf[128];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%zu\n", curve.axis[i], curve.ccdf[i], curve.ci_halfwidth[i],
                      curve.n_samples);
        text += buf;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

inline CcdfCurve read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "axis,ccdf,ci_halfwidth,n_samples") {
        throw std::runtime_error(path.string() + ": missing CSV header");
    }
    CcdfCurve c;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell[4];
        for (auto& s : cell) {
            if (!std::getline(ss, s, ',')) {
                throw std::runtime_error(path.string() + ": short row '" + line + "'");
            }
        }
        c.axis.push_back(detail::parse_real("axis", cell[0]));
        c.ccdf.push_back(detail::parse_real("ccdf", cell[1]));
        c.ci_halfwidth.push_back(detail::parse_real("ci_halfwidth", cell[2]));
        c.n_samples = detail::parse_unsigned("n_samples", cell[3]);
    }
    return c;
}

struct SpotValue {
    double x = 0.0;
    std::optional<double> analytic;
    double empirical = 0.0;
    double halfwidth = 0.0;
};

struct CurveComparison {
    std::string label;
    std::optional<double> sup_deviation; ///< absent when there is no analytic curve
    std::optional<double> tolerance;
    std::vector<SpotValue> spots;
    std::size_t degenerate = 0;

    bool pass() const { return !tolerance || !sup_deviation || *sup_deviation <= *tolerance; }
};

struct ComparisonReport {
    std::vector<CurveComparison> curves;

    bool passed() const
    {
        return std::all_of(curves.begin(), curves.end(), [](const CurveComparison& c) { return c.pass(); });
    }

    std::string to_text() const
    {
        std::string out;
        char buf[256];
        for (const auto& c : curves) {
            out += "[" + c.label + "]\n";
            if (c.sup_deviation) {
                std::snprintf(buf, sizeof buf, "sup_deviation = %.6f", *c.sup_deviation);
                out += buf;
                if (c.tolerance) {
                    std::snprintf(buf, sizeof buf, " (tolerance %.6f) %s", *c.tolerance, c.pass() ? "PASS" : "FAIL");
                    out += buf;
                }
                out += "\n";
            } else {
                out += "sup_deviation = n/a (no analytic curve)\n";
            }
            if (c.degenerate > 0) {
                out += "rate_capped_realizations = " + std::to_string(c.degenerate) + "\n";
            }
            for (const auto& s : c.spots) {
                if (s.analytic) {
                    std::snprintf(buf, sizeof buf, "ccdf(%g): analytic %.6f, empirical %.6f +- %.6f\n", s.x,
                                  *s.analytic, s.empirical, s.halfwidth);
                } else {
                    std::snprintf(buf, sizeof buf, "ccdf(%g): empirical %.6f +- %.6f\n", s.x, s.empirical,
                                  s.halfwidth);
                }
                out += buf;
            }
            out += "\n";
        }
        out += passed() ? "overall: PASS\n" : "overall: FAIL\n";
        return out;
    }
};

/// One analytic/empirical pair to compute within a scenario.
struct CurveJob {
    std::string label;
    ScenarioConfig config;
};

inline std::string default_label(const ScenarioConfig& c)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "a%g_N%g_%s_%s_%s", c.params.alpha, c.params.N,
                  std::string(to_string(c.model)).c_str(), std::string(to_string(c.scheme.kind)).c_str(),
                  std::string(to_string(c.metric)).c_str());
    return buf;
}

/// Figure setups (lambda = 1, K = 75). `base` supplies seed,
/// realization count, output path, tolerance and threading.
inline std::vector<CurveJob> preset_jobs(const std::string& name, const ScenarioConfig& base)
{
    auto job = [&](double alpha, double N, InterferenceModel model, SchemeKind kind, Statistic metric) {
        ScenarioConfig c = base;
        c.params = NetworkParams{1.0, alpha, 75.0, N, 1.0};
        c.model = model;
        c.scheme = SchemeConfig{kind, 4, TimeGrid::CONTINUOUS};
        c.metric = metric;
        c.grid = default_grid(metric, c.params.K);
        c.spots = metric == Statistic::RATE ? std::vector<double>{3.0} : std::vector<double>{0.5};
        return CurveJob{default_label(c), c};
    };
    using IM = InterferenceModel;
    using SK = SchemeKind;
    if (name == "fig1") {
        return {job(3.0, 200.0, IM::CI, SK::RATELESS, Statistic::COVERAGE),
                job(4.0, 90.0, IM::CI, SK::RATELESS, Statistic::COVERAGE)};
    }
    if (name == "fig2") {
        return {job(3.0, 200.0, IM::CI, SK::RATELESS, Statistic::RATE),
                job(3.0, 200.0, IM::CI, SK::FIXED_RATE, Statistic::RATE)};
    }
    if (name == "fig3") {
        return {job(4.0, 100.0, IM::TVI_ITM, SK::RATELESS, Statistic::RATE),
                job(4.0, 100.0, IM::TVI_ITM, SK::AMC, Statistic::RATE),
                job(4.0, 100.0, IM::CI, SK::FIXED_RATE, Statistic::RATE)};
    }
    throw UsageError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
}

/// Analytic CCDF function for a config, or nullopt when none exists (AMC).
inline std::optional<std::function<double(double)>> analytic_ccdf_function(const ScenarioConfig& c)
{
    if (c.metric == Statistic::COVERAGE) {
        auto fit = std::make_shared<BetaParams>(coverage_beta_fit(MomentModel(c.params, c.model)));
        return [fit](double p) { return reg_inc_beta_upper(std::clamp(p, 0.0, 1.0), *fit); };
    }
    switch (c.scheme.kind) {
    case SchemeKind::RATELESS: {
        auto meta = std::make_shared<RatelessRateMeta>(c.params, c.model);
        return [meta](double r) { return meta->ccdf(r); };
    }
    case SchemeKind::FIXED_RATE: {
        auto meta = std::make_shared<FixedRateMeta>(c.params);
        return [meta](double r) { return meta->ccdf(r); };
    }
    case SchemeKind::AMC:
        break;
    }
    return std::nullopt;
}

/// Simulation plan for a config. Fixed-rate packets occupy all N channel
/// uses, so interference is constant and they are simulated under CI.
inline SimulationPlan make_plan(const ScenarioConfig& c)
{
    SimulationOptions opt;
    opt.window_radius = c.window_radius;
    opt.threads = c.threads;
    const InterferenceModel model = c.scheme.kind == SchemeKind::FIXED_RATE ? InterferenceModel::CI : c.model;
    return SimulationPlan(c.params, model, c.scheme, opt);
}

struct CurvePair {
    std::optional<CcdfCurve> analytic;
    CcdfCurve empirical;
    CurveComparison comparison;
};

inline CurvePair run_curve(const CurveJob& job)
{
    const ScenarioConfig& c = job.config;
    const std::vector<double> grid = c.grid.values();
    const SimulationPlan plan = make_plan(c);
    const auto outcomes = simulate(plan, c.n_realizations, c.seed);

    CurvePair out;
    out.empirical = outcomes_to_ccdf(plan, c.metric, outcomes, grid, c.seed);
    out.empirical.meta.label = job.label;
    out.comparison.label = job.label;
    out.comparison.tolerance = c.tolerance;
    out.comparison.degenerate = out.empirical.meta.degenerate;

    const auto f = analytic_ccdf_function(c);
    if (f) {
        out.analytic = analytic_ccdf(*f, grid);
        out.analytic->meta = out.empirical.meta;
        out.analytic->meta.degenerate = 0;
        out.analytic->meta.resamples = 0;
        out.comparison.sup_deviation = sup_distance(*out.analytic, out.empirical);
    }

    const auto samples = statistic_samples(outcomes, c.metric);
    for (double x : c.spots) {
        const auto above = std::count_if(samples.begin(), samples.end(), [x](double s) { return s > x; });
        SpotValue s;
        s.x = x;
        s.empirical = static_cast<double>(above) / static_cast<double>(samples.size());
        s.halfwidth = wilson_halfwidth(s.empirical, samples.size());
        if (f) {
            s.analytic = (*f)(x);
        }
        out.comparison.spots.push_back(s);
    }
    return out;
}

inline std::string gnuplot_script(const std::vector<CurvePair>& curves, Statistic metric)
{
    std::string s = "set datafile separator ','\nset key autotitle columnhead\nset logscale y\n";
    s += metric == Statistic::COVERAGE ? "set xlabel 'p'\n" : "set xlabel 'r (bits per channel use)'\n";
    s += "set ylabel 'CCDF'\nplot ";
    bool first = true;
    for (const auto& c : curves) {
        const std::string& l = c.comparison.label;
        if (c.analytic) {
            s += std::string(first ? "" : ", \\\n     ") + "'" + l + "_analytic.csv' using 1:2 with lines title '" + l +
                 " analytic'";
            first = false;
        }
        s += std::string(first ? "" : ", \\\n     ") + "'" + l + "_empirical.csv' using 1:2 with points title '" + l +
             " simulated'";
        first = false;
    }
    return s + "\n";
}

struct ScenarioResult {
    ComparisonReport report;
    std::vector<std::filesystem::path> files;
};

/// Computes every job, then writes CSVs, a gnuplot script and report.txt
/// into `out_dir`.
inline ScenarioResult run_jobs(const std::vector<CurveJob>& jobs, const std::filesystem::path& out_dir)
{
    if (jobs.empty()) {
        throw std::invalid_argument("run_jobs: nothing to run");
    }
    std::vector<CurvePair> curves;
    for (const auto& j : jobs) {
        curves.push_back(run_curve(j));
    }
    std::filesystem::create_directories(out_dir);
    ScenarioResult result;
    for (const auto& c : curves) {
        const std::string& l = c.comparison.label;
        if (c.analytic) {
            result.files.push_back(out_dir / (l + "_analytic.csv"));
            emit_csv(*c.analytic, result.files.back());
        }
        result.files.push_back(out_dir / (l + "_empirical.csv"));
        emit_csv(c.empirical, result.files.back());
        result.report.curves.push_back(c.comparison);
    }
    result.files.push_back(out_dir / "plot.gp");
    {
        std::ofstream gp(result.files.back(), std::ios::binary);
        gp << gnuplot_script(curves, jobs.front().config.metric);
    }
    result.files.push_back(out_dir / "report.txt");
    {
        std::ofstream rep(result.files.back(), std::ios::binary);
        rep << result.report.to_text();
        if (!rep) {
            throw std::runtime_error("cannot write " + result.files.back().string());
        }
    }
    return result;
}

inline ScenarioResult run_scenario(const ScenarioConfig& c)
{
    return run_jobs({CurveJob{default_label(c), c}}, c.output_path);
}

} // namespace ratemeta

#endif
