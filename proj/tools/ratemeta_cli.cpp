// Command-line front end: runs the analytic and simulated meta-distribution
// pipelines for one scenario or one figure preset and writes CSV curves,
// a gnuplot script and a comparison report.
//
// Exit codes: 0 ok/pass, 1 tolerance fail or runtime failure, 2 usage error.

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ratemeta/experiments.hpp"

namespace {

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

const std::vector<Flag> kFlags = {
    {"--lambda", "lambda", "BS density (default 1)"},
    {"--alpha", "alpha", "path-loss exponent, > 2 (required)"},
    {"--K", "K", "packet size in bits (default 75)"},
    {"--N", "N", "delay budget in channel uses (required)"},
    {"--scheme", "scheme", "rateless | fixed | amc"},
    {"--model", "model", "ci | tvi"},
    {"--metric", "metric", "ps (coverage at N) | rate"},
    {"--amc-levels", "amc_levels", "number of AMC packet times (default 4)"},
    {"--time-grid", "time_grid", "continuous | integer"},
    {"--realizations", "realizations", "simulated geometries (>= 100, default 5000)"},
    {"--seed", "seed", "master seed (default 1)"},
    {"--stream", "stream", "first stream id (default 0)"},
    {"--grid-min", "grid_min", "first axis value"},
    {"--grid-max", "grid_max", "last axis value"},
    {"--grid-points", "grid_points", "axis points"},
    {"--out", "out", "output directory"},
    {"--tolerance", "tolerance", "fail (exit 1) when a sup-deviation exceeds this"},
    {"--spot", "spot", "comma-separated axis values for the spot table"},
    {"--window-radius", "window_radius", "simulation window radius (0 = 40/sqrt(lambda))"},
    {"--threads", "threads", "worker threads (0 = all cores)"},
};

// keys a preset does not fix
const std::vector<std::string> kPresetOverrides = {"realizations", "seed",      "stream",       "out",
                                                   "tolerance",    "threads",   "window_radius"};

int run(int argc, char** argv)
{
    CLI::App app{"Per-user rate meta-distribution of rateless-coded cellular downlinks"};
    app.set_version_flag("--version", "ratemeta 1.0");
    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<CLI::Option*, std::string>> bound;
    for (const auto& f : kFlags) {
        bound.emplace_back(app.add_option(f.name, flag_values[f.key], f.help), f.key);
    }
    std::string preset;
    std::string config_path;
    app.add_option("--preset", preset, "fig1 | fig2 | fig3")->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    app.add_option("--config", config_path, "flat key=value file; flags override its entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::map<std::string, std::string> kv;
        if (!config_path.empty()) {
            kv = ratemeta::read_key_value_file(config_path);
        }
        for (const auto& [opt, key] : bound) {
            if (opt->count() > 0) {
                kv[key] = flag_values[key];
            }
        }

        std::vector<ratemeta::CurveJob> jobs;
        std::filesystem::path out_dir;
        if (!preset.empty()) {
            for (const auto& [k, v] : kv) {
                if (std::find(kPresetOverrides.begin(), kPresetOverrides.end(), k) == kPresetOverrides.end()) {
                    throw ratemeta::UsageError("--preset fixes '" + k + "'; only seed, stream, realizations, out, " +
                                               "tolerance, threads and window radius may be given with it");
                }
            }
            kv.emplace("alpha", "4");
            kv.emplace("N", "100");
            kv.emplace("out", "ratemeta_" + preset);
            const ratemeta::ScenarioConfig base = ratemeta::parse_config(kv);
            jobs = ratemeta::preset_jobs(preset, base);
            out_dir = base.output_path;
        } else {
            const ratemeta::ScenarioConfig c = ratemeta::parse_config(kv);
            jobs.push_back({ratemeta::default_label(c), c});
            out_dir = c.output_path;
        }

        const auto result = ratemeta::run_jobs(jobs, out_dir);
        std::cout << result.report.to_text();
        for (const auto& f : result.files) {
            std::cout << "wrote " << f.string() << "\n";
        }
        return result.report.passed() ? 0 : 1;
    } catch (const ratemeta::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
