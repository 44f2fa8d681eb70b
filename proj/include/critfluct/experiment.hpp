#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "critfluct/analysis.hpp"
#include "critfluct/duality.hpp"

namespace critfluct {

using json = nlohmann::json;

// One experiment = one catalogued composition trained on the standard two
// Gaussian classes, then per-class jump collection and power-law analysis.
// Every field has a per-composition default except composition and seed; the
// resolved values are echoed verbatim into the report.
struct ExperimentConfig {
    std::string composition;
    std::uint64_t seed = 0;

    double gamma = 0.05;
    // Training start point. The piecewise pairing must start with some active
    // mass (its default config uses b = 0.5); everything else starts at (0,0).
    double initial_w = 0.0;
    double initial_b = 0.0;
    EquilibriumCriterion equilibrium;
    long long jump_count = 1000000;
    int nbins = 50;
    // Explicit |dq1p| fit windows per class; unset means the default
    // density-based window rule.
    std::optional<std::pair<double, double>> fit_window_minus;
    std::optional<std::pair<double, double>> fit_window_plus;
    double k_tolerance = 0.15;
    long long accuracy_draws = 100000;
    long long max_csv_samples = 1000000;
    int workers = 1;
    std::string output_dir;  // empty: keep everything in memory

    static ExperimentConfig from_json(const json& j);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    json to_json() const;
};

// Per-composition defaults (everything except seed).
ExperimentConfig default_config(const std::string& composition_id);

struct ClassReport {
    std::string name;  // "minus" or "plus"
    ThetaEstimate theta;
    long long samples = 0;
    long long zero_jumps = 0;
    double zero_fraction = 0.0;
    PowerLawFit fit;
    std::optional<double> k_predicted;
    bool k_pass = false;
    double ks = 0.0;
    BranchScan branches;
    double jacobian_slope = 0.0;   // log-log slope of |d q1p / d x1|^-1 along the branch
    double jacobian_span = 0.0;    // decades of |dq1p| the slope was fitted over
    CDConstants cd;

    json to_json() const;
};

struct ExperimentReport {
    std::string composition;
    json config_echo;
    double w_star = 0.0;
    double b_star = 0.0;
    long long steps = 0;
    bool converged = false;
    double accuracy = 0.0;
    ClassReport minus;
    ClassReport plus;

    json to_json() const;
};

// Full pipeline: train, freeze, collect per class, rotate, bin, fit, predict.
// When config.output_dir is set, writes samples_{minus,plus}.csv,
// hist_{minus,plus}.csv, pred_{minus,plus}.csv, trace.csv and report.json
// there. The report JSON is canonical: fixed key order, no timestamps, so a
// given config reproduces it byte for byte.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Runs every config file (*.json) under config_dir, writing each experiment to
// out_dir/<config stem>/ and an aggregate summary.json to out_dir. A config
// that fails to parse or run becomes a "failed" summary row; an empty config
// set yields an empty summary and success.
json run_suite(const std::filesystem::path& config_dir, const std::filesystem::path& out_dir);

// Rebuilds summary.json from the report.json files found under dir (one level
// of subdirectories).
json summarize_reports(const std::filesystem::path& dir);

// Asymptotic-term check rows for the requested x values: relative error of
// exp(x)/x against adaptive quadrature of e^z/z, its bound e/|x|, and whether
// the bound held. Each x is checked at both signs.
json verify_appendix(const std::vector<double>& xs);

void write_report_json(const ExperimentReport& report, const std::filesystem::path& path);

}  // namespace critfluct
