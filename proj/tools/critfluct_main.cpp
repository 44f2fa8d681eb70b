#include <CLI11.hpp>

#include "critfluct/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 success, 2 config error, 3 divergence, 4 fit/analysis failure.
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitAnalysis = 4;

void print_diagnostic(const std::string& kind, const std::string& message,
                      const critfluct::json& extra = critfluct::json::object()) {
    critfluct::json diag = {{"error", kind}, {"message", message}};
    for (const auto& item : extra.items()) diag[item.key()] = item.value();
    std::cout << diag.dump(2) << '\n';
}

int run_guarded(const std::function<int()>& body) {
    using namespace critfluct;
    try {
        return body();
    } catch (const ConfigError& e) {
        print_diagnostic("config", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        print_diagnostic("domain", e.what());
        return kExitConfig;
    } catch (const DivergenceError& e) {
        print_diagnostic("divergence", e.what(),
                         {{"composition", e.composition}, {"gamma", e.gamma}});
        return kExitDivergence;
    } catch (const std::exception& e) {
        print_diagnostic("analysis", e.what());
        return kExitAnalysis;
    }
}

std::vector<double> parse_x_list(const std::string& arg) {
    std::vector<double> xs;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            xs.push_back(v);
        } catch (const std::exception&) {
            throw critfluct::ConfigError("cannot parse x value: " + tok);
        }
    }
    if (xs.empty()) throw critfluct::ConfigError("--x needs at least one value");
    return xs;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace critfluct;

    CLI::App app{"two-neuron fluctuation criticality toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* cmd_run = app.add_subcommand("run", "run one experiment from a config file");
    cmd_run->add_option("config", config_path, "experiment config JSON")->required();

    std::string suite_dir, suite_out = "results";
    auto* cmd_suite = app.add_subcommand("suite", "run every config in a directory");
    cmd_suite->add_option("configs", suite_dir, "directory of config JSON files")->required();
    cmd_suite->add_option("--out", suite_out, "output directory (default: results)");

    std::string x_arg;
    auto* cmd_appendix =
        app.add_subcommand("verify-appendix", "check the asymptotic integral approximation");
    cmd_appendix->add_option("--x", x_arg, "comma-separated |x| values, each >= 10")->required();

    std::string report_dir;
    auto* cmd_report = app.add_subcommand("report", "re-render summary.json from stored reports");
    cmd_report->add_option("dir", report_dir, "directory holding per-experiment subdirectories")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }

    if (cmd_run->parsed()) {
        return run_guarded([&] {
            ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
            ExperimentReport report = run_experiment(cfg);
            std::cout << report.to_json().dump(2) << '\n';
            return 0;
        });
    }

    if (cmd_suite->parsed()) {
        return run_guarded([&] {
            json summary = run_suite(suite_dir, suite_out);
            std::cout << summary.dump(2) << '\n';
            return 0;
        });
    }

    if (cmd_appendix->parsed()) {
        return run_guarded([&] {
            json table = verify_appendix(parse_x_list(x_arg));
            std::cout << table.dump(2) << '\n';
            return table["all_ok"].get<bool>() ? 0 : kExitAnalysis;
        });
    }

    if (cmd_report->parsed()) {
        return run_guarded([&] {
            json summary = summarize_reports(report_dir);
            std::ofstream out(std::filesystem::path(report_dir) / "summary.json");
            if (!out) throw ConfigError("cannot write summary.json under " + report_dir);
            out << summary.dump(2) << '\n';
            std::cout << summary.dump(2) << '\n';
            return 0;
        });
    }

    return kExitConfig;
}
