#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpuwave/fpuwave.h"

using namespace nlohmann::literals;

namespace {

struct Overrides {
    std::string config_path;
    std::string output;
    std::optional<double> delta;
    std::string model;
    std::optional<int> L;
    std::optional<int> k;
    std::optional<double> tol;
    bool toda_only = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON run configuration");
    sub->add_option("--output", o.output, "output directory");
    sub->add_option("--delta", o.delta, "single delta in (0, 0.5]");
    sub->add_option("--model", o.model, "toda | power:<m>[:c1,c2,...]");
    sub->add_option("--L", o.L, "half period of the cell");
    sub->add_option("--k", o.k, "samples per half unit length");
    sub->add_option("--tol", o.tol, "fixed-point tolerance");
}

int exit_code(fpw_status s) {
    switch (s) {
    case FPW_OK: return 0;
    case FPW_ERR_CONFIG:
    case FPW_ERR_INVALID_ARGUMENT:
    case FPW_ERR_IO: return 2;
    default: return 1;
    }
}

int report_error(fpw_status s) {
    std::cerr << "fpuwave: " << fpw_status_string(s) << ": " << fpw_last_error() << "\n";
    return exit_code(s);
}

int run(fpw_command cmd, const Overrides& o) {
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) {
            std::cerr << "fpuwave: cannot read config " << o.config_path << "\n";
            return 2;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    fpw_config* cfg = nullptr;
    fpw_status s = fpw_config_new(text.c_str(), &cfg);
    if (s != FPW_OK) return report_error(s);
    std::unique_ptr<fpw_config, decltype(&fpw_config_free)> guard(cfg, fpw_config_free);

    if (!o.model.empty() && (s = fpw_config_set_model(cfg, o.model.c_str())) != FPW_OK) {
        return report_error(s);
    }
    if (o.delta) fpw_config_set_delta(cfg, *o.delta);
    if (o.L) fpw_config_set_L(cfg, *o.L);
    if (o.k) fpw_config_set_k(cfg, *o.k);
    if (o.tol) fpw_config_set_tol(cfg, *o.tol);
    if (!o.output.empty()) fpw_config_set_output_dir(cfg, o.output.c_str());
    if (o.toda_only) fpw_config_set_toda_only(cfg, 1);

    char* report = nullptr;
    s = fpw_run(cmd, cfg, &report);
    if (!report) return report_error(s);

    const auto j = nlohmann::json::parse(report);
    fpw_string_free(report);
    const auto warnings = j.value("/report/warnings"_json_pointer, nlohmann::json::array());
    for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << "\n";
    for (const auto& line : j.value("lines", nlohmann::json::array())) {
        std::cout << line.get<std::string>() << "\n";
    }
    if (s != FPW_OK) std::cerr << "fpuwave: " << fpw_status_string(s) << "\n";
    return exit_code(s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic traveling waves in FPU chains with exponential interactions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fpw_version());

    Overrides o;
    auto* solve = app.add_subcommand("solve", "solve for a single delta");
    auto* sweep = app.add_subcommand("sweep", "solve a descending list of deltas and fit error orders");
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria and write verify.json");
    auto* figs = app.add_subcommand("figures-data", "write CSV inputs for the figure scripts");
    for (auto* sub : {solve, sweep, verify, figs}) add_common(sub, o);
    verify->add_flag("--toda-only", o.toda_only, "only run checks that involve the Toda chain");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (solve->parsed()) return run(FPW_CMD_SOLVE, o);
    if (sweep->parsed()) return run(FPW_CMD_SWEEP, o);
    if (verify->parsed()) return run(FPW_CMD_VERIFY, o);
    return run(FPW_CMD_FIGURES_DATA, o);
}
