#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greenmass/run.hpp"

namespace {

using greenmass::ScenarioConfig;

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string profile;
    int n = -1;
    int order = -1;
    double tol = -1.0;
    std::string out;
    bool deterministic = false;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--config", fl.config_path, "flat key = value config file");
    cmd->add_option("--set", fl.sets, "override a config key, e.g. --set n=2048");
    cmd->add_option("--profile", fl.profile, "round-s4 | fs-cp2 | perturbed-s4:eps=<v>");
    cmd->add_option("--n", fl.n, "interior grid nodes");
    cmd->add_option("--order", fl.order, "endpoint series truncation order");
    cmd->add_option("--tol", fl.tol, "integrator local-error tolerance");
    cmd->add_option("--out", fl.out, "output path");
    cmd->add_flag("--deterministic", fl.deterministic, "byte-stable report (no wall clock)");
    cmd->add_flag("--strict", fl.strict, "exit 5 when any audit fails");
}

ScenarioConfig build_config(const CommonFlags& fl) {
    ScenarioConfig cfg;
    if (!fl.config_path.empty()) cfg = greenmass::parse_config_file(fl.config_path);
    for (const auto& kv : fl.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw greenmass::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!fl.profile.empty()) cfg.profile = fl.profile;
    if (fl.n > 0) cfg.solve.n = fl.n;
    if (fl.order > 0) cfg.solve.order = static_cast<std::size_t>(fl.order);
    if (fl.tol >= 0.0) cfg.solve.integrator_tolerance = fl.tol;
    if (!fl.out.empty()) cfg.out = fl.out;
    cfg.deterministic = cfg.deterministic || fl.deterministic;
    cfg.strict = cfg.strict || fl.strict;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green's function blow-up laboratory for cohomogeneity-one 4-manifolds"};
    app.require_subcommand(1);

    CommonFlags run_fl, conv_fl, dump_fl;
    std::string levels_arg = "1024,2048,4096";

    CLI::App* run_cmd = app.add_subcommand("run", "solve one scenario and write the report");
    add_common(run_cmd, run_fl);

    CLI::App* conv_cmd =
        app.add_subcommand("convergence", "solve at several grid levels and report orders");
    add_common(conv_cmd, conv_fl);
    conv_cmd->add_option("--levels", levels_arg, "comma-separated n values (>= 3)");

    CLI::App* dump_cmd = app.add_subcommand("dump-fields", "write the per-grid-point field CSV");
    add_common(dump_cmd, dump_fl);

    app.add_subcommand("list-profiles", "list the built-in background profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? greenmass::kConfigError : 0;
    }

    try {
        if (run_cmd->parsed()) {
            ScenarioConfig cfg = build_config(run_fl);
            greenmass::RunOutcome outcome = greenmass::run_scenario(cfg);
            if (cfg.out.empty()) std::cout << outcome.report.dump(2) << "\n";
            else std::cout << "report written to " << cfg.out << "\n";
            return outcome.exit_code;
        }
        if (conv_cmd->parsed()) {
            ScenarioConfig cfg = build_config(conv_fl);
            std::vector<int> levels;
            std::size_t pos = 0;
            while (pos <= levels_arg.size()) {
                auto comma = levels_arg.find(',', pos);
                std::string tok = levels_arg.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!tok.empty()) levels.push_back(std::stoi(tok));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            auto table = greenmass::convergence_study(cfg, levels);
            std::cout << greenmass::convergence_text(table);
            if (!cfg.out.empty()) greenmass::write_text_file(cfg.out, table.dump(2) + "\n");
            return 0;
        }
        if (dump_cmd->parsed()) {
            ScenarioConfig cfg = build_config(dump_fl);
            std::string csv = greenmass::dump_fields_csv(cfg);
            if (cfg.out.empty()) std::cout << csv;
            else greenmass::write_text_file(cfg.out, csv);
            return 0;
        }
        // list-profiles
        for (const auto& info : greenmass::list_profiles())
            std::printf("%-24s %s\n", info.name.c_str(), info.description.c_str());
        return 0;
    } catch (const greenmass::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return greenmass::kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return greenmass::kConfigError;
    } catch (const greenmass::QuadratureError& e) {
        std::cerr << "quadrature error: " << e.what() << "\n";
        return greenmass::kQuadratureError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return greenmass::kSolverError;
    }
}
