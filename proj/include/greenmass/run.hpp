#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenmass/audits.hpp"
#include "greenmass/greensolve.hpp"
#include "greenmass/mass.hpp"

namespace greenmass {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Exit codes of the scenario runner (also used by the CLI).
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSolverError = 3,
    kQuadratureError = 4,
    kAuditFailure = 5,
};

struct ScenarioConfig {
    std::string profile = "round-s4";
    SolveOptions solve;
    double rho1 = 100.0;
    bool flux_route = true;  // evaluate the coordinate-flux mass route
    bool run_audits = true;
    bool deterministic = false;
    bool strict = false;
    std::string out;

    // keys: profile, n, order, r0_factor, u0_factor, match_point_factor,
    // integrator_tolerance, fixed_step, kappa_tol, rho1, flux_route, audits,
    // deterministic, strict, out; unknown keys are rejected
    void set(const std::string& key, const std::string& value);
};

ScenarioConfig parse_config_file(const std::string& path);

struct RunOutcome {
    nlohmann::ordered_json report;
    int exit_code = kOk;
    AuditReport audits;
};

// full pipeline: profile -> frobenius -> greensolve -> blowup -> quadrature
// -> mass -> audits; on stage failure the report is partial and the exit code
// identifies the stage
RunOutcome run_scenario(const ScenarioConfig& cfg);

// one solve per level (>= 3 required); reports A, mass routes, identity
// residual and observed convergence orders
nlohmann::ordered_json convergence_study(const ScenarioConfig& base,
                                         const std::vector<int>& levels);
std::string convergence_text(const nlohmann::ordered_json& table);

// per-grid-point CSV with the field glossary as header
std::string dump_fields_csv(const ScenarioConfig& cfg);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace greenmass
