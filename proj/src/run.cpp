#include "greenmass/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "greenmass/blowup.hpp"
#include "greenmass/quadrature.hpp"

namespace greenmass {

namespace {

using json = nlohmann::ordered_json;

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

double parse_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
    if (pos != v.size()) throw ConfigError("config: bad number for '" + key + "': " + v);
    return x;
}

int parse_int(const std::string& v, const std::string& key) {
    double x = parse_double(v, key);
    int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) throw ConfigError("config: '" + key + "' must be an integer");
    return i;
}

json integral_json(const IntegralResult& r) {
    json j;
    j["value"] = r.value;
    j["error_estimate"] = r.error_estimate;
    j["endpoint_subtraction_order"] = r.endpoint_subtraction_order;
    json table = json::array();
    for (const auto& row : r.refinement_table) table.push_back({row.n, row.value});
    j["refinement"] = table;
    return j;
}

json audit_json(const AuditEntry& e) {
    json j;
    j["name"] = e.name;
    j["statement"] = e.statement;
    j["inputs"] = json::object();
    for (const auto& [k, v] : e.inputs) j["inputs"][k] = v;
    j["lhs"] = e.lhs;
    j["rhs"] = e.rhs;
    j["margin"] = e.margin;
    j["tolerance"] = e.tolerance;
    j["verdict"] = to_string(e.verdict);
    return j;
}

json opt_num(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

void ScenarioConfig::set(const std::string& key, const std::string& value) {
    if (key == "profile") profile = value;
    else if (key == "n") solve.n = parse_int(value, key);
    else if (key == "order") solve.order = static_cast<std::size_t>(parse_int(value, key));
    else if (key == "r0_factor") solve.r0_factor = parse_double(value, key);
    else if (key == "u0_factor") solve.u0_factor = parse_double(value, key);
    else if (key == "match_point_factor") solve.match_point_factor = parse_double(value, key);
    else if (key == "integrator_tolerance") solve.integrator_tolerance = parse_double(value, key);
    else if (key == "fixed_step") solve.fixed_step = parse_bool(value, key);
    else if (key == "kappa_tol") solve.kappa_tol = parse_double(value, key);
    else if (key == "rho1") rho1 = parse_double(value, key);
    else if (key == "flux_route") flux_route = parse_bool(value, key);
    else if (key == "audits") run_audits = parse_bool(value, key);
    else if (key == "deterministic") deterministic = parse_bool(value, key);
    else if (key == "strict") strict = parse_bool(value, key);
    else if (key == "out") out = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        cfg.set(key, value);
    }
    return cfg;
}

namespace {

json config_echo(const ScenarioConfig& cfg) {
    json j;
    j["profile"] = cfg.profile;
    j["n"] = cfg.solve.n;
    j["order"] = cfg.solve.order;
    j["r0_factor"] = cfg.solve.r0_factor;
    j["u0_factor"] = cfg.solve.u0_factor;
    j["match_point_factor"] = cfg.solve.match_point_factor;
    j["integrator_tolerance"] = cfg.solve.integrator_tolerance;
    j["fixed_step"] = cfg.solve.fixed_step;
    j["kappa_tol"] = cfg.solve.kappa_tol;
    j["rho1"] = cfg.rho1;
    j["flux_route"] = cfg.flux_route;
    j["audits"] = cfg.run_audits;
    j["deterministic"] = cfg.deterministic;
    j["strict"] = cfg.strict;
    return j;
}

}  // namespace

RunOutcome run_scenario(const ScenarioConfig& cfg) {
    RunOutcome out;
    json& rep = out.report;
    rep["config"] = config_echo(cfg);
    auto t0 = std::chrono::steady_clock::now();

    std::string stage = "profile";
    try {
        WarpedProfile profile = parse_profile(cfg.profile);
        IntegralResult vol = volume_integral(profile);
        double Vbar = vol.value;
        {
            json j;
            j["name"] = profile.name;
            j["kind"] = profile.kind == CrossSection::Round ? "round-cross-section"
                                                            : "berger-cross-section";
            j["length"] = profile.length;
            j["einstein_certified"] = profile.einstein_certified;
            j["endpoint_class"] = profile.endpoint_class() == EndpointClass::SmoothPoint
                                      ? "smooth-point"
                                      : "collapsed-circle";
            j["einstein_residual"] = einstein_residual(profile);
            j["volume"] = integral_json(vol);
            rep["profile"] = j;
        }

        stage = "greensolve";
        GreenSolution sol = solve_green(profile, cfg.solve);
        bool kappa_zero = std::abs(sol.kappa) <= cfg.solve.kappa_tol;
        {
            json j;
            j["n"] = cfg.solve.n;
            j["r0"] = sol.r0;
            j["u0"] = sol.u0;
            j["r_mid"] = sol.r_mid;
            j["A"] = sol.A;
            j["kappa"] = sol.kappa;
            j["kappa_tol"] = cfg.solve.kappa_tol;
            j["mass_series"] = opt_num(sol.mass_series);
            j["c1"] = sol.c1;
            j["G_at_far"] = sol.G_at_far();
            j["min_G"] = sol.min_G();
            j["match_condition"] = sol.match_condition;
            j["wronskian_drift"] = sol.wronskian_drift;
            j["defect_max"] = sol.defect_max;
            j["defect_near_pole"] = sol.defect_near_pole;
            j["defect_near_far"] = sol.defect_near_far;
            j["convergence_estimate"] = sol.convergence_estimate;
            rep["green"] = j;
        }

        stage = "blowup";
        BlowupFields fields = compute_fields(sol.profile, sol);
        {
            json j;
            j["max_F"] = max_F(fields);
            j["gradient_estimate_violation"] = gradient_estimate_violation(fields);
            j["gradient_estimate_deviation"] = gradient_estimate_deviation(fields);
            j["residual_DG"] = residual_DG_general(fields);
            if (profile.einstein_certified) {
                j["residual_dF_schouten"] = residual_dF_schouten(fields);
                j["residual_laplace_F"] = residual_laplace_F(fields);
            }
            rep["fields"] = j;
        }

        stage = "quadrature";
        json integrals;
        std::optional<double> I_hess, I_F, I_rho, IG1v, IG2v;
        if (kappa_zero) {
            IntegralResult ig1 = integral_IG1(sol);
            IG1v = ig1.value;
            integrals["IG1"] = integral_json(ig1);
            IntegralResult lg = integral_LG_flux(sol);
            integrals["LG_flux"] = integral_json(lg);
        }
        if (profile.einstein_certified && kappa_zero) {
            IntegralResult ig2 = integral_IG2(sol);
            IG2v = ig2.value;
            integrals["IG2"] = integral_json(ig2);
            IntegralResult fg = integral_FG(sol, fields);
            integrals["FG"] = integral_json(fg);
            IntegralResult ih = integral_hess(fields);
            I_hess = ih.value;
            integrals["hess"] = integral_json(ih);
            IntegralResult igf = integral_gradF(fields);
            I_F = igf.value;
            integrals["gradF"] = integral_json(igf);
            IntegralResult irho = integral_Irho_limit(fields, sol);
            I_rho = irho.value;
            integrals["Irho"] = integral_json(irho);
        }
        rep["integrals"] = integrals;

        stage = "mass";
        MassReport mr = build_mass_report(profile, sol, fields, cfg.rho1, cfg.flux_route);
        {
            json j;
            j["series"] = opt_num(mr.series);
            j["identity"] = opt_num(mr.identity);
            j["f_asymptote"] = opt_num(mr.f_asymptote);
            j["flux"] = opt_num(mr.flux);
            j["route_spread"] = mr.route_spread;
            j["flags"] = mr.flags;
            if (mr.flux_detail) {
                json fd;
                fd["raw"] = mr.flux_detail->raw;
                fd["spread"] = mr.flux_detail->spread;
                fd["flux_constant"] = mr.flux_detail->flux_constant;
                fd["chart_offset"] = mr.flux_detail->chart_offset;
                json samples = json::array();
                for (auto& [rho, raw] : mr.flux_detail->samples) samples.push_back({rho, raw});
                fd["samples"] = samples;
                fd["log_obstructed"] = mr.flux_detail->log_obstructed;
                j["flux_detail"] = fd;
            }
            rep["mass"] = j;
        }

        stage = "audits";
        AuditReport& audits = out.audits;
        double m_for_audits = mr.series ? *mr.series : std::nan("");
        if (cfg.run_audits) {
            audits.entries.push_back(audit_bishop(Vbar));
            if (profile.einstein_certified && mr.series) {
                audits.entries.push_back(audit_thm2(*mr.series, Vbar));
                audits.entries.push_back(audit_positive_mass(*mr.series));
                if (I_hess && I_F) {
                    audits.entries.push_back(audit_theorem1(*mr.series, Vbar, *I_hess, *I_F));
                    audits.entries.push_back(audit_dF_bound(*I_F, *mr.series, Vbar));
                }
                if (I_rho && I_F)
                    audits.entries.push_back(audit_cauchy_schwarz(*I_rho, *I_F, Vbar));
            }
            audits.entries.push_back(audit_min_g(m_for_audits, sol.min_G()));
            auto [d1, d2] = audit_diameter(m_for_audits, sol.min_G(), profile.length);
            audits.entries.push_back(d1);
            audits.entries.push_back(d2);
        }
        if (cfg.run_audits && !profile.einstein_certified) {
            // falsification entries: the Einstein-only identities are expected
            // to fail here, demonstrating the hypothesis is active
            double dg = residual_DG_general(fields);
            AuditEntry e;
            e.name = "einstein_dg_identity";
            e.statement = "Lap_g G = 2 G^-1 (1 + |grad G|^2) (needs R = 12)";
            e.inputs = {{"residual", dg}};
            e.lhs = dg;
            e.rhs = 0.0;
            e.margin = -dg;
            e.tolerance = 1e-3;
            e.verdict = dg <= 1e-3 ? Verdict::holds : Verdict::fails;
            audits.entries.push_back(e);
            double mf = max_F(fields);
            AuditEntry e2;
            e2.name = "f_nonpositive";
            e2.statement = "F <= 0 (sharp gradient estimate, Einstein hypothesis)";
            e2.inputs = {{"max_F", mf}};
            e2.lhs = mf;
            e2.rhs = 0.0;
            e2.margin = -mf;
            e2.tolerance = 1e-8;
            e2.verdict = mf <= 1e-8 ? Verdict::holds : Verdict::fails;
            audits.entries.push_back(e2);
            json fj;
            fj["kappa"] = sol.kappa;
            fj["dg_residual"] = dg;
            fj["max_F"] = mf;
            if (mr.series) fj["mass_series_outside_hypotheses"] = *mr.series;
            rep["falsification"] = fj;
        }
        json aj = json::array();
        for (const auto& e : audits.entries) aj.push_back(audit_json(e));
        rep["audits"] = aj;
        rep["audits_ok"] = audits.all_ok();

        if (cfg.strict && !audits.all_ok()) out.exit_code = kAuditFailure;
    } catch (const ConfigError& e) {
        rep["error"] = {{"stage", stage}, {"message", e.what()}};
        out.exit_code = kConfigError;
    } catch (const std::invalid_argument& e) {
        rep["error"] = {{"stage", stage}, {"message", e.what()}};
        out.exit_code = kConfigError;
    } catch (const QuadratureError& e) {
        rep["error"] = {{"stage", stage}, {"message", e.what()},
                        {"achieved_estimate", e.achieved_estimate}};
        out.exit_code = kQuadratureError;
    } catch (const SolveError& e) {
        rep["error"] = {{"stage", stage}, {"message", e.what()}};
        out.exit_code = kSolverError;
    } catch (const std::exception& e) {
        rep["error"] = {{"stage", stage}, {"message", e.what()}};
        out.exit_code = kSolverError;
    }

    if (!cfg.deterministic) {
        auto t1 = std::chrono::steady_clock::now();
        rep["wall_clock_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    }
    if (!cfg.out.empty()) write_text_file(cfg.out, rep.dump(2) + "\n");
    return out;
}

nlohmann::ordered_json convergence_study(const ScenarioConfig& base,
                                         const std::vector<int>& levels) {
    if (levels.size() < 3)
        throw ConfigError("convergence: at least 3 refinement levels required");
    json table;
    table["profile"] = base.profile;
    json rows = json::array();
    std::vector<double> As;
    for (int n : levels) {
        ScenarioConfig cfg = base;
        cfg.solve.n = n;
        cfg.solve.estimate_convergence = false;
        WarpedProfile profile = parse_profile(cfg.profile);
        GreenSolution sol = solve_green(profile, cfg.solve);
        json row;
        row["n"] = n;
        row["A"] = sol.A;
        row["mass_series"] = opt_num(sol.mass_series);
        bool kappa_zero = std::abs(sol.kappa) <= cfg.solve.kappa_tol;
        if (kappa_zero) {
            BlowupFields fields = compute_fields(sol.profile, sol);
            row["mass_f_asymptote"] = f_asymptote_mass(fields);
            if (profile.einstein_certified && sol.mass_series) {
                double Vbar = volume(profile);
                double ih = integral_hess(fields).value;
                double igf = integral_gradF(fields).value;
                row["mass_identity"] =
                    (6.0 * (8.0 * kPi * kPi / 3.0 - Vbar) + ih + igf) / (16.0 * kPi * kPi);
                row["mv1_residual"] = mv1_residual(*sol.mass_series, Vbar, ih, igf);
            }
        }
        rows.push_back(row);
        As.push_back(sol.A);
    }
    table["levels"] = rows;
    json orders = json::array();
    for (std::size_t i = 0; i + 2 < As.size(); ++i) {
        double d1 = std::abs(As[i] - As[i + 1]);
        double d2 = std::abs(As[i + 1] - As[i + 2]);
        if (d2 > 0.0 && d1 > 0.0) orders.push_back(std::log2(d1 / d2));
        else orders.push_back(nullptr);
    }
    table["observed_order_A"] = orders;
    return table;
}

std::string convergence_text(const nlohmann::ordered_json& table) {
    std::ostringstream os;
    os << "profile: " << table["profile"].get<std::string>() << "\n";
    os << "      n             A         mass_series\n";
    for (const auto& row : table["levels"]) {
        char buf[128];
        double ms = row["mass_series"].is_null() ? std::nan("") : row["mass_series"].get<double>();
        std::snprintf(buf, sizeof buf, "%7d  %.15f  %.15f\n", row["n"].get<int>(),
                      row["A"].get<double>(), ms);
        os << buf;
    }
    os << "observed order of A between consecutive levels:";
    for (const auto& o : table["observed_order_A"]) {
        if (o.is_null()) os << "  n/a";
        else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "  %.2f", o.get<double>());
            os << buf;
        }
    }
    os << "\n";
    return os.str();
}

std::string dump_fields_csv(const ScenarioConfig& cfg) {
    WarpedProfile profile = parse_profile(cfg.profile);
    GreenSolution sol = solve_green(profile, cfg.solve);
    BlowupFields f = compute_fields(sol.profile, sol);
    std::ostringstream os;
    os << "r,G,dG,gradG2,F,dF,lam_r,lam_a,lam_b,lapG,tfHess2,P_rr,weight\n";
    char buf[640];
    for (std::size_t i = 0; i < f.r.size(); ++i) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g\n",
                      f.r[i], f.G[i], f.dG[i], f.gradG2[i], f.F[i], f.dF[i], f.lam_r[i],
                      f.lam_a[i], f.lam_b[i], f.lapG[i], f.tfHess2[i], f.P_rr[i], f.weight[i]);
        os << buf;
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
}

}  // namespace greenmass
