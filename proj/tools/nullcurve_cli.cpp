// Command-line laboratory for extremal isotropic curves: solve the flow,
// draw phase portraits, classify coadjoint orbits, run the verification
// suite. Exit codes: 0 ok, 1 verification failure, 2 usage/config error,
// 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "nullcurve/dynamics.hpp"
#include "nullcurve/elliptic.hpp"
#include "nullcurve/io.hpp"
#include "nullcurve/reduce.hpp"
#include "nullcurve/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace nullcurve;

namespace {

struct RunConfig {
    double m = 0.0;
    double k = 0.0, l4 = 0.0, l5 = 0.0;
    e21::GroupElement g0;
    double T = 0.0;
    double dt_max = 0.01;
    double tol = 1e-10;
    std::string method = "direct";
    std::string outputs;
};

[[noreturn]] void config_error(const std::string& msg) {
    std::fprintf(stderr, "config error: %s\n", msg.c_str());
    std::exit(2);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    RunConfig c;
    if (!j.contains("m")) config_error("missing field 'm'");
    c.m = j["m"].get<double>();
    if (c.m == 0.0) config_error("field 'm' must be nonzero");
    if (!j.contains("initial")) config_error("missing field 'initial'");
    for (const char* f : {"k", "l4", "l5"})
        if (!j["initial"].contains(f)) config_error(std::string("missing field 'initial.") + f + "'");
    c.k = j["initial"]["k"].get<double>();
    c.l4 = j["initial"]["l4"].get<double>();
    c.l5 = j["initial"]["l5"].get<double>();
    if (!j.contains("T")) config_error("missing field 'T'");
    c.T = j["T"].get<double>();
    if (c.T <= 0) config_error("field 'T' must be positive");
    if (j.contains("dt_max")) c.dt_max = j["dt_max"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (c.tol <= 0) config_error("field 'tol' must be positive");
    if (j.contains("method")) c.method = j["method"].get<std::string>();
    if (j.contains("outputs")) c.outputs = j["outputs"].get<std::string>();
    if (j.contains("g0")) {
        const auto& g = j["g0"];
        if (!g.contains("q") || !g.contains("A")) config_error("field 'g0' needs 'q' and 'A'");
        for (int i = 0; i < 3; ++i) {
            c.g0.q[i] = g["q"][i].get<double>();
            for (int jj = 0; jj < 3; ++jj) c.g0.A(i, jj) = g["A"][i][jj].get<double>();
        }
        if (c.g0.invariant_residual() > 1e-8) config_error("field 'g0' is not a group element");
    }
    return c;
}

ordered_json json_vec(const MinkVector& v) { return ordered_json::array({v.x1, v.x2, v.x3}); }

ordered_json json_group(const e21::GroupElement& g) {
    ordered_json out;
    out["q"] = json_vec(g.q);
    out["A"] = ordered_json::array();
    for (int i = 0; i < 3; ++i)
        out["A"].push_back(ordered_json::array({g.A(i, 0), g.A(i, 1), g.A(i, 2)}));
    return out;
}

const char* branch_name(elliptic::Branch b) {
    switch (b) {
        case elliptic::Branch::CaseI: return "case-I";
        case elliptic::Branch::CaseII_compact: return "case-II-compact";
        case elliptic::Branch::CaseII_unbounded: return "case-II-unbounded";
    }
    return "?";
}

void write_trajectory_csv(const std::string& path, const dynamics::Trajectory& tr) {
    io::CsvWriter csv(path, {"t", "k", "l4", "l5", "C1", "C2", "alpha1", "alpha2", "alpha3",
                             "J_p1", "J_p2", "J_p3", "J_v1", "J_v2", "J_v3"});
    for (const auto& s : tr.samples)
        csv.row({s.t, s.state.k, s.state.l4, s.state.l5, s.C1, s.C2, s.g.q.x1, s.g.q.x2,
                 s.g.q.x3, s.J.p.x1, s.J.p.x2, s.J.p.x3, s.J.v.x1, s.J.v.x2, s.J.v.x3});
}

void write_curve_svg(const std::string& path, const dynamics::Trajectory& tr) {
    io::Series s12, s13;
    s12.color = "#1f77b4";
    s12.label = "(alpha1, alpha2)";
    s13.color = "#d62728";
    s13.label = "(alpha1, alpha3)";
    for (const auto& smp : tr.samples) {
        s12.x.push_back(smp.g.q.x1);
        s12.y.push_back(smp.g.q.x2);
        s13.x.push_back(smp.g.q.x1);
        s13.y.push_back(smp.g.q.x3);
    }
    io::write_svg_plot(path, {s12, s13}, "base curve projections", "alpha1", "alpha2 / alpha3");
}

struct PortraitData {
    std::vector<std::array<double, 3>> samples;  // s, chi, l4
    std::vector<std::string> branch_tag;
    elliptic::InvariantPair inv;
    int components = 0;
    bool degenerate = false;
};

PortraitData sample_portrait(double m, double C1, double C2) {
    PortraitData out;
    out.inv = elliptic::invariants_from_casimirs(m, C1, C2);
    const auto& w = out.inv.portrait;
    auto emit = [&](double s, const elliptic::WpValue& v, const char* tag) {
        out.samples.push_back({s, v.p, v.pprime});
        out.branch_tag.push_back(tag);
    };
    const int n = 400;
    if (w.cubic_case == elliptic::CubicCase::ThreeReal) {
        out.components = 2;
        for (int i = 0; i <= n; ++i) {
            const double s = 2.0 * w.omega1 * i / n;
            emit(s, elliptic::wp_compact(s, w), "compact");
        }
        for (int i = 1; i < n; ++i) {
            const double s = 0.06 + (2.0 * w.omega1 - 0.12) * i / n;
            auto v = elliptic::wp(s, w);
            if (std::abs(v.p) < 50) emit(s, v, "unbounded");
        }
    } else if (w.cubic_case == elliptic::CubicCase::OneReal) {
        out.components = 1;
        for (int i = 1; i < n; ++i) {
            const double s = 0.06 + (2.0 * w.omega1 - 0.12) * i / n;
            auto v = elliptic::wp(s, w);
            if (std::abs(v.p) < 50) emit(s, v, "case-I");
        }
    } else {
        out.degenerate = true;
        out.components = w.dbl_root > 0 ? 2 : 1;
        if (w.dbl_root > 0) {
            for (int i = -n; i <= n; ++i) {
                const double s = 6.0 * i / n;
                emit(s, elliptic::wp_compact(s, w), "degenerate-loop");
            }
        }
        const double per = std::isfinite(w.omega1) ? 2 * w.omega1 : 8.0;
        for (int i = 1; i < n; ++i) {
            const double s = 0.06 + (per - 0.12) * i / n;
            auto v = elliptic::wp(s, w);
            if (std::abs(v.p) < 50) emit(s, v, "degenerate");
        }
    }
    return out;
}

void write_portrait_files(const std::string& dir, double m, double C1, double C2,
                          const dynamics::Trajectory* overlay) {
    PortraitData pd = sample_portrait(m, C1, C2);
    const auto& w = pd.inv.portrait;
    {
        io::CsvWriter csv(dir + "/portrait.csv", {"s", "chi", "l4", "branch"});
        for (std::size_t i = 0; i < pd.samples.size(); ++i)
            csv.row_tagged({pd.samples[i][0], pd.samples[i][1], pd.samples[i][2]},
                           pd.branch_tag[i]);
    }
    // algebraic level set by dense resubstitution, overlaid with the
    // parametrized samples so parametrization errors are visible
    io::Series level, param, traj;
    level.color = "#999999";
    level.label = "level set l4^2 = 4chi^3 - g2 chi - g3";
    double chi_lo = 1e300, chi_hi = -1e300;
    for (const auto& s : pd.samples) {
        chi_lo = std::min(chi_lo, s[1]);
        chi_hi = std::max(chi_hi, s[1]);
    }
    if (chi_lo > chi_hi) {
        chi_lo = -2;
        chi_hi = 2;
    }
    for (int i = 0; i <= 2000; ++i) {
        const double chi = chi_lo + (chi_hi - chi_lo) * i / 2000;
        const double rhs = 4 * chi * chi * chi - w.g2 * chi - w.g3;
        if (rhs >= 0) {
            const double l4 = std::sqrt(rhs);
            level.x.push_back(chi);
            level.y.push_back(l4);
            level.x.push_back(chi);
            level.y.push_back(-l4);
        }
    }
    level.points_only = true;
    param.color = "#1f77b4";
    param.label = "wp-parametrized samples";
    param.points_only = true;
    for (const auto& s : pd.samples) {
        param.x.push_back(s[1]);
        param.y.push_back(s[2]);
    }
    std::vector<io::Series> series = {level, param};
    if (overlay) {
        traj.color = "#d62728";
        traj.label = "trajectory";
        for (const auto& smp : overlay->samples) {
            traj.x.push_back(elliptic::portrait_chi(smp.state));
            traj.y.push_back(smp.state.l4);
        }
        series.push_back(traj);
    }
    io::write_svg_plot(dir + "/portrait.svg", series,
                       std::string("phase portrait (") +
                           (pd.degenerate ? "degenerate rational"
                                          : (pd.components == 2 ? "case II, two components"
                                                                : "case I, one component")) +
                           ")",
                       "chi", "l4");
}

int cmd_solve(const std::string& config_path, std::string method_flag, std::string out_flag) {
    RunConfig c = parse_config(config_path);
    if (!method_flag.empty()) c.method = method_flag;
    if (!out_flag.empty()) c.outputs = out_flag;
    if (c.method != "direct" && c.method != "quadrature" && c.method != "both")
        config_error("method must be direct, quadrature or both");
    if (c.outputs.empty()) config_error("missing output directory ('outputs' or --out)");
    fs::create_directories(c.outputs);

    dynamics::PhaseState s0(c.m, c.k, c.l4, c.l5);
    auto [C1, C2] = dynamics::casimirs(s0);
    const int n_samples = std::max(101, static_cast<int>(std::ceil(c.T / c.dt_max)) + 1);

    ordered_json inv;
    inv["m"] = c.m;
    inv["initial"] = {{"k", c.k}, {"l4", c.l4}, {"l5", c.l5}};
    inv["C1"] = C1;
    inv["C2"] = C2;
    inv["orbit_class"] = reduce::to_string(reduce::classify_orbit(dynamics::phase_embed(s0)).kind);
    auto ip = elliptic::invariants_from_casimirs(c.m, C1, C2);
    inv["g2_true_time"] = ip.true_time.g2;
    inv["g3_true_time"] = ip.true_time.g3;
    inv["g2_portrait"] = ip.portrait.g2;
    inv["g3_portrait"] = ip.portrait.g3;
    inv["discriminant_true_time"] = ip.true_time.D;
    inv["discriminant_portrait"] = ip.portrait.D;
    inv["method"] = c.method;

    try {
        std::optional<dynamics::Trajectory> direct, quad;
        if (c.method == "direct" || c.method == "both") {
            direct = dynamics::integrate_extremal(s0, c.g0, c.T, {c.tol, c.dt_max, n_samples});
            inv["drift"] = {{"casimir", direct->max_casimir_drift()},
                            {"moment", direct->max_moment_drift()},
                            {"lax_charpoly", direct->max_charpoly_drift()}};
        }
        if (c.method == "quadrature" || c.method == "both") {
            auto path = elliptic::closed_form_from_state(s0);
            inv["branch"] = branch_name(path.branch);
            auto pr = reduce::integrate_by_quadratures(s0, c.g0, c.T, n_samples, {1e-7});
            inv["quadrature"] = {{"isotropy_residual", pr.isotropy_residual},
                                 {"vmu_mean", pr.vmu_mean},
                                 {"vmu_stdev", pr.vmu_stdev}};
            quad = std::move(pr.gamma);
        } else {
            inv["branch"] = branch_name(elliptic::closed_form_from_state(s0).branch);
        }
        if (c.method == "both") {
            // alignment constant estimated at t = 0, then sup deviation
            const e21::GroupElement align = e21::group_compose(
                direct->samples.front().g, e21::group_inverse(quad->samples.front().g));
            double sup = 0;
            for (std::size_t i = 0; i < direct->samples.size(); ++i) {
                const e21::GroupElement a = direct->samples[i].g;
                const e21::GroupElement b =
                    e21::group_compose(align, quad->samples[i].g);
                double d = coord_norm(a.q - b.q);
                for (int r = 0; r < 3; ++r)
                    for (int cc = 0; cc < 3; ++cc)
                        d = std::max(d, std::abs(a.A(r, cc) - b.A(r, cc)));
                sup = std::max(sup, d);
            }
            inv["both_sup_deviation_after_alignment"] = sup;
        }

        const dynamics::Trajectory& main_traj = direct ? *direct : *quad;
        write_trajectory_csv(c.outputs + "/trajectory.csv", main_traj);
        write_curve_svg(c.outputs + "/curve.svg", main_traj);
        write_portrait_files(c.outputs, c.m, C1, C2, &main_traj);
        std::ofstream(c.outputs + "/invariants.json") << inv.dump(2) << "\n";
    } catch (const NonFiniteState& e) {
        std::fprintf(stderr, "numeric failure: blow-up detected at t = %.6f\n", e.t_reached);
        return 3;
    } catch (const IntegrationFailure& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const NotInIsotropy& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 0;
}

int cmd_portrait(double m, double C1, double C2, const std::string& out) {
    if (m == 0.0) config_error("--m must be nonzero");
    if (out.empty()) config_error("missing --out directory");
    fs::create_directories(out);
    write_portrait_files(out, m, C1, C2, nullptr);
    return 0;
}

int cmd_classify(const std::string& pstr, const std::string& vstr) {
    auto parse3 = [](const std::string& s, const char* which) {
        MinkVector v;
        if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x1, &v.x2, &v.x3) != 3)
            config_error(std::string("cannot parse --") + which + " '" + s + "' (want x,y,z)");
        return v;
    };
    const e21::CoalgebraElement eta{parse3(pstr, "p"), parse3(vstr, "v")};
    const auto cls = reduce::classify_orbit(eta);
    ordered_json j;
    j["p"] = json_vec(eta.p);
    j["v"] = json_vec(eta.v);
    j["C1"] = cls.C1;
    j["C2"] = cls.C2;
    j["kind"] = reduce::to_string(cls.kind);
    if (cls.kind != reduce::OrbitKind::Singular) {
        const auto mu = reduce::standard_form(cls);
        j["standard_form"] = {{"m1", json_vec(mu.p)}, {"m2", json_vec(mu.v)}};
        const auto sec = reduce::cross_section(eta);
        j["section"] = json_group(sec.g);
        j["section_residual"] =
            (e21::coadjoint(sec.g, sec.mu_std) - eta).coord_norm();
    }
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out) {
    verify::VerifyReport rep;
    try {
        rep = verify::run_suite(suite);
    } catch (const std::invalid_argument& e) {
        config_error(e.what());
    }
    verify::print_report(rep, stdout);
    if (!out.empty()) {
        std::ofstream f(out);
        f << verify::to_json(rep).dump(2) << "\n";
    }
    return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for extremal isotropic curves in Minkowski 3-space"};
    app.require_subcommand(1);

    std::string config_path, method_flag, out_flag;
    auto* solve = app.add_subcommand("solve", "integrate an extremal and write outputs");
    solve->add_option("--config", config_path, "JSON config file")->required();
    solve->add_option("--method", method_flag, "direct | quadrature | both");
    solve->add_option("--out", out_flag, "output directory (overrides config)");

    double pm = 0, pc1 = 0, pc2 = 0;
    std::string pout;
    auto* portrait = app.add_subcommand("portrait", "emit the (chi, l4) phase portrait");
    portrait->add_option("--m", pm, "coupling constant")->required();
    portrait->add_option("--c1", pc1, "Casimir C1")->required();
    portrait->add_option("--c2", pc2, "Casimir C2")->required();
    portrait->add_option("--out", pout, "output directory")->required();

    std::string cp, cv;
    auto* classify = app.add_subcommand("classify", "classify a dual element (JSON to stdout)");
    classify->add_option("--p", cp, "p components x,y,z")->required();
    classify->add_option("--v", cv, "v components x,y,z")->required();

    std::string suite = "all", vout;
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->add_option("--suite", suite, "algebra | dynamics | elliptic | reduction | all");
    verify_cmd->add_option("--out", vout, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(config_path, method_flag, out_flag);
        if (portrait->parsed()) return cmd_portrait(pm, pc1, pc2, pout);
        if (classify->parsed()) return cmd_classify(cp, cv);
        if (verify_cmd->parsed()) return cmd_verify(suite, vout);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
