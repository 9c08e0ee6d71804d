#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullcurve/dynamics.hpp"
#include "nullcurve/e21.hpp"
#include "nullcurve/elliptic.hpp"
#include "nullcurve/frenet.hpp"
#include "nullcurve/reduce.hpp"

namespace nullcurve::verify {

using ordered_json = nlohmann::ordered_json;

/// Base seed of the verification RNG; per-criterion streams are derived by
/// counter so criteria stay independent of execution order.
inline constexpr std::uint64_t kVerifySeed = 0x6e756c6c63727665ull;

class VerifyRng {
  public:
    explicit VerifyRng(std::uint64_t stream) : eng_(kVerifySeed ^ (stream * 0x9e3779b97f4a7c15ull)) {}
    double uniform(double a, double b) {
        return a + (b - a) * ((eng_() >> 11) * 0x1.0p-53);
    }
    MinkVector vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
    dynamics::PhaseState regular_state(double m) {
        while (true) {
            dynamics::PhaseState s(m, uniform(-2, 2), uniform(-2, 2), uniform(-2, 2));
            if (!dynamics::is_bifurcation(s, 1e-2)) return s;
        }
    }

  private:
    std::mt19937_64 eng_;
};

struct SubCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool informational = false;  // reported but not gating
    std::string note;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<SubCheck> checks;
    double runtime_seconds = 0.0;

    SubCheck& check_le(const std::string& nm, double measured, double threshold) {
        checks.push_back({nm, measured, threshold, measured <= threshold, false, {}});
        return checks.back();
    }
    SubCheck& info(const std::string& nm, double measured, double threshold,
                   const std::string& note = {}) {
        checks.push_back({nm, measured, threshold, measured <= threshold, true, note});
        return checks.back();
    }
    void finalize() {
        pass = true;
        for (const auto& c : checks)
            if (!c.informational && !c.pass) pass = false;
    }
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = kVerifySeed;
    std::vector<CriterionResult> criteria;
    std::vector<std::string> notes;
    bool all_pass = false;

    void finalize() {
        all_pass = true;
        for (const auto& c : criteria)
            if (!c.pass) all_pass = false;
    }
};

// ---------------------------------------------------------------------------
// Criterion implementations

inline CriterionResult criterion_1_nondegeneracy() {
    CriterionResult r;
    r.id = 1;
    r.name = "non-degeneracy coefficient of omega ^ Psi^4 equals -12 m^2";
    VerifyRng rng(1000);
    double worst = 0;
    for (double m : {0.5, 1.0, 2.0}) {
        for (int it = 0; it < 34; ++it) {
            auto s = rng.regular_state(m);
            const double top = dynamics::canonical_two_form(s).top_coefficient();
            worst = std::max(worst, std::abs(top + 12.0 * m * m) / (12.0 * m * m));
        }
    }
    r.check_le("relative deviation from -12 m^2 over 102 regular states", worst, 1e-10);
    r.finalize();
    return r;
}

inline CriterionResult criterion_2_coisotropy() {
    CriterionResult r;
    r.id = 2;
    r.name = "polar space = span(xi, S1, S2), portrait dimension 1";
    VerifyRng rng(2000);
    int bad_dim = 0, bad_span = 0, bad_portrait = 0;
    double worst_angle = 0;
    for (int it = 0; it < 100; ++it) {
        auto s = rng.regular_state(it % 2 ? 1.0 : 0.5);
        auto rep = dynamics::coisotropy_report(s, 1e-8);
        if (rep.polar_dim != 3) ++bad_dim;
        if (!rep.polar_matches_span) ++bad_span;
        if (rep.linearized_portrait_dim != 1) ++bad_portrait;
        worst_angle = std::max(worst_angle, rep.span_angle);
    }
    r.check_le("states with polar dimension != 3", bad_dim, 0);
    r.check_le("states where polar differs from span(xi,S1,S2)", bad_span, 0);
    r.check_le("states with portrait dimension != 1", bad_portrait, 0);
    r.check_le("largest principal angle to span(xi,S1,S2)", worst_angle, 1e-7);
    r.finalize();
    return r;
}

namespace internal {

/// The stated conservation run: m = 1, (k,l4,l5) = (0,1,0). The exact
/// solution leaves every compact set at t* = 4.35853... (Case I cubic), so
/// the requested horizon T = 20 exceeds the maximal interval of existence.
inline constexpr double kEscapeTime = 4.3585317;

struct ConservationRun {
    bool reached_T = false;
    double t_reached = 0.0;
    dynamics::Trajectory traj;  // over the survived window
};

inline ConservationRun stated_conservation_run(double T, double tol) {
    ConservationRun out;
    dynamics::PhaseState s0(1.0, 0.0, 1.0, 0.0);
    try {
        out.traj = dynamics::integrate_extremal(s0, e21::GroupElement::identity(), T,
                                                {tol, 0.01});
        out.reached_T = true;
        out.t_reached = T;
    } catch (const NonFiniteState& e) {
        out.t_reached = e.t_reached;
        const double safe = std::min(0.96 * kEscapeTime, 0.98 * e.t_reached);
        out.traj = dynamics::integrate_extremal(s0, e21::GroupElement::identity(), safe,
                                                {tol, 0.01});
    }
    return out;
}

}  // namespace internal

inline CriterionResult criterion_3_conservation() {
    CriterionResult r;
    r.id = 3;
    r.name = "conservation along direct integration (m=1, (0,1,0), T=20)";
    auto run = internal::stated_conservation_run(20.0, 1e-10);
    if (!run.reached_T) {
        r.check_le("horizon shortfall 20 - t_reached", 20.0 - run.t_reached, 0.0).note =
            "curvature escapes to infinity at t = 4.35853 (pole of the Case I "
            "Weierstrass solution); the stated horizon exceeds the maximal "
            "interval of existence, so the criterion cannot be met as stated";
        r.detail = "unattainable as stated: finite-time blow-up at t = 4.3585";
        auto sub = dynamics::integrate_extremal({1.0, 0.0, 1.0, 0.0},
                                                e21::GroupElement::identity(), 4.0,
                                                {1e-10, 0.01});
        r.info("|dC1|,|dC2| over the sub-window [0,4]", sub.max_casimir_drift(), 1e-7);
        r.info("|dJ| over the sub-window [0,4]", sub.max_moment_drift(), 1e-7);
        r.info("Lax charpoly drift over the sub-window [0,4]", sub.max_charpoly_drift(), 1e-7);
    } else {
        r.check_le("|dC1|,|dC2|", run.traj.max_casimir_drift(), 1e-7);
        r.check_le("|dJ|", run.traj.max_moment_drift(), 1e-7);
        r.check_le("Lax charpoly drift", run.traj.max_charpoly_drift(), 1e-7);
    }
    r.finalize();
    return r;
}

inline CriterionResult criterion_4_curvature_ode() {
    CriterionResult r;
    r.id = 4;
    r.name = "curvature ODE hierarchy along the same run";
    auto run = internal::stated_conservation_run(20.0, 1e-10);
    if (!run.reached_T) {
        // residuals are better measured before the curvature grows huge
        run.traj = dynamics::integrate_extremal({1.0, 0.0, 1.0, 0.0},
                                                e21::GroupElement::identity(), 3.5,
                                                {1e-12, 0.01});
    }

    // spot identity: both sides of the first integral equal 4 at the state
    {
        dynamics::PhaseState sp(1.0, 0.0, 1.0, 0.0);
        auto [C1, C2] = dynamics::casimirs(sp);
        const double lhs = 4.0 * sp.l4 * sp.l4 / (sp.m * sp.m);
        const double rhs = (4.0 * sp.m * C1 + 4.0 * C2 + 1.0) / (sp.m * sp.m * sp.m);
        r.check_le("spot identity |lhs - 4|", std::abs(lhs - 4.0), 0.0);
        r.check_le("spot identity |rhs - 4|", std::abs(rhs - 4.0), 0.0);
    }

    const auto& ts = run.traj.samples;
    auto [C1, C2] = dynamics::casimirs(ts.front().state);
    const double m = 1.0;
    double first_integral_sup = 0, third_order_sup = 0;
    const double h = ts[1].t - ts[0].t;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double k = ts[i].state.k;
        const double kp = -2.0 * ts[i].state.l4 / m;
        const double rhs = k * k * k - k * k / m - (4 * C2 + 1) * k / (m * m) +
                           (4 * m * C1 + 4 * C2 + 1) / (m * m * m);
        first_integral_sup = std::max(first_integral_sup, std::abs(kp * kp - rhs));
        if (i >= 3 && i + 3 < ts.size()) {
            auto kv = [&](int off) { return ts[i + off].state.k; };
            const double kd = (kv(-2) - 8 * kv(-1) + 8 * kv(1) - kv(2)) / (12 * h);
            const double kddd = (kv(-3) - 8 * kv(-2) + 13 * kv(-1) - 13 * kv(1) + 8 * kv(2) -
                                 kv(3)) /
                                (8 * h * h * h);
            third_order_sup =
                std::max(third_order_sup, std::abs(m * kddd - 3 * m * kv(0) * kd + kd));
        }
    }
    if (!run.reached_T) {
        r.check_le("horizon shortfall 20 - t_reached", 20.0 - run.t_reached, 0.0).note =
            "same blow-up as criterion 3; residuals below are measured on the "
            "sub-window [0,3.5] and reported for information";
        r.detail = "unattainable as stated: finite-time blow-up at t = 4.3585";
        r.info("first-integral residual sup (sub-window [0,3.5])", first_integral_sup, 1e-7);
        r.info("third-order residual sup (sub-window [0,3.5])", third_order_sup, 1e-5);
    } else {
        r.check_le("first-integral residual sup", first_integral_sup, 1e-7);
        r.check_le("third-order residual sup", third_order_sup, 1e-5);
    }
    r.finalize();
    return r;
}

inline CriterionResult criterion_5_elliptic_cross_validation() {
    CriterionResult r;
    r.id = 5;
    r.name = "closed form vs direct integration on a compact orbit";
    dynamics::PhaseState s0(1.0, -3.0, -3.0, 1.5);
    auto path = elliptic::closed_form_from_state(s0);
    const double period = 2.0 * path.invariants_true_time.omega1;
    auto tr = dynamics::integrate_extremal(s0, e21::GroupElement::identity(), period,
                                           {1e-12, 0.005});
    double sup = 0;
    for (const auto& smp : tr.samples) {
        auto c = elliptic::closed_form_state(path, smp.t);
        sup = std::max({sup, std::abs(c.k - smp.state.k), std::abs(c.l4 - smp.state.l4),
                        std::abs(c.l5 - smp.state.l5)});
    }
    r.check_le("sup |(k,l4,l5)_closed - (k,l4,l5)_direct| over one period", sup, 1e-6);

    VerifyRng rng(5000);
    double per = 0;
    for (int it = 0; it < 64; ++it) {
        const double t = rng.uniform(0.0, period);
        per = std::max(per, std::abs(elliptic::closed_form_state(path, t + period).k -
                                     elliptic::closed_form_state(path, t).k));
    }
    r.check_le("periodicity |k(t + 2 omega1) - k(t)|", per, 1e-9);
    r.finalize();
    return r;
}

inline CriterionResult criterion_6_invariant_oracle(VerifyReport* report = nullptr) {
    CriterionResult r;
    r.id = 6;
    r.name = "invariant-formula oracle and scale identities";
    VerifyRng rng(6000);
    double worst_g2 = 0, worst_g3 = 0, worst_scale = 0;
    bool plus_sign_rejected = false;
    for (int it = 0; it < 100; ++it) {
        const double m = rng.uniform(0.3, 2.5) * (it % 2 ? 1.0 : -1.0);
        const double C1 = rng.uniform(-3, 3), C2 = rng.uniform(-3, 3);
        // substitute k = 4h + 1/(3m) into the first-integral cubic
        const double a2 = -1.0 / m;
        const double a1 = -(4.0 * C2 + 1.0) / (m * m);
        const double a0 = (4.0 * m * C1 + 4.0 * C2 + 1.0) / (m * m * m);
        const double b = 1.0 / (3.0 * m);
        const double q1 = (3.0 * 4.0 * b * b + a2 * 8.0 * b + 4.0 * a1) / 16.0;
        const double q0 = (b * b * b + a2 * b * b + a1 * b + a0) / 16.0;
        auto inv = elliptic::invariants_from_casimirs(m, C1, C2);
        worst_g2 = std::max(worst_g2, std::abs(inv.true_time.g2 - (-q1)));
        worst_g3 = std::max(worst_g3, std::abs(inv.true_time.g3 - (-q0)));
        if (std::abs(q0) > 1e-3 && std::abs(-inv.true_time.g3 - (-q0)) > 1e-6)
            plus_sign_rejected = true;
        const double a = std::cbrt((4.0 / m) * (4.0 / m));
        const double s2 = std::abs(inv.portrait.g2 - m * m * a * inv.true_time.g2);
        const double s3 = std::abs(inv.portrait.g3 - 4.0 * m * m * inv.true_time.g3);
        const double sc = std::max(1.0, std::abs(inv.portrait.g2) + std::abs(inv.portrait.g3));
        worst_scale = std::max(worst_scale, std::max(s2, s3) / sc);
    }
    r.check_le("oracle deviation in g2 (flow-time form)", worst_g2, 1e-12);
    r.check_le("oracle deviation in g3 (flow-time form, negative sign)", worst_g3, 1e-12);
    r.check_le("scale identities to the portrait form (relative)", worst_scale, 1e-12);
    r.check_le("opposite g3 sign rejected by the oracle", plus_sign_rejected ? 0.0 : 1.0, 0.0);
    if (report)
        report->notes.push_back(
            "g3 sign: the flow-time invariants are g2 = (C2 + 1/3)/m^2 and "
            "g3 = -(m C1/4 + C2/6 + 1/27)/m^3; the substitution oracle rejects the "
            "positive-sign variant of g3 that appears in one printed form of the "
            "h-equation.");
    r.finalize();
    return r;
}

inline CriterionResult criterion_7_cross_sections() {
    CriterionResult r;
    r.id = 7;
    r.name = "cross-sections reproduce (p, v) on every orbit type";
    VerifyRng rng(7000);
    double worst = 0;
    int failures = 0;
    auto run = [&](const e21::CoalgebraElement& eta) {
        try {
            auto sec = reduce::cross_section(eta);
            const double res = (e21::coadjoint(sec.g, sec.mu_std) - eta).coord_norm() /
                               std::max(1.0, eta.coord_norm());
            worst = std::max(worst, res);
        } catch (const std::exception&) {
            ++failures;
        }
    };
    for (int it = 0; it < 100; ++it) {  // positive
        MinkVector p;
        do p = rng.vec(-3, 3);
        while (mink_inner(p, p) <= 0.2);
        run({p, rng.vec(-3, 3)});
    }
    for (int sgn = 0; sgn < 2; ++sgn)
        for (int it = 0; it < 100; ++it) {  // negative future/past
            const double a = rng.uniform(0.2, 3.0), c = rng.uniform(0.2, 3.0);
            MinkVector p{a, rng.uniform(-1, 1) * std::sqrt(2 * a * c) * 0.9, c};
            run({sgn ? -p : p, rng.vec(-3, 3)});
        }
    for (int sgn = 0; sgn < 2; ++sgn)
        for (int it = 0; it < 100; ++it) {  // null future/past incl. p3 ~ 0
            double a, c;
            if (it % 4 == 0) {
                a = rng.uniform(0.3, 3.0);
                c = 0.0;
            } else {
                a = rng.uniform(0.0, 3.0);
                c = rng.uniform(0.1, 3.0);
            }
            MinkVector p{a, std::sqrt(2 * a * c) * (it % 2 ? -1 : 1), c};
            run({sgn ? -p : p, rng.vec(-3, 3)});
        }
    r.check_le("reconstruction residual (relative, 500 points)", worst, 1e-9);
    r.check_le("points where a recipe failed outright", failures, 0);

    double id_dev = 0;
    for (const auto& eta :
         {e21::CoalgebraElement{e2, {0, 0, 0}}, e21::CoalgebraElement{e1 + e3, {0, 0, 0}}}) {
        auto sec = reduce::cross_section(eta);
        id_dev = std::max(id_dev, coord_norm(sec.g.q));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                id_dev = std::max(id_dev, std::abs(sec.g.A(i, j) - (i == j ? 1.0 : 0.0)));
    }
    r.check_le("standard points map to the identity (positive/negative)", id_dev, 1e-12);
    r.finalize();
    return r;
}

inline CriterionResult criterion_8_quadrature_reconstruction() {
    CriterionResult r;
    r.id = 8;
    r.name = "four-step quadrature pipeline per reachable orbit type";
    // compact Case II representatives; future-oriented timelike/null momenta
    // require m < 0
    struct Case {
        const char* label;
        dynamics::PhaseState s0;
    };
    const Case cases[] = {
        {"positive", {1.0, -3.0, -3.0, 1.5}},
        {"negative-past", {1.0, -3.0, -3.0, 2.5}},
        {"null-past", {1.0, -3.0, -3.0, 2.25}},
        {"negative-future", {-1.0, -4.0, -3.0, -4.0}},
        {"null-future", {-1.0, -4.0, -3.0, -3.0}},
    };
    const auto t_start = std::chrono::steady_clock::now();
    for (const auto& c : cases) {
        auto path = elliptic::closed_form_from_state(c.s0);
        const double T = std::min(2.0 * path.invariants_true_time.omega1, 4.0);
        auto cls = reduce::classify_orbit(dynamics::phase_embed(c.s0));
        auto pr = reduce::integrate_by_quadratures(c.s0, e21::GroupElement::identity(), T,
                                                   0, {1e-8});
        const std::string lbl = std::string(c.label) + " (" + reduce::to_string(cls.kind) + ")";
        r.check_le(lbl + ": isotropy-projection residual", pr.isotropy_residual, 1e-8);
        r.check_le(lbl + ": characteristic-equation residual",
                   reduce::characteristic_residual(pr.gamma), 1e-5);

        auto tr = dynamics::integrate_extremal(c.s0, e21::GroupElement::identity(), T,
                                               {1e-12, 0.005,
                                                static_cast<int>(pr.gamma.samples.size())});
        double sup = 0;
        for (std::size_t i = 0; i < tr.samples.size(); ++i) {
            const auto& a = tr.samples[i];
            const auto& b = pr.gamma.samples[i];
            double d = coord_norm(a.g.q - b.g.q);
            for (int rr = 0; rr < 3; ++rr)
                for (int cc = 0; cc < 3; ++cc)
                    d = std::max(d, std::abs(a.g.A(rr, cc) - b.g.A(rr, cc)));
            sup = std::max(sup, d);
        }
        r.check_le(lbl + ": agreement with direct integration", sup, 1e-5);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    r.check_le("runtime (seconds)", secs, 60.0);
    r.finalize();
    return r;
}

inline CriterionResult criterion_9_frenet_round_trip() {
    CriterionResult r;
    r.id = 9;
    r.name = "Frenet round trip for constant and elliptic curvature";
    auto linspace = [](double a, double b, int n) {
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
        return g;
    };
    // grids padded by one stencil so the nominal window sees central stencils
    struct Setup {
        std::string label;
        std::function<double(double)> k;
        double h;
    };
    dynamics::PhaseState s0(1.0, -3.0, 0.1, 1.0);
    auto path = elliptic::closed_form_from_state(s0);
    Setup setups[] = {
        {"k = -1", [](double) { return -1.0; }, 0.01},
        {"elliptic k", [path](double t) { return elliptic::closed_form_state(path, t).k; },
         0.004},
    };
    for (const auto& su : setups) {
        const double pad = 8 * su.h;
        const int n = static_cast<int>(std::round((10.0 + 2 * pad) / su.h)) + 1;
        auto grid = linspace(-pad, 10.0 + pad, n);
        auto f = frenet::synthesize_curve(su.k, e21::GroupElement::identity(), grid);
        auto back = frenet::analyze_curve(frenet::to_samples(f), 1e-5);
        double ksup = 0, nullsup = 0, normsup = 0;
        for (std::size_t i = 0; i < back.t.size(); ++i) {
            if (back.t[i] < 0.0 || back.t[i] > 10.0) continue;
            ksup = std::max(ksup, std::abs(back.k[i] - su.k(back.t[i])));
            const MinkVector a1 = back.g[i].col(0), a2 = back.g[i].col(1);
            nullsup = std::max(nullsup, std::abs(mink_inner(a1, a1)));
            normsup = std::max(normsup, std::abs(mink_inner(a2, a2) - 1.0));
        }
        r.check_le(su.label + ": sup |k_recovered - k|", ksup, 1e-6);
        r.check_le(su.label + ": sup |<a',a'>|", nullsup, 1e-8);
        r.check_le(su.label + ": sup ||a''| - 1|", normsup, 1e-7);
    }
    r.finalize();
    return r;
}

inline CriterionResult criterion_10_structural_dimensions() {
    CriterionResult r;
    r.id = 10;
    r.name = "structural dimensions: dim Y = dim G + rank G + 1, Abelian isotropy";
    const int rank_g = static_cast<int>(e21::isotropy_basis({e2, {0, 0, 0}}).size());
    r.check_le("|dim Y - (dim G + rank G + 1)| with dim Y = 9, dim G = 6",
               std::abs(9 - (6 + rank_g + 1)), 0);
    VerifyRng rng(10000);
    int bad_dim = 0;
    double worst_bracket = 0;
    for (int it = 0; it < 100; ++it) {
        MinkVector p;
        do p = rng.vec(-3, 3);
        while (coord_norm(p) < 0.3);
        e21::CoalgebraElement mu{p, rng.vec(-3, 3)};
        auto basis = e21::isotropy_basis(mu);
        if (basis.size() != 2) {
            ++bad_dim;
            continue;
        }
        worst_bracket = std::max(worst_bracket, e21::bracket(basis[0], basis[1]).coord_norm());
    }
    r.check_le("regular elements with isotropy dimension != 2", bad_dim, 0);
    r.check_le("worst commutator norm of the isotropy basis", worst_bracket, 1e-10);
    r.finalize();
    return r;
}

// ---------------------------------------------------------------------------

inline VerifyReport run_suite(const std::string& suite) {
    VerifyReport rep;
    rep.suite = suite;
    std::vector<int> ids;
    if (suite == "algebra") ids = {7, 10};
    else if (suite == "dynamics") ids = {1, 2, 3, 4, 9};
    else if (suite == "elliptic") ids = {5, 6};
    else if (suite == "reduction") ids = {8};
    else if (suite == "all") ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    else throw std::invalid_argument("unknown suite: " + suite);

    for (int id : ids) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult c;
        switch (id) {
            case 1: c = criterion_1_nondegeneracy(); break;
            case 2: c = criterion_2_coisotropy(); break;
            case 3: c = criterion_3_conservation(); break;
            case 4: c = criterion_4_curvature_ode(); break;
            case 5: c = criterion_5_elliptic_cross_validation(); break;
            case 6: c = criterion_6_invariant_oracle(&rep); break;
            case 7: c = criterion_7_cross_sections(); break;
            case 8: c = criterion_8_quadrature_reconstruction(); break;
            case 9: c = criterion_9_frenet_round_trip(); break;
            case 10: c = criterion_10_structural_dimensions(); break;
        }
        c.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.criteria.push_back(std::move(c));
    }
    rep.finalize();
    return rep;
}

inline ordered_json to_json(const VerifyReport& rep) {
    ordered_json j;
    j["suite"] = rep.suite;
    j["seed"] = rep.seed;
    j["all_pass"] = rep.all_pass;
    j["notes"] = rep.notes;
    j["criteria"] = ordered_json::array();
    for (const auto& c : rep.criteria) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        jc["runtime_seconds"] = c.runtime_seconds;
        jc["checks"] = ordered_json::array();
        for (const auto& s : c.checks) {
            ordered_json js;
            js["name"] = s.name;
            js["measured"] = s.measured;
            js["threshold"] = s.threshold;
            js["pass"] = s.pass;
            if (s.informational) js["informational"] = true;
            if (!s.note.empty()) js["note"] = s.note;
            jc["checks"].push_back(js);
        }
        j["criteria"].push_back(jc);
    }
    return j;
}

inline void print_report(const VerifyReport& rep, std::FILE* out) {
    for (const auto& c : rep.criteria) {
        std::fprintf(out, "[%s] %2d. %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str());
        for (const auto& s : c.checks) {
            std::fprintf(out, "       %s %s: %.3e (threshold %.3e)%s\n",
                         s.informational ? "(info)" : (s.pass ? "  ok  " : " FAIL "),
                         s.name.c_str(), s.measured, s.threshold,
                         s.note.empty() ? "" : ("\n         note: " + s.note).c_str());
        }
    }
    std::fprintf(out, "%s\n", rep.all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
}

}  // namespace nullcurve::verify
