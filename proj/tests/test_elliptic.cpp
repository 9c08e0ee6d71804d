#include <catch2/catch.hpp>

#include "nullcurve/elliptic.hpp"
#include "test_util.hpp"

using namespace nullcurve;
using namespace nullcurve::elliptic;
using nullcurve::dynamics::PhaseState;

namespace {

// Substitution oracle: expand the first-integral cubic
//   (dk/dt)^2 = k^3 - k^2/m - (4C2+1) k/m^2 + (4mC1 + 4C2 + 1)/m^3
// under k = 4h + 1/(3m) and divide by 16; the result must be monic-in-4h^3
// with no quadratic term, and reads off (g2, g3) for the h-equation.
struct HCubic {
    double c3, c2, c1, c0;  // coefficients of h^3..h^0
};

HCubic substitute_first_integral(double m, double C1, double C2) {
    const double a3 = 1.0;
    const double a2 = -1.0 / m;
    const double a1 = -(4.0 * C2 + 1.0) / (m * m);
    const double a0 = (4.0 * m * C1 + 4.0 * C2 + 1.0) / (m * m * m);
    const double b = 1.0 / (3.0 * m);  // k = 4h + b
    // expand a3 (4h+b)^3 + a2 (4h+b)^2 + a1 (4h+b) + a0
    HCubic q{};
    q.c3 = a3 * 64.0;
    q.c2 = a3 * 3.0 * 16.0 * b + a2 * 16.0;
    q.c1 = a3 * 3.0 * 4.0 * b * b + a2 * 2.0 * 4.0 * b + a1 * 4.0;
    q.c0 = a3 * b * b * b + a2 * b * b + a1 * b + a0;
    // (dh/dt)^2 = q(h)/16
    q.c3 /= 16.0;
    q.c2 /= 16.0;
    q.c1 /= 16.0;
    q.c0 /= 16.0;
    return q;
}

}  // namespace

TEST_CASE("substitution oracle fixes the invariants, including the g3 sign") {
    test_util::Rng rng(40);
    for (int it = 0; it < 100; ++it) {
        const double m = rng.uniform(0.3, 2.5) * (it % 2 ? 1.0 : -1.0);
        const double C1 = rng.uniform(-3, 3), C2 = rng.uniform(-3, 3);
        HCubic q = substitute_first_integral(m, C1, C2);
        CHECK(q.c3 == Approx(4.0).margin(1e-13));
        CHECK(q.c2 == Approx(0.0).margin(1e-13));

        auto inv = invariants_from_casimirs(m, C1, C2);
        // (dh/dt)^2 = 4h^3 - g2 h - g3
        CHECK(inv.true_time.g2 == Approx(-q.c1).epsilon(1e-12).margin(1e-13));
        CHECK(inv.true_time.g3 == Approx(-q.c0).epsilon(1e-12).margin(1e-13));

        // the opposite-sign convention for g3 fails the oracle whenever g3 != 0
        if (std::abs(q.c0) > 1e-6) CHECK(std::abs(-inv.true_time.g3 - (-q.c0)) > 1e-8);

        // scale relations between the portrait and true-time forms
        const double a = std::cbrt((4.0 / m) * (4.0 / m));
        CHECK(inv.portrait.g2 ==
              Approx(m * m * a * inv.true_time.g2).epsilon(1e-12).margin(1e-14));
        CHECK(inv.portrait.g3 ==
              Approx(4.0 * m * m * inv.true_time.g3).epsilon(1e-12).margin(1e-14));
    }

    auto inv = invariants_from_casimirs(1.0, 1.0, -0.25);
    CHECK(inv.true_time.g2 == Approx(1.0 / 12.0).margin(1e-15));
    CHECK(inv.true_time.g3 == Approx(-53.0 / 216.0).margin(1e-15));

    auto inv2 = invariants_from_casimirs(1.0, 0.0, 0.0);
    CHECK(inv2.portrait.g2 == Approx(std::cbrt(16.0) / 3.0).margin(1e-14));
    CHECK(inv2.portrait.g3 == Approx(-4.0 / 27.0).margin(1e-14));
}

TEST_CASE("cubic analysis: discriminant, roots, half-periods") {
    CHECK_THROWS_AS(cubic_analysis(analyze_invariants(0.0, 0.0)), DegenerateCubic);

    WeierstrassInvariants w = analyze_invariants(4.0, 0.0);
    CHECK(w.D == -64.0);
    CHECK(w.cubic_case == CubicCase::ThreeReal);
    CHECK(w.e1 == Approx(1.0).margin(1e-12));
    CHECK(w.e2 == Approx(0.0).margin(1e-12));
    CHECK(w.e3 == Approx(-1.0).margin(1e-12));
    CHECK(w.omega3.real() == 0.0);
    CHECK(w.omega3.imag() > 0.0);

    test_util::Rng rng(41);
    int three_real = 0;
    for (int it = 0; it < 200; ++it) {
        const double g2 = rng.uniform(-3, 5), g3 = rng.uniform(-2, 2);
        WeierstrassInvariants v = analyze_invariants(g2, g3);
        if (std::abs(v.D) < 1e-6) continue;
        for (const auto& r : v.roots) {
            const cplx res = 4.0 * r * r * r - g2 * r - g3;
            CHECK(std::abs(res) < 1e-10 * std::max(1.0, std::abs(r) * std::abs(r) * std::abs(r)));
        }
        CHECK(v.D == Approx(27.0 * g3 * g3 - g2 * g2 * g2).epsilon(1e-12).margin(1e-12));
        if (v.cubic_case == CubicCase::ThreeReal) {
            ++three_real;
            // P(omega1) lands on the largest root
            CHECK(wp(v.omega1, v).p == Approx(v.e1).epsilon(1e-9).margin(1e-9));
        }
    }
    CHECK(three_real > 20);
}

TEST_CASE("wp: degenerate value, Laurent series, defining ODE, parity") {
    // g2 = g3 = 0: P = 1/t^2
    WeierstrassInvariants flat = analyze_invariants(0.0, 0.0);
    auto v = wp(0.5, flat);
    CHECK(v.p == Approx(4.0).margin(1e-14));
    CHECK(v.pprime == Approx(-16.0).margin(1e-13));

    // Laurent: P = 1/t^2 + g2 t^2/20 + g3 t^4/28 + O(t^6)
    WeierstrassInvariants w = analyze_invariants(1.0 / 12.0, -53.0 / 216.0);
    const double t = 0.1;
    auto lv = wp(t, w);
    const double series = 1.0 / (t * t) + w.g2 * t * t / 20.0 + w.g3 * t * t * t * t / 28.0;
    CHECK(lv.p == Approx(series).margin(5.0 * std::pow(t, 6)));

    // defining identity on a three-real-root instance
    WeierstrassInvariants w2 = analyze_invariants(4.0, 0.5);
    REQUIRE(w2.cubic_case == CubicCase::ThreeReal);
    test_util::Rng rng(42);
    for (int it = 0; it < 1000; ++it) {
        const double tt = rng.uniform(0.05, 2.0 * w2.omega1 - 0.05);
        auto u = wp(tt, w2);
        const double lhs = u.pprime * u.pprime;
        const double rhs = 4.0 * u.p * u.p * u.p - w2.g2 * u.p - w2.g3;
        CHECK(lhs == Approx(rhs).epsilon(1e-10).margin(1e-10));
        auto um = wp(-tt, w2);
        CHECK(um.p == Approx(u.p).epsilon(1e-12).margin(1e-12));
        CHECK(um.pprime == Approx(-u.pprime).epsilon(1e-12).margin(1e-12));
    }
    // one-real-root instance
    WeierstrassInvariants w3 = analyze_invariants(1.0 / 12.0, -53.0 / 216.0);
    REQUIRE(w3.cubic_case == CubicCase::OneReal);
    for (int it = 0; it < 500; ++it) {
        const double tt = rng.uniform(0.05, 2.0 * w3.omega1 - 0.05);
        auto u = wp(tt, w3);
        const double rhs = 4.0 * u.p * u.p * u.p - w3.g2 * u.p - w3.g3;
        CHECK(u.pprime * u.pprime == Approx(rhs).epsilon(1e-10).margin(1e-10));
    }

    CHECK_THROWS_AS(wp(1e-10, w2), NearPole);
}

TEST_CASE("wp_complex agrees with the real path and satisfies the ODE") {
    WeierstrassInvariants w = analyze_invariants(2.5, -0.4);
    test_util::Rng rng(43);
    for (int it = 0; it < 50; ++it) {
        const double t = rng.uniform(0.1, 1.2);
        auto re = wp(t, w);
        auto [p, pp] = wp_complex(cplx(t, 0.0), w);
        CHECK(std::abs(p - re.p) < 1e-9 * std::max(1.0, std::abs(re.p)));
        CHECK(std::abs(pp - re.pprime) < 1e-8 * std::max(1.0, std::abs(re.pprime)));
    }
    for (int it = 0; it < 50; ++it) {
        const cplx z(rng.uniform(-0.8, 0.8), rng.uniform(0.1, 0.8));
        auto [p, pp] = wp_complex(z, w);
        const cplx res = pp * pp - (4.0 * p * p * p - w.g2 * p - w.g3);
        CHECK(std::abs(res) < 1e-8 * std::max(1.0, std::abs(p * p * p)));
    }
}

TEST_CASE("compact branch: band, periodicity, ODE") {
    WeierstrassInvariants w = analyze_invariants(4.0, 0.5);
    REQUIRE(w.cubic_case == CubicCase::ThreeReal);
    test_util::Rng rng(44);
    for (int it = 0; it < 300; ++it) {
        const double t = rng.uniform(-10.0, 10.0);
        auto v = wp_compact(t, w);
        CHECK(v.p >= w.e3 - 1e-12);
        CHECK(v.p <= w.e2 + 1e-12);
        const double rhs = 4.0 * v.p * v.p * v.p - w.g2 * v.p - w.g3;
        CHECK(v.pprime * v.pprime == Approx(rhs).margin(1e-9));
        auto vper = wp_compact(t + 2.0 * w.omega1, w);
        CHECK(vper.p == Approx(v.p).margin(1e-10));
    }
    CHECK(wp_compact(0.0, w).p == Approx(w.e3).margin(1e-12));
    CHECK(wp_compact(w.omega1, w).p == Approx(w.e2).margin(1e-10));

    WeierstrassInvariants one = analyze_invariants(1.0 / 12.0, -53.0 / 216.0);
    CHECK_THROWS_AS(wp_compact(0.3, one), WrongBranch);
}

TEST_CASE("closed-form path reproduces its initial state") {
    test_util::Rng rng(45);
    int tested = 0;
    for (int it = 0; it < 200 && tested < 60; ++it) {
        PhaseState s(it % 2 ? 1.0 : -1.0, rng.uniform(-3, 3), rng.uniform(-2, 2),
                     rng.uniform(-3, 3));
        if (dynamics::is_bifurcation(s, 1e-6)) continue;
        ClosedFormPath path = closed_form_from_state(s);
        if (path.invariants_true_time.cubic_case == CubicCase::Degenerate) continue;
        PhaseState r;
        try {
            r = closed_form_state(path, 0.0);
        } catch (const NearPole&) {
            continue;
        }
        ++tested;
        CHECK(r.k == Approx(s.k).epsilon(1e-9).margin(1e-9));
        CHECK(r.l4 == Approx(s.l4).epsilon(1e-8).margin(1e-8));
        CHECK(r.l5 == Approx(s.l5).epsilon(1e-8).margin(1e-8));
    }
    CHECK(tested >= 60);
}

TEST_CASE("closed form vs direct integration on a compact orbit") {
    PhaseState s0(1.0, -3.0, -3.0, 1.5);
    ClosedFormPath path = closed_form_from_state(s0);
    REQUIRE(path.branch == Branch::CaseII_compact);
    const double period = 2.0 * path.invariants_true_time.omega1;

    auto tr = dynamics::integrate_extremal(s0, e21::GroupElement::identity(), period,
                                           {1e-12, 0.005});
    double sup = 0;
    for (const auto& smp : tr.samples) {
        PhaseState c = closed_form_state(path, smp.t);
        sup = std::max({sup, std::abs(c.k - smp.state.k), std::abs(c.l4 - smp.state.l4),
                        std::abs(c.l5 - smp.state.l5)});
    }
    CHECK(sup < 1e-6);

    // periodicity
    test_util::Rng rng(46);
    for (int it = 0; it < 100; ++it) {
        const double t = rng.uniform(0.0, period);
        PhaseState a = closed_form_state(path, t);
        PhaseState b = closed_form_state(path, t + period);
        CHECK(std::abs(a.k - b.k) < 1e-9);
    }
}

TEST_CASE("closed form recovers the escaping Case I orbit, lambda5 included") {
    // the (m=1, C1=1, C2=-1/4) orbit: compare against direct integration
    // on a window well before the pole at t = 4.3585
    dynamics::PhaseState s0(1.0, 0.0, 1.0, 0.0);
    ClosedFormPath path = closed_form_from_state(s0);
    REQUIRE(path.branch == Branch::CaseI);
    auto tr = dynamics::integrate_extremal(s0, e21::GroupElement::identity(), 2.5,
                                           {1e-12, 0.005});
    double sup = 0;
    for (const auto& smp : tr.samples) {
        PhaseState c = closed_form_state(path, smp.t);
        sup = std::max({sup, std::abs(c.k - smp.state.k), std::abs(c.l4 - smp.state.l4),
                        std::abs(c.l5 - smp.state.l5)});
    }
    CHECK(sup < 1e-6);
}

TEST_CASE("level-set identities along closed-form paths") {
    test_util::Rng rng(47);
    PhaseState seeds[] = {{1.0, -3.0, -3.0, 1.5}, {1.0, 0.0, 1.0, 0.0}, {-1.0, -4.0, -3.0, -4.0}};
    for (const auto& s0 : seeds) {
        const double m = s0.m;
        auto [C1, C2] = dynamics::casimirs(s0);
        ClosedFormPath path = closed_form_from_state(s0);
        const auto& wt = path.invariants_true_time;
        const auto& wp_ = path.invariants_portrait;
        for (int it = 0; it < 100; ++it) {
            const double t = rng.uniform(-1.0, 1.0);
            PhaseState s;
            try {
                s = closed_form_state(path, t);
            } catch (const NearPole&) {
                continue;
            }
            auto [c1, c2] = dynamics::casimirs(s);
            CHECK(c1 == Approx(C1).epsilon(1e-10).margin(1e-10));
            CHECK(c2 == Approx(C2).epsilon(1e-10).margin(1e-10));

            // lambda4^2 = cubic(k) on the J^-1(mu) level set
            const double k = s.k;
            const double lhs = s.l4 * s.l4;
            const double rhs = (m * m / 4.0) * k * k * k - (m / 4.0) * k * k -
                               (0.25 + C2) * k + (C1 + C2 / m + 1.0 / (4.0 * m));
            CHECK(lhs == Approx(rhs).epsilon(1e-10).margin(1e-9));
            // lambda5 as printed
            CHECK(s.l5 == Approx((0.25 * (1.0 - m * m * k * k) + C2) / m)
                              .epsilon(1e-12)
                              .margin(1e-12));

            // portrait level set in chi
            const double chi = portrait_chi(s);
            const double prhs = 4.0 * chi * chi * chi - wp_.g2 * chi - wp_.g3;
            CHECK(lhs == Approx(prhs).epsilon(1e-9).margin(1e-9));

            // h-form level set
            const double h = 0.25 * (k - 1.0 / (3.0 * m));
            const double hrhs = 4.0 * h * h * h - wt.g2 * h - wt.g3;
            const double hp = -s.l4 / (2.0 * m);  // dh/dt
            CHECK(hp * hp == Approx(hrhs).epsilon(1e-9).margin(1e-10));
        }
    }
}

TEST_CASE("closed form satisfies the field equations pointwise") {
    PhaseState s0(1.0, -3.0, -3.0, 1.5);
    ClosedFormPath path = closed_form_from_state(s0);
    const double fd = 1e-4;
    test_util::Rng rng(48);
    for (int it = 0; it < 100; ++it) {
        const double t = rng.uniform(0.0, 3.0);
        PhaseState s = closed_form_state(path, t);
        auto f = dynamics::el_field(s);
        // fourth-order finite differences of the path
        auto at = [&](double u) { return closed_form_state(path, u); };
        auto d = [&](auto proj) {
            return (proj(at(t - 2 * fd)) - 8 * proj(at(t - fd)) + 8 * proj(at(t + fd)) -
                    proj(at(t + 2 * fd))) /
                   (12 * fd);
        };
        CHECK(d([](const PhaseState& x) { return x.k; }) == Approx(f[0]).margin(1e-8));
        CHECK(d([](const PhaseState& x) { return x.l4; }) == Approx(f[1]).margin(1e-8));
        CHECK(d([](const PhaseState& x) { return x.l5; }) == Approx(f[2]).margin(1e-8));
    }
}

TEST_CASE("degenerate discriminant path still satisfies the field equations") {
    // m = 1, C1 = C2 = 0 is the separatrix level: double root at h = 1/6
    PhaseState s0(1.0, 0.0, 0.5, 0.25);
    auto [C1, C2] = dynamics::casimirs(s0);
    REQUIRE(C1 == Approx(0.0).margin(1e-15));
    REQUIRE(C2 == Approx(0.0).margin(1e-15));
    ClosedFormPath path = closed_form_from_state(s0);
    REQUIRE(path.invariants_true_time.cubic_case == CubicCase::Degenerate);

    PhaseState r0 = closed_form_state(path, 0.0);
    CHECK(r0.k == Approx(0.0).margin(1e-9));
    CHECK(r0.l4 == Approx(0.5).margin(1e-8));

    const double fd = 1e-4;
    for (double t : {-0.5, 0.2, 0.8, 2.0}) {
        PhaseState s = closed_form_state(path, t);
        auto f = dynamics::el_field(s);
        auto at = [&](double u) { return closed_form_state(path, u); };
        const double dk = (at(t - 2 * fd).k - 8 * at(t - fd).k + 8 * at(t + fd).k -
                           at(t + 2 * fd).k) /
                          (12 * fd);
        CHECK(dk == Approx(f[0]).margin(1e-8));
    }
}

TEST_CASE("branch coverage over random compact/unbounded instances") {
    test_util::Rng rng(49);
    int compact_seen = 0, unbounded_seen = 0;
    for (int it = 0; it < 2000 && (compact_seen < 20 || unbounded_seen < 20); ++it) {
        PhaseState s(1.0, rng.uniform(-3, 5), rng.uniform(-2, 2), rng.uniform(-2, 2));
        if (dynamics::is_bifurcation(s, 1e-6)) continue;
        ClosedFormPath path = closed_form_from_state(s);
        const auto& w = path.invariants_true_time;
        if (w.cubic_case != CubicCase::ThreeReal) continue;
        if (path.branch == Branch::CaseII_compact) {
            ++compact_seen;
            for (double t : {0.3, 1.7}) {
                const double chi = portrait_chi(closed_form_state(path, t));
                const double lo = w.e3 * std::cbrt(4.0 * 1.0), hi = w.e2 * std::cbrt(4.0);
                // chi and h scale by (4m^2)^{1/3} between the two forms (m = 1)
                CHECK(chi >= lo - 1e-9);
                CHECK(chi <= hi + 1e-9);
            }
        } else {
            ++unbounded_seen;
            double h0 = 0.25 * (s.k - 1.0 / 3.0);
            CHECK(h0 >= w.e1 - 1e-9);
        }
    }
    CHECK(compact_seen >= 20);
    CHECK(unbounded_seen >= 20);
}

TEST_CASE("portrait parametrization is a constant rescaling of flow time") {
    // chi(s) = P(s; portrait invariants) traces the same curve as the
    // true-time path with t = s (4 m^2)^{1/6}
    const double m = 1.0;
    PhaseState s0(m, -3.0, -3.0, 1.5);
    ClosedFormPath path = closed_form_from_state(s0);
    const auto& wp_ = path.invariants_portrait;
    const auto& wt = path.invariants_true_time;
    const double lam = std::pow(4.0 * m * m, 1.0 / 6.0);
    test_util::Rng rng(50);
    for (int it = 0; it < 100; ++it) {
        const double s = rng.uniform(0.1, 2.0 * wp_.omega1 - 0.1);
        auto a = wp_compact(s, wp_);
        auto b = wp_compact(s * lam, wt);
        // chi = (4 m^2)^{1/3} h
        CHECK(a.p == Approx(std::cbrt(4.0 * m * m) * b.p).epsilon(1e-9).margin(1e-9));
    }
    // half-periods scale inversely
    CHECK(wp_.omega1 == Approx(wt.omega1 / lam).epsilon(1e-12));
}
