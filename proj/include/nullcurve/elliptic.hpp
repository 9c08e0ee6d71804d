#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "nullcurve/dynamics.hpp"
#include "nullcurve/errors.hpp"

namespace nullcurve::elliptic {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Elliptic building blocks: AGM, Jacobi functions, Carlson symmetric integral

/// Complete elliptic integral of the first kind, parameter convention
/// (m = modulus squared).
inline double comp_ellint_K(double m) {
    if (m < 0 || m >= 1.0) throw std::domain_error("comp_ellint_K: parameter outside [0,1)");
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

struct JacobiSCD {
    double sn, cn, dn;
};

/// Jacobi elliptic functions on the real line by the AGM descent (A&S 16.4).
inline JacobiSCD sncndn(double u, double m) {
    if (m < 0 || m > 1.0) throw std::domain_error("sncndn: parameter outside [0,1]");
    if (m < 1e-15) return {std::sin(u), std::cos(u), 1.0};
    if (1.0 - m < 1e-15) {
        const double s = std::tanh(u);
        return {s, 1.0 / std::cosh(u), 1.0 / std::cosh(u)};
    }
    std::array<double, 32> a{}, c{};
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int N = 0;
    for (int n = 0; n + 1 < static_cast<int>(a.size()); ++n) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        N = n + 1;
        if (std::abs(c[N]) < 1e-17) break;
    }
    double phi = std::ldexp(a[N] * u, N);
    for (int n = N; n >= 1; --n) {
        const double s = std::clamp(c[n] * std::sin(phi) / a[n], -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    const double sn = std::sin(phi), cn = std::cos(phi);
    return {sn, cn, std::sqrt(std::max(0.0, 1.0 - m * sn * sn))};
}

/// Carlson symmetric integral R_F by the duplication algorithm; accepts
/// complex arguments off the negative real axis (conjugate pairs welcome).
inline cplx carlson_rf(cplx x, cplx y, cplx z) {
    for (int i = 0; i < 200; ++i) {
        const cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const cplx lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        const cplx mu = (x + y + z) / 3.0;
        const double scale = std::abs(mu);
        if (std::abs(x - mu) < 1e-13 * scale && std::abs(y - mu) < 1e-13 * scale &&
            std::abs(z - mu) < 1e-13 * scale)
            break;
    }
    const cplx mu = (x + y + z) / 3.0;
    const cplx X = 1.0 - x / mu, Y = 1.0 - y / mu, Z = 1.0 - z / mu;
    const cplx E2 = X * Y + Y * Z + Z * X;
    const cplx E3 = X * Y * Z;
    return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0) / std::sqrt(mu);
}

// ---------------------------------------------------------------------------
// Weierstrass invariants and the cubic 4z^3 - g2 z - g3

enum class CubicCase { ThreeReal, OneReal, Degenerate };

/// Invariants (g2, g3), discriminant D = 27 g3^2 - g2^3, roots of the cubic,
/// and the half-period data needed for evaluation on the real line.
struct WeierstrassInvariants {
    double g2 = 0.0, g3 = 0.0;
    double D = 0.0;
    CubicCase cubic_case = CubicCase::Degenerate;
    std::array<cplx, 3> roots{};  // ThreeReal: e1 > e2 > e3 real, descending
    double omega1 = std::numeric_limits<double>::infinity();  // real half-period
    cplx omega3{0.0, 0.0};                                    // second lattice datum (ThreeReal)
    // OneReal reduction data
    double e_real = 0.0, H2 = 0.0, jacobi_m = 0.0;
    // ThreeReal reduction data
    double e1 = 0.0, e2 = 0.0, e3 = 0.0, jacobi_m3 = 0.0;
    // Degenerate data: double root s (g2 = 12 s^2, g3 = -8 s^3)
    double dbl_root = 0.0;
};

inline WeierstrassInvariants analyze_invariants(double g2, double g3) {
    WeierstrassInvariants w;
    w.g2 = g2;
    w.g3 = g3;
    w.D = 27.0 * g3 * g3 - g2 * g2 * g2;
    const double scale = std::max({1.0, std::abs(27.0 * g3 * g3), std::abs(g2 * g2 * g2)});

    // roots of 4z^3 - g2 z - g3: depressed cubic z^3 + pz + q, p = -g2/4, q = -g3/4
    const double p = -g2 / 4.0, q = -g3 / 4.0;
    const cplx inner = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0));
    cplx u3 = -q / 2.0 + inner;
    if (std::abs(u3) < std::abs(-q / 2.0 - inner)) u3 = -q / 2.0 - inner;
    cplx u = std::pow(u3, 1.0 / 3.0);
    if (std::abs(u) < 1e-300) {
        w.roots = {cplx(0), cplx(0), cplx(0)};
    } else {
        const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
        for (int j = 0; j < 3; ++j) {
            cplx uj = u * std::pow(omega, j);
            cplx r = uj - p / (3.0 * uj);
            // Newton polish on 4z^3 - g2 z - g3
            for (int it = 0; it < 3; ++it) {
                const cplx f = 4.0 * r * r * r - g2 * r - g3;
                const cplx fp = 12.0 * r * r - g2;
                if (std::abs(fp) > 1e-300) r -= f / fp;
            }
            w.roots[j] = r;
        }
    }

    if (std::abs(w.D) <= 1e-12 * scale) {
        w.cubic_case = CubicCase::Degenerate;
        w.dbl_root = (std::abs(g2) < 1e-300) ? 0.0 : -1.5 * g3 / g2;
        if (w.dbl_root < 0) {
            // e1 = -2s simple, trigonometric; real period pi/sqrt(-3s)
            w.omega1 = M_PI / (2.0 * std::sqrt(-3.0 * w.dbl_root));
        }
        return w;
    }

    if (w.D < 0) {
        w.cubic_case = CubicCase::ThreeReal;
        std::array<double, 3> re = {w.roots[0].real(), w.roots[1].real(), w.roots[2].real()};
        std::sort(re.begin(), re.end());
        w.e3 = re[0];
        w.e2 = re[1];
        w.e1 = re[2];
        w.roots = {cplx(w.e1), cplx(w.e2), cplx(w.e3)};
        w.jacobi_m3 = (w.e2 - w.e3) / (w.e1 - w.e3);
        const double s = std::sqrt(w.e1 - w.e3);
        w.omega1 = comp_ellint_K(w.jacobi_m3) / s;
        w.omega3 = cplx(0.0, comp_ellint_K(1.0 - w.jacobi_m3) / s);
    } else {
        w.cubic_case = CubicCase::OneReal;
        int ir = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(w.roots[j].imag()) < std::abs(w.roots[ir].imag())) ir = j;
        w.e_real = w.roots[ir].real();
        cplx ec = w.roots[(ir + 1) % 3];
        w.roots = {cplx(w.e_real), ec, std::conj(ec)};
        w.H2 = std::abs(ec - w.e_real);
        w.jacobi_m = 0.5 - 3.0 * w.e_real / (4.0 * w.H2);
        w.omega1 = comp_ellint_K(w.jacobi_m) / std::sqrt(w.H2);
    }
    return w;
}

/// Root/period analysis of the invariants; rational (D = 0) cubics are
/// rejected here and served by the elementary evaluation paths instead.
inline WeierstrassInvariants cubic_analysis(const WeierstrassInvariants& inv) {
    WeierstrassInvariants w = analyze_invariants(inv.g2, inv.g3);
    if (w.cubic_case == CubicCase::Degenerate)
        throw DegenerateCubic("cubic_analysis: vanishing discriminant");
    return w;
}

// ---------------------------------------------------------------------------
// Evaluation of P and P' on the real line

struct WpValue {
    double p = 0.0;
    double pprime = 0.0;
};

namespace internal {

/// Reduce to the fundamental real period cell; returns the representative in
/// [0, period) and guards the pole at the lattice points.
inline double reduce_mod(double t, double period) {
    if (!std::isfinite(period)) return t;
    double r = std::fmod(t, period);
    if (r < 0) r += period;
    return r;
}

inline void check_pole(double dist, double scale) {
    if (dist < 1e-8 * std::max(1.0, scale))
        throw NearPole("wp: argument too close to a lattice point");
}

}  // namespace internal

/// Weierstrass P and P' for real argument. Three-real-root invariants are
/// served by the sn reduction, one-real-root by the cn reduction, rational
/// cubics by elementary functions.
inline WpValue wp(double t, const WeierstrassInvariants& w) {
    switch (w.cubic_case) {
        case CubicCase::ThreeReal: {
            const double per = 2.0 * w.omega1;
            double tr = internal::reduce_mod(t, per);
            internal::check_pole(std::min(tr, per - tr), 1.0);
            const double s = std::sqrt(w.e1 - w.e3);
            const JacobiSCD j = sncndn(tr * s, w.jacobi_m3);
            const double sn2 = j.sn * j.sn;
            return {w.e3 + (w.e1 - w.e3) / sn2,
                    -2.0 * s * s * s * j.cn * j.dn / (sn2 * j.sn)};
        }
        case CubicCase::OneReal: {
            const double per = 2.0 * w.omega1;
            double tr = internal::reduce_mod(t, per);
            internal::check_pole(std::min(tr, per - tr), 1.0);
            const double sH = std::sqrt(w.H2);
            const JacobiSCD j = sncndn(2.0 * tr * sH, w.jacobi_m);
            const double den = 1.0 - j.cn;
            return {w.e_real + w.H2 * (1.0 + j.cn) / den,
                    -4.0 * w.H2 * sH * j.sn * j.dn / (den * den)};
        }
        case CubicCase::Degenerate: {
            const double s = w.dbl_root;
            if (std::abs(s) < 1e-300) {
                internal::check_pole(std::abs(t), 1.0);
                return {1.0 / (t * t), -2.0 / (t * t * t)};
            }
            if (s > 0) {
                const double a = std::sqrt(3.0 * s);
                internal::check_pole(std::abs(t), 1.0);
                const double sh = std::sinh(a * t), ch = std::cosh(a * t);
                return {s + 3.0 * s / (sh * sh), -6.0 * s * a * ch / (sh * sh * sh)};
            }
            const double a = std::sqrt(-3.0 * s);
            const double per = M_PI / a;
            double tr = internal::reduce_mod(t, per);
            internal::check_pole(std::min(tr, per - tr), 1.0);
            const double sn = std::sin(a * tr), cs = std::cos(a * tr);
            return {s - 3.0 * s / (sn * sn), 6.0 * s * a * cs / (sn * sn * sn)};
        }
    }
    throw std::logic_error("wp: unreachable");
}

/// Compact-branch evaluation P(t + omega3) through the half-period addition
/// formula; real and bounded in [e3, e2], period 2*omega1. When the upper
/// two roots collide (D = 0, double root s > 0) the branch degenerates to
/// the homoclinic loop -2s + 3s tanh^2(sqrt(3s) t).
inline WpValue wp_compact(double t, const WeierstrassInvariants& w) {
    if (w.cubic_case == CubicCase::Degenerate) {
        const double s = w.dbl_root;
        if (s <= 0) throw WrongBranch("wp_compact: no bounded branch for this rational cubic");
        const double a = std::sqrt(3.0 * s);
        const double th = std::tanh(a * t), sech = 1.0 / std::cosh(a * t);
        return {-2.0 * s + 3.0 * s * th * th, 6.0 * s * a * th * sech * sech};
    }
    if (w.cubic_case != CubicCase::ThreeReal)
        throw WrongBranch("wp_compact: compact branch needs three real roots");
    const double per = 2.0 * w.omega1;
    double tr = internal::reduce_mod(t, per);
    // the shifted function is regular at the lattice points; avoid the
    // unshifted pole by evaluating at the reflected argument instead
    if (std::min(tr, per - tr) < 1e-6) {
        // expansion at the lattice point, where the shifted function is
        // regular: P3 = e3 + c t^2 + O(t^4) with c = (e3-e1)(e3-e2)
        const double c = (w.e3 - w.e1) * (w.e3 - w.e2);
        const double dt = tr < per - tr ? tr : tr - per;
        return {w.e3 + c * dt * dt, 2.0 * c * dt};
    }
    const WpValue u = wp(tr, w);
    const double c = (w.e3 - w.e1) * (w.e3 - w.e2);
    const double den = u.p - w.e3;
    return {w.e3 + c / den, -c * u.pprime / (den * den)};
}

/// P, P' for complex argument: Laurent series after argument halving,
/// then the duplication formula. Generic path, no lattice reduction.
inline std::pair<cplx, cplx> wp_complex(cplx z, const WeierstrassInvariants& w) {
    if (std::abs(z) < 1e-8) throw NearPole("wp_complex: argument too close to origin");
    int halvings = 0;
    cplx zh = z;
    while (std::abs(zh) > 0.3 && halvings < 40) {
        zh *= 0.5;
        ++halvings;
    }
    // Laurent coefficients c_k
    std::array<double, 16> c{};
    c[2] = w.g2 / 20.0;
    c[3] = w.g3 / 28.0;
    for (int k = 4; k < 16; ++k) {
        double s = 0;
        for (int mu = 2; mu <= k - 2; ++mu) s += c[mu] * c[k - mu];
        c[k] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
    }
    const cplx z2 = zh * zh;
    cplx P = 1.0 / z2, Pp = -2.0 / (z2 * zh);
    cplx zpow = z2;
    for (int k = 2; k < 16; ++k) {
        P += c[k] * zpow;
        Pp += (2.0 * k - 2.0) * c[k] * zpow / zh;
        zpow *= z2;
    }
    for (int i = 0; i < halvings; ++i) {
        // duplication: P(2z) = (P''/P')^2/4 - 2P, and its z-derivative halved
        const cplx Ppp = 6.0 * P * P - w.g2 / 2.0;
        const cplx Pppp = 12.0 * P * Pp;
        const cplx ratio = Ppp / Pp;
        const cplx dratio = (Pppp * Pp - Ppp * Ppp) / (Pp * Pp);
        const cplx Pnew = 0.25 * ratio * ratio - 2.0 * P;
        const cplx Ppnew = 0.25 * ratio * dratio - Pp;
        P = Pnew;
        Pp = Ppnew;
    }
    return {P, Pp};
}

// ---------------------------------------------------------------------------
// Invariants from Casimirs, in both parametrizations

/// portrait: level-set cubic in chi after k = (4/m)^{2/3} chi + 1/(3m);
/// true_time: cubic for h = (k - 1/(3m))/4 in flow time.
struct InvariantPair {
    WeierstrassInvariants portrait;
    WeierstrassInvariants true_time;
};

inline InvariantPair invariants_from_casimirs(double m, double C1, double C2) {
    if (m == 0.0) throw std::invalid_argument("invariants_from_casimirs: m must be nonzero");
    const double a = std::cbrt((4.0 / m) * (4.0 / m));  // (4/m)^{2/3}
    const double g2_hat = a * (1.0 / 3.0 + C2);
    const double g3_hat = -(C1 + (2.0 / (3.0 * m)) * C2 + 4.0 / (27.0 * m));
    const double g2_h = (C2 + 1.0 / 3.0) / (m * m);
    const double g3_h = -(m * C1 / 4.0 + C2 / 6.0 + 1.0 / 27.0) / (m * m * m);
    return {analyze_invariants(g2_hat, g3_hat), analyze_invariants(g2_h, g3_h)};
}

// ---------------------------------------------------------------------------
// Closed-form phase trajectory in true flow time

enum class Branch { CaseI, CaseII_compact, CaseII_unbounded };

struct ClosedFormPath {
    double m = 1.0;
    double C1 = 0.0, C2 = 0.0;
    double t0 = 0.0;
    Branch branch = Branch::CaseI;
    WeierstrassInvariants invariants_true_time;
    WeierstrassInvariants invariants_portrait;
};

namespace internal {

/// Smallest s >= 0 with P_branch(s) = h; flips to 2*omega1 - s to match the
/// requested sign of P'.
inline double invert_wp(const WeierstrassInvariants& w, bool compact, double h, double want_pprime) {
    cplx y;
    if (compact) {
        if (h - w.e3 < 1e-14 * std::max(1.0, std::abs(w.e3))) return 0.0;  // P3(0) = e3
        y = w.e3 + (w.e1 - w.e3) * (w.e2 - w.e3) / (h - w.e3);
    } else {
        y = h;
    }
    const double s =
        std::real(carlson_rf(y - w.roots[0], y - w.roots[1], y - w.roots[2]));
    // on (0, omega1): P' < 0, hence P3' > 0 there
    const bool increasing_here = compact;
    double out = s;
    if (want_pprime != 0.0) {
        const bool want_pos = want_pprime > 0;
        if (want_pos != increasing_here) out = 2.0 * w.omega1 - s;
    }
    return out;
}

}  // namespace internal

/// Build the closed-form path through a given initial state (t = 0 there).
inline ClosedFormPath closed_form_from_state(const dynamics::PhaseState& s) {
    ClosedFormPath path;
    path.m = s.m;
    auto [c1, c2] = dynamics::casimirs(s);
    path.C1 = c1;
    path.C2 = c2;
    auto inv = invariants_from_casimirs(s.m, c1, c2);
    path.invariants_true_time = inv.true_time;
    path.invariants_portrait = inv.portrait;

    const WeierstrassInvariants& w = path.invariants_true_time;
    const double h0 = 0.25 * (s.k - 1.0 / (3.0 * s.m));
    if (w.cubic_case == CubicCase::ThreeReal && h0 <= w.e2 + 1e-12) {
        path.branch = Branch::CaseII_compact;
    } else if (w.cubic_case == CubicCase::ThreeReal) {
        path.branch = Branch::CaseII_unbounded;
    } else {
        path.branch = Branch::CaseI;
    }

    // P'(s0) must reproduce l4 = -2m P'
    const double pprime0 = -s.l4 / (2.0 * s.m);
    if (w.cubic_case == CubicCase::Degenerate) {
        const double s = w.dbl_root;
        if (s > 0 && h0 < s - 1e-12 * std::max(1.0, std::abs(s))) {
            // homoclinic loop below the double root
            path.branch = Branch::CaseII_compact;
            const double a = std::sqrt(3.0 * s);
            const double arg = std::clamp((h0 + 2.0 * s) / (3.0 * s), 0.0, 1.0);
            double s0 = std::atanh(std::sqrt(arg)) / a;
            if (pprime0 < 0) s0 = -s0;
            path.t0 = -s0;
            return path;
        }
        // elementary inversion by bisection between the pole and the minimum
        auto val = [&](double t) { return wp(t, w).p; };
        double hi = std::isfinite(w.omega1) ? w.omega1 : 1.0;
        if (!std::isfinite(w.omega1))
            while (val(hi) > h0 && hi < 1e8) hi *= 2.0;
        double lo = 1e-9;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (val(mid) > h0 ? lo : hi) = mid;
        }
        double s0 = 0.5 * (lo + hi);
        if (pprime0 > 0) s0 = -s0;
        path.t0 = -s0;
        return path;
    }
    double s0 = internal::invert_wp(w, path.branch == Branch::CaseII_compact, h0, pprime0);
    path.t0 = -s0;
    return path;
}

inline dynamics::PhaseState closed_form_state(const ClosedFormPath& path, double t) {
    const WeierstrassInvariants& w = path.invariants_true_time;
    if (path.branch == Branch::CaseII_compact && w.cubic_case == CubicCase::OneReal)
        throw WrongBranch("closed_form_state: compact branch requested with D > 0");
    const double arg = t - path.t0;
    const WpValue v = (path.branch == Branch::CaseII_compact) ? wp_compact(arg, w) : wp(arg, w);
    const double m = path.m;
    const double k = 4.0 * v.p + 1.0 / (3.0 * m);
    const double l4 = -2.0 * m * v.pprime;
    const double l5 = (path.C2 + 0.25 * (1.0 - m * m * k * k)) / m;
    return dynamics::PhaseState(m, k, l4, l5);
}

/// Portrait coordinate chi = (k - 1/(3m)) (m/4)^{2/3} of a phase state.
inline double portrait_chi(const dynamics::PhaseState& s) {
    return (s.k - 1.0 / (3.0 * s.m)) * std::cbrt((s.m / 4.0) * (s.m / 4.0));
}

}  // namespace nullcurve::elliptic
