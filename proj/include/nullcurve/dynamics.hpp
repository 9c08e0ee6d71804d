#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "nullcurve/e21.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/mink3.hpp"

namespace nullcurve::dynamics {

using e21::AlgebraElement;
using e21::CoalgebraElement;
using e21::GroupElement;

/// Fiber coordinates (k, l4, l5) of the momentum space, with the coupling
/// constant m carried along. The eliminated multipliers are derived values:
/// l1 = m, l2 = 0, l3 = (1 + m k)/2.
struct PhaseState {
    double m = 1.0;
    double k = 0.0;
    double l4 = 0.0;
    double l5 = 0.0;

    PhaseState() = default;
    PhaseState(double m_, double k_, double l4_, double l5_) : m(m_), k(k_), l4(l4_), l5(l5_) {
        if (m == 0.0) throw std::invalid_argument("PhaseState: m must be nonzero");
    }

    double l3() const { return 0.5 * (1.0 + m * k); }
};

inline CoalgebraElement phase_embed(const PhaseState& s) {
    return {{-s.l5, s.l4, -0.5 * (1.0 - s.m * s.k)},
            {-0.5 * (1.0 + s.m * s.k), 0.0, s.m}};
}

/// Inverse of phase_embed on its image; residual against the image
/// constraints must stay below tol.
inline PhaseState phase_from_coalgebra(const CoalgebraElement& eta, double m, double tol = 1e-8) {
    PhaseState s(m, (-2.0 * eta.v.x1 - 1.0) / m, eta.p.x2, -eta.p.x1);
    const double r = std::max({std::abs(eta.v.x2), std::abs(eta.v.x3 - m),
                               std::abs(eta.p.x3 + 0.5 * (1.0 - m * s.k))});
    if (r > tol) throw std::invalid_argument("phase_from_coalgebra: element is not a phase point");
    return s;
}

/// H(k) = e0 + k e1: unit sub-diagonal plus k in the two upper slots.
inline AlgebraElement hamiltonian(const PhaseState& s) {
    return {e1, 0.0, 1.0, s.k};
}

inline std::array<double, 3> el_field(const PhaseState& s) {
    return {-2.0 * s.l4 / s.m,
            s.l5 + 0.5 * s.k * (1.0 - s.m * s.k),
            s.k * s.l4};
}

inline bool is_bifurcation(const PhaseState& s, double tol = 1e-10) {
    return std::abs(s.l4) <= tol && std::abs(s.l5 + 0.5 * s.k * (1.0 - s.m * s.k)) <= tol;
}

inline std::pair<double, double> casimirs(const PhaseState& s) {
    return {s.l4 * s.l4 - s.l5 * (1.0 - s.m * s.k),
            s.m * s.l5 - 0.25 * (1.0 - s.m * s.m * s.k * s.k)};
}

// ---------------------------------------------------------------------------
// Lax pair

/// L as a 4x4 matrix together with the characteristic polynomial
/// det(L - zI) = z^4 + c[3] z^3 + c[2] z^2 + c[1] z + c[0].
struct LaxData {
    detail::Mat4 L;
    std::array<double, 4> charpoly;
};

inline LaxData lax_data(const PhaseState& s) {
    const double m = s.m, k = s.k, l4 = s.l4, l5 = s.l5;
    detail::Mat4 L;
    L(1, 0) = 0.5 * (1.0 + m * k);
    L(1, 1) = -l4;
    L(1, 2) = -l5;
    L(2, 1) = 0.5 * (1.0 - m * k);
    L(2, 3) = -l5;
    L(3, 0) = -m;
    L(3, 2) = 0.5 * (1.0 - m * k);
    L(3, 3) = l4;

    // Faddeev-LeVerrier
    const detail::Mat4 I = detail::Mat4::identity();
    auto tr = [](const detail::Mat4& x) { return x(0, 0) + x(1, 1) + x(2, 2) + x(3, 3); };
    detail::Mat4 M = L;
    double c3 = -tr(M);
    M = L * (M + I * c3);
    double c2 = -tr(M) / 2.0;
    M = L * (M + I * c2);
    double c1 = -tr(M) / 3.0;
    M = L * (M + I * c1);
    double c0 = -tr(M) / 4.0;
    return {L, {c0, c1, c2, c3}};
}

// ---------------------------------------------------------------------------
// Canonical 2-form on the 9-dimensional momentum space

/// Antisymmetric matrix of Psi_Y in the fixed coframe order
/// (omega, eta1..eta5, dk, dl4, dl5). Wedge convention carries no 1/2.
struct CoframeTwoForm {
    static constexpr int dim = 9;
    Eigen::Matrix<double, 9, 9> M;

    /// Pfaffian of the 8x8 minor skipping the omega slot, recursive expansion.
    static double pfaffian(const Eigen::MatrixXd& a) {
        const int n = static_cast<int>(a.rows());
        if (n == 0) return 1.0;
        if (n % 2 == 1) return 0.0;
        double acc = 0.0;
        double sign = 1.0;
        for (int j = 1; j < n; ++j) {
            if (a(0, j) != 0.0) {
                Eigen::MatrixXd sub(n - 2, n - 2);
                int ri = 0;
                for (int r = 1; r < n; ++r) {
                    if (r == j) continue;
                    int ci = 0;
                    for (int c = 1; c < n; ++c) {
                        if (c == j) continue;
                        sub(ri, ci++) = a(r, c);
                    }
                    ++ri;
                }
                acc += sign * a(0, j) * pfaffian(sub);
            }
            sign = -sign;
        }
        return acc;
    }

    /// Coefficient of omega ^ dk ^ dl4 ^ dl5 ^ eta1 ^ ... ^ eta5 in
    /// omega ^ Psi^4 (nine-form ordering as in the non-degeneracy statement).
    double top_coefficient() const {
        Eigen::MatrixXd sub = M.block(1, 1, 8, 8);
        return -24.0 * pfaffian(sub);
    }

    int rank(double threshold = 1e-9) const {
        Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(M);
        int r = 0;
        for (int i = 0; i < 9; ++i)
            if (svd.singularValues()(i) > threshold) ++r;
        return r;
    }

    /// One-dimensional kernel, normalized so the omega component is 1.
    Eigen::Matrix<double, 9, 1> kernel() const {
        Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(M, Eigen::ComputeFullV);
        Eigen::Matrix<double, 9, 1> v = svd.matrixV().col(8);
        if (v(0) != 0.0) v /= v(0);
        return v;
    }
};

inline CoframeTwoForm canonical_two_form(const PhaseState& s) {
    const double m = s.m, k = s.k, l4 = s.l4, l5 = s.l5;
    CoframeTwoForm f;
    f.M.setZero();
    auto set = [&f](int a, int b, double c) {
        f.M(a, b) += c;
        f.M(b, a) -= c;
    };
    // d psi_Y expanded through the structure equations, collected on
    // theta^a ^ theta^b with a < b.
    set(0, 3, l4);
    set(0, 4, -0.5 * k * (1.0 - m * k) - l5);
    set(0, 5, -k * l4);
    set(1, 2, m);
    set(1, 4, -0.5 * (1.0 - m * k));
    set(1, 5, -l4);
    set(2, 3, 0.5 * (1.0 + m * k));
    set(2, 5, l5);
    set(3, 4, -l5);
    set(3, 6, -0.5 * m);
    set(4, 7, -1.0);
    set(5, 8, -1.0);
    return f;
}

/// Coefficients of the characteristic vector field in the coframe basis.
inline Eigen::Matrix<double, 9, 1> xi_coefficients(const PhaseState& s) {
    Eigen::Matrix<double, 9, 1> v;
    v.setZero();
    v(0) = 1.0;
    auto f = el_field(s);
    v(6) = f[0];
    v(7) = f[1];
    v(8) = f[2];
    return v;
}

/// Group-direction coordinates of an algebra element in the coframe basis
/// (omega, eta1..eta5 slots; fiber slots vanish).
inline Eigen::Matrix<double, 9, 1> algebra_to_coframe(const AlgebraElement& x, double k) {
    Eigen::Matrix<double, 9, 1> v;
    v.setZero();
    v(0) = x.qdot.x1;
    v(1) = x.w12 - k * x.qdot.x1;
    v(2) = x.w11;
    v(3) = x.w21 - x.qdot.x1;
    v(4) = x.qdot.x2;
    v(5) = x.qdot.x3;
    return v;
}

/// Pure group directions of the polar space; both are isotropy generators
/// of the embedded state (ad* annihilates phase_embed(s)). S1 couples the
/// rotational block of the Lax matrix with translation along -v; S2 is the
/// translation along -p.
inline AlgebraElement polar_s1(const PhaseState& s) {
    return {{0.5 * (1.0 + s.m * s.k), 0.0, -s.m}, -s.l4, 0.5 * (1.0 - s.m * s.k), -s.l5};
}
inline AlgebraElement polar_s2(const PhaseState& s) {
    return {{s.l5, -s.l4, 0.5 * (1.0 - s.m * s.k)}, 0.0, 0.0, 0.0};
}

struct CoisotropyReport {
    int polar_dim = 0;
    bool polar_matches_span = false;
    int linearized_portrait_dim = 0;
    bool is_bifurcation = false;
    bool dim_identity = false;
    double span_angle = 0.0;      // largest principal angle polar vs span(xi,S1,S2)
    double portrait_angle = 0.0;  // angle between portrait line and ad*(H)eta
};

namespace internal {

inline Eigen::MatrixXd orthonormal_cols(const Eigen::MatrixXd& a, double tol = 1e-12) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * svd.singularValues()(0)) ++r;
    return svd.matrixU().leftCols(r);
}

/// Largest principal angle between equal-dimensional column spans, via the
/// projection residual (sin of the angle resolves tiny angles).
inline double subspace_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd qa = orthonormal_cols(a), qb = orthonormal_cols(b);
    if (qa.cols() != qb.cols()) return M_PI / 2.0;
    Eigen::MatrixXd resid = qb - qa * (qa.transpose() * qb);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
    const double s = std::min(1.0, svd.singularValues().maxCoeff());
    return std::asin(s);
}

}  // namespace internal

inline CoisotropyReport coisotropy_report(const PhaseState& s, double tol = 1e-8) {
    CoisotropyReport rep;
    rep.is_bifurcation = is_bifurcation(s, 1e-10);

    const CoframeTwoForm form = canonical_two_form(s);

    // polar space of the group directions: rows 0..5 of M annihilate it
    Eigen::Matrix<double, 6, 9> rows = form.M.topRows(6);
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 9>> svd(rows, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < 6; ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    rep.polar_dim = 9 - rank;

    Eigen::MatrixXd polar = svd.matrixV().rightCols(9 - rank);
    Eigen::MatrixXd span(9, 3);
    span.col(0) = xi_coefficients(s);
    span.col(1) = algebra_to_coframe(polar_s1(s), s.k);
    span.col(2) = algebra_to_coframe(polar_s2(s), s.k);
    if (rep.polar_dim == 3) {
        rep.span_angle = internal::subspace_angle(polar, span);
        rep.polar_matches_span = rep.span_angle <= 1e-7;
    }

    // linearized phase portrait F(eta) ^ O(eta) inside the dual space
    const CoalgebraElement eta = phase_embed(s);
    Eigen::Matrix<double, 6, 3> F;
    {
        // d(phase_embed)/dk, /dl4, /dl5
        const double m = s.m;
        std::array<CoalgebraElement, 3> cols = {
            CoalgebraElement{{0.0, 0.0, 0.5 * m}, {-0.5 * m, 0.0, 0.0}},
            CoalgebraElement{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}},
            CoalgebraElement{{-1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
        for (int j = 0; j < 3; ++j) {
            auto c = cols[j].coords();
            for (int i = 0; i < 6; ++i) F(i, j) = c[i];
        }
    }
    Eigen::Matrix<double, 6, 6> O;
    for (int j = 0; j < 6; ++j) {
        std::array<double, 6> c{};
        c[j] = 1.0;
        auto ic = e21::ad_star(AlgebraElement::from_coords(c), eta).coords();
        for (int i = 0; i < 6; ++i) O(i, j) = ic[i];
    }
    Eigen::MatrixXd Oq = internal::orthonormal_cols(O);
    Eigen::MatrixXd joint(6, 3 + Oq.cols());
    joint.leftCols(3) = F;
    joint.rightCols(Oq.cols()) = Oq;
    Eigen::JacobiSVD<Eigen::MatrixXd> jsvd(joint, Eigen::ComputeFullV);
    int jrank = 0;
    for (int i = 0; i < jsvd.singularValues().size(); ++i)
        if (jsvd.singularValues()(i) > tol) ++jrank;
    rep.linearized_portrait_dim = 3 + static_cast<int>(Oq.cols()) - jrank;

    if (rep.linearized_portrait_dim == 1) {
        // intersection direction via the nullspace of [F, -O]
        Eigen::VectorXd nv = jsvd.matrixV().col(jsvd.matrixV().cols() - 1);
        Eigen::VectorXd dir = F * nv.head(3);
        auto adh = e21::ad_star(hamiltonian(s), eta).coords();
        Eigen::VectorXd ref(6);
        for (int i = 0; i < 6; ++i) ref(i) = adh[i];
        ref.normalize();
        Eigen::VectorXd d = dir.normalized();
        const double s2 = std::min(1.0, (d - ref * ref.dot(d)).norm());
        rep.portrait_angle = std::asin(s2);
    }

    // dim Y = dim G + rank G + 1, with rank G measured at a regular element
    const int rank_g = static_cast<int>(e21::isotropy_basis({e2, {0, 0, 0}}).size());
    rep.dim_identity = (9 == 6 + rank_g + 1);
    return rep;
}

inline CoalgebraElement moment_map(const GroupElement& g, const PhaseState& s) {
    return e21::coadjoint(g, phase_embed(s));
}

// ---------------------------------------------------------------------------
// Extremal flow: adaptive Dormand-Prince 5(4) on (k, l4, l5) with the frame
// transported by a commutator-free fourth-order Lie-group step.

struct TrajectorySample {
    double t = 0.0;
    GroupElement g;
    PhaseState state;
    CoalgebraElement J;
    double C1 = 0.0, C2 = 0.0;
    std::array<double, 4> lax_charpoly{};
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }

    double max_casimir_drift() const {
        double d = 0;
        for (const auto& s : samples)
            d = std::max({d, std::abs(s.C1 - samples.front().C1), std::abs(s.C2 - samples.front().C2)});
        return d;
    }
    double max_moment_drift() const {
        double d = 0;
        for (const auto& s : samples) d = std::max(d, (s.J - samples.front().J).coord_norm());
        return d;
    }
    double max_charpoly_drift() const {
        double d = 0;
        for (const auto& s : samples)
            for (int i = 0; i < 4; ++i)
                d = std::max(d, std::abs(s.lax_charpoly[i] - samples.front().lax_charpoly[i]));
        return d;
    }
};

struct IntegrateOptions {
    double tol = 1e-10;
    double dt_max = 0.01;
    int n_samples = 0;  // 0: choose from T and dt_max
    double blowup_threshold = 1e8;
};

namespace internal {

using Vec3 = std::array<double, 3>;

inline Vec3 axpy(const Vec3& y, double a, const Vec3& x) {
    return {y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]};
}

struct Dopri5Result {
    Vec3 y1;
    double err = 0.0;
    std::array<Vec3, 5> rcont;  // dense output coefficients
    Vec3 k_last;                // FSAL stage
};

template <typename F>
Dopri5Result dopri5_step(const F& f, const Vec3& y0, const Vec3& k1, double h, double atol, double rtol) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1c = 71.0 / 57600, e3c = -71.0 / 16695, e4c = 71.0 / 1920, e5c = -17253.0 / 339200,
                        e6c = 22.0 / 525, e7c = -1.0 / 40;
    static const double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Vec3 y;
    y = axpy(y0, h * a21, k1);
    Vec3 k2 = f(y);
    y = axpy(axpy(y0, h * a31, k1), h * a32, k2);
    Vec3 k3 = f(y);
    y = axpy(axpy(axpy(y0, h * a41, k1), h * a42, k2), h * a43, k3);
    Vec3 k4 = f(y);
    y = axpy(axpy(axpy(axpy(y0, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
    Vec3 k5 = f(y);
    y = axpy(axpy(axpy(axpy(axpy(y0, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4), h * a65, k5);
    Vec3 k6 = f(y);
    Vec3 y1 = axpy(axpy(axpy(axpy(axpy(y0, h * b1, k1), h * b3, k3), h * b4, k4), h * b5, k5), h * b6, k6);
    Vec3 k7 = f(y1);

    Dopri5Result r;
    r.y1 = y1;
    r.k_last = k7;
    double err = 0;
    for (int i = 0; i < 3; ++i) {
        const double e = h * (e1c * k1[i] + e3c * k3[i] + e4c * k4[i] + e5c * k5[i] + e6c * k6[i] + e7c * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        err += (e / sc) * (e / sc);
    }
    r.err = std::sqrt(err / 3.0);

    for (int i = 0; i < 3; ++i) {
        const double dy = y1[i] - y0[i];
        const double bspl = h * k1[i] - dy;
        r.rcont[0][i] = y0[i];
        r.rcont[1][i] = dy;
        r.rcont[2][i] = bspl;
        r.rcont[3][i] = dy - h * k7[i] - bspl;
        r.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return r;
}

inline Vec3 dense_eval(const std::array<Vec3, 5>& rc, double theta) {
    const double th1 = 1.0 - theta;
    Vec3 y;
    for (int i = 0; i < 3; ++i)
        y[i] = rc[0][i] + theta * (rc[1][i] + th1 * (rc[2][i] + theta * (rc[3][i] + th1 * rc[4][i])));
    return y;
}

/// One CF4 step of g' = g H(k(t)) over [t, t+h]; k supplied at the two
/// Gauss nodes. Exponentials act by right multiplication.
inline void cf4_frame_step(GroupElement& g, double k_gauss1, double k_gauss2, double h) {
    static const double a1 = 0.25 + std::sqrt(3.0) / 6.0;
    static const double a2 = 0.25 - std::sqrt(3.0) / 6.0;
    auto H = [](double k) { return AlgebraElement{e1, 0.0, 1.0, k}; };
    AlgebraElement b1 = H(k_gauss1) * a1 + H(k_gauss2) * a2;
    AlgebraElement b2 = H(k_gauss1) * a2 + H(k_gauss2) * a1;
    g = e21::group_compose(g, e21::exp_algebra(b1, h));
    g = e21::group_compose(g, e21::exp_algebra(b2, h));
}

}  // namespace internal

inline TrajectorySample make_sample(double t, const GroupElement& g, const PhaseState& s) {
    TrajectorySample out;
    out.t = t;
    out.g = g;
    out.state = s;
    out.J = moment_map(g, s);
    auto [c1, c2] = casimirs(s);
    out.C1 = c1;
    out.C2 = c2;
    out.lax_charpoly = lax_data(s).charpoly;
    return out;
}

inline Trajectory integrate_extremal(const PhaseState& s0, const GroupElement& g0, double T,
                                     const IntegrateOptions& opt = {}) {
    if (opt.tol <= 0) throw std::invalid_argument("integrate_extremal: tol must be positive");
    if (T <= 0) throw std::invalid_argument("integrate_extremal: T must be positive");
    const double m = s0.m;
    auto rhs = [m](const internal::Vec3& y) -> internal::Vec3 {
        return {-2.0 * y[1] / m, y[2] + 0.5 * y[0] * (1.0 - m * y[0]), y[0] * y[1]};
    };

    int n = opt.n_samples;
    if (n <= 1) n = std::max(101, static_cast<int>(std::ceil(T / opt.dt_max)) + 1);
    const double dt_out = T / (n - 1);

    Trajectory traj;
    traj.samples.reserve(n);
    GroupElement g = g0;
    internal::Vec3 y = {s0.k, s0.l4, s0.l5};
    double t = 0.0;
    traj.samples.push_back(make_sample(0.0, g, s0));

    internal::Vec3 k1 = rhs(y);
    double h = std::min(opt.dt_max, dt_out);
    const double gauss1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double gauss2 = 0.5 + std::sqrt(3.0) / 6.0;

    for (int is = 1; is < n; ++is) {
        const double t_target = is * dt_out;
        while (t < t_target - 1e-13 * T) {
            double hs = std::min({h, opt.dt_max, t_target - t});
            internal::Dopri5Result r = internal::dopri5_step(rhs, y, k1, hs, opt.tol, opt.tol);
            if (!std::isfinite(r.err)) {
                throw NonFiniteState("integrate_extremal: non-finite state", t);
            }
            if (r.err > 1.0) {
                h = hs * std::max(0.2, 0.9 * std::pow(r.err, -0.2));
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    throw IntegrationFailure("integrate_extremal: step size underflow");
                continue;
            }
            // frame transport in two half-steps off the dense output
            for (int half = 0; half < 2; ++half) {
                const double u0 = 0.5 * half;
                const double kg1 = internal::dense_eval(r.rcont, u0 + 0.5 * gauss1)[0];
                const double kg2 = internal::dense_eval(r.rcont, u0 + 0.5 * gauss2)[0];
                internal::cf4_frame_step(g, kg1, kg2, 0.5 * hs);
            }
            e21::reorthonormalize(g);
            y = r.y1;
            k1 = r.k_last;
            t += hs;
            if (std::abs(y[0]) + std::abs(y[1]) + std::abs(y[2]) > opt.blowup_threshold)
                throw NonFiniteState("integrate_extremal: blow-up detected", t);
            if (r.err > 0) h = hs * std::min(5.0, 0.9 * std::pow(r.err, -0.2));
        }
        traj.samples.push_back(make_sample(t_target, g, PhaseState(m, y[0], y[1], y[2])));
    }
    return traj;
}

}  // namespace nullcurve::dynamics
