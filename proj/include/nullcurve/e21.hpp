#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "nullcurve/detail/mat.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/mink3.hpp"

namespace nullcurve::e21 {

using detail::Mat3;
using detail::Mat4;

/// Element (q, A) of the restricted Poincare group of Minkowski 3-space.
/// Invariants: det A = 1, <A_i, A_j> = g_ij, columns A1 and A3 future null.
struct GroupElement {
    MinkVector q;
    Mat3 A = Mat3::identity();

    static GroupElement identity() { return {}; }
    static GroupElement translation(const MinkVector& t) {
        GroupElement g;
        g.q = t;
        return g;
    }

    MinkVector col(int j) const { return A.col(j); }

    /// Max violation of the group-membership conditions.
    double invariant_residual() const {
        double worst = std::abs(det3(A.col(0), A.col(1), A.col(2)) - 1.0);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                worst = std::max(worst, std::abs(mink_inner(A.col(i), A.col(j)) - mink_metric[i][j]));
        worst = std::max(worst, std::max(cone_pairing(A.col(0)), cone_pairing(A.col(2))));
        return worst;
    }
};

/// Lie algebra element: translation part qdot plus the three rotational
/// parameters of the 3x3 block [[w11, w12, 0], [w21, 0, w12], [0, w21, -w11]].
struct AlgebraElement {
    MinkVector qdot;
    double w11 = 0.0, w21 = 0.0, w12 = 0.0;

    AlgebraElement operator+(const AlgebraElement& o) const {
        return {qdot + o.qdot, w11 + o.w11, w21 + o.w21, w12 + o.w12};
    }
    AlgebraElement operator-(const AlgebraElement& o) const {
        return {qdot - o.qdot, w11 - o.w11, w21 - o.w21, w12 - o.w12};
    }
    AlgebraElement operator*(double s) const { return {qdot * s, w11 * s, w21 * s, w12 * s}; }

    std::array<double, 6> coords() const { return {qdot.x1, qdot.x2, qdot.x3, w11, w21, w12}; }
    static AlgebraElement from_coords(const std::array<double, 6>& c) {
        return {{c[0], c[1], c[2]}, c[3], c[4], c[5]};
    }

    double coord_norm() const {
        double s = 0;
        for (double x : coords()) s += x * x;
        return std::sqrt(s);
    }

    Mat3 rot() const {
        Mat3 r;
        r(0, 0) = w11; r(0, 1) = w12; r(0, 2) = 0;
        r(1, 0) = w21; r(1, 1) = 0;   r(1, 2) = w12;
        r(2, 0) = 0;   r(2, 1) = w21; r(2, 2) = -w11;
        return r;
    }
};

/// Dual element (p, v) under the Maurer-Cartan identification.
struct CoalgebraElement {
    MinkVector p;
    MinkVector v;

    CoalgebraElement operator+(const CoalgebraElement& o) const { return {p + o.p, v + o.v}; }
    CoalgebraElement operator-(const CoalgebraElement& o) const { return {p - o.p, v - o.v}; }
    CoalgebraElement operator*(double s) const { return {p * s, v * s}; }

    std::array<double, 6> coords() const { return {p.x1, p.x2, p.x3, v.x1, v.x2, v.x3}; }
    static CoalgebraElement from_coords(const std::array<double, 6>& c) {
        return {{c[0], c[1], c[2]}, {c[3], c[4], c[5]}};
    }

    double coord_norm() const {
        double s = 0;
        for (double x : coords()) s += x * x;
        return std::sqrt(s);
    }
};

inline Mat4 embed(const GroupElement& g) {
    Mat4 m = Mat4::identity();
    for (int i = 0; i < 3; ++i) {
        m(i + 1, 0) = g.q[i];
        for (int j = 0; j < 3; ++j) m(i + 1, j + 1) = g.A(i, j);
    }
    return m;
}

inline GroupElement group_from_mat4(const Mat4& m) {
    GroupElement g;
    for (int i = 0; i < 3; ++i) {
        g.q[i] = m(i + 1, 0);
        for (int j = 0; j < 3; ++j) g.A(i, j) = m(i + 1, j + 1);
    }
    return g;
}

inline Mat4 embed(const AlgebraElement& x) {
    Mat4 m;
    Mat3 r = x.rot();
    for (int i = 0; i < 3; ++i) {
        m(i + 1, 0) = x.qdot[i];
        for (int j = 0; j < 3; ++j) m(i + 1, j + 1) = r(i, j);
    }
    return m;
}

inline AlgebraElement algebra_from_mat4(const Mat4& m) {
    AlgebraElement x;
    x.qdot = {m(1, 0), m(2, 0), m(3, 0)};
    x.w11 = m(1, 1);
    x.w21 = m(2, 1);
    x.w12 = m(1, 2);
    return x;
}

// Composition goes through the 4x4 representation so it is bitwise the
// same arithmetic as the matrix product.
inline GroupElement group_compose(const GroupElement& a, const GroupElement& b) {
    return group_from_mat4(embed(a) * embed(b));
}

inline GroupElement group_inverse(const GroupElement& a) {
    Mat3 ai = a.A.inverse();
    GroupElement r;
    r.A = ai;
    r.q = -(ai * a.q);
    return r;
}

inline GroupElement exp_algebra(const AlgebraElement& x, double t = 1.0) {
    return group_from_mat4(detail::expm(embed(x) * t));
}

inline AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
    return algebra_from_mat4(detail::commutator(embed(x), embed(y)));
}

inline AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
    return algebra_from_mat4(embed(g) * embed(x) * embed(group_inverse(g)));
}

/// The pairing <(p,v); X(q,w)> = <p,q> - v1*w21 + v2*w11 + v3*w12, the
/// coefficient table fixed by the Ad* consistency identity.
inline double pairing(const CoalgebraElement& eta, const AlgebraElement& x) {
    return mink_inner(eta.p, x.qdot) - eta.v.x1 * x.w21 + eta.v.x2 * x.w11 + eta.v.x3 * x.w12;
}

/// Left coadjoint action: g.(p,v) = (A p, A v - (A p) x q).
inline CoalgebraElement coadjoint(const GroupElement& g, const CoalgebraElement& eta) {
    MinkVector ap = g.A * eta.p;
    MinkVector av = g.A * eta.v;
    return {ap, av - mink_cross(ap, g.q)};
}

/// d/dt coadjoint(exp(tX), eta) at t = 0.
inline CoalgebraElement ad_star(const AlgebraElement& x, const CoalgebraElement& eta) {
    Mat3 r = x.rot();
    return {r * eta.p, r * eta.v - mink_cross(eta.p, x.qdot)};
}

inline std::pair<double, double> casimirs(const CoalgebraElement& eta) {
    return {mink_inner(eta.p, eta.p), mink_inner(eta.p, eta.v)};
}

/// Orthonormal (in coefficient space) basis of {X : ad*(X, mu) = 0}.
/// Two-dimensional and Abelian for regular mu.
inline std::vector<AlgebraElement> isotropy_basis(const CoalgebraElement& mu, double tol = 1e-10) {
    if (coord_norm(mu.p) <= tol)
        throw SingularElement("isotropy_basis: p = 0 is a singular element");
    Eigen::Matrix<double, 6, 6> n;
    for (int j = 0; j < 6; ++j) {
        std::array<double, 6> c{};
        c[j] = 1.0;
        CoalgebraElement im = ad_star(AlgebraElement::from_coords(c), mu);
        auto ic = im.coords();
        for (int i = 0; i < 6; ++i) n(i, j) = ic[i];
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(n, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = std::max(tol, sv(0) * 1e-12);
    std::vector<AlgebraElement> basis;
    for (int j = 0; j < 6; ++j) {
        if (sv(j) <= thresh) {
            std::array<double, 6> c;
            for (int i = 0; i < 6; ++i) c[i] = svd.matrixV()(i, j);
            basis.push_back(AlgebraElement::from_coords(c));
        }
    }
    return basis;
}

/// Pull a slightly off-group frame back onto the group: Gram-Schmidt in the
/// Lorentzian signature, keeping A2 unit and A1, A3 null with <A1,A3> = -1.
/// Residuals below the double-precision cancellation floor of the frame's
/// magnitude are unrepresentable; correcting them only injects noise, so the
/// frame is left alone in that regime.
inline void reorthonormalize(GroupElement& g) {
    MinkVector a1 = g.col(0), a2 = g.col(1), a3 = g.col(2);
    {
        const double s1 = coord_norm(a1), s2 = coord_norm(a2), s3 = coord_norm(a3);
        const double scale2 = std::max({s1 * s3, s2 * s2, s1 * s2, s2 * s3, 1.0});
        double resid = 0;
        const MinkVector cols[3] = {a1, a2, a3};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                resid = std::max(resid, std::abs(mink_inner(cols[i], cols[j]) - mink_metric[i][j]));
        if (resid <= 64.0 * std::numeric_limits<double>::epsilon() * scale2) return;
    }
    for (int iter = 0; iter < 2; ++iter) {
        a2 = a2 * (1.0 / std::sqrt(mink_inner(a2, a2)));
        a1 -= mink_inner(a1, a2) * a2;
        a3 -= mink_inner(a3, a2) * a2;
        const double s11 = mink_inner(a1, a1);
        const double s33 = mink_inner(a3, a3);
        const double s13 = mink_inner(a1, a3);
        // null the pair inside span(a1,a3), then rescale the cross term
        MinkVector b1 = a1 - (s11 / (2.0 * s13)) * a3;
        MinkVector b3 = a3 - (s33 / (2.0 * s13)) * a1;
        const double c = -mink_inner(b1, b3);
        const double f = 1.0 / std::sqrt(c);
        a1 = b1 * f;
        a3 = b3 * f;
    }
    g.A.set_col(0, a1);
    g.A.set_col(1, a2);
    g.A.set_col(2, a3);
}

}  // namespace nullcurve::e21
