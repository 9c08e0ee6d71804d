#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace nullcurve {

/// Vector of Minkowski 3-space with the pairing
/// <v,w> = -(v1*w3 + v3*w1) + v2*w2.
struct MinkVector {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    constexpr MinkVector() = default;
    constexpr MinkVector(double a, double b, double c) : x1(a), x2(b), x3(c) {}

    double operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }
    double& operator[](int i) { return i == 0 ? x1 : (i == 1 ? x2 : x3); }

    MinkVector operator+(const MinkVector& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
    MinkVector operator-(const MinkVector& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
    MinkVector operator-() const { return {-x1, -x2, -x3}; }
    MinkVector operator*(double s) const { return {x1 * s, x2 * s, x3 * s}; }
    MinkVector& operator+=(const MinkVector& o) { x1 += o.x1; x2 += o.x2; x3 += o.x3; return *this; }
    MinkVector& operator-=(const MinkVector& o) { x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; return *this; }

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3); }
};

inline MinkVector operator*(double s, const MinkVector& v) { return v * s; }

inline constexpr MinkVector e1{1.0, 0.0, 0.0};
inline constexpr MinkVector e2{0.0, 1.0, 0.0};
inline constexpr MinkVector e3{0.0, 0.0, 1.0};

/// Metric matrix g_ij in the standard basis; involutive (G*G = I).
inline constexpr std::array<std::array<double, 3>, 3> mink_metric{{
    {0.0, 0.0, -1.0},
    {0.0, 1.0, 0.0},
    {-1.0, 0.0, 0.0},
}};

inline double mink_inner(const MinkVector& v, const MinkVector& w) {
    return -(v.x1 * w.x3 + v.x3 * w.x1) + v.x2 * w.x2;
}

inline double mink_norm2(const MinkVector& v) { return mink_inner(v, v); }

/// Euclidean norm of the coordinate triple (used for residual thresholds only).
inline double coord_norm(const MinkVector& v) {
    return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3);
}

/// det of the matrix with rows v, w, u; normalized so det(e1,e2,e3) = 1.
inline double det3(const MinkVector& v, const MinkVector& w, const MinkVector& u) {
    return v.x1 * (w.x2 * u.x3 - w.x3 * u.x2)
         - v.x2 * (w.x1 * u.x3 - w.x3 * u.x1)
         + v.x3 * (w.x1 * u.x2 - w.x2 * u.x1);
}

/// Metric cross product: the unique x with <x,u> = det(v,w,u) for all u.
inline MinkVector mink_cross(const MinkVector& v, const MinkVector& w) {
    return {v.x2 * w.x1 - v.x1 * w.x2,
            v.x3 * w.x1 - v.x1 * w.x3,
            v.x3 * w.x2 - v.x2 * w.x3};
}

enum class CausalKind { Timelike, Spacelike, Null, Zero };
enum class Orientation { Future, Past, None };

struct CausalClass {
    CausalKind kind = CausalKind::Zero;
    Orientation orientation = Orientation::None;
};

/// Sign of <v, e1+e3> decides time orientation: negative pairing means the
/// vector lies in the future cone.
inline double cone_pairing(const MinkVector& v) { return mink_inner(v, e1 + e3); }

inline CausalClass causal_class(const MinkVector& v, double tol = 1e-10) {
    if (tol < 0) throw std::invalid_argument("causal_class: tol must be >= 0");
    CausalClass c;
    const double q = mink_inner(v, v);
    const double mag = coord_norm(v);
    if (mag <= tol) {
        c.kind = CausalKind::Zero;
        return c;
    }
    if (std::abs(q) <= tol) {
        c.kind = CausalKind::Null;
    } else if (q < 0) {
        c.kind = CausalKind::Timelike;
    } else {
        c.kind = CausalKind::Spacelike;
        return c;
    }
    c.orientation = cone_pairing(v) < 0 ? Orientation::Future : Orientation::Past;
    return c;
}

}  // namespace nullcurve
