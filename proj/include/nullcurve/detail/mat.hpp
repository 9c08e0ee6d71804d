#pragma once

#include <array>
#include <cmath>

#include "nullcurve/mink3.hpp"

namespace nullcurve::detail {

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    MinkVector col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
    void set_col(int j, const MinkVector& v) {
        a[j] = v.x1;
        a[3 + j] = v.x2;
        a[6 + j] = v.x3;
    }

    MinkVector operator*(const MinkVector& v) const {
        return {a[0] * v.x1 + a[1] * v.x2 + a[2] * v.x3,
                a[3] * v.x1 + a[4] * v.x2 + a[5] * v.x3,
                a[6] * v.x1 + a[7] * v.x2 + a[8] * v.x3};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }

    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
        return r;
    }

    double det() const {
        return a[0] * (a[4] * a[8] - a[5] * a[7])
             - a[1] * (a[3] * a[8] - a[5] * a[6])
             + a[2] * (a[3] * a[7] - a[4] * a[6]);
    }

    Mat3 inverse() const {
        const double d = det();
        Mat3 r;
        r(0, 0) = (a[4] * a[8] - a[5] * a[7]) / d;
        r(0, 1) = (a[2] * a[7] - a[1] * a[8]) / d;
        r(0, 2) = (a[1] * a[5] - a[2] * a[4]) / d;
        r(1, 0) = (a[5] * a[6] - a[3] * a[8]) / d;
        r(1, 1) = (a[0] * a[8] - a[2] * a[6]) / d;
        r(1, 2) = (a[2] * a[3] - a[0] * a[5]) / d;
        r(2, 0) = (a[3] * a[7] - a[4] * a[6]) / d;
        r(2, 1) = (a[1] * a[6] - a[0] * a[7]) / d;
        r(2, 2) = (a[0] * a[4] - a[1] * a[3]) / d;
        return r;
    }
};

/// Row-major 4x4 matrix; just enough for the homogeneous representation.
struct Mat4 {
    std::array<double, 16> a{};

    static Mat4 identity() {
        Mat4 m;
        m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[4 * i + j]; }
    double operator()(int i, int j) const { return a[4 * i + j]; }

    Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat4 operator+(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 16; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }

    Mat4 operator-(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 16; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }

    Mat4 operator*(double s) const {
        Mat4 r;
        for (int i = 0; i < 16; ++i) r.a[i] = a[i] * s;
        return r;
    }

    double norm1() const {
        double best = 0;
        for (int j = 0; j < 4; ++j) {
            double c = 0;
            for (int i = 0; i < 4; ++i) c += std::abs((*this)(i, j));
            best = std::max(best, c);
        }
        return best;
    }

    double frob() const {
        double s = 0;
        for (double x : a) s += x * x;
        return std::sqrt(s);
    }
};

inline Mat4 commutator(const Mat4& x, const Mat4& y) { return x * y - y * x; }

// Gaussian elimination with partial pivoting; fine at this size.
inline Mat4 solve4(Mat4 lhs, Mat4 rhs) {
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(lhs(r, c)) > std::abs(lhs(piv, c))) piv = r;
        if (piv != c)
            for (int j = 0; j < 4; ++j) {
                std::swap(lhs(c, j), lhs(piv, j));
                std::swap(rhs(c, j), rhs(piv, j));
            }
        const double d = lhs(c, c);
        for (int j = 0; j < 4; ++j) {
            lhs(c, j) /= d;
            rhs(c, j) /= d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            const double f = lhs(r, c);
            if (f == 0.0) continue;
            for (int j = 0; j < 4; ++j) {
                lhs(r, j) -= f * lhs(c, j);
                rhs(r, j) -= f * rhs(c, j);
            }
        }
    }
    return rhs;
}

/// Matrix exponential, scaling-and-squaring with the degree-6 Pade approximant.
inline Mat4 expm(const Mat4& x) {
    const double nrm = x.norm1();
    int squarings = 0;
    Mat4 xs = x;
    if (nrm > 0.5) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / 0.5))));
        xs = x * std::ldexp(1.0, -squarings);
    }
    // Pade(6,6): p(A)/p(-A) with p(A) = sum b_k A^k.
    static const double b[7] = {1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    const Mat4 I = Mat4::identity();
    Mat4 x2 = xs * xs;
    Mat4 x4 = x2 * x2;
    Mat4 x6 = x4 * x2;
    Mat4 even = I * b[0] + x2 * b[2] + x4 * b[4] + x6 * b[6];
    Mat4 odd = xs * (I * b[1] + x2 * b[3] + x4 * b[5]);
    Mat4 num = even + odd;
    Mat4 den = even - odd;
    Mat4 r = solve4(den, num);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

}  // namespace nullcurve::detail
