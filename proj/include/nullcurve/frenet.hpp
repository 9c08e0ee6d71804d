#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "nullcurve/e21.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/mink3.hpp"

namespace nullcurve::frenet {

using e21::GroupElement;

/// Fornberg finite-difference weights for derivatives 0..max_order at x0
/// over the stencil xs. weights[d][j] multiplies f(xs[j]).
inline std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& xs,
                                                         int max_order) {
    const int n = static_cast<int>(xs.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n, 0.0));
    for (int d = 0; d <= max_order; ++d)
        for (int j = 0; j < n; ++j) w[d][j] = c[j][d];
    return w;
}

struct NullCurveSamples {
    std::vector<double> t;
    std::vector<MinkVector> alpha;
};

/// Curve with three derivatives supplied analytically:
/// returns (alpha, alpha', alpha'', alpha''').
using CurveJet = std::function<std::array<MinkVector, 4>(double)>;

struct FrameField {
    std::vector<double> t;
    std::vector<GroupElement> g;  // g.q is the base point alpha(t)
    std::vector<double> k;
};

namespace internal {

constexpr int stencil = 7;  // third derivative at fourth order

inline FrameField frames_from_jets(const std::vector<double>& ts,
                                   const std::vector<std::array<MinkVector, 4>>& jets, double tol) {
    FrameField out;
    out.t = ts;
    out.g.reserve(ts.size());
    out.k.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const MinkVector a = jets[i][0], a1 = jets[i][1], a2 = jets[i][2], a3 = jets[i][3];
        const double n2 = mink_inner(a2, a2);
        if (std::abs(std::sqrt(std::abs(n2)) - 1.0) > tol)
            throw NotNormalized("analyze_curve: |alpha''| != 1");
        const CausalClass cc = causal_class(a1, tol);
        if (cc.kind != CausalKind::Null || cc.orientation != Orientation::Future)
            throw NotNull("analyze_curve: alpha' is not future null");
        if (coord_norm(mink_cross(a1, a2)) <= tol)
            throw FlexPoint("analyze_curve: alpha' ^ alpha'' vanishes");
        const double k = -0.5 * mink_inner(a3, a3);
        GroupElement g;
        g.q = a;
        g.A.set_col(0, a1);
        g.A.set_col(1, a2);
        g.A.set_col(2, a3 - k * a1);  // alpha''' + (|alpha'''|^2/2) alpha'
        out.g.push_back(g);
        out.k.push_back(k);
    }
    return out;
}

}  // namespace internal

inline FrameField analyze_curve(const NullCurveSamples& curve, double tol = 1e-6) {
    const int n = static_cast<int>(curve.t.size());
    if (n < internal::stencil) throw std::invalid_argument("analyze_curve: need at least 7 samples");
    std::vector<std::array<MinkVector, 4>> jets(n);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - internal::stencil / 2, 0, n - internal::stencil);
        std::vector<double> xs(curve.t.begin() + lo, curve.t.begin() + lo + internal::stencil);
        auto w = fornberg_weights(curve.t[i], xs, 3);
        std::array<MinkVector, 4> jet{};
        jet[0] = curve.alpha[i];
        for (int d = 1; d <= 3; ++d) {
            MinkVector acc;
            for (int j = 0; j < internal::stencil; ++j) acc += w[d][j] * curve.alpha[lo + j];
            jet[d] = acc;
        }
        jets[i] = jet;
    }
    return internal::frames_from_jets(curve.t, jets, tol);
}

inline FrameField analyze_curve(const CurveJet& jet, const std::vector<double>& grid,
                                double tol = 1e-9) {
    std::vector<std::array<MinkVector, 4>> jets;
    jets.reserve(grid.size());
    for (double t : grid) jets.push_back(jet(t));
    return internal::frames_from_jets(grid, jets, tol);
}

/// Integrate the frame equation g' = g H(k(t)) from g0 over the grid.
/// CF4 transport with substeps; the output frame stays on the group.
inline FrameField synthesize_curve(const std::function<double(double)>& k,
                                   const GroupElement& g0, const std::vector<double>& grid,
                                   double max_substep = 2e-3) {
    if (grid.size() < 2) throw std::invalid_argument("synthesize_curve: need at least 2 grid points");
    static const double gauss1 = 0.5 - std::sqrt(3.0) / 6.0;
    static const double gauss2 = 0.5 + std::sqrt(3.0) / 6.0;
    static const double a1 = 0.25 + std::sqrt(3.0) / 6.0;
    static const double a2 = 0.25 - std::sqrt(3.0) / 6.0;
    auto H = [](double kv) { return e21::AlgebraElement{e1, 0.0, 1.0, kv}; };

    FrameField out;
    out.t = grid;
    out.g.reserve(grid.size());
    out.k.reserve(grid.size());
    GroupElement g = g0;
    out.g.push_back(g);
    out.k.push_back(k(grid[0]));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dt = grid[i] - grid[i - 1];
        if (dt <= 0) throw std::invalid_argument("synthesize_curve: grid must increase");
        const int nsub = std::max(1, static_cast<int>(std::ceil(dt / max_substep)));
        const double h = dt / nsub;
        for (int s = 0; s < nsub; ++s) {
            const double t0 = grid[i - 1] + s * h;
            const double k1v = k(t0 + gauss1 * h);
            const double k2v = k(t0 + gauss2 * h);
            e21::AlgebraElement b1 = H(k1v) * a1 + H(k2v) * a2;
            e21::AlgebraElement b2 = H(k1v) * a2 + H(k2v) * a1;
            g = e21::group_compose(g, e21::exp_algebra(b1, h));
            g = e21::group_compose(g, e21::exp_algebra(b2, h));
        }
        e21::reorthonormalize(g);
        out.g.push_back(g);
        out.k.push_back(k(grid[i]));
    }
    return out;
}

inline NullCurveSamples to_samples(const FrameField& f) {
    NullCurveSamples s;
    s.t = f.t;
    s.alpha.reserve(f.g.size());
    for (const auto& g : f.g) s.alpha.push_back(g.q);
    return s;
}

/// Sup-norm residual of the frame equation A' = A rot(H(k)), alpha' = A1,
/// measured by finite differences on the field's own grid.
inline double frame_equation_residual(const FrameField& f) {
    const int n = static_cast<int>(f.t.size());
    if (n < internal::stencil) throw std::invalid_argument("frame_equation_residual: grid too short");
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - internal::stencil / 2, 0, n - internal::stencil);
        std::vector<double> xs(f.t.begin() + lo, f.t.begin() + lo + internal::stencil);
        auto w = fornberg_weights(f.t[i], xs, 1);
        detail::Mat4 d{};
        for (int j = 0; j < internal::stencil; ++j) d = d + e21::embed(f.g[lo + j]) * w[1][j];
        detail::Mat4 expect = e21::embed(f.g[i]) * e21::embed(e21::AlgebraElement{e1, 0.0, 1.0, f.k[i]});
        worst = std::max(worst, (d - expect).frob());
    }
    return worst;
}

/// Reparametrize by the invariant element |alpha''|^{1/2} dt. Utility only;
/// accuracy degrades near flex points.
inline NullCurveSamples normalize_parameter(const NullCurveSamples& curve) {
    const int n = static_cast<int>(curve.t.size());
    if (n < internal::stencil) throw std::invalid_argument("normalize_parameter: grid too short");
    std::vector<double> speed(n);
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - internal::stencil / 2, 0, n - internal::stencil);
        std::vector<double> xs(curve.t.begin() + lo, curve.t.begin() + lo + internal::stencil);
        auto w = fornberg_weights(curve.t[i], xs, 2);
        MinkVector a2;
        for (int j = 0; j < internal::stencil; ++j) a2 += w[2][j] * curve.alpha[lo + j];
        speed[i] = std::sqrt(std::sqrt(std::abs(mink_inner(a2, a2))));
    }
    std::vector<double> s(n, 0.0);
    for (int i = 1; i < n; ++i)
        s[i] = s[i - 1] + 0.5 * (speed[i] + speed[i - 1]) * (curve.t[i] - curve.t[i - 1]);

    NullCurveSamples out;
    out.t.resize(n);
    out.alpha.resize(n);
    const double ds = s.back() / (n - 1);
    int seg = 0;
    for (int i = 0; i < n; ++i) {
        const double si = i * ds;
        while (seg + 1 < n - 1 && s[seg + 1] < si) ++seg;
        // local Lagrange interpolation of alpha(t(s)) through 6 nearby samples
        int lo = std::clamp(seg - 2, 0, n - 6);
        std::vector<double> xs(s.begin() + lo, s.begin() + lo + 6);
        auto w = fornberg_weights(si, xs, 0);
        MinkVector a;
        for (int j = 0; j < 6; ++j) a += w[0][j] * curve.alpha[lo + j];
        out.t[i] = si;
        out.alpha[i] = a;
    }
    return out;
}

}  // namespace nullcurve::frenet
