#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "nullcurve/dynamics.hpp"
#include "nullcurve/e21.hpp"
#include "nullcurve/elliptic.hpp"
#include "nullcurve/errors.hpp"

namespace nullcurve::reduce {

using e21::AlgebraElement;
using e21::CoalgebraElement;
using e21::GroupElement;

enum class OrbitKind { Positive, NegativeFuture, NegativePast, NullFuture, NullPast, Singular };

struct OrbitClass {
    OrbitKind kind = OrbitKind::Singular;
    double C1 = 0.0, C2 = 0.0;
};

inline const char* to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::Positive: return "positive";
        case OrbitKind::NegativeFuture: return "negative-future";
        case OrbitKind::NegativePast: return "negative-past";
        case OrbitKind::NullFuture: return "null-future";
        case OrbitKind::NullPast: return "null-past";
        case OrbitKind::Singular: return "singular";
    }
    return "?";
}

inline OrbitClass classify_orbit(const CoalgebraElement& eta, double tol = 1e-10) {
    OrbitClass oc;
    auto [c1, c2] = e21::casimirs(eta);
    oc.C1 = c1;
    oc.C2 = c2;
    const double pinf = std::max({std::abs(eta.p.x1), std::abs(eta.p.x2), std::abs(eta.p.x3)});
    if (pinf <= tol) {
        oc.kind = OrbitKind::Singular;
        return oc;
    }
    const bool future = cone_pairing(eta.p) < 0;
    if (std::abs(c1) <= tol) {
        oc.kind = future ? OrbitKind::NullFuture : OrbitKind::NullPast;
    } else if (c1 > 0) {
        oc.kind = OrbitKind::Positive;
    } else {
        oc.kind = future ? OrbitKind::NegativeFuture : OrbitKind::NegativePast;
    }
    return oc;
}

/// Standard representative (m1, m2) of the orbit. Past-directed classes are
/// the negatives of the future representatives at the same Casimirs.
inline CoalgebraElement standard_form(const OrbitClass& cls) {
    const double C1 = cls.C1, C2 = cls.C2;
    switch (cls.kind) {
        case OrbitKind::Positive: {
            const double r = std::sqrt(C1);
            return {e2 * r, e2 * (C2 / r)};
        }
        case OrbitKind::NegativeFuture: {
            const double r = std::sqrt(std::abs(C1) / 2.0);
            const MinkVector n = e1 + e3;
            return {n * r, n * (-C2 / std::sqrt(2.0 * std::abs(C1)))};
        }
        case OrbitKind::NegativePast: {
            const double r = std::sqrt(std::abs(C1) / 2.0);
            const MinkVector n = e1 + e3;
            return {n * (-r), n * (C2 / std::sqrt(2.0 * std::abs(C1)))};
        }
        case OrbitKind::NullFuture:
            return {e1, e3 * (-C2)};
        case OrbitKind::NullPast:
            return {-e1, e3 * C2};
        case OrbitKind::Singular:
            break;
    }
    throw SingularOrbit("standard_form: singular orbit has no standard representative");
}

struct SectionResult {
    GroupElement g;
    CoalgebraElement mu_std;
};

namespace internal {

inline MinkVector unit_spacelike(const MinkVector& v) { return v * (1.0 / std::sqrt(mink_inner(v, v))); }

inline GroupElement assemble(const MinkVector& a1, const MinkVector& a2, const MinkVector& a3,
                             const MinkVector& q) {
    GroupElement g;
    g.A.set_col(0, a1);
    g.A.set_col(1, a2);
    g.A.set_col(2, a3);
    g.q = q;
    return g;
}

inline SectionResult section_positive(const CoalgebraElement& eta, const OrbitClass& cls) {
    const MinkVector& p = eta.p;
    // S = l4 e1 + (l5 - (1-mk)/2) e2 - l4 e3 read off the components of p;
    // orthogonal to p and spacelike on the whole positive stratum
    MinkVector S{p.x2, p.x3 - p.x1, -p.x2};
    const double s2 = mink_inner(S, S);
    if (s2 <= 0) throw FrameDegenerate("cross_section: auxiliary vector degenerated");
    MinkVector Sh = S * (1.0 / std::sqrt(s2));
    const MinkVector ph = unit_spacelike(p);
    MinkVector u = mink_cross(ph, Sh);
    MinkVector a1 = (u + Sh) * (1.0 / std::sqrt(2.0));
    MinkVector a3 = (u - Sh) * (1.0 / std::sqrt(2.0));
    if (det3(a1, ph, a3) < 0) {
        Sh = -Sh;
        u = -u;  // cross is linear in S
        a1 = (u + Sh) * (1.0 / std::sqrt(2.0));
        a3 = (u - Sh) * (1.0 / std::sqrt(2.0));
    }
    const MinkVector q = mink_cross(ph, eta.v) * (-1.0 / std::sqrt(cls.C1));
    return {assemble(a1, ph, a3, q), standard_form(cls)};
}

inline SectionResult section_negative_future(const CoalgebraElement& eta, const OrbitClass& cls) {
    const MinkVector& p = eta.p;
    if (std::abs(p.x3) < 1e-300) throw FrameDegenerate("cross_section: p3 = 0 on timelike stratum");
    MinkVector S = e2 + e1 * (p.x2 / p.x3);
    S = unit_spacelike(S);
    MinkVector w = mink_cross(p, S);
    const double f = 1.0 / std::sqrt(2.0 * std::abs(cls.C1));
    MinkVector a1 = (p - w) * f;
    MinkVector a3 = (p + w) * f;
    if (det3(a1, S, a3) < 0) {
        S = -S;
        w = -w;
        a1 = (p - w) * f;
        a3 = (p + w) * f;
    }
    const MinkVector q = mink_cross(p, eta.v) * (1.0 / std::abs(cls.C1));
    return {assemble(a1, S, a3, q), standard_form(cls)};
}

inline SectionResult section_null_future(const CoalgebraElement& eta, const OrbitClass& cls) {
    const MinkVector& p = eta.p;
    MinkVector a2, a3;
    if (std::abs(p.x3) >= std::abs(p.x1)) {
        if (std::abs(p.x3) < 1e-300) throw FrameDegenerate("cross_section: null p vanishes");
        a2 = -(e2 + e1 * (p.x2 / p.x3));
        a3 = e1 * (1.0 / p.x3);
    } else {
        // mirrored completion for p3 ~ 0 (the printed recipe divides by p3)
        a2 = e2 + e3 * (p.x2 / p.x1);
        a3 = e3 * (1.0 / p.x1);
    }
    if (det3(p, a2, a3) < 0) a2 = -a2;
    const MinkVector q = mink_cross(a3, eta.v);
    return {assemble(p, a2, a3, q), standard_form(cls)};
}

}  // namespace internal

/// Group element g with coadjoint(g, standard_form) = eta, the type-specific
/// frame recipes with orientation fixed by the metric and determinant
/// conditions. Verified against the coadjoint action before returning.
inline SectionResult cross_section(const CoalgebraElement& eta, double tol = 1e-9) {
    const OrbitClass cls = classify_orbit(eta);
    SectionResult r;
    switch (cls.kind) {
        case OrbitKind::Positive:
            r = internal::section_positive(eta, cls);
            break;
        case OrbitKind::NegativeFuture:
            r = internal::section_negative_future(eta, cls);
            break;
        case OrbitKind::NullFuture:
            r = internal::section_null_future(eta, cls);
            break;
        case OrbitKind::NegativePast:
        case OrbitKind::NullPast: {
            // Ad*(g) is linear in (p,v): reuse the future recipe on -eta.
            OrbitClass fut = cls;
            fut.kind = cls.kind == OrbitKind::NegativePast ? OrbitKind::NegativeFuture
                                                           : OrbitKind::NullFuture;
            SectionResult rf = fut.kind == OrbitKind::NegativeFuture
                                   ? internal::section_negative_future(eta * -1.0, fut)
                                   : internal::section_null_future(eta * -1.0, fut);
            r.g = rf.g;
            r.mu_std = standard_form(cls);
            break;
        }
        case OrbitKind::Singular:
            throw SingularOrbit("cross_section: singular orbit");
    }
    const double res = (e21::coadjoint(r.g, r.mu_std) - eta).coord_norm();
    const double ginv = r.g.invariant_residual();
    if (res > tol * std::max(1.0, eta.coord_norm()) || ginv > 1e-9)
        throw FrameDegenerate("cross_section: recipe failed verification");
    return r;
}

// ---------------------------------------------------------------------------
// Trajectory-level section

using EtaPath = std::function<CoalgebraElement(double)>;
using SectionPath = std::function<SectionResult(double)>;

namespace internal {

/// Raw branch evaluation. Branch 0 is the generic recipe; branch 1 is the
/// mirrored null completion. Throws FrameDegenerate outside the branch's
/// validity region.
inline GroupElement raw_branch(const CoalgebraElement& eta, const OrbitClass& cls, int branch) {
    const bool past = cls.kind == OrbitKind::NegativePast || cls.kind == OrbitKind::NullPast;
    const CoalgebraElement et = past ? eta * -1.0 : eta;
    OrbitClass fut = cls;
    if (cls.kind == OrbitKind::NegativePast) fut.kind = OrbitKind::NegativeFuture;
    if (cls.kind == OrbitKind::NullPast) fut.kind = OrbitKind::NullFuture;

    switch (fut.kind) {
        case OrbitKind::Positive:
            return section_positive(et, fut).g;
        case OrbitKind::NegativeFuture:
            return section_negative_future(et, fut).g;
        case OrbitKind::NullFuture: {
            const MinkVector& p = et.p;
            MinkVector a2, a3;
            const double scale = std::max(std::abs(p.x1), std::abs(p.x3));
            if (branch == 0) {
                if (std::abs(p.x3) < 1e-8 * scale)
                    throw FrameDegenerate("raw_branch: p3 ~ 0");
                a2 = -(e2 + e1 * (p.x2 / p.x3));
                a3 = e1 * (1.0 / p.x3);
            } else {
                if (std::abs(p.x1) < 1e-8 * scale)
                    throw FrameDegenerate("raw_branch: p1 ~ 0");
                a2 = e2 + e3 * (p.x2 / p.x1);
                a3 = e3 * (1.0 / p.x1);
            }
            if (det3(p, a2, a3) < 0) a2 = -a2;
            return assemble(p, a2, a3, mink_cross(a3, et.v));
        }
        default:
            throw SingularOrbit("raw_branch: singular orbit");
    }
}

/// How far the branch is from its degeneracy, 1 = comfortable, 0 = singular.
inline double branch_health(const CoalgebraElement& eta, const OrbitClass& cls, int branch) {
    if (cls.kind != OrbitKind::NullFuture && cls.kind != OrbitKind::NullPast)
        return branch == 0 ? 1.0 : -1.0;
    const double scale = std::max({std::abs(eta.p.x1), std::abs(eta.p.x3), 1e-30});
    return (branch == 0 ? std::abs(eta.p.x3) : std::abs(eta.p.x1)) / scale;
}

}  // namespace internal

/// Section of the Marsden-Weinstein fibration along a path of dual elements.
/// The pointwise recipes degenerate somewhere along generic null orbits, so
/// the section is stitched from branch patches glued by constant isotropy
/// gauges; patches switch only at anchor times and each patch is smooth.
class ContinuousSection {
  public:
    ContinuousSection(EtaPath eta, std::vector<double> anchors)
        : eta_(std::move(eta)), anchors_(std::move(anchors)) {
        const CoalgebraElement e0 = eta_(anchors_.front());
        cls_ = classify_orbit(e0);
        mu_ = standard_form(cls_);

        const int n = static_cast<int>(anchors_.size());
        branch_.resize(n);
        gauge_.resize(n);
        int cur = internal::branch_health(e0, cls_, 0) >= 0.5 ? 0 : 1;
        branch_[0] = cur;
        gauge_[0] = GroupElement::identity();
        for (int i = 1; i < n; ++i) {
            const CoalgebraElement et = eta_(anchors_[i]);
            const double health = internal::branch_health(et, cls_, cur);
            const int other = 1 - cur;
            if (health < 0.25 && internal::branch_health(et, cls_, other) > health) {
                // glue: braw_new * c_new = braw_old * c_old at the switch time
                const GroupElement go = internal::raw_branch(et, cls_, cur);
                const GroupElement gn = internal::raw_branch(et, cls_, other);
                gauge_[i] = e21::group_compose(
                    e21::group_inverse(gn),
                    e21::group_compose(go, gauge_[i - 1]));
                cur = other;
            } else {
                gauge_[i] = gauge_[i - 1];
            }
            branch_[i] = cur;
        }
    }

    const CoalgebraElement& mu_std() const { return mu_; }
    const std::vector<double>& anchors() const { return anchors_; }

    int patch_of(double t) const {
        const auto it = std::upper_bound(anchors_.begin(), anchors_.end(), t);
        return std::clamp(static_cast<int>(it - anchors_.begin()) - 1, 0,
                          static_cast<int>(anchors_.size()) - 1);
    }

    /// Evaluate within a fixed patch; x may lie slightly outside the patch
    /// (finite-difference stencils), the branch formula stays smooth there.
    GroupElement eval(double x, int patch) const {
        const GroupElement raw = internal::raw_branch(eta_(x), cls_, branch_[patch]);
        return e21::group_compose(raw, gauge_[patch]);
    }

    GroupElement operator()(double t) const { return eval(t, patch_of(t)); }

  private:
    EtaPath eta_;
    std::vector<double> anchors_;
    OrbitClass cls_;
    CoalgebraElement mu_;
    std::vector<int> branch_;
    std::vector<GroupElement> gauge_;
};

/// Single-shot section callable (pointwise recipes, no stitching) for paths
/// that stay away from the null degeneracies.
inline SectionPath make_section_path(const EtaPath& eta) {
    return [eta](double t) { return cross_section(eta(t)); };
}

/// Measured reparametrization factor: eta'(t) = vmu(t) * Phi_xi(eta(t)).
struct VmuMeasurement {
    std::vector<double> values;
    double mean = 0.0;
    double stdev = 0.0;
};

inline VmuMeasurement measure_vmu(const EtaPath& eta, const std::vector<double>& grid,
                                  double fd_h = 1e-3) {
    VmuMeasurement out;
    out.values.reserve(grid.size());
    for (double t : grid) {
        // fourth-order central difference of eta
        std::array<double, 6> dcoords{};
        static const double w[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
        static const double off[4] = {-2.0, -1.0, 1.0, 2.0};
        for (int s = 0; s < 4; ++s) {
            auto c = eta(t + off[s] * fd_h).coords();
            for (int i = 0; i < 6; ++i) dcoords[i] += w[s] * c[i] / fd_h;
        }
        const CoalgebraElement et = eta(t);
        const double m = et.v.x3;
        const auto st = dynamics::phase_from_coalgebra(et, m, 1e-6);
        const CoalgebraElement phi = e21::ad_star(dynamics::hamiltonian(st), et) * -1.0;
        auto pc = phi.coords();
        double num = 0, den = 0;
        for (int i = 0; i < 6; ++i) {
            num += dcoords[i] * pc[i];
            den += pc[i] * pc[i];
        }
        out.values.push_back(num / den);
    }
    for (double v : out.values) out.mean += v;
    out.mean /= out.values.size();
    for (double v : out.values) out.stdev += (v - out.mean) * (v - out.mean);
    out.stdev = std::sqrt(out.stdev / out.values.size());
    return out;
}

// ---------------------------------------------------------------------------
// Gauge quadrature and horizontal reconstruction

struct QuadratureOptions {
    double tol = 1e-8;
    int intervals = 0;  // 0: choose from span
    double fd_h = 1e-4;
};

namespace internal {

struct QuadratureAccumulator {
    std::vector<AlgebraElement> basis;  // isotropy basis at mu
    std::array<double, 2> integral{};   // coefficients along the basis
    double max_residual = 0.0;

    explicit QuadratureAccumulator(const CoalgebraElement& mu) : basis(e21::isotropy_basis(mu)) {
        if (basis.size() != 2)
            throw NotInIsotropy("gauge_quadrature: isotropy algebra is not two-dimensional");
    }

    /// zeta(u) = Ad(g^-1) H[eta] vmu + g^-1 g'; project on the isotropy
    /// basis. The section is sampled through `sec`, which must be smooth in
    /// a stencil-sized neighbourhood of u.
    template <typename SectionEval>
    std::array<double, 2> integrand(const SectionEval& sec, const EtaPath& eta, double vmu,
                                    double u, double fd_h) {
        const GroupElement g = sec(u);
        const detail::Mat4 gm = e21::embed(g);
        const detail::Mat4 gi = e21::embed(e21::group_inverse(g));

        static const double w[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
        static const double off[4] = {-2.0, -1.0, 1.0, 2.0};
        detail::Mat4 dg{};
        for (int s = 0; s < 4; ++s)
            dg = dg + e21::embed(sec(u + off[s] * fd_h)) * (w[s] / fd_h);

        const CoalgebraElement et = eta(u);
        const auto st = dynamics::phase_from_coalgebra(et, et.v.x3, 1e-6);
        const detail::Mat4 z4 =
            gi * e21::embed(dynamics::hamiltonian(st)) * gm * vmu + gi * dg;
        const AlgebraElement z = e21::algebra_from_mat4(z4);
        double shape = (z4 - e21::embed(z)).frob();

        std::array<double, 2> c{};
        AlgebraElement rem = z;
        for (int b = 0; b < 2; ++b) {
            double dot = 0;
            auto zc = z.coords();
            auto bc = basis[b].coords();
            for (int i = 0; i < 6; ++i) dot += zc[i] * bc[i];
            c[b] = dot;
            rem = rem - basis[b] * dot;
        }
        max_residual = std::max(max_residual, std::sqrt(rem.coord_norm() * rem.coord_norm() + shape * shape));
        return c;
    }

    template <typename SectionEval>
    void add_interval(const SectionEval& sec, const EtaPath& eta, double vmu, double a, double b,
                      double fd_h);
};

inline constexpr std::array<double, 5> gl5_x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                0.5384693101056831, 0.9061798459386640};
inline constexpr std::array<double, 5> gl5_w = {0.2369268850561891, 0.4786286704993665,
                                                0.5688888888888889, 0.4786286704993665,
                                                0.2369268850561891};

template <typename SectionEval>
void QuadratureAccumulator::add_interval(const SectionEval& sec, const EtaPath& eta, double vmu,
                                         double a, double b, double fd_h) {
    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * 64)));
    const double dt = (b - a) / nsub;
    for (int s = 0; s < nsub; ++s) {
        const double lo = a + s * dt;
        for (int q = 0; q < 5; ++q) {
            const double u = lo + 0.5 * dt * (1.0 + gl5_x[q]);
            auto c = integrand(sec, eta, vmu, u, fd_h);
            integral[0] += 0.5 * dt * gl5_w[q] * c[0];
            integral[1] += 0.5 * dt * gl5_w[q] * c[1];
        }
    }
}

}  // namespace internal

/// Gauge transformation h(t) = Exp of the quadrature of the isotropy-valued
/// integrand; valid because the structure group is Abelian. This overload is
/// for smooth sections supplied as a plain callable.
inline GroupElement gauge_quadrature(const SectionPath& section, const EtaPath& eta, double vmu,
                                     double t0, double t, const QuadratureOptions& opt = {}) {
    if (t == t0) return GroupElement::identity();
    const CoalgebraElement mu = section(t0).mu_std;
    internal::QuadratureAccumulator acc(mu);
    auto sec = [&section](double u) { return section(u).g; };
    acc.add_interval(sec, eta, vmu, t0, t, opt.fd_h);
    if (acc.max_residual > opt.tol)
        throw NotInIsotropy("gauge_quadrature: integrand leaves the isotropy algebra");
    const AlgebraElement total = acc.basis[0] * acc.integral[0] + acc.basis[1] * acc.integral[1];
    return e21::exp_algebra(total);
}

/// Horizontal curve Gamma(t) = (h(t) g(t)^-1, eta(t)) over the section's
/// anchor grid. Quadrature intervals never straddle a patch switch, and the
/// finite-difference stencil of g' stays on one patch.
inline dynamics::Trajectory reconstruct_horizontal(const ContinuousSection& section,
                                                   const EtaPath& eta, double vmu,
                                                   const QuadratureOptions& opt = {},
                                                   double* isotropy_residual = nullptr) {
    const std::vector<double>& grid = section.anchors();
    internal::QuadratureAccumulator acc(section.mu_std());
    dynamics::Trajectory traj;
    traj.samples.reserve(grid.size());

    auto emit = [&](double t) {
        const AlgebraElement total = acc.basis[0] * acc.integral[0] + acc.basis[1] * acc.integral[1];
        const GroupElement h = e21::exp_algebra(total);
        const GroupElement grp = e21::group_compose(h, e21::group_inverse(section(t)));
        const CoalgebraElement et = eta(t);
        const auto st = dynamics::phase_from_coalgebra(et, et.v.x3, 1e-6);
        traj.samples.push_back(dynamics::make_sample(t, grp, st));
    };

    emit(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const int patch = section.patch_of(0.5 * (grid[i - 1] + grid[i]));
        auto sec = [&section, patch](double u) { return section.eval(u, patch); };
        acc.add_interval(sec, eta, vmu, grid[i - 1], grid[i], opt.fd_h);
        emit(grid[i]);
    }
    if (isotropy_residual) *isotropy_residual = acc.max_residual;
    if (acc.max_residual > opt.tol)
        throw NotInIsotropy("reconstruct_horizontal: integrand leaves the isotropy algebra");
    return traj;
}

// ---------------------------------------------------------------------------
// Four-step pipeline: closed-form portrait parametrization in flow time,
// cross-section, gauge quadrature, horizontal curve; finally left-translated
// through the requested initial frame.

struct PipelineResult {
    dynamics::Trajectory gamma;      // extremal through (g0, s0)
    dynamics::Trajectory horizontal; // raw horizontal curve with momentum mu_std
    CoalgebraElement mu_std;
    double isotropy_residual = 0.0;
    double vmu_mean = 1.0, vmu_stdev = 0.0;
};

inline PipelineResult integrate_by_quadratures(const dynamics::PhaseState& s0,
                                               const GroupElement& g0, double T,
                                               int n_samples = 0,
                                               const QuadratureOptions& opt = {}) {
    elliptic::ClosedFormPath path = elliptic::closed_form_from_state(s0);
    EtaPath eta = [path](double t) {
        return dynamics::phase_embed(elliptic::closed_form_state(path, t));
    };
    if (n_samples <= 1) n_samples = std::max(64, static_cast<int>(std::ceil(T * 100)) + 1);
    std::vector<double> grid(n_samples);
    for (int i = 0; i < n_samples; ++i) grid[i] = T * i / (n_samples - 1);

    ContinuousSection section(eta, grid);

    PipelineResult out;
    out.mu_std = section.mu_std();
    auto vm = measure_vmu(eta, grid);
    out.vmu_mean = vm.mean;
    out.vmu_stdev = vm.stdev;

    out.horizontal = reconstruct_horizontal(section, eta, 1.0, opt, &out.isotropy_residual);

    // left translation carrying the horizontal curve through (g0, s0)
    const GroupElement shift =
        e21::group_compose(g0, e21::group_inverse(out.horizontal.samples.front().g));
    out.gamma = out.horizontal;
    for (auto& smp : out.gamma.samples) {
        smp.g = e21::group_compose(shift, smp.g);
        smp.J = dynamics::moment_map(smp.g, smp.state);
    }
    return out;
}

/// Sup residual of the characteristic equation along a trajectory: the group
/// part must satisfy g^-1 g' = H(eta) and the fiber part the phase flow.
inline double characteristic_residual(const dynamics::Trajectory& traj) {
    const auto& s = traj.samples;
    const int n = static_cast<int>(s.size());
    double worst = 0.0;
    static const double w[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
    static const int off[4] = {-2, -1, 1, 2};
    for (int i = 2; i + 2 < n; ++i) {
        const double h = s[i + 1].t - s[i].t;
        detail::Mat4 dg{};
        std::array<double, 3> dy{};
        for (int q = 0; q < 4; ++q) {
            dg = dg + e21::embed(s[i + off[q]].g) * (w[q] / h);
            dy[0] += w[q] / h * s[i + off[q]].state.k;
            dy[1] += w[q] / h * s[i + off[q]].state.l4;
            dy[2] += w[q] / h * s[i + off[q]].state.l5;
        }
        const detail::Mat4 gi = e21::embed(e21::group_inverse(s[i].g));
        const detail::Mat4 lhs = gi * dg;
        const detail::Mat4 rhs = e21::embed(dynamics::hamiltonian(s[i].state));
        worst = std::max(worst, (lhs - rhs).frob());
        auto f = dynamics::el_field(s[i].state);
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(dy[c] - f[c]));
    }
    return worst;
}

}  // namespace nullcurve::reduce
