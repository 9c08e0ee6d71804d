#include <catch2/catch.hpp>

#include "nullcurve/e21.hpp"
#include "test_util.hpp"

using namespace nullcurve;
using namespace nullcurve::e21;

TEST_CASE("group compose/inverse basics") {
    test_util::Rng rng(10);
    const GroupElement id = GroupElement::identity();
    for (int it = 0; it < 50; ++it) {
        const GroupElement a = rng.group(), b = rng.group();
        CHECK(a.invariant_residual() < 1e-10);

        GroupElement ib = group_compose(id, b);
        CHECK(coord_norm(ib.q - b.q) < 1e-15);

        GroupElement aa = group_compose(a, group_inverse(a));
        CHECK(coord_norm(aa.q) < 1e-12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(aa.A(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-12));

        // compose equals the 4x4 product bitwise
        const auto lhs = embed(group_compose(a, b));
        const auto rhs = embed(a) * embed(b);
        for (int i = 0; i < 16; ++i) CHECK(lhs.a[i] == rhs.a[i]);
    }
    const MinkVector q1{1, 2, 3}, q2{-0.5, 4, 0};
    GroupElement t12 = group_compose(GroupElement::translation(q1), GroupElement::translation(q2));
    CHECK(coord_norm(t12.q - (q1 + q2)) == 0.0);
}

TEST_CASE("algebra embedding satisfies the Lorentz condition") {
    test_util::Rng rng(11);
    for (int it = 0; it < 50; ++it) {
        const AlgebraElement x = rng.algebra();
        auto r = x.rot();
        // X^T G + G X = 0
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k)
                    s += r(k, i) * mink_metric[k][j] + mink_metric[i][k] * r(k, j);
                CHECK(std::abs(s) < 1e-14);
            }
    }
}

TEST_CASE("exp_algebra special cases") {
    test_util::Rng rng(12);
    const AlgebraElement any = rng.algebra();
    GroupElement g0 = exp_algebra(any, 0.0);
    CHECK(coord_norm(g0.q) == 0.0);

    AlgebraElement tr{e1, 0, 0, 0};
    GroupElement gt = exp_algebra(tr, 2.5);
    CHECK(coord_norm(gt.q - e1 * 2.5) < 1e-14);

    // H(0) is nilpotent: translation part (t, t^2/2, t^3/6)
    AlgebraElement h0{e1, 0.0, 1.0, 0.0};
    for (double t : {0.3, 1.0, 2.0}) {
        GroupElement g = exp_algebra(h0, t);
        CHECK(g.q.x1 == Approx(t).epsilon(1e-12));
        CHECK(g.q.x2 == Approx(t * t / 2).epsilon(1e-12));
        CHECK(g.q.x3 == Approx(t * t * t / 6).epsilon(1e-12));
        CHECK(g.invariant_residual() < 1e-12);
    }

    // group law along a one-parameter subgroup
    const AlgebraElement x = rng.algebra();
    GroupElement a = exp_algebra(x, 0.7), b = exp_algebra(x, 0.4), c = exp_algebra(x, 1.1);
    GroupElement ab = group_compose(a, b);
    CHECK(coord_norm(ab.q - c.q) < 1e-11);
}

TEST_CASE("pairing table: fixed values and Ad* consistency oracle") {
    // ((p,v) = (e2,0), X with qdot = e2) -> 1
    CoalgebraElement eta{e2, {0, 0, 0}};
    AlgebraElement x{e2, 0, 0, 0};
    CHECK(pairing(eta, x) == 1.0);
    CHECK(pairing(eta, AlgebraElement{}) == 0.0);

    // <Ad*(g) eta; X> = <eta; Ad(g^-1) X> pins the coefficient table
    test_util::Rng rng(13);
    for (int it = 0; it < 100; ++it) {
        const GroupElement g = rng.group();
        const CoalgebraElement et = rng.coalgebra();
        const AlgebraElement xx = rng.algebra();
        const double lhs = pairing(coadjoint(g, et), xx);
        const double rhs = pairing(et, adjoint(group_inverse(g), xx));
        CHECK(lhs == Approx(rhs).margin(1e-10 * std::max(1.0, std::abs(rhs))));
    }
}

TEST_CASE("coadjoint action") {
    test_util::Rng rng(14);
    const CoalgebraElement eta = rng.coalgebra();
    CoalgebraElement r = coadjoint(GroupElement::identity(), eta);
    CHECK((r - eta).coord_norm() == 0.0);

    // pure translation: (p, v - p x q)
    const MinkVector q = rng.vec(-3, 3);
    CoalgebraElement tr = coadjoint(GroupElement::translation(q), eta);
    CHECK(coord_norm(tr.p - eta.p) == 0.0);
    CHECK(coord_norm(tr.v - (eta.v - mink_cross(eta.p, q))) < 1e-14);

    // left action property
    for (int it = 0; it < 100; ++it) {
        const GroupElement g1 = rng.group(), g2 = rng.group();
        const CoalgebraElement et = rng.coalgebra();
        const CoalgebraElement lhs = coadjoint(g1, coadjoint(g2, et));
        const CoalgebraElement rhs = coadjoint(group_compose(g1, g2), et);
        CHECK((lhs - rhs).coord_norm() < 1e-10 * std::max(1.0, rhs.coord_norm()));
    }
}

TEST_CASE("ad_star is the derivative of the coadjoint action") {
    test_util::Rng rng(15);
    const CoalgebraElement eta0 = rng.coalgebra();
    CoalgebraElement z = ad_star(AlgebraElement{}, eta0);
    CHECK(z.coord_norm() == 0.0);

    const double h = 1e-6;
    for (int it = 0; it < 50; ++it) {
        const AlgebraElement x = rng.algebra();
        const CoalgebraElement et = rng.coalgebra();
        const CoalgebraElement fd =
            (coadjoint(exp_algebra(x, h), et) - coadjoint(exp_algebra(x, -h), et)) * (0.5 / h);
        const CoalgebraElement an = ad_star(x, et);
        CHECK((fd - an).coord_norm() < 1e-6 * std::max(1.0, an.coord_norm()));
    }

    // first-order expansion of the action at unit scales
    for (int it = 0; it < 20; ++it) {
        const AlgebraElement x = rng.algebra(-1.0, 1.0);
        const CoalgebraElement et = rng.coalgebra(-1.0, 1.0);
        const double t = 1e-4;
        const CoalgebraElement lhs = coadjoint(exp_algebra(x, t), et);
        const CoalgebraElement rhs = et + ad_star(x, et) * t;
        CHECK((lhs - rhs).coord_norm() < 1e-7);
    }
}

TEST_CASE("casimirs: values and coadjoint invariance") {
    auto [c1, c2] = casimirs({e2, {0, 0, 0}});
    CHECK(c1 == 1.0);
    CHECK(c2 == 0.0);

    test_util::Rng rng(16);
    for (int it = 0; it < 100; ++it) {
        const CoalgebraElement et = rng.coalgebra();
        auto [a1, a2] = casimirs(et);
        const CoalgebraElement moved = coadjoint(rng.group(), et);
        auto [b1, b2] = casimirs(moved);
        CHECK(std::abs(a1 - b1) < 1e-10 * std::max(1.0, std::abs(a1)));
        CHECK(std::abs(a2 - b2) < 1e-10 * std::max(1.0, std::abs(a2)));
    }
}

TEST_CASE("isotropy basis: dimension, kernel quality, Abelian") {
    CHECK_THROWS_AS(isotropy_basis({{0, 0, 0}, {1, 2, 3}}), SingularElement);

    auto basis = isotropy_basis({e2, {0, 0, 0}});
    REQUIRE(basis.size() == 2);
    for (const auto& b : basis) {
        CHECK(ad_star(b, {e2, {0, 0, 0}}).coord_norm() < 1e-10);
    }
    CHECK(bracket(basis[0], basis[1]).coord_norm() < 1e-10);

    test_util::Rng rng(17);
    for (int it = 0; it < 100; ++it) {
        CoalgebraElement mu = rng.coalgebra();
        if (coord_norm(mu.p) < 1e-3) continue;
        auto bs = isotropy_basis(mu);
        REQUIRE(bs.size() == 2);
        for (const auto& b : bs) CHECK(ad_star(b, mu).coord_norm() < 1e-9);
        CHECK(bracket(bs[0], bs[1]).coord_norm() < 1e-9);
    }
}

TEST_CASE("reorthonormalize pulls a perturbed frame back onto the group") {
    test_util::Rng rng(18);
    for (int it = 0; it < 50; ++it) {
        GroupElement g = rng.group();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g.A(i, j) += rng.uniform(-1e-6, 1e-6);
        reorthonormalize(g);
        CHECK(g.invariant_residual() < 1e-12);
    }
}
