#include <catch2/catch.hpp>

#include "nullcurve/mink3.hpp"
#include "test_util.hpp"

using namespace nullcurve;

namespace {

// Oracle: solve <x, e_j> = det(v, w, e_j) against the metric. The metric
// matrix is involutive, so x^i = sum_j G_ij d_j.
MinkVector cross_oracle(const MinkVector& v, const MinkVector& w) {
    const MinkVector basis[3] = {e1, e2, e3};
    double d[3];
    for (int j = 0; j < 3; ++j) d[j] = det3(v, w, basis[j]);
    MinkVector x;
    for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int j = 0; j < 3; ++j) s += mink_metric[i][j] * d[j];
        x[i] = s;
    }
    return x;
}

}  // namespace

TEST_CASE("mink_inner on the standard basis") {
    CHECK(mink_inner(e1, e3) == -1.0);
    CHECK(mink_inner(e2, e2) == 1.0);
    CHECK(mink_inner(e1 + e3, e1 + e3) == -2.0);
    CHECK(mink_inner(e1, e1) == 0.0);
    CHECK(mink_inner(e3, e3) == 0.0);
}

TEST_CASE("mink_cross basis values") {
    const MinkVector a = mink_cross(e1, e2);
    CHECK(coord_norm(a - (-e1)) == Approx(0.0).margin(1e-15));
    const MinkVector b = mink_cross(e2, e3);
    CHECK(coord_norm(b - (-e3)) == Approx(0.0).margin(1e-15));
    // frame orientation identities
    CHECK(coord_norm(mink_cross(e2, e1) - e1) == Approx(0.0).margin(1e-15));
    CHECK(coord_norm(mink_cross(e2, e3) + e3) == Approx(0.0).margin(1e-15));
    CHECK(coord_norm(mink_cross(e3, e1) - e2) == Approx(0.0).margin(1e-15));
}

TEST_CASE("mink_cross matches the linear-solve oracle and det identity") {
    test_util::Rng rng(1);
    for (int it = 0; it < 200; ++it) {
        const MinkVector v = rng.vec(), w = rng.vec(), u = rng.vec();
        const MinkVector c = mink_cross(v, w);
        CHECK(coord_norm(c - cross_oracle(v, w)) < 1e-12);
        CHECK(mink_inner(c, u) == Approx(det3(v, w, u)).margin(1e-12 * (1 + std::abs(det3(v, w, u)))));
        CHECK(coord_norm(mink_cross(v, w) + mink_cross(w, v)) < 1e-14);
        CHECK(coord_norm(mink_cross(v, v)) == 0.0);
    }
}

TEST_CASE("bilinearity under scalar multiples is exact") {
    test_util::Rng rng(2);
    for (int it = 0; it < 100; ++it) {
        const MinkVector v = rng.vec(), w = rng.vec();
        const double s = rng.uniform(0.5, 2.0);
        const double lhs = mink_inner(v * s, w);
        const double rhs = s * mink_inner(v, w);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(mink_inner(v, w) - mink_inner(w, v)) == 0.0);
        const MinkVector cs = mink_cross(v * s, w);
        const MinkVector sc = mink_cross(v, w) * s;
        CHECK(coord_norm(cs - sc) <= 1e-14 * std::max(1.0, coord_norm(sc)));
    }
}

TEST_CASE("causal classification") {
    auto c = causal_class(e1 + e3);
    CHECK(c.kind == CausalKind::Timelike);
    CHECK(c.orientation == Orientation::Future);

    c = causal_class(e2);
    CHECK(c.kind == CausalKind::Spacelike);
    CHECK(c.orientation == Orientation::None);

    c = causal_class(e1);
    CHECK(c.kind == CausalKind::Null);
    CHECK(c.orientation == Orientation::Future);

    c = causal_class(-e1 - e3);
    CHECK(c.kind == CausalKind::Timelike);
    CHECK(c.orientation == Orientation::Past);

    c = causal_class({0, 0, 0});
    CHECK(c.kind == CausalKind::Zero);
    CHECK(c.orientation == Orientation::None);

    // tolerance maps nearly-null to Null
    c = causal_class({1.0, 1e-7, 0.0}, 1e-6);
    CHECK(c.kind == CausalKind::Null);

    CHECK_THROWS_AS(causal_class(e1, -1.0), std::invalid_argument);
}
