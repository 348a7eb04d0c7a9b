#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "torick/functionals.hpp"

using namespace torick;
using torick_test::iv;
using torick_test::rv;

namespace {

AlgebraicValue sqrt2_times(long k) {
    return AlgebraicValue::in_ring(2, 2, {Rational(0), Rational(k)});
}

}  // namespace

TEST_CASE("normalized volume of the worked models") {
    auto pp = torick_test::p1xp1_model();
    CHECK(normalized_volume_V(pp) == AlgebraicValue(Rational(2)));

    // homogeneity in the polarization (degree 1 for dim F > 0)
    Vec tripled = pp.polarization().coeffs();
    for (auto& x : tripled) x *= 3;
    CHECK(normalized_volume_V(pp.with_polarization(tripled)) == AlgebraicValue(Rational(6)));

    auto p21 = torick_test::p2xp1_model();
    CHECK(normalized_volume_V(p21) == AlgebraicValue(Rational(3)));

    // dim F = 0 convention: V is the plain top self-intersection
    auto a1 = torick_test::a1_crepant_model();
    CHECK(normalized_volume_V(a1) == AlgebraicValue(Rational(-1, 2)));

    // dim B = 2, c = 2: V = (L^4)/c^{3/2} = 12/(2 sqrt 2) = 3 sqrt 2
    auto q = torick_test::quadric_p2_model();
    CHECK(normalized_volume_V(q) == sqrt2_times(3));
}

TEST_CASE("Donaldson-Futaki on the product models vanishes") {
    auto rep = donaldson_futaki(torick_test::p1xp1_model());
    CHECK(rep.df == AlgebraicValue());
    CHECK(rep.df_sign == 0);
    CHECK(rep.term1 == AlgebraicValue(Rational(-4)));
    CHECK(rep.term2 == AlgebraicValue(Rational(-4)));
    CHECK(rep.c == 1);
    CHECK(rep.dim_f == 1);

    auto rep3 = donaldson_futaki(torick_test::p2xp1_model());
    CHECK(rep3.df == AlgebraicValue());
    CHECK(rep3.term1 == AlgebraicValue(Rational(-18)));
    CHECK(rep3.term2 == AlgebraicValue(Rational(-18)));
}

TEST_CASE("Donaldson-Futaki on the crepant birational model vanishes") {
    auto rep = donaldson_futaki(torick_test::a1_crepant_model());
    CHECK(rep.dim_f == 0);
    CHECK(rep.df == AlgebraicValue());
    CHECK(rep.term2 == AlgebraicValue());
    CHECK_THROWS_AS(df_via_derivative(torick_test::a1_crepant_model()), PreconditionError);
}

TEST_CASE("Donaldson-Futaki of the degeneration to the normal cone") {
    auto m = torick_test::dnc_p2_model();
    CHECK(is_ample(m.polarization()));
    auto rep = donaldson_futaki(m);
    CHECK(rep.volume.value() == AlgebraicValue(Rational(23, 8)));
    CHECK(rep.term1 == AlgebraicValue(Rational(-33, 2)));
    CHECK(rep.term2 == AlgebraicValue(Rational(-69, 4)));
    CHECK(rep.df == AlgebraicValue(Rational(3, 4)));
    CHECK(rep.df_sign == 1);
    // independent route through the derivative of V
    CHECK(df_via_derivative(m) == rep.df);
}

TEST_CASE("Donaldson-Futaki of the multiplicity-2 family") {
    auto m = torick_test::mult2_model();
    CHECK(is_ample(m.polarization()));
    auto rep = donaldson_futaki(m);
    CHECK(rep.volume.value() == AlgebraicValue(Rational(27, 16)));
    CHECK(rep.df == AlgebraicValue(Rational(7, 8)));
    CHECK(df_via_derivative(m) == rep.df);
}

TEST_CASE("invariants over a two-dimensional base live in Q[sqrt 2]") {
    auto m = torick_test::quadric_p2_model();
    auto rep = donaldson_futaki(m);
    CHECK(rep.c == 2);
    CHECK(rep.dim_f == 2);
    CHECK(rep.df == sqrt2_times(48));
    CHECK(rep.df_sign == 1);
    CHECK(df_via_derivative(m) == rep.df);
}

TEST_CASE("derivative route agrees with the explicit formula on every fixture") {
    for (auto m : {torick_test::p1xp1_model(), torick_test::p2xp1_model(),
                   torick_test::dnc_p2_model(), torick_test::mult2_model(),
                   torick_test::quadric_p2_model()}) {
        CHECK(df_via_derivative(m) == donaldson_futaki(m).df);
    }
}

TEST_CASE("pullback invariance of V and DF under star refinements") {
    torick_test::Rng rng(313);
    for (auto m : {torick_test::p1xp1_model(), torick_test::dnc_p2_model(),
                   torick_test::mult2_model()}) {
        auto rep0 = donaldson_futaki(m);
        auto v0 = normalized_volume_V(m);
        FiberedModel cur = m;
        for (int step = 0; step < 3; ++step) {
            const auto& cones = cur.total()->max_cones();
            const auto& c =
                cones[static_cast<size_t>(rng.range(0, static_cast<long>(cones.size()) - 1))];
            IVec v(cur.total()->rank(), Int(0));
            bool nz = false;
            for (size_t idx : c) {
                long coeff = rng.range(0, 2);
                if (coeff) nz = true;
                for (size_t j = 0; j < v.size(); ++j)
                    v[j] += Int(coeff) * cur.total()->rays()[idx][j];
            }
            if (!nz) continue;
            cur = refine_model(cur, primitive(v));
            CHECK(normalized_volume_V(cur) == v0);
            CHECK(donaldson_futaki(cur).df == rep0.df);
        }
    }
}

TEST_CASE("homogeneity of DF in the polarization") {
    for (auto m : {torick_test::p1xp1_model(), torick_test::dnc_p2_model(),
                   torick_test::mult2_model()}) {
        auto rep = donaldson_futaki(m);
        size_t n = m.total_dim();
        for (long a : {2L, 3L, 5L}) {
            Vec scaled = m.polarization().coeffs();
            for (auto& x : scaled) x *= a;
            auto repa = donaldson_futaki(m.with_polarization(scaled));
            Rational factor(1);
            for (size_t i = 0; i < 2 * (n - 1); ++i) factor *= a;
            CHECK(repa.df == factor * rep.df);
        }
    }
}

TEST_CASE("concavity certificates for vertical directions") {
    auto pp = torick_test::p1xp1_model();
    // the only vertical divisor class is a multiple of the central fiber
    TorusDivisor fiber(pp.total(), rv({0, 0, 1, 0}));
    auto [val, sign] = concavity_certificate(pp, fiber);
    CHECK(val == AlgebraicValue());
    CHECK(sign == 0);
    CHECK(hodge_vanishing_product(pp, fiber) == 0);

    auto dnc = torick_test::dnc_p2_model();
    TorusDivisor e(dnc.total(), rv({0, 0, 0, 0, 0, 1}));
    auto [vd, sd] = concavity_certificate(dnc, e);
    CHECK(sd == -1);
    CHECK(hodge_vanishing_product(dnc, e) == 0);
    // the full central fiber D_{r4} + D_{r6} is numerically a pullback:
    // boundary case with certificate zero
    TorusDivisor f0(dnc.total(), rv({0, 0, 0, 1, 0, 1}));
    CHECK(concavity_certificate(dnc, f0).second == 0);

    // non-vertical input is rejected
    TorusDivisor bad(dnc.total(), rv({1, 0, 0, 0, 0, 0}));
    CHECK_THROWS_AS(concavity_certificate(dnc, bad), PreconditionError);

    // irrational certificate over the two-dimensional base:
    // 12 (L^2.E^2) / c^{3/2} = -24/(2 sqrt 2) = -6 sqrt 2
    auto q = torick_test::quadric_p2_model();
    TorusDivisor eq(q.total(), rv({0, 0, 0, 0, 0, 0, 0, 1}));
    auto [vq, sq] = concavity_certificate(q, eq);
    CHECK(vq == sqrt2_times(-6));
    CHECK(sq == -1);
    CHECK(hodge_vanishing_product(q, eq) == 0);
}

TEST_CASE("random vertical directions have nonpositive certificates") {
    torick_test::Rng rng(909);
    for (auto m : {torick_test::dnc_p2_model(), torick_test::mult2_model()}) {
        auto vert = m.vertical_rays();
        for (int iter = 0; iter < 15; ++iter) {
            Vec coeffs(m.total()->rays().size(), Rational(0));
            for (size_t r : vert) coeffs[r] = rng.rational(-3, 3, 2);
            TorusDivisor e(m.total(), coeffs);
            CHECK(concavity_certificate(m, e).second <= 0);
            CHECK(hodge_vanishing_product(m, e) == 0);
        }
    }
}

TEST_CASE("canonical direction detection") {
    auto dnc = torick_test::dnc_p2_model();
    auto a = fiber_proportionality(dnc);
    REQUIRE(a);
    CHECK(*a == -3);  // K_F = -3 L|_F on (P^2, O(1))

    auto pp = torick_test::p1xp1_model();
    auto ap = fiber_proportionality(pp);
    REQUIRE(ap);
    CHECK(*ap == -2);

    CHECK_THROWS_AS(canonical_direction(torick_test::a1_crepant_model()), PreconditionError);
}

TEST_CASE("DF decreases along the canonical path on the degeneration") {
    auto m = torick_test::dnc_p2_model();
    TorusDivisor e = canonical_direction(m);
    PathReport rep = df_path(m, e);
    REQUIRE(rep.t_max);
    CHECK(*rep.t_max == 1);  // the exceptional component contracts at t = 1
    CHECK(rep.derivative_nonpositive);
    CHECK(poly_eval(rep.df_poly, Rational(0)) == AlgebraicValue(Rational(3, 4)));
    // at t_max the polarization is a pullback from the product, so DF = 0
    CHECK(poly_eval(rep.df_poly, Rational(1)) == AlgebraicValue());
    for (auto& [t, s] : rep.derivative_signs) CHECK(s <= 0);

    // path evaluation matches a fresh DF computation at an interior point
    Rational t(1, 3);
    FiberedModel shifted =
        m.with_polarization((m.polarization() + t * e).coeffs());
    CHECK(poly_eval(rep.df_poly, t) == donaldson_futaki(shifted).df);
}

TEST_CASE("zero path direction gives a constant path") {
    auto m = torick_test::p1xp1_model();
    PathReport rep = df_path(m, zero_divisor(m.total()));
    CHECK_FALSE(rep.t_max);  // never leaves the nef cone
    CHECK(rep.derivative_nonpositive);
    CHECK(poly_degree(rep.df_poly) <= 0);
}

TEST_CASE("paths reject directions that change the fiber class") {
    auto m = torick_test::p1xp1_model();
    // O(1,0) restricts to degree 1 on the fiber: c would vary
    TorusDivisor bad(m.total(), rv({1, 0, 0, 0}));
    CHECK_THROWS_AS(df_path(m, bad), PreconditionError);
}

TEST_CASE("normalized DF and base change") {
    auto pp = torick_test::p1xp1_model();
    CHECK(ndf(pp, 1) == AlgebraicValue());
    CHECK(ndf(base_change(pp, 2), 2) == AlgebraicValue());

    auto mm = torick_test::mult2_model();
    auto before = ndf(mm, 1);
    CHECK(before == AlgebraicValue(Rational(7, 8)));
    auto changed = base_change(mm, 2);
    auto after = ndf(changed, 2);
    CHECK(donaldson_futaki(changed).df == AlgebraicValue(Rational(3, 4)));
    CHECK(after == AlgebraicValue(Rational(3, 8)));
    // strict decrease driven by the non-reduced fiber
    CHECK((before - after).sign() == 1);

    // reduced fibers: DF scales exactly by the degree
    auto dnc = torick_test::dnc_p2_model();
    auto dnc2 = base_change(dnc, 2);
    CHECK(donaldson_futaki(dnc2).df == AlgebraicValue(Rational(3, 2)));
    CHECK(ndf(dnc2, 2) == donaldson_futaki(dnc).df);

    CHECK_THROWS_AS(ndf(torick_test::a1_crepant_model(), 1), PreconditionError);
}
