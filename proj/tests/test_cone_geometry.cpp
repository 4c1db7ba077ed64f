#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flecscope/cone.hpp"
#include "flecscope/ide.hpp"

#include <random>

using namespace flecscope;

namespace {
Poly X() { return Poly::variable(Var::x); }
Poly Y() { return Poly::variable(Var::y); }
Poly P() { return Poly::variable(Var::p); }
Rational Q(long long n, long long d = 1) { return Rational(n, d); }

QuadraticCone cone_of(const Poly& F, Rational x = Rational(0), Rational y = Rational(0),
                      Rational p = Rational(0)) {
    return QuadraticCone::from_ide(F, x, y, p);
}
}  // namespace

TEST_CASE("general position checks the three printed inequalities") {
    QuadraticCone sphere = cone_of(X() * X() + Y() * Y() + P() * P());
    auto gp = general_position(sphere);
    CHECK(gp.ok);

    QuadraticCone bad = cone_of(X() * P() + Y() * Y());  // F_xx = 0
    CHECK(!general_position(bad).ok);

    CHECK_THROWS_AS(general_position(cone_of(X() * X())), std::domain_error);  // not Morse
}

TEST_CASE("signature is exact") {
    CHECK(cone_of(X() * X() + Y() * Y() + P() * P()).signature() == std::pair<int, int>{3, 0});
    CHECK(cone_of(X() * X() - Y() * Y() + P() * P()).signature() == std::pair<int, int>{2, 1});
    CHECK(cone_of(-X() * X() - Y() * Y() - P() * P()).signature() == std::pair<int, int>{0, 3});
}

TEST_CASE("positions of the spec examples") {
    // conjugate-fibre definite cone: position d
    ConeClass d = classify_position(cone_of(X() * X() + Y() * Y() + P() * P()));
    CHECK(d.label == ConePosition::d);
    CHECK(d.imaginary);
    CHECK(d.conjugate_fibres);

    // Pushkar cone at eps = 0: definite with F_xp != 0 -> reported as f
    Poly F = X() * X() + X() * P() + P() * P() + (Y() - Poly(Q(1))).pow(2) / Q(2);
    ConeClass f = classify_position(cone_of(F, Q(0), Q(1), Q(0)));
    CHECK(f.label == ConePosition::f);
    CHECK(f.imaginary);
    CHECK(!f.conjugate_fibres);

    // -x^2 + y^2 + p^2: the x-axis (dual-fibre tangent) lies inside -> c
    ConeClass c = classify_position(cone_of(-X() * X() + Y() * Y() + P() * P()));
    CHECK(c.label == ConePosition::c);
    CHECK(c.inside_l2);
    CHECK(!c.inside_l1);

    // x^2 + y^2 - p^2: the p-axis inside -> a
    ConeClass a = classify_position(cone_of(X() * X() + Y() * Y() - P() * P()));
    CHECK(a.label == ConePosition::a);
    CHECK(a.inside_l1);

    // real cone around the y-axis: plane y=0 meets it only at the origin -> b
    ConeClass b = classify_position(
        cone_of(X() * X() + P() * P() - Y() * Y() + X() * P() / Q(4)));
    CHECK(b.label == ConePosition::b);

    // neither axis inside, real plane section -> e
    ConeClass e = classify_position(
        cone_of((X() * X() + Y() * Y() + P() * P()) / Q(2) + Q(2) * X() * P()));
    CHECK(e.label == ConePosition::e);

    // both axes inside a wide real cone -> reported as d (non-conjugate)
    ConeClass dd = classify_position(
        cone_of((Y() * Y() - X() * X() - P() * P()) / Q(2) - Q(2) * X() * P()));
    CHECK(dd.inside_l1);
    CHECK(dd.inside_l2);
    CHECK(dd.label == ConePosition::d);
}

TEST_CASE("position label is scale and sign invariant") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long long> dnum(-4, 4);
    int tested = 0;
    while (tested < 60) {
        std::array<std::array<Rational, 3>, 3> m;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) m[i][j] = m[j][i] = Rational(dnum(rng));
        QuadraticCone qc(m);
        try {
            ConeClass c1 = classify_position(qc);
            std::array<std::array<Rational, 3>, 3> m2 = m, m3 = m;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    m2[i][j] = m[i][j] * 7;
                    m3[i][j] = -m[i][j];
                }
            CHECK(classify_position(QuadraticCone(m2)).label == c1.label);
            CHECK(classify_position(QuadraticCone(m3)).label == c1.label);
            ++tested;
        } catch (const std::domain_error&) {
        }
    }
}

TEST_CASE("conjugate diametral plane") {
    std::array<std::array<Rational, 3>, 3> m{};
    m[0][0] = 1;
    m[1][1] = 1;
    m[2][2] = -1;
    QuadraticCone qc(m);
    auto pl = conjugate_diametral_plane(qc, {Q(0), Q(0), Q(1)});
    CHECK(pl.normal == std::array<Rational, 3>{Q(0), Q(0), Q(-1)});  // plane p = 0
    CHECK(!pl.tangent);
    // a generatrix gives a tangent plane
    auto t = conjugate_diametral_plane(qc, {Q(1), Q(0), Q(1)});
    CHECK(t.tangent);
    // conjugacy of the two axes <=> Q_xp = 0
    auto plx = conjugate_diametral_plane(qc, {Q(1), Q(0), Q(0)});
    CHECK(plx.normal[2] == qc.q(0, 2));
}

TEST_CASE("cross ratio") {
    auto dir = [](Rational u, Rational v) { return SlopeDir{u, v}; };
    // slopes (1, -1; 0, inf) -> -1
    CHECK(cross_ratio(dir(1, 1), dir(-1, 1), dir(0, 1), dir(1, 0)) == Q(-1));
    CHECK(cross_ratio(dir(2, 1), dir(-2, 1), dir(0, 1), dir(1, 0)) == Q(-1));
    CHECK(cross_ratio(dir(1, 1), dir(2, 1), dir(0, 1), dir(1, 0)) == Q(1, 2));
    CHECK_THROWS_AS(cross_ratio(dir(1, 1), dir(1, 1), dir(0, 1), dir(1, 0)),
                    std::invalid_argument);
}

TEST_CASE("harmonicity of cone lines vs axes for a^f Morse points") {
    // cone lines in y=0: a_xx x^2 + a_pp p^2 = 0 vs the x- and p-axes
    SlopeDir ex{Q(0), Q(1)}, ep{Q(1), Q(0)};
    // harmonic residual is the middle coefficient: zero iff Q_xp = 0
    CHECK(harmonic_residual_with_pair(Q(3), Q(0), Q(-5), ex, ep) == 0);
    CHECK(harmonic_residual_with_pair(Q(3), Q(2), Q(-5), ex, ep) != 0);
    // real slopes m, -m against 0, inf have cross ratio -1
    CHECK(cross_ratio(SlopeDir{Q(5), Q(2)}, SlopeDir{Q(-5), Q(2)}, ex, ep) == Q(-1));
}
