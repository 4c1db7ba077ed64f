#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flecscope/bifurcation.hpp"

#include <cmath>

using namespace flecscope;

namespace {
Poly X() { return Poly::variable(Var::x); }
Poly Y() { return Poly::variable(Var::y); }
Poly P() { return Poly::variable(Var::p); }
Poly E() { return Poly::variable(Var::eps); }
Rational Q(long long n, long long d = 1) { return Rational(n, d); }

JetTable jets_of(const Poly& f, int order) { return JetTable(f, Rational(0), Rational(0), order); }
}  // namespace

TEST_CASE("theorem 3 example: AC - B^2 = 2*6!*gamma - 24^2*alpha^6 exactly") {
    for (auto [an, ad, gn, gd] : {std::array<long long, 4>{1, 2, 1, 3},
                                  std::array<long long, 4>{2, 3, -1, 2},
                                  std::array<long long, 4>{-1, 1, 5, 7}}) {
        Rational alpha(an, ad), gamma(gn, gd);
        Poly f = X() * Y() + X().pow(5) + Y().pow(3) + Poly(alpha) * X() * X() * Y() +
                 Poly(alpha * alpha) * X().pow(3) * Y() + Poly(gamma) * X().pow(3) * Y() * Y();
        Theorem3Certificate c = classify_theorem3(jets_of(f, 7));
        Rational a6 = alpha * alpha * alpha * alpha * alpha * alpha;
        Rational expect = Rational(2) * 720 * gamma - Rational(576) * a6;
        CHECK(c.ac_b2 == expect);
    }
}

TEST_CASE("theorem 3 kinds switch at gamma = (2/5) alpha^6") {
    Rational alpha(1, 2);
    Rational a6 = alpha * alpha * alpha * alpha * alpha * alpha;
    auto build = [&](Rational gamma) {
        return X() * Y() + X().pow(5) + Y().pow(3) + Poly(alpha) * X() * X() * Y() +
               Poly(alpha * alpha) * X().pow(3) * Y() + Poly(gamma) * X().pow(3) * Y() * Y();
    };
    CHECK(classify_theorem3(jets_of(build(Q(2, 5) * a6 + Q(1)), 7)).kind == Theorem3Kind::lips);
    CHECK(classify_theorem3(jets_of(build(Q(2, 5) * a6 - Q(1)), 7)).kind ==
          Theorem3Kind::bec_a_bec);
    CHECK(classify_theorem3(jets_of(build(Q(2, 5) * a6), 7)).kind == Theorem3Kind::cusp_flag);
}

TEST_CASE("theorem 3a: swallowtail of a double biflecnode") {
    Poly f = X() * Y() + Y().pow(3) + Q(1, 3) * X() * X() * Y() + X().pow(6);
    Theorem3Certificate c = classify_theorem3(jets_of(f, 7));
    CHECK(c.kind == Theorem3Kind::swallowtail_biflec);
    CHECK(c.f60 == 720);
}

TEST_CASE("higher-conic rows on the printed examples") {
    // f = y^2/2 + x^4 + a x^3 y + (2b^2 + 3/8 a^2) x^2 y^2 + b x y^2
    auto build = [&](Rational a, Rational b, int sign) {
        Rational s(sign);
        return Y() * Y() / Q(2) + Poly(s) * X().pow(4) + Poly(a) * X().pow(3) * Y() +
               Poly(Rational(2) * b * b + s * Rational(3, 8) * a * a) * X() * X() * Y() * Y() +
               Poly(b) * X() * Y() * Y();
    };
    for (int sign : {1, -1}) {
        HigherConic h1 = classify_higher_conic(jets_of(build(Q(1, 2), Q(1, 3), sign), 6));
        CHECK(h1.morse == 0);
        CHECK(h1.row == ConicRow::A2A6);
        HigherConic h2 = classify_higher_conic(jets_of(build(Q(1, 2), Q(0), sign), 6));
        CHECK(h2.row == ConicRow::A3A9);
        CHECK(h2.delta == 0);
    }
    // generic A3 surface: first row
    Poly f = Y() * Y() / Q(2) + X().pow(4) + X() * X() * Y() * Y();
    CHECK(classify_higher_conic(jets_of(f, 6)).row == ConicRow::A1A3);
}

TEST_CASE("theorem 4 certificates") {
    // hyperbonode frame: f = xy + x^4 + a x^3y + b xy^3 + y^4
    auto build = [&](Rational a, Rational b) {
        return X() * Y() + X().pow(4) + Poly(a) * X().pow(3) * Y() + Poly(b) * X() * Y().pow(3) +
               Y().pow(4);
    };
    Theorem4Certificate ord = theorem4_hyperbonode(jets_of(build(Q(2), Q(3)), 5));
    CHECK(ord.kind == Theorem4Kind::ordinary);
    CHECK(ord.tangency != 0);
    Theorem4Certificate tang = theorem4_hyperbonode(jets_of(build(Q(4), Q(4)), 5));
    CHECK(tang.kind == Theorem4Kind::bi_hyperbonode);
    CHECK(tang.tangency == 0);

    // flec-hyperbonode: f40 = 0, f50 != 0, factors nonzero
    Poly f = X() * Y() + X().pow(5) + Q(1, 2) * X().pow(3) * Y() + Y().pow(4) +
             Q(1, 3) * X() * Y().pow(3);
    Theorem4Certificate fh = theorem4_hyperbonode(jets_of(f, 5));
    CHECK(fh.kind == Theorem4Kind::flec_hyperbonode);

    // ellipnode frame (c): (x^2+y^2)/2 + quartics
    auto ebuild = [&](Rational f40, Rational f22, Rational f31) {
        return (X() * X() + Y() * Y()) / Q(2) + Poly(f40 / 24) * (X().pow(4) + Y().pow(4)) +
               Poly(f22 / 4) * X() * X() * Y() * Y() +
               Poly(f31 / 6) * (X().pow(3) * Y() + X() * Y().pow(3));
    };
    Theorem4Certificate e1 = theorem4_ellipnode(jets_of(ebuild(Q(3), Q(1), Q(0)), 4));
    CHECK(e1.kind == Theorem4Kind::bi_ellipnode);  // (f40-3f22)^2 = 0
    Theorem4Certificate e2 = theorem4_ellipnode(jets_of(ebuild(Q(5), Q(1), Q(0)), 4));
    CHECK(e2.kind == Theorem4Kind::ordinary);
}

TEST_CASE("D4 classification") {
    // x^3 - xy^2 + a x^3 y + b y^4: D4- stable iff b not in {0, a, -a}
    auto build = [&](Rational a, Rational b) {
        return X().pow(3) - X() * Y() * Y() + Poly(a) * X().pow(3) * Y() + Poly(b) * Y().pow(4);
    };
    D4Certificate ok = classify_d4(jets_of(build(Q(1, 4), Q(1, 5)), 4));
    CHECK(ok.kind == D4Kind::d4_minus);
    CHECK(ok.kernel_dirs.size() == 3);
    CHECK(ok.nondegenerate);

    D4Certificate bad = classify_d4(jets_of(build(Q(1, 4), Q(0)), 4));
    CHECK(!bad.nondegenerate);

    D4Certificate bad2 = classify_d4(jets_of(build(Q(1, 4), Q(1, 4)), 4));
    CHECK(!bad2.nondegenerate);

    // D4+ : one real kernel direction
    Poly fp = X().pow(3) + X() * Y() * Y() + Q(1, 5) * Y().pow(4) + Q(1, 7) * X().pow(4);
    D4Certificate plus = classify_d4(jets_of(fp, 4));
    CHECK(plus.kind == D4Kind::d4_plus);
    CHECK(plus.kernel_dirs.size() == 1);
}

TEST_CASE("godron certificate for the bigodron family") {
    // f = y^2/2 - x^2 y + x^4/2 + x^3 y: A4 stratum at the origin
    Poly f = Y() * Y() / Q(2) - X() * X() * Y() + X().pow(4) / Q(2) + X().pow(3) * Y();
    GodronCertificate c = godron_certificate(jets_of(f, 6));
    CHECK(c.f20 == 0);
    CHECK(c.f11 == 0);
    CHECK(c.f30 == 0);
    CHECK(c.double_godron == 0);
    CHECK(c.not_triple != 0);
}

TEST_CASE("A3 certificate of the reduced normal family") {
    // f = a x^4/12 + b x^3 y/3 + c x^2y^2/2 + y^2/2 (- eps x^2/2 along the family)
    auto build = [&](Rational a, Rational b, Rational c) {
        return Poly(a) * X().pow(4) / Q(12) + Poly(b) * X().pow(3) * Y() / Q(3) +
               Poly(c) * X() * X() * Y() * Y() / Q(2) + Y() * Y() / Q(2);
    };
    A3Certificate ell = a3_certificate(jets_of(build(Q(1), Q(0), Q(1)), 4));
    CHECK(ell.critical_f20 == 0);
    CHECK(ell.critical_f30 == 0);
    CHECK(ell.delta == Q(1));
    CHECK(ell.a_delta > 0);  // elliptic umbrella

    // a = 1, c = -1: the eps=0 umbrella slice is a real pair of tangent
    // parabolas (delta X^2 + a Y^4 = -X^2 + Y^4)
    A3Certificate hyp = a3_certificate(jets_of(build(Q(1), Q(0), Q(-1)), 4));
    CHECK(hyp.a_delta < 0);  // hyperbolic umbrella

    // g != 0 shear invariance: c_eff = c - g^2/d with g = f12
    Poly g = build(Q(1), Q(0), Q(1)) + Q(1, 4) * X() * Y() * Y();
    A3Certificate sheared = a3_certificate(jets_of(g, 4));
    CHECK(sheared.c_eff == Q(1) - Q(1, 4));
}

TEST_CASE("ide node residuals locate hyperbolic and elliptic nodes") {
    // D4- family at eps=1/2: asymptotic IDE has hyperbonodes at (0,0), (+-1/2, -1/2)
    Poly f = Q(1, 2) / Q(2) * (X() * X() - Y() * Y()) + (X() * X() * Y() - Y().pow(3)) / Q(2);
    IdeSurface A = asymptotic_ide(MongeSurface{f});
    auto [r0, r1] = ide_node_residuals(A);
    std::array<Rational, kNumVars> origin{Q(0), Q(0), Q(0), Q(0)};
    CHECK(r0.eval(origin) == 0);
    CHECK(r1.eval(origin) == 0);
    std::array<Rational, kNumVars> hb{Q(1, 2), Q(-1, 2), Q(0), Q(0)};
    CHECK(r0.eval(hb) == 0);
    CHECK(r1.eval(hb) == 0);
    std::array<Rational, kNumVars> off{Q(1, 4), Q(1, 8), Q(0), Q(0)};
    CHECK((r0.eval(off) != 0 || r1.eval(off) != 0));
}
