#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flecscope/poly.hpp"

#include <cmath>
#include <random>

using namespace flecscope;

namespace {

Poly X() { return Poly::variable(Var::x); }
Poly Y() { return Poly::variable(Var::y); }
Poly P() { return Poly::variable(Var::p); }
Poly E() { return Poly::variable(Var::eps); }
Rational Q(long long n, long long d = 1) { return Rational(n, d); }

Poly random_poly(std::mt19937& rng, int max_deg, int terms) {
    std::uniform_int_distribution<int> dexp(0, max_deg);
    std::uniform_int_distribution<long long> dnum(-9, 9);
    std::uniform_int_distribution<long long> dden(1, 5);
    Poly out;
    for (int t = 0; t < terms; ++t) {
        Expo e{std::uint16_t(dexp(rng)), std::uint16_t(dexp(rng)), std::uint16_t(dexp(rng)), 0};
        out += Poly::monomial(Rational(dnum(rng), dden(rng)), e);
    }
    return out;
}

}  // namespace

TEST_CASE("differentiation basics") {
    Poly f = X() * X() * Y();
    CHECK(f.diff(Var::x) == Q(2) * X() * Y());
    CHECK(Poly(Q(7)).diff(Var::x).is_zero());

    // godron normal form: f = y^2/2 - x^2 y + rho x^4/2 has f_xx(0,0) = 0
    Rational rho(2);
    Poly g = Y() * Y() / Q(2) - X() * X() * Y() + Poly(rho) * X().pow(4) / Q(2);
    std::array<Rational, kNumVars> origin{Q(0), Q(0), Q(0), Q(0)};
    CHECK(g.diff(Var::x, 2).eval(origin) == Q(0));
}

TEST_CASE("evaluation, exact and floating") {
    Poly f = X() * X() + Y() * Y();
    CHECK(f.eval({Q(1), Q(1), Q(0), Q(0)}) == Q(2));

    // Hessian of the D4+ family at the origin equals eps^2:
    // f = (eps/2)(x^2+y^2) + (x^2 y + y^3)/2, H(0,0) = (eps+y)(eps+3y) - x^2 |_0
    Poly f4 = E() / Q(2) * (X() * X() + Y() * Y()) + (X() * X() * Y() + Y().pow(3)) / Q(2);
    Poly H = f4.diff(Var::x, 2) * f4.diff(Var::y, 2) -
             f4.diff(Var::x).diff(Var::y) * f4.diff(Var::x).diff(Var::y);
    Poly H0 = H.subst(Var::x, Poly(0)).subst(Var::y, Poly(0));
    CHECK(H0 == E() * E());
}

TEST_CASE("eval_d tracks exact eval on random rational points") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<long long> dnum(-20, 20);
    for (int trial = 0; trial < 120; ++trial) {
        Poly f = random_poly(rng, 4, 8);
        std::array<Rational, kNumVars> pt{Rational(dnum(rng), 7), Rational(dnum(rng), 9),
                                          Rational(dnum(rng), 11), Rational(0)};
        double exact = to_double(f.eval(pt));
        double approx = f.eval_d({to_double(pt[0]), to_double(pt[1]), to_double(pt[2]), 0.0});
        CHECK(std::abs(exact - approx) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("product rule, exact, random operands") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Poly a = random_poly(rng, 3, 6), b = random_poly(rng, 3, 6);
        Poly lhs = (a * b).diff(Var::x);
        Poly rhs = a * b.diff(Var::x) + b * a.diff(Var::x);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("resultant eliminates the slope variable") {
    CHECK_THROWS_AS(resultant(Poly(Q(1)), Poly(Q(2)), Var::p), std::invalid_argument);

    Poly r = resultant(P() - X(), P() - Y(), Var::p);
    CHECK((r.proportional_to(X() - Y())));

    // Pushkar family: F = x^2 + xp + p^2 + (y-1)^2/2 - eps
    Poly F = X() * X() + X() * P() + P() * P() + (Y() - Poly(Q(1))).pow(2) / Q(2) - E();
    Poly D = resultant(F, F.diff(Var::p), Var::p);
    Poly Dexpect = Q(3, 4) * X() * X() + (Y() - Poly(Q(1))).pow(2) / Q(2) - E();
    CHECK(D.proportional_to(Dexpect));

    Poly I = F.diff(Var::x) + P() * F.diff(Var::y);
    Poly R = resultant(F, I, Var::p);
    Poly Rexpect = Q(4) * X() * X() + (Q(1, 2) * Poly(Q(1)) - E()) * Y() * Y() - Y().pow(3) -
                   Q(2) * X() * X() * Y() + X() * X() * Y() * Y() + Y().pow(4) / Q(2);
    CHECK(R.proportional_to(Rexpect));
}

TEST_CASE("resultant vanishes exactly at common-root projections") {
    // A = (p - x)(p - y - 1), B = (p - x^2)(p + y)
    Poly A = (P() - X()) * (P() - Y() - Poly(Q(1)));
    Poly B = (P() - X() * X()) * (P() + Y());
    Poly R = resultant(A, B, Var::p);
    std::mt19937 rng(3);
    std::uniform_int_distribution<long long> dnum(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        Rational x0(dnum(rng), 3), y0(dnum(rng), 3);
        std::array<Rational, kNumVars> pt{x0, y0, Q(0), Q(0)};
        bool common = (x0 == x0 * x0) || (x0 == -y0) || (y0 + 1 == x0 * x0) || (y0 + 1 == -y0);
        CHECK((R.eval(pt) == 0) == common);
    }
}

TEST_CASE("numeric p-root scan agrees with the resultant zero set") {
    Poly A = P() * P() - X();
    Poly B = P() - Y();
    Poly R = resultant(A, B, Var::p);  // vanishes iff y^2 = x
    for (double x0 = -1.0; x0 <= 1.0; x0 += 0.25) {
        for (double y0 = -1.0; y0 <= 1.0; y0 += 0.25) {
            double rv = R.eval_d({x0, y0, 0, 0});
            bool zero = std::abs(rv) < 1e-12;
            CHECK(zero == (std::abs(y0 * y0 - x0) < 1e-12));
        }
    }
}

TEST_CASE("jets reproduce partial derivatives exactly") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        Poly f = random_poly(rng, 4, 7).subst(Var::p, Poly(Q(0)));
        Rational x0(1, 3), y0(-2, 5);
        Jet2 jet(f, x0, y0, 4);
        for (int i = 0; i + 0 <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j) {
                Poly d = f.diff(Var::x, unsigned(i)).diff(Var::y, unsigned(j));
                CHECK(jet.partial(i, j) == d.eval({x0, y0, Q(0), Q(0)}));
            }
    }
}

TEST_CASE("exact division and proportionality") {
    Poly a = (X() + Y()).pow(3) * (P() - X());
    Poly b = (X() + Y()).pow(2);
    CHECK(divide_exact(a, b) == (X() + Y()) * (P() - X()));
    CHECK_THROWS_AS(divide_exact(X() * X() + Poly(Q(1)), X()), std::domain_error);
    CHECK((Q(3) * a).proportional_to(a));
    CHECK(!a.proportional_to(a + Poly(Q(1))));
}
