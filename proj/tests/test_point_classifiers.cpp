#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flecscope/points.hpp"

#include <cmath>

using namespace flecscope;

namespace {
Poly X() { return Poly::variable(Var::x); }
Poly Y() { return Poly::variable(Var::y); }
Rational Q(long long n, long long d = 1) { return Rational(n, d); }

MongeSurface d4_minus(Rational eps) {
    Poly f = Poly(eps) / Q(2) * (X() * X() - Y() * Y()) + (X() * X() * Y() - Y().pow(3)) / Q(2);
    return MongeSurface{f};
}
}  // namespace

TEST_CASE("Platonova godron: simple for rho != 1, flagged at rho = 1") {
    DetectOptions opt;
    opt.window = {-0.6, 0.6, -0.6, 0.6};
    {
        Poly f = Y() * Y() / Q(2) - X() * X() * Y() + Q(2) * X().pow(4) / Q(2);
        auto g = detect_godrons(MongeSurface{f}, opt);
        REQUIRE(g.size() == 1);
        CHECK(std::abs(g[0].x) < 1e-8);
        CHECK(std::abs(g[0].y) < 1e-8);
        CHECK(!g[0].flagged);
        // certificate value 3 f21^2 - f02 f40 = 12 - 24 = -12
        CHECK(g[0].certificate.at("3*f21^2-f02*f40") == "-12");
    }
    {
        // rho = 1: infinitely degenerate godron candidate
        Poly f = (Y() - X() * X()).pow(2) / Q(2);
        auto g = detect_godrons(MongeSurface{f}, opt);
        REQUIRE(!g.empty());
        CHECK(g[0].flagged);
        CHECK(g[0].flag == "non-simple godron candidate");
    }
}

TEST_CASE("D4- family: three negative godrons and three hyperbonodes") {
    DetectOptions opt;
    opt.window = {-1, 1, -1, 1};
    MongeSurface s = d4_minus(Q(1, 2));
    auto gods = detect_godrons(s, opt);
    REQUIRE(gods.size() == 3);
    for (const auto& g : gods) {
        CHECK(g.index == -1);
        CHECK(g.index_characteristic == -1);
    }
    // locations (0,-e), (+/- e/2, -e/2) with e = 1/2
    bool found_center = false;
    for (const auto& g : gods)
        if (std::abs(g.x) < 1e-7 && std::abs(g.y + 0.5) < 1e-7) found_center = true;
    CHECK(found_center);

    auto hns = detect_hyperbonodes(s, opt);
    REQUIRE(hns.size() == 3);
    // pairwise intersections of y=-e, y=x, y=-x: (0,0), (e,-e), (-e,-e)
    bool origin = false;
    for (const auto& h : hns)
        if (std::abs(h.x) < 1e-7 && std::abs(h.y) < 1e-7) origin = true;
    CHECK(origin);

    CHECK(detect_ellipnodes(s, opt).empty());
}

TEST_CASE("D4+ family: one ellipnode at the origin") {
    DetectOptions opt;
    opt.window = {-1, 1, -1, 1};
    Poly f = Q(1, 2) / Q(2) * (X() * X() + Y() * Y()) + (X() * X() * Y() + Y().pow(3)) / Q(2);
    MongeSurface s{f};
    auto ens = detect_ellipnodes(s, opt);
    REQUIRE(ens.size() == 1);
    CHECK(std::abs(ens[0].x) < 1e-8);
    CHECK(std::abs(ens[0].y) < 1e-8);
    auto hns = detect_hyperbonodes(s, opt);
    CHECK(hns.empty());
}

TEST_CASE("Landis-Platonova hyperbonode certificates") {
    DetectOptions opt;
    opt.window = {-0.4, 0.4, -0.4, 0.4};
    // f = xy + x^4 + a x^3 y + b x y^3 + y^4, ordinary when ab != 16
    {
        Poly f = X() * Y() + X().pow(4) + Q(2) * X().pow(3) * Y() + Q(3) * X() * Y().pow(3) +
                 Y().pow(4);
        auto hns = detect_hyperbonodes(MongeSurface{f}, opt);
        REQUIRE(hns.size() >= 1);
        bool origin_ok = false;
        for (const auto& h : hns)
            if (std::abs(h.x) < 1e-8 && std::abs(h.y) < 1e-8 && !h.flagged) origin_ok = true;
        CHECK(origin_ok);
    }
    {
        // ab = 16: tangency certificate vanishes -> flagged bi-hyperbonode
        Poly f = X() * Y() + X().pow(4) + Q(4) * X().pow(3) * Y() + Q(4) * X() * Y().pow(3) +
                 Y().pow(4);
        auto hns = detect_hyperbonodes(MongeSurface{f}, opt);
        REQUIRE(!hns.empty());
        bool flagged = false;
        for (const auto& h : hns)
            if (std::abs(h.x) < 1e-8 && std::abs(h.y) < 1e-8 && h.flagged) flagged = true;
        CHECK(flagged);
    }
}

TEST_CASE("biflecnode detection and the double-biflecnode flag") {
    DetectOptions opt;
    opt.window = {-0.5, 0.5, -0.5, 0.5};
    // the x^2 y term keeps the flecnodal branch transverse to the asymptotic
    // line away from the origin, so the 5-point contact point is isolated
    {
        // biflecnode at the origin with f50 = 120
        Poly f = X() * Y() + X().pow(5) + Y().pow(3) + Q(1, 2) * X() * X() * Y();
        auto bs = detect_biflecnodes(MongeSurface{f}, opt);
        REQUIRE(!bs.empty());
        bool origin_ok = false;
        for (const auto& b : bs)
            if (std::abs(b.x) < 1e-7 && std::abs(b.y) < 1e-7 && !b.flagged) origin_ok = true;
        CHECK(origin_ok);
        CHECK(bs[0].certificate.at("f50") == "120");
    }
    {
        // f50 = 0, f60 != 0: double biflecnode candidate
        Poly f = X() * Y() + X().pow(6) + Y().pow(3) + Q(1, 2) * X() * X() * Y();
        auto bs = detect_biflecnodes(MongeSurface{f}, opt);
        bool flagged = false;
        for (const auto& b : bs)
            if (std::abs(b.x) < 1e-6 && std::abs(b.y) < 1e-6 && b.flagged) flagged = true;
        CHECK(flagged);
    }
    {
        // generic quadric perturbation: no 4-point-contact asymptotics
        Poly f = X() * Y() + X() * X() * X() / Q(7);
        auto bs = detect_biflecnodes(MongeSurface{f}, opt);
        CHECK(bs.empty());
    }
}

TEST_CASE("hyperbonode crossing slopes carry distinct branch tags") {
    DetectOptions opt;
    opt.window = {-1, 1, -1, 1};
    auto hns = detect_hyperbonodes(d4_minus(Q(1, 2)), opt);
    REQUIRE(!hns.empty());
    for (const auto& h : hns) {
        REQUIRE(h.certificate.count("tag_1"));
        REQUIRE(h.certificate.count("tag_2"));
        CHECK(h.certificate.at("tag_1") != h.certificate.at("tag_2"));
    }
}

TEST_CASE("godron tangency: flecnodal vs parabolic has order 2") {
    DetectOptions opt;
    opt.window = {-1, 1, -1, 1};
    MongeSurface s = d4_minus(Q(1, 2));
    auto gods = detect_godrons(s, opt);
    REQUIRE(gods.size() == 3);
    Poly H = hessian_poly(s);
    Poly R = flecnodal_poly(s);
    for (const auto& g : gods) CHECK(tangency_order(R, H, g.x, g.y) == 2);
}

TEST_CASE("node residuals reject quadrics") {
    CHECK_THROWS_AS(node_residuals(MongeSurface{X() * Y()}), std::domain_error);
    CHECK_THROWS_AS(node_residuals(MongeSurface{X() * X() + Y() * Y()}), std::domain_error);
}
