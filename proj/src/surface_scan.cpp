#include "flecscope/bifurcation.hpp"

#include "flecscope/detail/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>

namespace flecscope {

const char* bif_kind_name(BifKind k) {
    switch (k) {
        case BifKind::A4_bigodron: return "A4_bigodron";
        case BifKind::flecgodron: return "flecgodron";
        case BifKind::A3: return "A3";
        case BifKind::lips: return "lips";
        case BifKind::bec_a_bec: return "bec_a_bec";
        case BifKind::swallowtail_biflec: return "swallowtail_biflec";
        case BifKind::bi_hyperbonode: return "bi_hyperbonode";
        case BifKind::flec_hyperbonode: return "flec_hyperbonode";
        case BifKind::bi_ellipnode: return "bi_ellipnode";
        case BifKind::D4_plus: return "D4_plus";
        case BifKind::D4_minus: return "D4_minus";
        case BifKind::UW: return "UW";
        case BifKind::gamma_v: return "gamma_v";
        case BifKind::double_hn: return "double_hn";
        case BifKind::flec_hn: return "flec_hn";
    }
    return "?";
}

double census_delta_of(const ScanOptions& opt) {
    return opt.census_delta > 0 ? opt.census_delta : std::max(1e-4, 10 * opt.eps_tol);
}

namespace {

MongeSurface at_eps(const MongeSurface& fam, double e) {
    return MongeSurface{fam.f.subst(Var::eps, Poly(rational_from_double(e)))};
}

DetectOptions detect_opts(const ScanOptions& opt) {
    DetectOptions d;
    d.window = opt.window;
    d.res = opt.res;
    d.tol = opt.tol;
    return d;
}

using detail::NewtonSystem;
using detail::poly_scale;

struct EventDraft {
    BifurcationEvent ev;
    int priority = 0;  // larger = more degenerate stratum, wins dedupe
};

const double kDedupe = 1e-5;

void add_event(std::vector<EventDraft>& drafts, BifurcationEvent ev, int priority,
               const ScanOptions& opt) {
    for (auto& d : drafts) {
        double dist = std::abs(d.ev.eps_star - ev.eps_star) +
                      std::abs(d.ev.x - ev.x) + std::abs(d.ev.y - ev.y);
        if (dist < kDedupe * (opt.window.width() + opt.window.height() + 1)) {
            if (priority > d.priority) {
                d.ev = std::move(ev);
                d.priority = priority;
            }
            return;
        }
    }
    drafts.push_back({std::move(ev), priority});
}

}  // namespace

Census surface_census(const MongeSurface& s, const ScanOptions& opt) {
    DetectOptions d = detect_opts(opt);
    Census c;
    auto g = detect_godrons(s, d);
    c.godrons = int(g.size());
    c.hyperbonodes = int(detect_hyperbonodes(s, d).size());
    c.ellipnodes = int(detect_ellipnodes(s, d).size());
    c.biflecnodes = int(detect_biflecnodes(s, d).size());
    return c;
}

namespace {

bool census_matches_surface(BifKind k, const Census& b, const Census& a) {
    auto dg = a.godrons - b.godrons;
    auto dh = a.hyperbonodes - b.hyperbonodes;
    auto de = a.ellipnodes - b.ellipnodes;
    auto db = a.biflecnodes - b.biflecnodes;
    switch (k) {
        case BifKind::A4_bigodron: return std::abs(dg) == 2 && dh == 0 && de == 0;
        case BifKind::flecgodron: return dg == 0 && dh == 0 && de == 0 && db == 0;
        case BifKind::A3:
            return std::abs(dg) == 2 && dh == -de && std::abs(dh) == 1;
        case BifKind::lips:
        case BifKind::bec_a_bec: return dg == 0 && dh == 0 && de == 0;
        case BifKind::swallowtail_biflec: return std::abs(db) == 2 && dg == 0 && dh == 0;
        case BifKind::bi_hyperbonode: return std::abs(dh) == 2 && dg == 0 && de == 0;
        case BifKind::flec_hyperbonode: return dh == 0 && db == 0 && dg == 0 && de == 0;
        case BifKind::bi_ellipnode: return std::abs(de) == 2 && dg == 0 && dh == 0;
        case BifKind::D4_minus: return dg == 0 && dh == 0 && de == 0;
        case BifKind::D4_plus: return dg == 0 && dh == 0 && de == 0;
        default: return true;
    }
}

// 4th directional derivative of f along the asymptotic (Hessian-kernel)
// direction, as a polynomial: zero exactly where the unique asymptotic line
// of a parabolic point has more than 4-point contact.
Poly quartic_along_asymptote(const Poly& f, bool x_chart) {
    Poly fxx = f.diff(Var::x, 2), fxy = f.diff(Var::x).diff(Var::y), fyy = f.diff(Var::y, 2);
    Poly ax = x_chart ? fyy : -fxy;
    Poly ay = x_chart ? -fxy : fxx;
    Poly out;
    int binom[5] = {1, 4, 6, 4, 1};
    for (int k = 0; k <= 4; ++k) {
        Poly d = f.diff(Var::x, unsigned(4 - k)).diff(Var::y, unsigned(k));
        out += Poly(Rational(binom[k])) * d * ax.pow(unsigned(4 - k)) * ay.pow(unsigned(k));
    }
    return out;
}

}  // namespace

BifurcationEvent classify_A3_surface(const MongeSurface& family, double eps_star, double x,
                                     double y, const ScanOptions& opt) {
    BifurcationEvent ev;
    ev.kind = BifKind::A3;
    ev.eps_star = eps_star;
    ev.eps_lo = eps_star - opt.eps_tol;
    ev.eps_hi = eps_star + opt.eps_tol;
    ev.x = x;
    ev.y = y;
    MongeSurface s = at_eps(family, eps_star);
    // Adapted frame: rotate so the Hessian-kernel direction is the x-axis.
    // At the A3 point the quadratic jet is d*y^2/2 (rank one).
    PolyEvalD fxx(s.f.diff(Var::x, 2)), fxy(s.f.diff(Var::x).diff(Var::y)),
        fyy(s.f.diff(Var::y, 2));
    double a2 = fxx(x, y), b2 = fxy(x, y), c2 = fyy(x, y);
    double kx, ky;  // kernel direction
    if (std::abs(c2) >= std::abs(a2)) {
        kx = c2;
        ky = -b2;
    } else {
        kx = -b2;
        ky = a2;
    }
    double kn = std::hypot(kx, ky);
    if (kn < 1e-13) throw std::domain_error("flat umbilic, not an A3 point");
    kx /= kn;
    ky /= kn;
    std::array<std::array<Rational, 2>, 2> m{
        {{rational_from_double(kx), rational_from_double(-ky)},
         {rational_from_double(ky), rational_from_double(kx)}}};
    Poly g = recentred_graph(s.f, rational_from_double(x), rational_from_double(y), m);
    JetTable J(g, Rational(0), Rational(0), 4);
    A3Certificate cert = a3_certificate(J);
    double sc = J.scale();
    ev.certificate["f20"] = to_string(cert.critical_f20);
    ev.certificate["f11"] = to_string(cert.critical_f11);
    ev.certificate["f30"] = to_string(cert.critical_f30);
    ev.certificate["f21"] = to_string(cert.critical_f21);
    ev.certificate["f22"] = to_string(cert.general_f22);
    ev.certificate["f02"] = to_string(cert.general_f02);
    ev.certificate["morse"] = to_string(cert.morse);
    ev.model["a"] = to_string(cert.a);
    ev.model["b"] = to_string(cert.b);
    ev.model["c_eff"] = to_string(cert.c_eff);
    ev.model["delta"] = to_string(cert.delta);
    ev.model["a_delta"] = to_string(cert.a_delta);
    if (std::abs(to_double(cert.general_f22)) < opt.tol * sc ||
        std::abs(to_double(cert.general_f02)) < opt.tol * sc)
        throw std::domain_error("A3 general position broken (f22 or f02 ~ 0)");
    if (std::abs(to_double(cert.morse)) < opt.tol * sc * sc * sc)
        throw std::domain_error("escalate to classify_higher_conic");
    ev.umbrella_elliptic = cert.a_delta > 0;
    // cone and harmonicity
    IdeSurface aide = asymptotic_ide(s);
    QuadraticCone Q = QuadraticCone::from_ide(
        aide.F(), rational_from_double(x), rational_from_double(y),
        rational_from_double(std::abs(c2) >= std::abs(a2) ? -b2 / c2 : 0.0));
    // the A3 cone lives at the critical point of a^f; its p-coordinate is the
    // double asymptotic slope
    ConeClass cc = classify_position(Q);
    ev.has_cone = true;
    ev.cone_position = cc.label;
    ev.surface_route = cc.conjugate_fibres;
    ev.certificate["Q_xp"] = to_string(Q.q(0, 2));
    SlopeDir ex{Rational(0), Rational(1)}, ep{Rational(1), Rational(0)};
    Rational harm = harmonic_residual_with_pair(Q.q(2, 2), 2 * Q.q(0, 2), Q.q(0, 0), ex, ep);
    ev.certificate["harmonic_residual"] = to_string(harm);
    ev.detail = std::string("umbrella ") + (ev.umbrella_elliptic ? "elliptic" : "hyperbolic");
    return ev;
}

std::vector<BifurcationEvent> scan_family(const MongeSurface& family, double eps_lo,
                                          double eps_hi, const ScanOptions& opt) {
    if (eps_hi <= eps_lo) throw std::invalid_argument("empty eps range");
    const Window2& w = opt.window;
    const double wx = w.width(), wy = w.height();
    const double cap = 0.25 * std::max(wx, wy);
    const double delta = census_delta_of(opt);

    Poly f = family.f;
    Poly fxx = f.diff(Var::x, 2), fxy = f.diff(Var::x).diff(Var::y), fyy = f.diff(Var::y, 2);
    Poly H = fxx * fyy - fxy * fxy;
    if (H.is_zero()) throw std::domain_error("non-generic family: Hessian identically zero");
    Poly W1 = fyy * H.diff(Var::x) - fxy * H.diff(Var::y);
    Poly W2 = fxx * H.diff(Var::y) - fxy * H.diff(Var::x);

    std::vector<EventDraft> drafts;
    const int N = std::max(opt.eps_samples, 5);
    std::vector<double> es(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) es[std::size_t(i)] = eps_lo + (eps_hi - eps_lo) * i / (N - 1);

    // per-sample detections (shared by several seeders)
    std::vector<std::vector<SpecialPoint>> gods(es.size()), hns(es.size()), ens(es.size()),
        bifl(es.size());
    DetectOptions dopt = detect_opts(opt);
    for (std::size_t i = 0; i < es.size(); ++i) {
        MongeSurface s = at_eps(family, es[i]);
        gods[i] = detect_godrons(s, dopt);
        hns[i] = detect_hyperbonodes(s, dopt);
        ens[i] = detect_ellipnodes(s, dopt);
        bifl[i] = detect_biflecnodes(s, dopt);
    }

    auto inside = [&](double x, double y) {
        return x >= w.x0 && x <= w.x1 && y >= w.y0 && y <= w.y1;
    };
    auto in_range = [&](double e) { return e >= eps_lo - 1e-12 && e <= eps_hi + 1e-12; };

    auto finish_event = [&](BifurcationEvent& ev, BifKind kind) {
        ev.kind = kind;
        ev.eps_lo = ev.eps_star - opt.eps_tol;
        ev.eps_hi = ev.eps_star + opt.eps_tol;
    };

    // ---- D4 flat umbilics: f_xx = f_xy = f_yy = 0 --------------------------
    {
        NewtonSystem sys({fxx, fxy, fyy}, {Var::x, Var::y, Var::eps});
        PolyEvalD exx(fxx), exy(fxy), eyy(fyy);
        const int G = 7;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (int k = 0; k < G; ++k) {
                    std::array<double, 4> pt{w.x0 + (i + 0.5) * wx / G, w.y0 + (j + 0.5) * wy / G,
                                             0.0,
                                             eps_lo + (k + 0.5) * (eps_hi - eps_lo) / G};
                    if (!sys.solve(pt, 1e-11 * poly_scale(fxx), cap)) continue;
                    if (!inside(pt[0], pt[1]) || !in_range(pt[3])) continue;
                    MongeSurface s = at_eps(family, pt[3]);
                    std::array<std::array<Rational, 2>, 2> id{
                        {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
                    Poly g = recentred_graph(s.f, rational_from_double(pt[0]),
                                             rational_from_double(pt[1]), id);
                    JetTable J(g, Rational(0), Rational(0), 4);
                    // snap the quadratic part (numerically zero at the solution)
                    std::map<std::pair<int, int>, Rational> snapped;
                    double sc = J.scale();
                    for (int a = 0; a <= 4; ++a)
                        for (int b = 0; a + b <= 4; ++b) {
                            Rational v = J.f(a, b);
                            if (a + b == 2 && std::abs(to_double(v)) < 1e-7 * sc) v = 0;
                            snapped[{a, b}] = v;
                        }
                    D4Certificate cert;
                    try {
                        cert = classify_d4(JetTable::from_map(snapped, 4));
                    } catch (const std::domain_error& e) {
                        BifurcationEvent ev;
                        ev.eps_star = pt[3];
                        ev.x = pt[0];
                        ev.y = pt[1];
                        ev.detail = std::string("degenerate flat umbilic: ") + e.what();
                        ev.certificate["degenerate"] = "1";
                        finish_event(ev, BifKind::D4_minus);
                        add_event(drafts, ev, 100, opt);
                        continue;
                    }
                    BifurcationEvent ev;
                    ev.eps_star = pt[3];
                    ev.x = pt[0];
                    ev.y = pt[1];
                    for (std::size_t d = 0; d < cert.kernel_dirs.size(); ++d) {
                        ev.certificate["kernel_dir_" + std::to_string(d)] =
                            to_string(cert.kernel_dirs[d][0]) + ":" +
                            to_string(cert.kernel_dirs[d][1]);
                        ev.certificate["quartic_" + std::to_string(d)] =
                            to_string(cert.quartic_values[d]);
                    }
                    if (!cert.nondegenerate) {
                        ev.detail = "degenerate flat umbilic, codim >= 2";
                        ev.certificate["degenerate"] = "1";
                    }
                    finish_event(ev, cert.kind == D4Kind::d4_minus ? BifKind::D4_minus
                                                                   : BifKind::D4_plus);
                    add_event(drafts, ev, 100, opt);
                }
    }

    // ---- godron strata: A4 bigodron and flecgodron -------------------------
    for (bool xchart : {true, false}) {
        const Poly& W = xchart ? W1 : W2;
        Poly Jg = H.diff(Var::x) * W.diff(Var::y) - H.diff(Var::y) * W.diff(Var::x);
        NewtonSystem a4sys({H, W, Jg}, {Var::x, Var::y, Var::eps});
        Poly V4 = quartic_along_asymptote(f, xchart);
        NewtonSystem fgsys({H, W, V4}, {Var::x, Var::y, Var::eps});

        // seeds: godron pairs that approach each other between samples, and
        // godrons whose bigodron certificate is small
        for (std::size_t i = 0; i < es.size(); ++i) {
            for (const auto& g1 : gods[i]) {
                // bigodron seed from the certificate
                auto it = g1.certificate.find("3*f21^2-f02*f40");
                for (std::size_t j = 0; j < gods[i].size(); ++j) {
                    const auto& g2 = gods[i][j];
                    double d2 = std::hypot(g1.x - g2.x, g1.y - g2.y);
                    if (&g1 != &g2 && d2 < 0.25 * std::max(wx, wy)) {
                        std::array<double, 4> pt{0.5 * (g1.x + g2.x), 0.5 * (g1.y + g2.y), 0,
                                                 es[i]};
                        if (a4sys.solve(pt, 1e-10 * poly_scale(H), cap) && inside(pt[0], pt[1]) &&
                            in_range(pt[3])) {
                            MongeSurface s = at_eps(family, pt[3]);
                            try {
                                JetTable J = adapted_godron_jets(s, pt[0], pt[1], 6, nullptr);
                                GodronCertificate c = godron_certificate(J);
                                double sc = J.scale();
                                if (std::abs(to_double(c.double_godron)) > 1e-5 * sc * sc)
                                    continue;
                                BifurcationEvent ev;
                                ev.eps_star = pt[3];
                                ev.x = pt[0];
                                ev.y = pt[1];
                                ev.certificate["3*f21^2-f02*f40"] = to_string(c.double_godron);
                                ev.certificate["9*f21*f31-4*f12*f40-f02*f50"] =
                                    to_string(c.not_triple);
                                if (std::abs(to_double(c.not_triple)) < opt.tol * sc * sc) {
                                    ev.detail = "triple godron candidate (codim >= 2)";
                                }
                                finish_event(ev, BifKind::A4_bigodron);
                                add_event(drafts, ev, 90, opt);
                            } catch (const std::domain_error&) {
                            }
                        }
                    }
                }
                (void)it;
                // flecgodron seed: biflecnode close to this godron
                for (const auto& bf : bifl[i]) {
                    double d2 = std::hypot(g1.x - bf.x, g1.y - bf.y);
                    if (d2 > 0.2 * std::max(wx, wy)) continue;
                    std::array<double, 4> pt{g1.x, g1.y, 0, es[i]};
                    if (fgsys.solve(pt, 1e-10 * std::max(poly_scale(H), poly_scale(V4)), cap) &&
                        inside(pt[0], pt[1]) && in_range(pt[3])) {
                        MongeSurface s = at_eps(family, pt[3]);
                        try {
                            JetTable J = adapted_godron_jets(s, pt[0], pt[1], 6, nullptr);
                            GodronCertificate c = godron_certificate(J);
                            double sc = J.scale();
                            if (std::abs(to_double(c.f40)) > 1e-5 * sc) continue;
                            if (std::abs(to_double(c.f50)) < opt.tol * sc) continue;
                            BifurcationEvent ev;
                            ev.eps_star = pt[3];
                            ev.x = pt[0];
                            ev.y = pt[1];
                            ev.certificate["f40"] = to_string(c.f40);
                            ev.certificate["f50"] = to_string(c.f50);
                            finish_event(ev, BifKind::flecgodron);
                            add_event(drafts, ev, 85, opt);
                        } catch (const std::domain_error&) {
                        }
                    }
                }
            }
        }
    }

    // ---- A3: Morse critical points of a^f ----------------------------------
    {
        IdeSurface aide = asymptotic_ide(family);
        const Poly& A = aide.F();
        NewtonSystem sys({A, A.diff(Var::x), A.diff(Var::y), A.diff(Var::p)},
                         {Var::x, Var::y, Var::p, Var::eps});
        const int G = 6;
        double ascale = poly_scale(A);
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (int k = 0; k < G; ++k)
                    for (int l = 0; l < G; ++l) {
                        std::array<double, 4> pt{
                            w.x0 + (i + 0.5) * wx / G, w.y0 + (j + 0.5) * wy / G,
                            -2.0 + (k + 0.5) * 4.0 / G,
                            eps_lo + (l + 0.5) * (eps_hi - eps_lo) / G};
                        if (!sys.solve(pt, 1e-11 * ascale, cap)) continue;
                        if (!inside(pt[0], pt[1]) || !in_range(pt[3])) continue;
                        try {
                            BifurcationEvent ev =
                                classify_A3_surface(family, pt[3], pt[0], pt[1], opt);
                            ev.p = pt[2];
                            ev.has_p = true;
                            finish_event(ev, BifKind::A3);
                            add_event(drafts, ev, 80, opt);
                        } catch (const std::domain_error& e) {
                            if (std::strstr(e.what(), "higher_conic")) {
                                BifurcationEvent ev;
                                ev.eps_star = pt[3];
                                ev.x = pt[0];
                                ev.y = pt[1];
                                ev.detail = "higher-codimension conic point (A2/A6 or A3/A9)";
                                ev.certificate["degenerate"] = "1";
                                finish_event(ev, BifKind::A3);
                                add_event(drafts, ev, 80, opt);
                            }
                        }
                    }
    }

    // ---- Theorem 3: lips / bec-a-bec / swallowtail --------------------------
    {
        IdeSurface aide = asymptotic_ide(family);
        const Poly& A = aide.F();
        Poly I = inflection_function(aide);
        Poly T = I.diff(Var::x) + Poly::variable(Var::p) * I.diff(Var::y);
        // tangency of {a=0} and {I=0}: cross product components
        Poly wx_ = A.diff(Var::y) * I.diff(Var::p) - A.diff(Var::p) * I.diff(Var::y);
        Poly wy_ = A.diff(Var::p) * I.diff(Var::x) - A.diff(Var::x) * I.diff(Var::p);
        Poly wp_ = A.diff(Var::x) * I.diff(Var::y) - A.diff(Var::y) * I.diff(Var::x);
        // lips / bec-a-bec: surface tangency (pick two cross components)
        for (auto pair : {std::pair<Poly, Poly>{wx_, wy_}, {wx_, wp_}, {wy_, wp_}}) {
            NewtonSystem sys({A, I, pair.first, pair.second}, {Var::x, Var::y, Var::p, Var::eps});
            for (std::size_t i = 0; i < es.size(); ++i) {
                for (const auto& bf : bifl[i]) {
                    if (!std::isfinite(bf.p_witness)) continue;
                    std::array<double, 4> pt{bf.x, bf.y, bf.p_witness, es[i]};
                    if (!sys.solve(pt, 1e-10 * poly_scale(A), cap)) continue;
                    if (!inside(pt[0], pt[1]) || !in_range(pt[3])) continue;
                    MongeSurface s = at_eps(family, pt[3]);
                    try {
                        JetTable J = adapted_node_jets(s, pt[0], pt[1], pt[2], 7, nullptr);
                        double sc = J.scale();
                        std::map<std::pair<int, int>, Rational> snapped;
                        for (int a = 0; a <= 7; ++a)
                            for (int b = 0; a + b <= 7; ++b) {
                                Rational v = J.f(a, b);
                                bool zslot = (a == 2 && b == 0) || (a == 0 && b == 2) ||
                                             (a == 3 && b == 0) || (a == 4 && b == 0);
                                if (zslot && std::abs(to_double(v)) < 1e-5 * sc) v = 0;
                                snapped[{a, b}] = v;
                            }
                        // the Morse-tangency slot 3 f21^2 - 2 f31 f11 must be
                        // treated as zero at the event
                        JetTable Js = JetTable::from_map(snapped, 7);
                        Rational smooth = 3 * Js.f(2, 1) * Js.f(2, 1) - 2 * Js.f(3, 1) * Js.f(1, 1);
                        if (std::abs(to_double(smooth)) > 1e-4 * sc * sc) continue;
                        // force the exact stratum equation for the classifier
                        Rational f21 = Js.f(2, 1), f11 = Js.f(1, 1);
                        if (f21 == 0) continue;
                        snapped[{3, 1}] = 3 * f21 * f21 / (2 * f11);
                        Theorem3Certificate t3 = classify_theorem3(JetTable::from_map(snapped, 7));
                        BifurcationEvent ev;
                        ev.eps_star = pt[3];
                        ev.x = pt[0];
                        ev.y = pt[1];
                        ev.p = pt[2];
                        ev.has_p = true;
                        ev.certificate["A"] = to_string(t3.A);
                        ev.certificate["B"] = to_string(t3.B);
                        ev.certificate["C"] = to_string(t3.C);
                        ev.certificate["AC-B^2"] = to_string(t3.ac_b2);
                        ev.model["AC-B^2"] = to_string(t3.ac_b2);
                        BifKind kind = t3.kind == Theorem3Kind::lips ? BifKind::lips
                                                                     : BifKind::bec_a_bec;
                        if (t3.kind == Theorem3Kind::cusp_flag) {
                            ev.detail = "AC-B^2 = 0: semicubic cusp, codim 2 (reported only)";
                            ev.certificate["cusp_flag"] = "1";
                        }
                        finish_event(ev, kind);
                        add_event(drafts, ev, 70, opt);
                    } catch (const std::domain_error&) {
                    }
                }
            }
        }
        // swallowtail: collision of two biflecnodes
        Poly det3;
        {
            // Jacobian of (A, I, T) in (x,y,p)
            Poly ax = A.diff(Var::x), ay = A.diff(Var::y), ap = A.diff(Var::p);
            Poly ix = I.diff(Var::x), iy = I.diff(Var::y), ip = I.diff(Var::p);
            Poly tx = T.diff(Var::x), ty = T.diff(Var::y), tp = T.diff(Var::p);
            det3 = ax * (iy * tp - ip * ty) - ay * (ix * tp - ip * tx) + ap * (ix * ty - iy * tx);
        }
        NewtonSystem sys({A, I, T, det3}, {Var::x, Var::y, Var::p, Var::eps});
        for (std::size_t i = 0; i + 1 < es.size(); ++i) {
            if (std::abs(int(bifl[i].size()) - int(bifl[i + 1].size())) < 2) continue;
            const auto& more = bifl[i].size() > bifl[i + 1].size() ? bifl[i] : bifl[i + 1];
            double eseed = 0.5 * (es[i] + es[i + 1]);
            for (std::size_t a = 0; a < more.size(); ++a)
                for (std::size_t b = a + 1; b < more.size(); ++b) {
                    if (!std::isfinite(more[a].p_witness) || !std::isfinite(more[b].p_witness))
                        continue;
                    std::array<double, 4> pt{0.5 * (more[a].x + more[b].x),
                                             0.5 * (more[a].y + more[b].y),
                                             0.5 * (more[a].p_witness + more[b].p_witness), eseed};
                    if (!sys.solve(pt, 1e-10 * poly_scale(A), cap)) continue;
                    if (!inside(pt[0], pt[1]) || !in_range(pt[3])) continue;
                    MongeSurface s = at_eps(family, pt[3]);
                    try {
                        JetTable J = adapted_node_jets(s, pt[0], pt[1], pt[2], 7, nullptr);
                        double sc = J.scale();
                        std::map<std::pair<int, int>, Rational> snapped;
                        for (int ii = 0; ii <= 7; ++ii)
                            for (int jj = 0; ii + jj <= 7; ++jj) {
                                Rational v = J.f(ii, jj);
                                bool zslot = (ii == 2 && jj == 0) || (ii == 0 && jj == 2) ||
                                             (ii == 3 && jj == 0) || (ii == 4 && jj == 0) ||
                                             (ii == 5 && jj == 0);
                                if (zslot && std::abs(to_double(v)) < 1e-5 * sc) v = 0;
                                snapped[{ii, jj}] = v;
                            }
                        Theorem3Certificate t3 = classify_theorem3(JetTable::from_map(snapped, 7));
                        if (t3.kind != Theorem3Kind::swallowtail_biflec) continue;
                        BifurcationEvent ev;
                        ev.eps_star = pt[3];
                        ev.x = pt[0];
                        ev.y = pt[1];
                        ev.p = pt[2];
                        ev.has_p = true;
                        ev.certificate["f50"] = to_string(t3.f50);
                        ev.certificate["f60"] = to_string(t3.f60);
                        ev.certificate["3*f21^2-2*f31*f11"] = to_string(t3.smooth);
                        finish_event(ev, BifKind::swallowtail_biflec);
                        add_event(drafts, ev, 75, opt);
                    } catch (const std::domain_error&) {
                    }
                }
        }
    }

    // ---- Theorem 4: node collisions -----------------------------------------
    {
        IdeSurface aide = asymptotic_ide(family);
        const Poly& A = aide.F();
        Poly I = inflection_function(aide);
        detail::TwoSlopeSystem tangency_sys(A, I, false);
        detail::TwoSlopeSystem flec_sys(A, I, true);
        double asc = std::max(1.0, poly_scale(A));
        auto solve_pair = [&](std::array<double, 5>& v, bool flec_mode) {
            return (flec_mode ? flec_sys : tangency_sys).solve(v, 1e-10 * asc, cap);
        };

        // seeds from hyperbonode count changes (bi-hn) and biflec/hn proximity (flec-hn)
        for (std::size_t i = 0; i + 1 < es.size(); ++i) {
            bool hn_change = std::abs(int(hns[i].size()) - int(hns[i + 1].size())) >= 2;
            const auto& more = hns[i].size() > hns[i + 1].size() ? hns[i] : hns[i + 1];
            double eseed = 0.5 * (es[i] + es[i + 1]);
            if (hn_change) {
                for (std::size_t a = 0; a < more.size(); ++a)
                    for (std::size_t b = a + 1; b < more.size(); ++b) {
                        double p1 = std::atof(more[a].certificate.count("p_1")
                                                  ? more[a].certificate.at("p_1").c_str()
                                                  : "0");
                        double p2 = std::atof(more[a].certificate.count("p_2")
                                                  ? more[a].certificate.at("p_2").c_str()
                                                  : "0");
                        std::array<double, 5> v{0.5 * (more[a].x + more[b].x),
                                                0.5 * (more[a].y + more[b].y), p1, p2, eseed};
                        if (!solve_pair(v, false)) continue;
                        if (!inside(v[0], v[1]) || !in_range(v[4]) ||
                            std::abs(v[2] - v[3]) < 1e-7)
                            continue;
                        MongeSurface s = at_eps(family, v[4]);
                        BifurcationEvent ev;
                        ev.eps_star = v[4];
                        ev.x = v[0];
                        ev.y = v[1];
                        try {
                            JetTable J = adapted_node_jets(s, v[0], v[1], v[2], 5, nullptr);
                            double sc = J.scale();
                            std::map<std::pair<int, int>, Rational> snapped;
                            for (int ii = 0; ii <= 5; ++ii)
                                for (int jj = 0; ii + jj <= 5; ++jj) {
                                    Rational val = J.f(ii, jj);
                                    bool zslot = (ii == 2 && jj == 0) || (ii == 0 && jj == 2) ||
                                                 (ii == 3 && jj == 0) || (ii == 0 && jj == 3);
                                    if (zslot && std::abs(to_double(val)) < 1e-5 * sc) val = 0;
                                    snapped[{ii, jj}] = val;
                                }
                            Theorem4Certificate t4 =
                                theorem4_hyperbonode(JetTable::from_map(snapped, 5));
                            ev.certificate["tangency"] = to_string(t4.tangency);
                            double t4scale = std::pow(sc, 3);
                            if (std::abs(to_double(t4.tangency)) > 1e-4 * std::max(1.0, t4scale))
                                continue;
                        } catch (const std::domain_error&) {
                            continue;
                        }
                        finish_event(ev, BifKind::bi_hyperbonode);
                        add_event(drafts, ev, 60, opt);
                    }
            }
            // flec-hn: a biflecnode near a hyperbonode
            for (const auto& bf : bifl[i])
                for (const auto& hn : hns[i]) {
                    if (std::hypot(bf.x - hn.x, bf.y - hn.y) > 0.2 * std::max(wx, wy)) continue;
                    if (!std::isfinite(bf.p_witness)) continue;
                    double q1 = std::atof(hn.certificate.count("p_1")
                                              ? hn.certificate.at("p_1").c_str()
                                              : "0");
                    double q2 = std::atof(hn.certificate.count("p_2")
                                              ? hn.certificate.at("p_2").c_str()
                                              : "0");
                    double other = std::abs(q1 - bf.p_witness) > std::abs(q2 - bf.p_witness) ? q1
                                                                                             : q2;
                    std::array<double, 5> v{hn.x, hn.y, bf.p_witness, other, es[i]};
                    if (!solve_pair(v, true)) continue;
                    if (!inside(v[0], v[1]) || !in_range(v[4]) || std::abs(v[2] - v[3]) < 1e-7)
                        continue;
                    MongeSurface s = at_eps(family, v[4]);
                    BifurcationEvent ev;
                    ev.eps_star = v[4];
                    ev.x = v[0];
                    ev.y = v[1];
                    try {
                        JetTable J = adapted_node_jets(s, v[0], v[1], v[2], 6, nullptr);
                        double sc = J.scale();
                        std::map<std::pair<int, int>, Rational> snapped;
                        for (int ii = 0; ii <= 6; ++ii)
                            for (int jj = 0; ii + jj <= 6; ++jj) {
                                Rational val = J.f(ii, jj);
                                bool zslot = (ii == 2 && jj == 0) || (ii == 0 && jj == 2) ||
                                             (ii == 3 && jj == 0) || (ii == 0 && jj == 3) ||
                                             (ii == 4 && jj == 0);
                                if (zslot && std::abs(to_double(val)) < 1e-5 * sc) val = 0;
                                snapped[{ii, jj}] = val;
                            }
                        Theorem4Certificate t4 =
                            theorem4_hyperbonode(JetTable::from_map(snapped, 6));
                        if (t4.kind != Theorem4Kind::flec_hyperbonode) continue;
                        ev.certificate["f40"] = to_string(t4.f40);
                        ev.certificate["f50"] = to_string(t4.f50);
                        ev.certificate["factors"] =
                            to_string(t4.left_factor * t4.right_factor);
                    } catch (const std::domain_error&) {
                        continue;
                    }
                    finish_event(ev, BifKind::flec_hyperbonode);
                    add_event(drafts, ev, 60, opt);
                }
        }
    }

    // ---- bi-ellipnode --------------------------------------------------------
    {
        auto [r1, r2] = node_residuals(family);
        Poly Jr = r1.diff(Var::x) * r2.diff(Var::y) - r1.diff(Var::y) * r2.diff(Var::x);
        NewtonSystem sys({r1, r2, Jr}, {Var::x, Var::y, Var::eps});
        for (std::size_t i = 0; i + 1 < es.size(); ++i) {
            if (std::abs(int(ens[i].size()) - int(ens[i + 1].size())) < 2) continue;
            const auto& more = ens[i].size() > ens[i + 1].size() ? ens[i] : ens[i + 1];
            double eseed = 0.5 * (es[i] + es[i + 1]);
            for (std::size_t a = 0; a < more.size(); ++a)
                for (std::size_t b = a + 1; b < more.size(); ++b) {
                    std::array<double, 4> pt{0.5 * (more[a].x + more[b].x),
                                             0.5 * (more[a].y + more[b].y), 0, eseed};
                    if (!sys.solve(pt, 1e-10 * poly_scale(r1), cap)) continue;
                    if (!inside(pt[0], pt[1]) || !in_range(pt[3])) continue;
                    MongeSurface s = at_eps(family, pt[3]);
                    BifurcationEvent ev;
                    ev.eps_star = pt[3];
                    ev.x = pt[0];
                    ev.y = pt[1];
                    ev.interpretation_dependent = true;
                    try {
                        JetTable J = adapted_ellipnode_jets(s, pt[0], pt[1], 4, nullptr);
                        double sc = J.scale();
                        std::map<std::pair<int, int>, Rational> snapped;
                        for (int ii = 0; ii <= 4; ++ii)
                            for (int jj = 0; ii + jj <= 4; ++jj) {
                                Rational val = J.f(ii, jj);
                                bool zslot = (ii + jj == 3) || (ii == 1 && jj == 1);
                                if (zslot && std::abs(to_double(val)) < 1e-5 * sc) val = 0;
                                snapped[{ii, jj}] = val;
                            }
                        Rational f20 = snapped[{2, 0}], f02 = snapped[{0, 2}];
                        if (std::abs(to_double(f20 - f02)) < 1e-5 * J.scale())
                            snapped[{0, 2}] = f20;
                        Theorem4Certificate t4 =
                            theorem4_ellipnode(JetTable::from_map(snapped, 4));
                        ev.certificate["theorem4c_tangency"] = to_string(t4.ellip_tangency);
                        if (std::abs(to_double(t4.ellip_tangency)) > 1e-4 * std::pow(J.scale(), 2))
                            continue;
                    } catch (const std::domain_error&) {
                        continue;
                    }
                    finish_event(ev, BifKind::bi_ellipnode);
                    add_event(drafts, ev, 60, opt);
                }
        }
    }

    std::vector<BifurcationEvent> out;
    for (auto& d : drafts) out.push_back(std::move(d.ev));
    // censuses once per surviving event
    for (auto& ev : out) {
        ev.before = surface_census(at_eps(family, ev.eps_star - delta), opt);
        ev.after = surface_census(at_eps(family, ev.eps_star + delta), opt);
        bool ok = census_matches_surface(ev.kind, ev.before, ev.after);
        ev.census_consistent = ok && ev.certificate.count("degenerate") == 0 &&
                               ev.certificate.count("cusp_flag") == 0;
    }
    std::sort(out.begin(), out.end(), [](const BifurcationEvent& a, const BifurcationEvent& b) {
        if (a.eps_star != b.eps_star) return a.eps_star < b.eps_star;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
        if (std::abs(out[i].eps_star - out[i + 1].eps_star) < census_delta_of(opt)) {
            out[i].unresolved_ordering = true;
            out[i + 1].unresolved_ordering = true;
        }
    return out;
}

}  // namespace flecscope
