#include "flecscope/points.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace flecscope {

const char* point_kind_name(PointKind k) {
    switch (k) {
        case PointKind::godron: return "godron";
        case PointKind::hyperbonode: return "hyperbonode";
        case PointKind::ellipnode: return "ellipnode";
        case PointKind::biflecnode: return "biflecnode";
    }
    return "?";
}

namespace {

double max_coeff(const Poly& c) {
    double m = 0;
    for (const auto& [e, v] : c.terms()) m = std::max(m, std::abs(to_double(v)));
    return m == 0 ? 1.0 : m;
}

struct Newton2 {
    PolyEvalD f, g, fx, fy, gx, gy;
    Newton2(const Poly& F, const Poly& G)
        : f(F), g(G), fx(F.diff(Var::x)), fy(F.diff(Var::y)), gx(G.diff(Var::x)),
          gy(G.diff(Var::y)) {}

    bool refine(double& x, double& y, double tol, double cap) const {
        for (int it = 0; it < 60; ++it) {
            double fv = f(x, y), gv = g(x, y);
            double a = fx(x, y), b = fy(x, y), c = gx(x, y), d = gy(x, y);
            double det = a * d - b * c;
            if (std::abs(det) < 1e-16) return false;
            double dx = (-fv * d + gv * b) / det;
            double dy = (-gv * a + fv * c) / det;
            double len = std::sqrt(dx * dx + dy * dy);
            if (len > cap) {
                dx *= cap / len;
                dy *= cap / len;
            }
            x += dx;
            y += dy;
            if (std::abs(f(x, y)) < tol && std::abs(g(x, y)) < tol) return true;
        }
        return false;
    }
};

// Common zeros of (P1, P2): walk the traced P1 = 0 chains, bracket sign
// changes of P2 along them, polish with 2D Newton.
std::vector<std::pair<double, double>> common_zeros(const Poly& P1, const Poly& P2,
                                                    const Window2& w, int res, double newton_tol) {
    std::vector<std::pair<double, double>> out;
    if (P1.is_zero() || P2.is_zero()) return out;
    TraceOptions topt;
    topt.res = res;
    PlaneCurve pc = trace_curve(P1, w, CurveSource::parabolic, topt);
    PolyEvalD p2(P2);
    Newton2 nt(P1, P2);
    double s1 = max_coeff(P1), s2 = max_coeff(P2);
    double cap = 2.0 * std::max(w.width(), w.height()) / res;
    auto push = [&](double x, double y) {
        if (!nt.refine(x, y, newton_tol * std::max(s1, s2), cap)) return;
        if (x < w.x0 - 1e-9 || x > w.x1 + 1e-9 || y < w.y0 - 1e-9 || y > w.y1 + 1e-9) return;
        for (auto& q : out)
            if (std::abs(q.first - x) + std::abs(q.second - y) < 1e-6 * (w.width() + w.height()))
                return;
        out.emplace_back(x, y);
    };
    for (const auto& ch : pc.chains) {
        for (std::size_t k = 0; k + 1 < ch.pts.size(); ++k) {
            double v0 = p2(ch.pts[k].x, ch.pts[k].y);
            double v1 = p2(ch.pts[k + 1].x, ch.pts[k + 1].y);
            if (v0 == 0) push(ch.pts[k].x, ch.pts[k].y);
            if ((v0 < 0) != (v1 < 0))
                push(0.5 * (ch.pts[k].x + ch.pts[k + 1].x), 0.5 * (ch.pts[k].y + ch.pts[k + 1].y));
            else if (std::abs(v0) < 1e-7 * s2)
                push(ch.pts[k].x, ch.pts[k].y);
        }
    }
    // coarse grid of Newton seeds catches zeros the chain walk misses
    // (tangential or singular intersections of the two zero sets)
    const int G = 20;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j)
            push(w.x0 + (i + 0.5) * w.width() / G, w.y0 + (j + 0.5) * w.height() / G);
    std::sort(out.begin(), out.end());
    return out;
}

Rational rat(double v) { return rational_from_double(v); }

std::string cert_str(const Rational& r) { return to_string(r); }

void require_eps_free(const Poly& f, const char* who) {
    if (f.uses(Var::eps))
        throw std::invalid_argument(std::string(who) + ": substitute eps before detection");
}

}  // namespace

Poly recentred_graph(const Poly& f, const Rational& x0, const Rational& y0,
                     const std::array<std::array<Rational, 2>, 2>& m) {
    std::array<Rational, kNumVars> sh{x0, y0, Rational(0), Rational(0)};
    Poly g = f.shift(sh);
    // temps: p carries new-x, eps carries new-y, then rename back
    Poly X = Poly::variable(Var::p), Y = Poly::variable(Var::eps);
    Poly sub_x = Poly(m[0][0]) * X + Poly(m[0][1]) * Y;
    Poly sub_y = Poly(m[1][0]) * X + Poly(m[1][1]) * Y;
    g = g.subst(Var::x, sub_x).subst(Var::y, sub_y);
    g = g.subst(Var::p, Poly::variable(Var::x)).subst(Var::eps, Poly::variable(Var::y));
    std::array<Rational, kNumVars> o{Rational(0), Rational(0), Rational(0), Rational(0)};
    Poly lin = Poly(g.eval(o)) + Poly(g.diff(Var::x).eval(o)) * Poly::variable(Var::x) +
               Poly(g.diff(Var::y).eval(o)) * Poly::variable(Var::y);
    return g - lin;
}

Poly graph_shear(const Poly& f, const Rational& a, const Rational& b, int order) {
    // Solve G(X,Y) = f(X - a G, Y - b G) by filtration: each pass fixes one
    // more total degree (f has zero 1-jet).
    Poly G = f.truncate_total_degree(order);
    for (int pass = 0; pass < order; ++pass) {
        Poly xs = Poly::variable(Var::x) - Poly(a) * G;
        Poly ys = Poly::variable(Var::y) - Poly(b) * G;
        G = f.subst(Var::x, xs).subst(Var::y, ys).truncate_total_degree(order);
    }
    return G;
}

std::pair<Poly, Poly> node_residuals(const MongeSurface& s) {
    Poly f = s.f.uses(Var::eps) ? s.f.subst(Var::eps, Poly(0)) : s.f;
    Poly A = f.diff(Var::x, 2) / Rational(2);
    Poly B = f.diff(Var::x).diff(Var::y);
    Poly C = f.diff(Var::y, 2) / Rational(2);
    Poly P = f.diff(Var::x, 3) / Rational(6);
    Poly Q = f.diff(Var::x, 2).diff(Var::y) / Rational(2);
    Poly R = f.diff(Var::x).diff(Var::y, 2) / Rational(2);
    Poly S = f.diff(Var::y, 3) / Rational(6);
    Poly r1 = A * A * R - A * C * P - A * B * Q + B * B * P;
    Poly r2 = A * A * S - A * C * Q + B * C * P;
    if (r1.is_zero() && r2.is_zero()) throw std::domain_error("every point is a node");
    return {r1, r2};
}

JetTable adapted_godron_jets(const MongeSurface& s, double x, double y, int order,
                             AdaptedFrame* frame_out) {
    require_eps_free(s.f, "adapted_godron_jets");
    Poly H = hessian_poly(s);
    PolyEvalD Hx(H.diff(Var::x)), Hy(H.diff(Var::y)), Hv(H);
    double tx = -Hy(x, y), ty = Hx(x, y);
    double tn = std::sqrt(tx * tx + ty * ty);
    if (tn < 1e-12) throw std::domain_error("parabolic curve singular at candidate godron");
    tx /= tn;
    ty /= tn;
    double nx = -ty, ny = tx;
    double delta = 1e-5 * std::max(1.0, std::abs(x) + std::abs(y));
    if (Hv(x + delta * nx, y + delta * ny) > 0) {
        nx = -nx;
        ny = -ny;
    }
    std::array<std::array<Rational, 2>, 2> m{{{rat(tx), rat(nx)}, {rat(ty), rat(ny)}}};
    Poly g = recentred_graph(s.f, rat(x), rat(y), m);
    bool zflip = false;
    if (g.diff(Var::y, 2).eval({Rational(0), Rational(0), Rational(0), Rational(0)}) < 0) {
        g = -g;
        zflip = true;
    }
    // keep the 3-frame positively oriented: det[t n] * z_sign > 0
    double det2 = tx * ny - ty * nx;
    double zsign = zflip ? -1.0 : 1.0;
    if (det2 * zsign < 0) {
        std::array<std::array<Rational, 2>, 2> m2{{{-m[0][0], m[0][1]}, {-m[1][0], m[1][1]}}};
        g = recentred_graph(s.f, rat(x), rat(y), m2);
        if (zflip) g = -g;
        m = m2;
        tx = -tx;
        ty = -ty;
    }
    if (frame_out) {
        frame_out->x0 = x;
        frame_out->y0 = y;
        frame_out->basis[0][0] = tx;
        frame_out->basis[1][0] = ty;
        frame_out->basis[0][1] = nx;
        frame_out->basis[1][1] = ny;
        frame_out->z_flipped = zflip;
    }
    return JetTable(g, Rational(0), Rational(0), order);
}

JetTable adapted_node_jets(const MongeSurface& s, double x, double y, double p_over, int order,
                           AdaptedFrame* frame_out) {
    require_eps_free(s.f, "adapted_node_jets");
    // asymptotic directions: null vectors of the quadratic jet
    PolyEvalD fxx(s.f.diff(Var::x, 2)), fxy(s.f.diff(Var::x).diff(Var::y)),
        fyy(s.f.diff(Var::y, 2));
    double A = fxx(x, y), B = 2 * fxy(x, y), C = fyy(x, y);
    double scale2 = std::abs(A) + std::abs(B) + std::abs(C);
    double disc = B * B - 4 * A * C;
    if (disc <= 0 || scale2 == 0) throw std::domain_error("not a hyperbolic point");
    double sq = std::sqrt(disc);
    double d1[2], d2[2];
    if (std::abs(C) > 1e-10 * scale2) {
        double qq = -0.5 * (B + (B >= 0 ? sq : -sq));
        d1[0] = 1;
        d1[1] = qq / C;
        d2[0] = 1;
        d2[1] = A / qq;
    } else if (std::abs(A) > 1e-10 * scale2) {
        double qq = -0.5 * (B + (B >= 0 ? sq : -sq));
        d1[0] = qq / A;
        d1[1] = 1;
        d2[0] = C / qq;
        d2[1] = 1;
    } else {
        d1[0] = 1;
        d1[1] = 0;
        d2[0] = 0;
        d2[1] = 1;
    }
    for (double* d : {d1, d2}) {
        double n = std::hypot(d[0], d[1]);
        d[0] /= n;
        d[1] /= n;
    }
    // the x-axis goes along the over-osculating direction (slope p_over)
    double w0 = std::isfinite(p_over) ? 1.0 / std::hypot(1.0, p_over) : 0.0;
    double w1 = std::isfinite(p_over) ? p_over * w0 : 1.0;
    double a1 = std::abs(d1[0] * w1 - d1[1] * w0);  // cross products with the witness
    double a2 = std::abs(d2[0] * w1 - d2[1] * w0);
    const double* over = a1 <= a2 ? d1 : d2;
    const double* other = a1 <= a2 ? d2 : d1;
    if (std::abs(over[0] * other[1] - over[1] * other[0]) < 1e-10)
        throw std::domain_error("asymptotic directions collapse: not a hyperbolic point");
    std::array<std::array<Rational, 2>, 2> m{
        {{rat(over[0]), rat(other[0])}, {rat(over[1]), rat(other[1])}}};
    Poly g = recentred_graph(s.f, rat(x), rat(y), m);
    if (frame_out) {
        frame_out->x0 = x;
        frame_out->y0 = y;
        frame_out->basis[0][0] = over[0];
        frame_out->basis[1][0] = over[1];
        frame_out->basis[0][1] = other[0];
        frame_out->basis[1][1] = other[1];
    }
    return JetTable(g, Rational(0), Rational(0), order);
}

JetTable adapted_ellipnode_jets(const MongeSurface& s, double x, double y, int order,
                                AdaptedFrame* frame_out) {
    require_eps_free(s.f, "adapted_ellipnode_jets");
    PolyEvalD fxx(s.f.diff(Var::x, 2)), fxy(s.f.diff(Var::x).diff(Var::y)),
        fyy(s.f.diff(Var::y, 2));
    double a = fxx(x, y) / 2, b = fxy(x, y) / 2, c = fyy(x, y) / 2;  // f2 = a x^2 + 2b xy + c y^2
    if (a * c - b * b <= 0) throw std::domain_error("not an elliptic point");
    // eigen-decomposition of [[a,b],[b,c]]
    double tr = a + c, dd = std::sqrt((a - c) * (a - c) + 4 * b * b);
    double l1 = 0.5 * (tr + dd), l2 = 0.5 * (tr - dd);
    double v1x, v1y;
    if (std::abs(b) > 1e-14) {
        v1x = l1 - c;
        v1y = b;
    } else {
        v1x = 1;
        v1y = 0;
        if (a < c) {
            v1x = 0;
            v1y = 1;
        }
    }
    double n1 = std::sqrt(v1x * v1x + v1y * v1y);
    v1x /= n1;
    v1y /= n1;
    double v2x = -v1y, v2y = v1x;
    double s1 = 1.0 / std::sqrt(std::abs(l1)), s2 = 1.0 / std::sqrt(std::abs(l2));
    std::array<std::array<Rational, 2>, 2> m{
        {{rat(v1x * s1), rat(v2x * s2)}, {rat(v1y * s1), rat(v2y * s2)}}};
    Poly g = recentred_graph(s.f, rat(x), rat(y), m);
    std::array<Rational, kNumVars> o{Rational(0), Rational(0), Rational(0), Rational(0)};
    Rational k = g.diff(Var::x, 2).eval(o) / 2;  // f2 ~ k(x^2+y^2)
    Rational f30 = g.diff(Var::x, 3).eval(o), f03 = g.diff(Var::y, 3).eval(o);
    Rational alpha = f30 / (6 * k), beta = f03 / (6 * k);
    Rational sa = alpha / (2 * k), sb = beta / (2 * k);
    g = graph_shear(g, sa, sb, std::max(order + 1, 6));
    if (frame_out) {
        frame_out->x0 = x;
        frame_out->y0 = y;
        frame_out->basis[0][0] = v1x * s1;
        frame_out->basis[1][0] = v1y * s1;
        frame_out->basis[0][1] = v2x * s2;
        frame_out->basis[1][1] = v2y * s2;
        frame_out->shear_a = to_double(sa);
        frame_out->shear_b = to_double(sb);
    }
    return JetTable(g, Rational(0), Rational(0), order);
}

// ---------------------------------------------------------------------------
// Godrons
// ---------------------------------------------------------------------------

namespace {

// Half-asymptotic direction into the hyperbolic domain at a parabolic point.
bool hyperbolic_half_direction(const MongeSurface& s, const Poly& H, double x, double y,
                               double probe, double& ax, double& ay) {
    PolyEvalD fxx(s.f.diff(Var::x, 2)), fxy(s.f.diff(Var::x).diff(Var::y)),
        fyy(s.f.diff(Var::y, 2)), Hv(H);
    double a2 = fxx(x, y), b2 = fxy(x, y), c2 = fyy(x, y);
    if (std::abs(c2) >= std::abs(a2)) {
        ax = c2;
        ay = -b2;
    } else {
        ax = -b2;
        ay = a2;
    }
    double n = std::sqrt(ax * ax + ay * ay);
    if (n < 1e-13) return false;
    ax /= n;
    ay /= n;
    if (Hv(x + probe * ax, y + probe * ay) > 0) {
        ax = -ax;
        ay = -ay;
    }
    return Hv(x + probe * ax, y + probe * ay) < 0;
}

}  // namespace

std::vector<SpecialPoint> detect_godrons(const MongeSurface& s, const DetectOptions& opt) {
    require_eps_free(s.f, "detect_godrons");
    Poly H = hessian_poly(s);
    if (H.is_zero()) throw std::domain_error("developable/degenerate surface");
    Poly fxx = s.f.diff(Var::x, 2), fxy = s.f.diff(Var::x).diff(Var::y),
         fyy = s.f.diff(Var::y, 2);
    Poly W1 = fyy * H.diff(Var::x) - fxy * H.diff(Var::y);
    Poly W2 = fxx * H.diff(Var::y) - fxy * H.diff(Var::x);
    auto degenerate_on_curve = [&](const Poly& W) {
        if (W.is_zero()) return true;
        try {
            divide_exact(W, H);
            return true;  // W vanishes on the whole parabolic curve
        } catch (const std::domain_error&) {
            return false;
        }
    };
    if (degenerate_on_curve(W1) && degenerate_on_curve(W2)) {
        // the tangency condition degenerates identically: every parabolic
        // point is a godron candidate (infinitely degenerate surface)
        TraceOptions topt;
        topt.res = opt.res;
        PlaneCurve pc = trace_curve(H, opt.window, CurveSource::parabolic, topt);
        std::vector<SpecialPoint> out;
        for (const auto& ch : pc.chains) {
            if (ch.pts.empty()) continue;
            SpecialPoint sp;
            sp.kind = PointKind::godron;
            sp.x = ch.pts[ch.pts.size() / 2].x;
            sp.y = ch.pts[ch.pts.size() / 2].y;
            sp.flagged = true;
            sp.flag = "non-simple godron candidate";
            sp.certificate["degenerate_locus"] = "entire parabolic curve";
            out.push_back(sp);
        }
        return out;
    }
    auto c1 = common_zeros(H, W1, opt.window, opt.res, opt.newton);
    auto c2 = common_zeros(H, W2, opt.window, opt.res, opt.newton);
    std::vector<std::pair<double, double>> cands = c1;
    for (auto& q : c2) {
        bool dup = false;
        for (auto& r : cands)
            if (std::abs(q.first - r.first) + std::abs(q.second - r.second) <
                1e-6 * (opt.window.width() + opt.window.height()))
                dup = true;
        if (!dup) cands.push_back(q);
    }

    PolyEvalD fxxv(fxx), fxyv(fxy), fyyv(fyy), Hv(H);
    IdeSurface aide = asymptotic_ide(s);
    std::vector<SpecialPoint> out;
    for (auto& [x, y] : cands) {
        double hxx = fxxv(x, y), hxy = fxyv(x, y), hyy = fyyv(x, y);
        double h2 = std::abs(hxx) + std::abs(hxy) + std::abs(hyy);
        if (h2 < 1e-7) continue;  // flat umbilic: the family engine owns it
        SpecialPoint sp;
        sp.kind = PointKind::godron;
        sp.x = x;
        sp.y = y;
        JetTable J;
        try {
            J = adapted_godron_jets(s, x, y, 6, &sp.frame);
        } catch (const std::domain_error&) {
            sp.flagged = true;
            sp.flag = "non-simple godron candidate";
            out.push_back(sp);
            continue;
        }
        GodronCertificate cert = godron_certificate(J);
        double scale = J.scale();
        auto small = [&](const Rational& v, double pow_scale) {
            return std::abs(to_double(v)) < opt.tol * pow_scale;
        };
        sp.certificate["f20"] = cert_str(cert.f20);
        sp.certificate["f11"] = cert_str(cert.f11);
        sp.certificate["f30"] = cert_str(cert.f30);
        sp.certificate["f02"] = cert_str(cert.f02);
        sp.certificate["f21"] = cert_str(cert.f21);
        sp.certificate["f40"] = cert_str(cert.f40);
        sp.certificate["3*f21^2-f02*f40"] = cert_str(cert.double_godron);
        sp.certificate["9*f21*f31-4*f12*f40-f02*f50"] = cert_str(cert.not_triple);
        if (!small(cert.f20, scale) || !small(cert.f11, scale) || !small(cert.f30, scale)) {
            continue;  // spurious resultant-system solution, not a godron
        }
        double prod = std::abs(to_double(cert.f02 * cert.f21 * cert.f40));
        if (prod < opt.tol * scale * scale * scale ||
            small(cert.double_godron, scale * scale)) {
            sp.flagged = true;
            sp.flag = "non-simple godron candidate";
        }
        // geometric index: half-asymptotic lines at neighbouring parabolic
        // points point toward (+1) or away from (-1) the godron
        double delta = 1e-3 * std::max(opt.window.width(), opt.window.height());
        double tx = sp.frame.basis[0][0], ty = sp.frame.basis[1][0];
        int votes = 0, agree = 0;
        for (double sgn : {-1.0, 1.0}) {
            double qx = x + sgn * delta * tx, qy = y + sgn * delta * ty;
            // pull the sample back onto the parabolic curve
            PolyEvalD Hxv(H.diff(Var::x)), Hyv(H.diff(Var::y));
            for (int it = 0; it < 25; ++it) {
                double hv = Hv(qx, qy), gx = Hxv(qx, qy), gy = Hyv(qx, qy);
                double g2 = gx * gx + gy * gy;
                if (g2 < 1e-18) break;
                qx -= hv * gx / g2;
                qy -= hv * gy / g2;
            }
            double ax, ay;
            if (!hyperbolic_half_direction(s, H, qx, qy, delta * 0.1, ax, ay)) continue;
            double dot = ax * (x - qx) + ay * (y - qy);
            ++votes;
            agree += (dot > 0) ? 1 : -1;
        }
        if (votes == 2 && std::abs(agree) == 2) {
            sp.index = agree / 2;
        } else {
            sp.flagged = true;
            if (sp.flag.empty()) sp.flag = "index samples disagree";
        }
        // characteristic-point index
        double p0;
        bool vertical = std::abs(hyy) < 1e-9 * h2;
        if (!vertical) {
            p0 = -hxy / hyy;
            if (auto cp = refine_char_point(aide, x, y, p0)) sp.index_characteristic = cp->index;
        } else {
            IdeSurface dual = asymptotic_ide_dual(s);
            double q0 = -hxy / hxx;
            if (auto cp = refine_char_point(dual, x, y, q0)) sp.index_characteristic = cp->index;
        }
        sp.p_witness = vertical ? std::numeric_limits<double>::infinity() : -hxy / hyy;
        out.push_back(sp);
    }
    std::sort(out.begin(), out.end(), [](const SpecialPoint& a, const SpecialPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Hyperbonodes and ellipnodes
// ---------------------------------------------------------------------------

namespace {

std::vector<SpecialPoint> detect_nodes(const MongeSurface& s, const DetectOptions& opt,
                                       bool want_elliptic) {
    require_eps_free(s.f, want_elliptic ? "detect_ellipnodes" : "detect_hyperbonodes");
    auto [r1, r2] = node_residuals(s);
    // mirrored residuals (y-leading division) to cover f_xx ~ 0 spots
    Poly A = s.f.diff(Var::x, 2) / Rational(2);
    Poly B = s.f.diff(Var::x).diff(Var::y);
    Poly C = s.f.diff(Var::y, 2) / Rational(2);
    Poly P = s.f.diff(Var::x, 3) / Rational(6);
    Poly Q = s.f.diff(Var::x, 2).diff(Var::y) / Rational(2);
    Poly R = s.f.diff(Var::x).diff(Var::y, 2) / Rational(2);
    Poly S = s.f.diff(Var::y, 3) / Rational(6);
    Poly r1m = C * C * Q - C * A * S - B * C * R + B * B * S;
    Poly r2m = C * C * P - A * C * R + A * B * S;

    // the four residuals are the 3x3 minors of the divisibility system; any
    // two of them cut out the node variety where their differentials are
    // independent, so several pairs are scanned
    std::vector<std::pair<double, double>> cands;
    auto add_cand = [&](double x, double y) {
        for (auto& r : cands)
            if (std::abs(x - r.first) + std::abs(y - r.second) <
                1e-6 * (opt.window.width() + opt.window.height()))
                return;
        cands.emplace_back(x, y);
    };
    for (auto pr : {std::pair<const Poly*, const Poly*>{&r1, &r2},
                    {&r1m, &r2m},
                    {&r1, &r1m},
                    {&r2, &r2m}}) {
        if (pr.first->is_zero() || pr.second->is_zero()) continue;
        for (auto& q : common_zeros(*pr.first, *pr.second, opt.window, opt.res, opt.newton))
            add_cand(q.first, q.second);
    }

    if (!want_elliptic) {
        // geometric route: transverse crossings of the traced flecnodal
        // branches, polished on the two-witness system
        try {
            TraceOptions topt;
            topt.res = opt.res;
            auto [R, curve] = flecnodal_curve(s, opt.window, topt);
            IdeSurface aide2 = asymptotic_ide(s);
            Poly I2 = inflection_function(aide2);
            struct Seg {
                double x0, y0, x1, y1, p;
            };
            std::vector<Seg> segs;
            for (const auto& ch : curve.chains)
                for (std::size_t k = 0; k + 1 < ch.pts.size(); ++k)
                    segs.push_back({ch.pts[k].x, ch.pts[k].y, ch.pts[k + 1].x, ch.pts[k + 1].y,
                                    ch.pts[k].p});
            auto cross2 = [](const Seg& a, const Seg& b, double& x, double& y) {
                double r1x = a.x1 - a.x0, r1y = a.y1 - a.y0;
                double r2x = b.x1 - b.x0, r2y = b.y1 - b.y0;
                double den = r1x * r2y - r1y * r2x;
                if (std::abs(den) < 1e-18) return false;
                double qx = b.x0 - a.x0, qy = b.y0 - a.y0;
                double t = (qx * r2y - qy * r2x) / den;
                double u = (qx * r1y - qy * r1x) / den;
                if (t < -0.05 || t > 1.05 || u < -0.05 || u > 1.05) return false;
                x = a.x0 + t * r1x;
                y = a.y0 + t * r1y;
                return true;
            };
            for (std::size_t a = 0; a < segs.size(); ++a)
                for (std::size_t b = a + 1; b < segs.size(); ++b) {
                    if (std::abs(segs[a].p - segs[b].p) < 1e-4) continue;  // same branch
                    double cx, cy;
                    if (!cross2(segs[a], segs[b], cx, cy)) continue;
                    // polish on {a(p1)=0, I(p1)=0, a(p2)=0, I(p2)=0}
                    double x = cx, y = cy, p1 = segs[a].p, p2 = segs[b].p;
                    PolyEvalD Ai(aide2.F()), Ii(I2);
                    PolyEvalD Axi(aide2.Fx()), Ayi(aide2.Fy()), Api(aide2.Fp());
                    PolyEvalD Ixi(I2.diff(Var::x)), Iyi(I2.diff(Var::y)), Ipi(I2.diff(Var::p));
                    bool ok = false;
                    for (int it = 0; it < 50; ++it) {
                        double eq[4] = {Ai(x, y, p1), Ii(x, y, p1), Ai(x, y, p2), Ii(x, y, p2)};
                        double res = std::abs(eq[0]) + std::abs(eq[1]) + std::abs(eq[2]) +
                                     std::abs(eq[3]);
                        if (res < 1e-10 && it > 0) {
                            ok = true;
                            break;
                        }
                        double Jm[4][5] = {
                            {Axi(x, y, p1), Ayi(x, y, p1), Api(x, y, p1), 0, -eq[0]},
                            {Ixi(x, y, p1), Iyi(x, y, p1), Ipi(x, y, p1), 0, -eq[1]},
                            {Axi(x, y, p2), Ayi(x, y, p2), 0, Api(x, y, p2), -eq[2]},
                            {Ixi(x, y, p2), Iyi(x, y, p2), 0, Ipi(x, y, p2), -eq[3]}};
                        bool sing = false;
                        for (int col = 0; col < 4 && !sing; ++col) {
                            int piv = col;
                            for (int r = col + 1; r < 4; ++r)
                                if (std::abs(Jm[r][col]) > std::abs(Jm[piv][col])) piv = r;
                            if (std::abs(Jm[piv][col]) < 1e-14) sing = true;
                            for (int c = 0; c < 5; ++c) std::swap(Jm[piv][c], Jm[col][c]);
                            for (int r = 0; r < 4 && !sing; ++r) {
                                if (r == col) continue;
                                double mfac = Jm[r][col] / Jm[col][col];
                                for (int c = col; c < 5; ++c) Jm[r][c] -= mfac * Jm[col][c];
                            }
                        }
                        if (sing) break;
                        x += Jm[0][4] / Jm[0][0];
                        y += Jm[1][4] / Jm[1][1];
                        p1 += Jm[2][4] / Jm[2][2];
                        p2 += Jm[3][4] / Jm[3][3];
                    }
                    if (ok && x >= opt.window.x0 && x <= opt.window.x1 && y >= opt.window.y0 &&
                        y <= opt.window.y1)
                        add_cand(x, y);
                }
        } catch (const std::domain_error&) {
            // flecnodal curve degenerate; the algebraic route already ran
        }
    }

    PolyEvalD Av(A), Bv(B), Cv(C);
    IdeSurface aide = asymptotic_ide(s);
    std::vector<SpecialPoint> out;
    for (auto& [x, y] : cands) {
        Rational rx = rat(x), ry = rat(y);
        std::array<std::array<Rational, 2>, 2> id{{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
        Poly g = recentred_graph(s.f, rx, ry, id);
        std::array<Rational, kNumVars> o{Rational(0), Rational(0), Rational(0), Rational(0)};
        Rational A0 = g.diff(Var::x, 2).eval(o) / 2, B0 = g.diff(Var::x).diff(Var::y).eval(o),
                 C0 = g.diff(Var::y, 2).eval(o) / 2;
        Rational P0 = g.diff(Var::x, 3).eval(o) / 6, Q0 = g.diff(Var::x, 2).diff(Var::y).eval(o) / 2,
                 R0 = g.diff(Var::x).diff(Var::y, 2).eval(o) / 2, S0 = g.diff(Var::y, 3).eval(o) / 6;
        double s2 = std::max({std::abs(to_double(A0)), std::abs(to_double(B0)),
                              std::abs(to_double(C0))});
        double s3 = std::max({std::abs(to_double(P0)), std::abs(to_double(Q0)),
                              std::abs(to_double(R0)), std::abs(to_double(S0)), 1e-30});
        if (s2 < 1e-12) continue;  // flat umbilic
        // exact divisibility residuals f3 = (alpha x + beta y) f2
        Rational rho1, rho2, alpha, beta;
        double aA = std::abs(to_double(A0)), aC = std::abs(to_double(C0)),
               aB = std::abs(to_double(B0));
        if (aA >= std::max(aB, aC) * 1e-6 && A0 != 0) {
            alpha = P0 / A0;
            beta = (Q0 - alpha * B0) / A0;
            rho1 = R0 - alpha * C0 - beta * B0;
            rho2 = S0 - beta * C0;
        } else if (aC >= aB * 1e-6 && C0 != 0) {
            beta = S0 / C0;
            alpha = (R0 - beta * B0) / C0;
            rho1 = Q0 - beta * A0 - alpha * B0;
            rho2 = P0 - alpha * A0;
        } else if (B0 != 0) {
            alpha = Q0 / B0;
            beta = R0 / B0;
            rho1 = P0;
            rho2 = S0;
        } else {
            continue;
        }
        double tolr = opt.tol * std::max(s3, s2);
        if (std::abs(to_double(rho1)) > tolr || std::abs(to_double(rho2)) > tolr) continue;
        Rational disc2 = B0 * B0 - 4 * A0 * C0;
        bool elliptic = disc2 < 0;
        if (std::abs(to_double(disc2)) < opt.tol * s2 * s2) continue;  // on the parabolic curve
        if (elliptic != want_elliptic) continue;

        SpecialPoint sp;
        sp.kind = want_elliptic ? PointKind::ellipnode : PointKind::hyperbonode;
        sp.x = x;
        sp.y = y;
        sp.certificate["rho1"] = cert_str(rho1);
        sp.certificate["rho2"] = cert_str(rho2);
        sp.certificate["alpha"] = cert_str(alpha);
        sp.certificate["beta"] = cert_str(beta);
        sp.certificate["disc_f2"] = cert_str(disc2);
        if (!want_elliptic) {
            // branch slopes and tags; transversality certificate
            double Ad = to_double(A0), Bd = to_double(B0), Cd = to_double(C0);
            double sq = std::sqrt(std::max(Bd * Bd - 4 * Ad * Cd, 0.0));
            double m1, m2;
            if (std::abs(Cd) > 1e-13 * (std::abs(Ad) + std::abs(Bd) + std::abs(Cd))) {
                double qq = -0.5 * (Bd + (Bd >= 0 ? sq : -sq));
                m1 = qq / Cd;
                m2 = Ad / qq;
            } else {
                m1 = std::abs(Bd) > 0 ? -Ad / Bd : 0;
                m2 = m1;
            }
            Side t1 = left_right_tag(aide, x, y, m1);
            Side t2 = left_right_tag(aide, x, y, m2);
            sp.certificate["p_1"] = cert_str(rat(m1));
            sp.certificate["p_2"] = cert_str(rat(m2));
            sp.certificate["tag_1"] = side_name(t1);
            sp.certificate["tag_2"] = side_name(t2);
            try {
                JetTable J = adapted_node_jets(s, x, y, m1, 5, &sp.frame);
                // snap frame zeros before the exact-frame classifier
                std::map<std::pair<int, int>, Rational> snapped;
                double sc = J.scale();
                for (int i = 0; i <= 5; ++i)
                    for (int j = 0; i + j <= 5; ++j) {
                        Rational v = J.f(i, j);
                        bool zero_slot = (i == 2 && j == 0) || (i == 0 && j == 2) ||
                                         (i == 3 && j == 0) || (i == 0 && j == 3);
                        if (zero_slot && std::abs(to_double(v)) < opt.tol * sc) v = 0;
                        snapped[{i, j}] = v;
                    }
                Theorem4Certificate t4 = theorem4_hyperbonode(JetTable::from_map(snapped, 5));
                sp.certificate["theorem4_tangency"] = cert_str(t4.tangency);
                double t4scale = std::pow(sc, 3);
                if (std::abs(to_double(t4.tangency)) < opt.tol * std::max(t4scale, 1.0)) {
                    sp.flagged = true;
                    sp.flag = "bi-hyperbonode candidate";
                }
            } catch (const std::domain_error&) {
                sp.flagged = true;
                sp.flag = "tangential branch intersection";
            }
        } else {
            try {
                JetTable J = adapted_ellipnode_jets(s, x, y, 4, &sp.frame);
                std::map<std::pair<int, int>, Rational> snapped;
                double sc = J.scale();
                for (int i = 0; i <= 4; ++i)
                    for (int j = 0; i + j <= 4; ++j) {
                        Rational v = J.f(i, j);
                        bool zero_slot = (i + j == 3) || (i == 1 && j == 1);
                        if (zero_slot && std::abs(to_double(v)) < 1e-6 * sc) v = 0;
                        snapped[{i, j}] = v;
                    }
                // equalize the f20/f02 slot exactly (numeric rotation residue)
                Rational f20 = snapped[{2, 0}], f02 = snapped[{0, 2}];
                if (f20 != f02 && std::abs(to_double(f20 - f02)) < 1e-6 * sc)
                    snapped[{0, 2}] = f20;
                Theorem4Certificate t4 = theorem4_ellipnode(JetTable::from_map(snapped, 4));
                sp.certificate["theorem4c_tangency"] = cert_str(t4.ellip_tangency);
                if (std::abs(to_double(t4.ellip_tangency)) < opt.tol * std::pow(sc, 2)) {
                    sp.flagged = true;
                    sp.flag = "bi-ellipnode candidate";
                }
            } catch (const std::domain_error&) {
                // frame construction failed; keep the point, unflagged certificates only
            }
        }
        out.push_back(sp);
    }
    std::sort(out.begin(), out.end(), [](const SpecialPoint& a, const SpecialPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    return out;
}

}  // namespace

std::vector<SpecialPoint> detect_hyperbonodes(const MongeSurface& s, const DetectOptions& opt) {
    return detect_nodes(s, opt, false);
}

std::vector<SpecialPoint> detect_ellipnodes(const MongeSurface& s, const DetectOptions& opt) {
    return detect_nodes(s, opt, true);
}

// ---------------------------------------------------------------------------
// Biflecnodes
// ---------------------------------------------------------------------------

namespace {

bool newton3(const PolyEvalD ev[3], const PolyEvalD grad[3][3], double& x, double& y, double& p,
             double tol, double cap) {
    for (int it = 0; it < 60; ++it) {
        double a[3][4];
        for (int r = 0; r < 3; ++r) {
            a[r][0] = grad[r][0](x, y, p);
            a[r][1] = grad[r][1](x, y, p);
            a[r][2] = grad[r][2](x, y, p);
            a[r][3] = -ev[r](x, y, p);
        }
        // gaussian elimination
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-15) return false;
            std::swap(a[piv], a[col]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                double mfac = a[r][col] / a[col][col];
                for (int c2 = col; c2 < 4; ++c2) a[r][c2] -= mfac * a[col][c2];
            }
        }
        double dx = a[0][3] / a[0][0], dy = a[1][3] / a[1][1], dp = a[2][3] / a[2][2];
        double len = std::sqrt(dx * dx + dy * dy + dp * dp);
        if (len > cap) {
            dx *= cap / len;
            dy *= cap / len;
            dp *= cap / len;
        }
        x += dx;
        y += dy;
        p += dp;
        if (std::abs(ev[0](x, y, p)) < tol && std::abs(ev[1](x, y, p)) < tol &&
            std::abs(ev[2](x, y, p)) < tol)
            return true;
    }
    return false;
}

void biflec_pass(const MongeSurface& s, const IdeSurface& ide, bool dual_chart,
                 const DetectOptions& opt, std::vector<SpecialPoint>& out) {
    Poly I = inflection_function(ide);
    Poly T = dual_chart ? I.diff(Var::y) + Poly::variable(Var::p) * I.diff(Var::x)
                        : I.diff(Var::x) + Poly::variable(Var::p) * I.diff(Var::y);
    Poly eqs[3] = {ide.F(), I, T};
    PolyEvalD ev[3] = {PolyEvalD(eqs[0]), PolyEvalD(eqs[1]), PolyEvalD(eqs[2])};
    PolyEvalD grad[3][3] = {
        {PolyEvalD(eqs[0].diff(Var::x)), PolyEvalD(eqs[0].diff(Var::y)), PolyEvalD(eqs[0].diff(Var::p))},
        {PolyEvalD(eqs[1].diff(Var::x)), PolyEvalD(eqs[1].diff(Var::y)), PolyEvalD(eqs[1].diff(Var::p))},
        {PolyEvalD(eqs[2].diff(Var::x)), PolyEvalD(eqs[2].diff(Var::y)), PolyEvalD(eqs[2].diff(Var::p))},
    };
    Poly Rcurve = resultant(ide.F(), I, Var::p);
    if (Rcurve.is_zero()) throw std::domain_error("flecnodal curve not of codimension 1");
    TraceOptions topt;
    topt.res = opt.res;
    PlaneCurve pc = trace_curve(Rcurve.normalized(), opt.window, CurveSource::flecnodal, topt);
    PolyEvalD Tv(T), Fpv(ide.Fp());
    double tscale = max_coeff(T);
    double cap = 4.0 * std::max(opt.window.width(), opt.window.height()) / opt.res;
    // tangential zeros of T along the curve (double biflecnodes) leave no
    // sign change; they are extrema of T on the curve, cut out by
    // T_s = <grad F x grad I, grad T> = 0
    Poly wxP = ide.F().diff(Var::y) * I.diff(Var::p) - ide.F().diff(Var::p) * I.diff(Var::y);
    Poly wyP = ide.F().diff(Var::p) * I.diff(Var::x) - ide.F().diff(Var::x) * I.diff(Var::p);
    Poly wpP = ide.F().diff(Var::x) * I.diff(Var::y) - ide.F().diff(Var::y) * I.diff(Var::x);
    Poly Ts = wxP * T.diff(Var::x) + wyP * T.diff(Var::y) + wpP * T.diff(Var::p);
    Poly eqs2[3] = {ide.F(), I, Ts};
    PolyEvalD ev2[3] = {PolyEvalD(eqs2[0]), PolyEvalD(eqs2[1]), PolyEvalD(eqs2[2])};
    PolyEvalD grad2[3][3] = {
        {PolyEvalD(eqs2[0].diff(Var::x)), PolyEvalD(eqs2[0].diff(Var::y)),
         PolyEvalD(eqs2[0].diff(Var::p))},
        {PolyEvalD(eqs2[1].diff(Var::x)), PolyEvalD(eqs2[1].diff(Var::y)),
         PolyEvalD(eqs2[1].diff(Var::p))},
        {PolyEvalD(eqs2[2].diff(Var::x)), PolyEvalD(eqs2[2].diff(Var::y)),
         PolyEvalD(eqs2[2].diff(Var::p))},
    };
    auto finalize = [&](double x, double y, double p) {
        if (x < opt.window.x0 || x > opt.window.x1 || y < opt.window.y0 || y > opt.window.y1)
            return;
        double slope = dual_chart ? (p == 0 ? std::numeric_limits<double>::infinity() : 1.0 / p)
                                  : p;
        for (auto& q : out)
            if (std::abs(q.x - x) + std::abs(q.y - y) < 1e-6 * (opt.window.width() + opt.window.height()))
                return;
        SpecialPoint sp;
        sp.kind = PointKind::biflecnode;
        sp.x = x;
        sp.y = y;
        sp.p_witness = slope;
        double fp = Fpv(x, y, p);
        sp.branch = std::abs(fp) < 1e-9 ? Side::fold : (fp > 0 ? Side::right : Side::left);
        if (std::isfinite(slope)) {
            try {
                JetTable J = adapted_node_jets(s, x, y, slope, 7, &sp.frame);
                double sc = J.scale();
                Rational f30 = J.f(3, 0), f40 = J.f(4, 0), f50 = J.f(5, 0);
                sp.certificate["f30"] = cert_str(f30);
                sp.certificate["f40"] = cert_str(f40);
                sp.certificate["f50"] = cert_str(f50);
                sp.certificate["f20"] = cert_str(J.f(2, 0));
                sp.certificate["f02"] = cert_str(J.f(0, 2));
                sp.certificate["f11"] = cert_str(J.f(1, 1));
                if (std::abs(to_double(f30)) > opt.tol * sc ||
                    std::abs(to_double(f40)) > opt.tol * sc)
                    return;  // spurious: not 5-point contact
                if (std::abs(to_double(f50)) < opt.tol * sc) {
                    sp.flagged = true;
                    sp.flag = "double biflecnode candidate";
                }
            } catch (const std::domain_error&) {
                return;
            }
        }
        out.push_back(sp);
    };
    auto consider = [&](double x, double y, double p) {
        if (!newton3(ev, grad, x, y, p, opt.newton * std::max(1.0, tscale), cap)) return;
        finalize(x, y, p);
    };
    for (const auto& ch : pc.chains) {
        std::vector<double> tv(ch.pts.size());
        std::vector<double> witness(ch.pts.size());
        for (std::size_t k = 0; k < ch.pts.size(); ++k) {
            auto roots = slope_roots(ide, ch.pts[k].x, ch.pts[k].y);
            double best = 0, bestv = 1e300;
            PolyEvalD Iv(I);
            for (double r : roots) {
                double v = std::abs(Iv(ch.pts[k].x, ch.pts[k].y, r));
                if (v < bestv) {
                    bestv = v;
                    best = r;
                }
            }
            witness[k] = best;
            tv[k] = Tv(ch.pts[k].x, ch.pts[k].y, best);
        }
        for (std::size_t k = 0; k + 1 < ch.pts.size(); ++k) {
            if (std::abs(witness[k + 1] - witness[k]) > 0.5) continue;  // branch jump
            if ((tv[k] < 0) != (tv[k + 1] < 0))
                consider(0.5 * (ch.pts[k].x + ch.pts[k + 1].x),
                         0.5 * (ch.pts[k].y + ch.pts[k + 1].y),
                         0.5 * (witness[k] + witness[k + 1]));
        }
        // extrema of T along the chain: double biflecnode candidates
        for (std::size_t k = 1; k + 1 < ch.pts.size(); ++k) {
            if (std::abs(witness[k + 1] - witness[k]) > 0.5 ||
                std::abs(witness[k] - witness[k - 1]) > 0.5)
                continue;
            if (std::abs(tv[k]) <= std::abs(tv[k - 1]) && std::abs(tv[k]) <= std::abs(tv[k + 1]) &&
                std::abs(tv[k]) < 1e-2 * std::max(1.0, tscale)) {
                double x = ch.pts[k].x, y = ch.pts[k].y, p = witness[k];
                if (!newton3(ev2, grad2, x, y, p, opt.newton * std::max(1.0, tscale), cap))
                    continue;
                if (std::abs(Tv(x, y, p)) < 1e-5 * std::max(1.0, tscale)) finalize(x, y, p);
            }
        }
    }
}

}  // namespace

std::vector<SpecialPoint> detect_biflecnodes(const MongeSurface& s, const DetectOptions& opt) {
    require_eps_free(s.f, "detect_biflecnodes");
    std::vector<SpecialPoint> out;
    int degenerate_charts = 0;
    try {
        biflec_pass(s, asymptotic_ide(s), false, opt, out);
    } catch (const std::domain_error&) {
        ++degenerate_charts;
    }
    try {
        biflec_pass(s, asymptotic_ide_dual(s), true, opt, out);
    } catch (const std::domain_error&) {
        ++degenerate_charts;
    }
    if (degenerate_charts == 2)
        throw std::domain_error("flecnodal curve not of codimension 1");
    std::sort(out.begin(), out.end(), [](const SpecialPoint& a, const SpecialPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    return out;
}

std::vector<SpecialPoint> detect_all(const MongeSurface& s, const DetectOptions& opt) {
    std::vector<SpecialPoint> out = detect_godrons(s, opt);
    auto add = [&](std::vector<SpecialPoint> v) {
        for (auto& sp : v) out.push_back(std::move(sp));
    };
    add(detect_hyperbonodes(s, opt));
    add(detect_ellipnodes(s, opt));
    add(detect_biflecnodes(s, opt));
    return out;
}

}  // namespace flecscope
