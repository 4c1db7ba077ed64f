#include "flecscope/ide.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flecscope {

bool MongeSurface::centered_at_origin() const {
    std::array<Rational, kNumVars> origin{Rational(0), Rational(0), Rational(0), Rational(0)};
    return f.eval(origin) == 0 && f.diff(Var::x).eval(origin) == 0 &&
           f.diff(Var::y).eval(origin) == 0;
}

IdeSurface::IdeSurface(Poly F, Chart chart) : F_(std::move(F)), chart_(chart) {
    Fx_ = F_.diff(Var::x);
    Fy_ = F_.diff(Var::y);
    Fp_ = F_.diff(Var::p);
}

IdeSurface IdeSurface::dual() const {
    int d = F_.degree(Var::p);
    Poly out;
    auto cs = F_.coefficients_in(Var::p);
    // p -> 1/q, multiplied through by q^d.
    for (int k = 0; k <= d; ++k)
        out += cs[std::size_t(k)] * Poly::variable(Var::p, unsigned(d - k));
    return IdeSurface(out.normalized(),
                      chart_ == Chart::standard_p ? Chart::dual_q : Chart::standard_p);
}

IdeSurface IdeSurface::at_eps(const Rational& e) const {
    return IdeSurface(F_.subst(Var::eps, Poly(e)), chart_);
}

IdeSurface asymptotic_ide(const MongeSurface& s) {
    Poly fxx = s.f.diff(Var::x, 2);
    Poly fxy = s.f.diff(Var::x).diff(Var::y);
    Poly fyy = s.f.diff(Var::y, 2);
    Poly p = Poly::variable(Var::p);
    return IdeSurface(fxx + Rational(2) * fxy * p + fyy * p * p, Chart::standard_p);
}

IdeSurface asymptotic_ide_dual(const MongeSurface& s) {
    Poly fxx = s.f.diff(Var::x, 2);
    Poly fxy = s.f.diff(Var::x).diff(Var::y);
    Poly fyy = s.f.diff(Var::y, 2);
    Poly q = Poly::variable(Var::p);
    return IdeSurface(fyy + Rational(2) * fxy * q + fxx * q * q, Chart::dual_q);
}

Poly inflection_function(const IdeSurface& e) {
    Poly slope = Poly::variable(Var::p);
    if (e.chart() == Chart::standard_p) return e.Fx() + slope * e.Fy();
    return e.Fy() + slope * e.Fx();
}

CharField characteristic_field(const IdeSurface& e) {
    Poly p = Poly::variable(Var::p);
    return CharField{-e.Fp(), -(p * e.Fp()), inflection_function(e)};
}

const char* char_type_name(CharType t) {
    switch (t) {
        case CharType::saddle: return "saddle";
        case CharType::node: return "node";
        case CharType::focus: return "focus";
        case CharType::degenerate: return "degenerate";
    }
    return "?";
}

const char* side_name(Side s) {
    switch (s) {
        case Side::left: return "left";
        case Side::right: return "right";
        case Side::fold: return "fold";
    }
    return "?";
}

Side left_right_tag(const IdeSurface& e, double x, double y, double p, double tol) {
    double fp = e.Fp().eval_d({x, y, p, 0.0});
    if (std::abs(fp) <= tol) return Side::fold;
    return fp > 0 ? Side::right : Side::left;
}

namespace {

struct Evals {
    PolyEvalD F, Fx, Fy, Fp, I, Ix, Iy, Ip;
};

Evals make_evals(const IdeSurface& e) {
    Poly I = inflection_function(e);
    return Evals{PolyEvalD(e.F()),         PolyEvalD(e.Fx()),        PolyEvalD(e.Fy()),
                 PolyEvalD(e.Fp()),        PolyEvalD(I),             PolyEvalD(I.diff(Var::x)),
                 PolyEvalD(I.diff(Var::y)), PolyEvalD(I.diff(Var::p))};
}

bool solve3(double a[3][4]) {
    // Gaussian elimination with partial pivoting on a 3x4 augmented system.
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14) return false;
        std::swap(a[piv], a[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double m = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= m * a[col][c];
        }
    }
    for (int r = 0; r < 3; ++r) a[r][3] /= a[r][r];
    return true;
}

}  // namespace

CharScan characteristic_points(const IdeSurface& e, const Window3& w, const CharScanOptions& opt) {
    if (e.F().uses(Var::eps))
        throw std::invalid_argument("characteristic_points: substitute eps first");
    Evals ev = make_evals(e);
    Poly Fpp = e.Fp().diff(Var::p);
    PolyEvalD Fpx(e.Fp().diff(Var::x)), Fpy(e.Fp().diff(Var::y)), Fppd(Fpp);

    CharScan out;
    const int n = opt.cells;
    const double dx = (w.x1 - w.x0) / n, dy = (w.y1 - w.y0) / n, dp = (w.p1 - w.p0) / n;
    const double scale = std::max({w.x1 - w.x0, w.y1 - w.y0, w.p1 - w.p0});

    auto try_seed = [&](double x, double y, double p) {
        for (int it = 0; it < 60; ++it) {
            double f = ev.F(x, y, p), fp = ev.Fp(x, y, p), i = ev.I(x, y, p);
            double a[3][4] = {
                {ev.Fx(x, y, p), ev.Fy(x, y, p), fp, -f},
                {Fpx(x, y, p), Fpy(x, y, p), Fppd(x, y, p), -fp},
                {ev.Ix(x, y, p), ev.Iy(x, y, p), ev.Ip(x, y, p), -i},
            };
            if (!solve3(a)) {
                if (std::abs(f) + std::abs(fp) + std::abs(i) < 1e-6)
                    out.unresolved.push_back({x, y, p});
                return;
            }
            double step = std::sqrt(a[0][3] * a[0][3] + a[1][3] * a[1][3] + a[2][3] * a[2][3]);
            double damp = step > 0.5 * scale ? 0.5 * scale / step : 1.0;
            x += damp * a[0][3];
            y += damp * a[1][3];
            p += damp * a[2][3];
            if (step < 1e2 * opt.newton_tol * scale &&
                std::abs(ev.F(x, y, p)) < opt.newton_tol &&
                std::abs(ev.Fp(x, y, p)) < opt.newton_tol &&
                std::abs(ev.I(x, y, p)) < opt.newton_tol) {
                CharPoint c;
                c.x = x;
                c.y = y;
                c.p = p;
                c.res_F = ev.F(x, y, p);
                c.res_Fp = ev.Fp(x, y, p);
                c.res_I = ev.I(x, y, p);
                if (x < w.x0 - 1e-9 || x > w.x1 + 1e-9 || y < w.y0 - 1e-9 || y > w.y1 + 1e-9 ||
                    p < w.p0 - 1e-9 || p > w.p1 + 1e-9)
                    return;
                double gx = ev.Fx(x, y, p), gy = ev.Fy(x, y, p), gp = ev.Fp(x, y, p);
                double grad = std::sqrt(gx * gx + gy * gy + gp * gp);
                if (grad < 1e-7) {
                    out.morse_candidates.push_back({x, y, p});
                    return;
                }
                for (const auto& q : out.points) {
                    double d = std::abs(q.x - x) + std::abs(q.y - y) + std::abs(q.p - p);
                    if (d < opt.dedupe * scale) return;
                }
                // Linearization of the characteristic field in surface coords
                // (x,p); valid since F_y != 0 wherever grad F != 0 and F_p = 0.
                double fy = gy;
                double phix = -gx / fy;
                c.jac[0][0] = -Fpx(x, y, p) - Fpy(x, y, p) * phix;
                c.jac[0][1] = -Fppd(x, y, p);
                c.jac[1][0] = ev.Ix(x, y, p) + ev.Iy(x, y, p) * phix;
                c.jac[1][1] = ev.Ip(x, y, p);
                double det = c.jac[0][0] * c.jac[1][1] - c.jac[0][1] * c.jac[1][0];
                double tr = c.jac[0][0] + c.jac[1][1];
                double mag = std::abs(c.jac[0][0]) + std::abs(c.jac[0][1]) +
                             std::abs(c.jac[1][0]) + std::abs(c.jac[1][1]);
                // multiple roots polish only to ~sqrt(tol); use a matching bound
                if (std::abs(det) < 1e-4 * std::max(1.0, mag * mag)) {
                    c.type = CharType::degenerate;
                    c.degenerate = true;
                    c.index = 0;
                } else if (det < 0) {
                    c.type = CharType::saddle;
                    c.index = -1;
                } else {
                    c.type = (tr * tr - 4 * det < 0) ? CharType::focus : CharType::node;
                    c.index = +1;
                }
                out.points.push_back(c);
                return;
            }
        }
        double x0 = x, y0 = y, p0 = p;
        if (std::abs(ev.F(x0, y0, p0)) + std::abs(ev.Fp(x0, y0, p0)) + std::abs(ev.I(x0, y0, p0)) <
            1e-5)
            out.unresolved.push_back({x0, y0, p0});
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                try_seed(w.x0 + (i + 0.5) * dx, w.y0 + (j + 0.5) * dy, w.p0 + (k + 0.5) * dp);

    std::sort(out.points.begin(), out.points.end(), [](const CharPoint& a, const CharPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.p < b.p;
    });
    return out;
}

std::optional<CharPoint> refine_char_point(const IdeSurface& e, double x, double y, double p,
                                           double tol) {
    Evals ev = make_evals(e);
    Poly Fpp = e.Fp().diff(Var::p);
    PolyEvalD Fpx(e.Fp().diff(Var::x)), Fpy(e.Fp().diff(Var::y)), Fppd(Fpp);
    for (int it = 0; it < 80; ++it) {
        double f = ev.F(x, y, p), fp = ev.Fp(x, y, p), i = ev.I(x, y, p);
        if (std::abs(f) < tol && std::abs(fp) < tol && std::abs(i) < tol && it > 0) break;
        double a[3][4] = {
            {ev.Fx(x, y, p), ev.Fy(x, y, p), fp, -f},
            {Fpx(x, y, p), Fpy(x, y, p), Fppd(x, y, p), -fp},
            {ev.Ix(x, y, p), ev.Iy(x, y, p), ev.Ip(x, y, p), -i},
        };
        if (!solve3(a)) return std::nullopt;
        double damp = 1.0;
        double step = std::sqrt(a[0][3] * a[0][3] + a[1][3] * a[1][3] + a[2][3] * a[2][3]);
        if (step > 0.5) damp = 0.5 / step;
        x += damp * a[0][3];
        y += damp * a[1][3];
        p += damp * a[2][3];
    }
    if (std::abs(ev.F(x, y, p)) > tol || std::abs(ev.Fp(x, y, p)) > tol ||
        std::abs(ev.I(x, y, p)) > tol)
        return std::nullopt;
    double gx = ev.Fx(x, y, p), gy = ev.Fy(x, y, p);
    if (std::sqrt(gx * gx + gy * gy) < 1e-7) return std::nullopt;
    CharPoint c;
    c.x = x;
    c.y = y;
    c.p = p;
    c.res_F = ev.F(x, y, p);
    c.res_Fp = ev.Fp(x, y, p);
    c.res_I = ev.I(x, y, p);
    double phix = -gx / gy;
    c.jac[0][0] = -Fpx(x, y, p) - Fpy(x, y, p) * phix;
    c.jac[0][1] = -Fppd(x, y, p);
    c.jac[1][0] = ev.Ix(x, y, p) + ev.Iy(x, y, p) * phix;
    c.jac[1][1] = ev.Ip(x, y, p);
    double det = c.jac[0][0] * c.jac[1][1] - c.jac[0][1] * c.jac[1][0];
    double tr = c.jac[0][0] + c.jac[1][1];
    double mag = std::abs(c.jac[0][0]) + std::abs(c.jac[0][1]) + std::abs(c.jac[1][0]) +
                 std::abs(c.jac[1][1]);
    if (std::abs(det) < 1e-4 * std::max(1.0, mag * mag)) {
        c.type = CharType::degenerate;
        c.degenerate = true;
        c.index = 0;
    } else if (det < 0) {
        c.type = CharType::saddle;
        c.index = -1;
    } else {
        c.type = (tr * tr - 4 * det < 0) ? CharType::focus : CharType::node;
        c.index = +1;
    }
    return c;
}

Theorem0Exact theorem0_conditions_exact(const Poly& F, const Rational& x, const Rational& y,
                                        const Rational& p) {
    Poly Fx = F.diff(Var::x), Fy = F.diff(Var::y), Fp = F.diff(Var::p);
    Poly Fxx = Fx.diff(Var::x), Fxy = Fx.diff(Var::y), Fxp = Fx.diff(Var::p);
    Poly Fyp = Fy.diff(Var::p), Fpp = Fp.diff(Var::p), Fyy = Fy.diff(Var::y);
    std::array<Rational, kNumVars> pt{x, y, p, Rational(0)};
    Rational fxp = Fxp.eval(pt), fpp = Fpp.eval(pt), fxx = Fxx.eval(pt), fxy = Fxy.eval(pt);
    Rational fyp = Fyp.eval(pt), fy = Fy.eval(pt), fyy = Fyy.eval(pt);
    Theorem0Exact r;
    Rational m11 = fxp, m12 = fpp;
    Rational m21 = fxx + p * fxy, m22 = fxp + p * fyp + fy;
    r.value_a = fy * (m11 * m22 - m12 * m21);
    r.value_b = fxx + 2 * p * fxy + p * p * fyy;  // (d_x + p d_y)^2 F
    r.value_c = fxp + p * fyp + fy;
    return r;
}

Theorem0Conditions theorem0_conditions(const IdeSurface& e, const CharPoint& c) {
    auto ex = theorem0_conditions_exact(e.F(), rational_from_double(c.x),
                                        rational_from_double(c.y), rational_from_double(c.p));
    Theorem0Conditions r;
    r.value_a = to_double(ex.value_a);
    r.value_b = to_double(ex.value_b);
    r.value_c = to_double(ex.value_c);
    const double tol = 1e-8;
    r.a = std::abs(r.value_a) > tol;
    r.b = std::abs(r.value_b) > tol;
    r.c = std::abs(r.value_c) > tol;
    return r;
}

}  // namespace flecscope
