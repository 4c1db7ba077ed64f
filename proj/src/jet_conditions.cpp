#include "flecscope/jet_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flecscope {

JetTable::JetTable(const Poly& f, const Rational& x0, const Rational& y0, int order)
    : order_(order) {
    Jet2 j(f.uses(Var::eps) ? f.subst(Var::eps, Poly(0)) : f, x0, y0, order);
    for (int i = 0; i <= order; ++i)
        for (int k = 0; i + k <= order; ++k) vals_[{i, k}] = j.partial(i, k);
}

JetTable JetTable::from_map(std::map<std::pair<int, int>, Rational> vals, int order) {
    JetTable t;
    t.vals_ = std::move(vals);
    t.order_ = order;
    return t;
}

Rational JetTable::f(int i, int j) const {
    auto it = vals_.find({i, j});
    if (it == vals_.end()) {
        if (i + j > order_) throw std::out_of_range("jet order exceeded");
        return Rational(0);
    }
    return it->second;
}

double JetTable::scale() const {
    double m = 0;
    for (const auto& [k, v] : vals_) m = std::max(m, std::abs(to_double(v)));
    return m == 0 ? 1.0 : m;
}

GodronCertificate godron_certificate(const JetTable& J) {
    GodronCertificate c;
    c.f20 = J.f(2, 0);
    c.f11 = J.f(1, 1);
    c.f30 = J.f(3, 0);
    c.f02 = J.f(0, 2);
    c.f21 = J.f(2, 1);
    c.f40 = J.f(4, 0);
    c.f50 = J.order() >= 5 ? J.f(5, 0) : Rational(0);
    c.double_godron = 3 * c.f21 * c.f21 - c.f02 * c.f40;
    Rational f31 = J.f(3, 1), f12 = J.f(1, 2);
    c.not_triple = 9 * c.f21 * f31 - 4 * f12 * c.f40 - c.f02 * c.f50;
    return c;
}

A3Certificate a3_certificate(const JetTable& J) {
    A3Certificate c;
    c.critical_f20 = J.f(2, 0);
    c.critical_f11 = J.f(1, 1);
    c.critical_f30 = J.f(3, 0);
    c.critical_f21 = J.f(2, 1);
    c.general_f22 = J.f(2, 2);
    c.general_f02 = J.f(0, 2);
    Rational f40 = J.f(4, 0), f31 = J.f(3, 1), f22 = J.f(2, 2), f12 = J.f(1, 2), f02 = J.f(0, 2);
    c.morse = f40 * (f22 * f02 - 2 * f12 * f12) - f31 * f31 * f02;
    if (f02 == 0) return c;  // general position broken; caller inspects fields
    // Normalize the vertical direction so f02 > 0, then shear the yp-term away.
    Rational s = f02 > 0 ? Rational(1) : Rational(-1);
    Rational a = s * f40 / 2, b = s * f31 / 2, cc = s * f22 / 2, d = s * f02, g = s * f12;
    c.a = a;
    c.b = b;
    c.c_eff = cc - g * g / d;
    c.delta = a * c.c_eff - b * b;
    c.a_delta = a * c.delta;
    return c;
}

const char* conic_row_name(ConicRow r) {
    switch (r) {
        case ConicRow::A1A3: return "A1/A3";
        case ConicRow::A2A6: return "A2/A6";
        case ConicRow::A3A9: return "A3/A9";
    }
    return "?";
}

HigherConic classify_higher_conic(const JetTable& J) {
    Rational f02 = J.f(0, 2);
    if (f02 == 0) throw std::domain_error("higher-conic classifier: f02 = 0");
    if (J.f(4, 0) == 0) throw std::domain_error("higher-conic classifier: f40 = 0 (different stratum)");
    // z-scale to f02 = 1
    auto n = [&](int i, int j) { return J.f(i, j) / f02; };
    Rational f40 = n(4, 0), f31 = n(3, 1), f22 = n(2, 2), f12 = n(1, 2), f03 = n(0, 3);
    Rational f13 = n(1, 3), f41 = n(4, 1), f32 = n(3, 2), f50 = n(5, 0), f23 = n(2, 3);
    HigherConic h;
    h.morse = f40 * (f22 - 2 * f12 * f12) - f31 * f31;
    h.delta = 3 * f40 *
                  (2 * f12 *
                       (f12 * f03 * f40 * f40 + 3 * f12 * f12 * f40 * f31 + f31 * f31 * f31 -
                        f40 * f40 * f13) +
                   f31 * (f31 * f41 - f40 * f32)) +
              f31 * f31 * f31 * f50 + f40 * f40 * f40 * f23;
    if (h.morse != 0) h.row = ConicRow::A1A3;
    else h.row = (h.delta != 0) ? ConicRow::A2A6 : ConicRow::A3A9;
    return h;
}

const char* theorem3_kind_name(Theorem3Kind k) {
    switch (k) {
        case Theorem3Kind::swallowtail_biflec: return "swallowtail_biflec";
        case Theorem3Kind::lips: return "lips";
        case Theorem3Kind::bec_a_bec: return "bec_a_bec";
        case Theorem3Kind::cusp_flag: return "cusp_flag";
    }
    return "?";
}

Theorem3Certificate classify_theorem3(const JetTable& J) {
    Theorem3Certificate c;
    c.frame_f20 = J.f(2, 0);
    c.frame_f02 = J.f(0, 2);
    c.frame_f30 = J.f(3, 0);
    c.frame_f40 = J.f(4, 0);
    c.f11 = J.f(1, 1);
    if (c.frame_f20 != 0 || c.frame_f02 != 0 || c.frame_f30 != 0 || c.frame_f40 != 0 ||
        c.f11 == 0)
        throw std::domain_error("not a biflecnode stratum");
    Rational f21 = J.f(2, 1), f31 = J.f(3, 1), f41 = J.f(4, 1), f12 = J.f(1, 2);
    Rational f22 = J.f(2, 2), f32 = J.f(3, 2);
    c.f50 = J.f(5, 0);
    c.f60 = J.order() >= 6 ? J.f(6, 0) : Rational(0);
    c.smooth = 3 * f21 * f21 - 2 * f31 * c.f11;
    c.A = c.f50 * c.f11;
    c.B = f41 * c.f11 - 2 * f31 * f21;
    c.C = 3 * f31 * f12 - Rational(9, 2) * f22 * f21 + f32 * c.f11;
    c.ac_b2 = c.A * c.C - c.B * c.B;
    if (c.f50 == 0) {
        if (c.smooth != 0 && c.f60 != 0) {
            c.kind = Theorem3Kind::swallowtail_biflec;
            return c;
        }
        throw std::domain_error("not a biflecnode stratum");
    }
    if (c.smooth != 0)
        throw std::domain_error("not a codimension-1 biflecnode stratum (simple biflecnode)");
    if (f21 == 0) throw std::domain_error("not a biflecnode stratum");
    if (c.ac_b2 > 0) c.kind = Theorem3Kind::lips;
    else if (c.ac_b2 < 0) c.kind = Theorem3Kind::bec_a_bec;
    else c.kind = Theorem3Kind::cusp_flag;
    return c;
}

const char* theorem4_kind_name(Theorem4Kind k) {
    switch (k) {
        case Theorem4Kind::bi_hyperbonode: return "bi_hyperbonode";
        case Theorem4Kind::flec_hyperbonode: return "flec_hyperbonode";
        case Theorem4Kind::bi_ellipnode: return "bi_ellipnode";
        case Theorem4Kind::ordinary: return "ordinary";
    }
    return "?";
}

Theorem4Certificate theorem4_hyperbonode(const JetTable& J) {
    if (J.f(2, 0) != 0 || J.f(0, 2) != 0 || J.f(1, 1) == 0 || J.f(3, 0) != 0 || J.f(0, 3) != 0)
        throw std::domain_error("not a hyperbonode frame");
    Theorem4Certificate c;
    Rational f11 = J.f(1, 1), f21 = J.f(2, 1), f31 = J.f(3, 1), f12 = J.f(1, 2), f13 = J.f(1, 3);
    c.f40 = J.f(4, 0);
    c.f50 = J.order() >= 5 ? J.f(5, 0) : Rational(0);
    Rational f04 = J.f(0, 4);
    c.left_factor = 3 * f21 * f21 - 2 * f31 * f11;
    c.right_factor = 3 * f12 * f12 - 2 * f13 * f11;
    c.tangency = 4 * c.f40 * f04 * f11 - c.left_factor * c.right_factor;
    if (c.tangency == 0) c.kind = Theorem4Kind::bi_hyperbonode;
    else if (c.f40 == 0 && c.f50 != 0 && c.left_factor * c.right_factor != 0)
        c.kind = Theorem4Kind::flec_hyperbonode;
    else c.kind = Theorem4Kind::ordinary;
    return c;
}

Theorem4Certificate theorem4_ellipnode(const JetTable& J) {
    if (J.f(2, 0) != J.f(0, 2) || J.f(2, 0) == 0 || J.f(1, 1) != 0 || J.f(3, 0) != 0 ||
        J.f(0, 3) != 0 || J.f(2, 1) != 0 || J.f(1, 2) != 0)
        throw std::domain_error("not an ellipnode frame");
    Theorem4Certificate c;
    Rational f40 = J.f(4, 0), f04 = J.f(0, 4), f22 = J.f(2, 2), f31 = J.f(3, 1), f13 = J.f(1, 3);
    c.f40 = f40;
    c.ellip_tangency = (f40 - 3 * f22) * (f04 - 3 * f22) - (f31 - 3 * f13) * (f13 - 3 * f31);
    c.kind = c.ellip_tangency == 0 ? Theorem4Kind::bi_ellipnode : Theorem4Kind::ordinary;
    return c;
}

namespace {

bool rational_sqrt(const Rational& r, Rational& out) {
    if (r < 0) return false;
    BigInt n = numerator(r), d = denominator(r);
    BigInt sn = sqrt(n), sd = sqrt(d);
    if (sn * sn == n && sd * sd == d) {
        out = Rational(sn, sd);
        return true;
    }
    return false;
}

Rational snap_or_exact(double v) {
    // prefer small exact rationals (roots like 0, +-1, 1/2 in the normal forms)
    double r = std::round(v * 840.0) / 840.0;
    if (std::abs(r - v) < 1e-11 * std::max(1.0, std::abs(v)))
        return Rational(BigInt(llround(v * 840.0)), BigInt(840));
    return rational_from_double(v);
}

}  // namespace

std::vector<std::array<Rational, 2>> binary_cubic_real_roots(const Rational& a, const Rational& b,
                                                             const Rational& c, const Rational& d) {
    std::vector<std::array<Rational, 2>> dirs;
    if (a == 0 && b == 0 && c == 0 && d == 0)
        throw std::domain_error("zero cubic form");
    if (a == 0) {
        dirs.push_back({Rational(1), Rational(0)});  // the direction v = 0
        // remaining quadratic b t^2 + c t + d
        if (b == 0) {
            if (c != 0) dirs.push_back({-d / c, Rational(1)});
        } else {
            Rational disc = c * c - 4 * b * d;
            if (disc == 0) throw std::domain_error("degenerate cubic form (repeated root)");
            if (disc > 0) {
                Rational sq;
                if (rational_sqrt(disc, sq)) {
                    dirs.push_back({(-c + sq) / (2 * b), Rational(1)});
                    dirs.push_back({(-c - sq) / (2 * b), Rational(1)});
                } else {
                    double s = std::sqrt(to_double(disc));
                    double b2 = to_double(2 * b), mc = to_double(-c);
                    dirs.push_back({rational_from_double((mc + s) / b2), Rational(1)});
                    dirs.push_back({rational_from_double((mc - s) / b2), Rational(1)});
                }
            }
        }
        return dirs;
    }
    // Full cubic a t^3 + b t^2 + c t + d.
    Rational disc = 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
                    27 * a * a * d * d;
    if (disc == 0) throw std::domain_error("degenerate cubic form (repeated root)");
    double A = to_double(a), B = to_double(b), C = to_double(c), D = to_double(d);
    auto eval = [&](double t) { return ((A * t + B) * t + C) * t + D; };
    auto deriv = [&](double t) { return (3 * A * t + 2 * B) * t + C; };
    std::vector<double> roots;
    double bound = 1.0;
    for (double co : {B / A, C / A, D / A}) bound = std::max(bound, std::abs(co));
    bound = 1.0 + bound;
    if (disc > 0) {
        // three real roots: derivative roots split the axis
        double dd = 4 * B * B - 12 * A * C;
        double s = std::sqrt(std::max(dd, 0.0));
        double t1 = (-2 * B - s) / (6 * A), t2 = (-2 * B + s) / (6 * A);
        if (t1 > t2) std::swap(t1, t2);
        double ivs[4] = {-bound, t1, t2, bound};
        for (int k = 0; k < 3; ++k) {
            double lo = ivs[k], hi = ivs[k + 1], flo = eval(lo), fhi = eval(hi);
            if (flo == 0) { roots.push_back(lo); continue; }
            if (flo * fhi > 0) continue;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (lo + hi), fm = eval(m);
                if (fm == 0 || hi - lo < 1e-16 * std::max(1.0, std::abs(m))) { lo = hi = m; break; }
                if (flo * fm <= 0) { hi = m; fhi = fm; }
                else { lo = m; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    } else {
        // one real root
        double t = 0;
        double flo = eval(-bound), fhi = eval(bound), lo = -bound, hi = bound;
        while (flo * fhi > 0) {
            bound *= 2;
            lo = -bound;
            hi = bound;
            flo = eval(lo);
            fhi = eval(hi);
        }
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (lo + hi), fm = eval(m);
            if (fm == 0 || hi - lo < 1e-16 * std::max(1.0, std::abs(m))) { t = m; break; }
            if (flo * fm <= 0) { hi = m; fhi = fm; }
            else { lo = m; flo = fm; }
            t = m;
        }
        roots.push_back(t);
    }
    for (double t : roots) {
        for (int it = 0; it < 4; ++it) {
            double dv = deriv(t);
            if (dv != 0) t -= eval(t) / dv;
        }
        Rational rt = snap_or_exact(t);
        std::array<Rational, kNumVars> pt{rt, Rational(0), Rational(0), Rational(0)};
        Poly cub = Poly(a) * Poly::variable(Var::x, 3) + Poly(b) * Poly::variable(Var::x, 2) +
                   Poly(c) * Poly::variable(Var::x) + Poly(d);
        if (cub.eval(pt) != 0) rt = rational_from_double(t);
        dirs.push_back({rt, Rational(1)});
    }
    return dirs;
}

D4Certificate classify_d4(const JetTable& J) {
    if (J.f(2, 0) != 0 || J.f(1, 1) != 0 || J.f(0, 2) != 0)
        throw std::domain_error("not a flat umbilic (quadratic part nonzero)");
    Rational c30 = J.f(3, 0) / 6, c21 = J.f(2, 1) / 2, c12 = J.f(1, 2) / 2, c03 = J.f(0, 3) / 6;
    D4Certificate cert;
    cert.kernel_dirs = binary_cubic_real_roots(c30, c21, c12, c03);
    cert.kind = cert.kernel_dirs.size() == 3 ? D4Kind::d4_minus
              : cert.kernel_dirs.size() == 1 ? D4Kind::d4_plus
                                             : D4Kind::degenerate;
    Rational f40 = J.f(4, 0), f31 = J.f(3, 1), f22 = J.f(2, 2), f13 = J.f(1, 3), f04 = J.f(0, 4);
    cert.nondegenerate = true;
    for (const auto& dxy : cert.kernel_dirs) {
        const Rational& u = dxy[0];
        const Rational& v = dxy[1];
        Rational val = f40 * u * u * u * u + 4 * f31 * u * u * u * v + 6 * f22 * u * u * v * v +
                       4 * f13 * u * v * v * v + f04 * v * v * v * v;
        cert.quartic_values.push_back(val);
        if (val == 0) cert.nondegenerate = false;
    }
    return cert;
}

}  // namespace flecscope
