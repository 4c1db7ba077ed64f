#include "flecscope/plane_curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace flecscope {

const char* curve_source_name(CurveSource s) {
    switch (s) {
        case CurveSource::parabolic: return "parabolic";
        case CurveSource::discriminant: return "discriminant";
        case CurveSource::flecnodal: return "flecnodal";
        case CurveSource::inflection: return "inflection";
    }
    return "?";
}

namespace {

int thread_count(const TraceOptions& opt) {
    if (opt.threads > 0) return opt.threads;
    if (const char* env = std::getenv("FLECSCOPE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

double max_abs_coeff(const Poly& c) {
    double m = 0;
    for (const auto& [e, v] : c.terms()) m = std::max(m, std::abs(to_double(v)));
    return m == 0 ? 1.0 : m;
}

// ---------------------------------------------------------------------------
// Marching squares with deterministic chain stitching.
// ---------------------------------------------------------------------------

struct Stitcher {
    // edge id -> vertex index
    std::map<long long, int> edge_vertex;
    std::vector<CurveVertex> verts;
    std::vector<std::pair<int, int>> segs;

    int vertex_on_edge(long long key, double x, double y) {
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        CurveVertex v;
        v.x = x;
        v.y = y;
        verts.push_back(v);
        edge_vertex[key] = int(verts.size()) - 1;
        return int(verts.size()) - 1;
    }
};

inline double interp(double a, double b) {
    double d = a - b;
    if (d == 0) return 0.5;
    double t = a / d;
    return std::clamp(t, 0.0, 1.0);
}

}  // namespace

std::vector<std::pair<int, int>> sign_change_cells(const Poly& C, const Window2& w, int res) {
    PolyEvalD f(C);
    const double dx = w.width() / res, dy = w.height() / res;
    std::vector<double> vals(std::size_t(res + 1) * std::size_t(res + 1));
    for (int j = 0; j <= res; ++j)
        for (int i = 0; i <= res; ++i)
            vals[std::size_t(j) * (res + 1) + i] = f(w.x0 + i * dx, w.y0 + j * dy);
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            double v00 = vals[std::size_t(j) * (res + 1) + i];
            double v10 = vals[std::size_t(j) * (res + 1) + i + 1];
            double v01 = vals[std::size_t(j + 1) * (res + 1) + i];
            double v11 = vals[std::size_t(j + 1) * (res + 1) + i + 1];
            double mn = std::min(std::min(v00, v10), std::min(v01, v11));
            double mx = std::max(std::max(v00, v10), std::max(v01, v11));
            if (mn <= 0 && mx >= 0 && (mn < 0 || mx > 0)) out.emplace_back(i, j);
        }
    }
    return out;
}

PlaneCurve trace_curve(const Poly& C, const Window2& w, CurveSource source,
                       const TraceOptions& opt) {
    if (C.uses(Var::p) || C.uses(Var::eps))
        throw std::invalid_argument("trace_curve expects a polynomial in x,y only");
    PlaneCurve out;
    out.source = source;
    out.defining = C;
    out.window = w;
    if (C.is_zero() || C.is_constant()) return out;

    const int res = std::max(opt.res, 16);
    const double dx = w.width() / res, dy = w.height() / res;
    PolyEvalD f(C), fx(C.diff(Var::x)), fy(C.diff(Var::y));
    const double scale = max_abs_coeff(C);

    std::vector<double> vals(std::size_t(res + 1) * std::size_t(res + 1));
    const int nthreads = thread_count(opt);
    auto fill_rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i <= res; ++i)
                vals[std::size_t(j) * (res + 1) + i] = f(w.x0 + i * dx, w.y0 + j * dy);
    };
    if (nthreads <= 1) {
        fill_rows(0, res + 1);
    } else {
        std::vector<std::future<void>> fut;
        int rows = (res + 1 + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            int j0 = t * rows, j1 = std::min(res + 1, j0 + rows);
            if (j0 >= j1) break;
            fut.push_back(std::async(std::launch::async, fill_rows, j0, j1));
        }
        for (auto& ft : fut) ft.get();
    }

    auto V = [&](int i, int j) { return vals[std::size_t(j) * (res + 1) + i]; };

    Stitcher st;
    // edge ids: horizontal edge (i,j): 2*(j*(res+1)+i); vertical: +1
    auto hkey = [&](int i, int j) { return 2LL * (1LL * j * (res + 1) + i); };
    auto vkey = [&](int i, int j) { return 2LL * (1LL * j * (res + 1) + i) + 1; };

    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            double v00 = V(i, j), v10 = V(i + 1, j), v11 = V(i + 1, j + 1), v01 = V(i, j + 1);
            int mask = (v00 < 0 ? 1 : 0) | (v10 < 0 ? 2 : 0) | (v11 < 0 ? 4 : 0) | (v01 < 0 ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            double x0 = w.x0 + i * dx, y0 = w.y0 + j * dy;
            // edge crossing points (bottom, right, top, left)
            int eb = -1, er = -1, et = -1, el = -1;
            if ((v00 < 0) != (v10 < 0))
                eb = st.vertex_on_edge(hkey(i, j), x0 + interp(v00, v10) * dx, y0);
            if ((v10 < 0) != (v11 < 0))
                er = st.vertex_on_edge(vkey(i + 1, j), x0 + dx, y0 + interp(v10, v11) * dy);
            if ((v01 < 0) != (v11 < 0))
                et = st.vertex_on_edge(hkey(i, j + 1), x0 + interp(v01, v11) * dx, y0 + dy);
            if ((v00 < 0) != (v01 < 0))
                el = st.vertex_on_edge(vkey(i, j), x0, y0 + interp(v00, v01) * dy);
            auto add = [&](int a, int b) {
                if (a >= 0 && b >= 0) st.segs.emplace_back(a, b);
            };
            switch (mask) {
                case 1: case 14: add(el, eb); break;
                case 2: case 13: add(eb, er); break;
                case 3: case 12: add(el, er); break;
                case 4: case 11: add(er, et); break;
                case 6: case 9: add(eb, et); break;
                case 7: case 8: add(el, et); break;
                case 5: case 10: {
                    double vc = f(x0 + 0.5 * dx, y0 + 0.5 * dy);
                    bool centerNeg = vc < 0;
                    bool corner00Neg = (mask == 5);
                    if (centerNeg == corner00Neg) {
                        add(el, eb);
                        add(er, et);
                    } else {
                        add(el, et);
                        add(eb, er);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // Newton polish onto the zero set.
    for (auto& v : st.verts) {
        for (int it = 0; it < 12; ++it) {
            double val = f(v.x, v.y);
            if (std::abs(val) < opt.tol * scale) break;
            double gx = fx(v.x, v.y), gy = fy(v.x, v.y);
            double g2 = gx * gx + gy * gy;
            if (g2 < 1e-16 * scale * scale) break;
            double step = val / g2;
            double sx = step * gx, sy = step * gy;
            double cap = 0.75 * std::min(dx, dy);
            double len = std::sqrt(sx * sx + sy * sy);
            if (len > cap) {
                sx *= cap / len;
                sy *= cap / len;
            }
            v.x -= sx;
            v.y -= sy;
        }
    }

    // Assemble chains: walk open paths from odd-degree vertices, then cycles.
    std::vector<std::vector<int>> adj(st.verts.size());
    for (auto& [a, b] : st.segs) {
        if (a == b) continue;
        adj[std::size_t(a)].push_back(b);
        adj[std::size_t(b)].push_back(a);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());
    std::vector<std::set<int>> remaining(st.verts.size());
    for (std::size_t i = 0; i < adj.size(); ++i)
        remaining[i] = std::set<int>(adj[i].begin(), adj[i].end());

    auto walk = [&](int start) {
        std::vector<int> path{start};
        int cur = start;
        while (!remaining[std::size_t(cur)].empty()) {
            int nxt = *remaining[std::size_t(cur)].begin();
            remaining[std::size_t(cur)].erase(nxt);
            remaining[std::size_t(nxt)].erase(cur);
            path.push_back(nxt);
            cur = nxt;
            if (cur == start) break;
        }
        return path;
    };

    auto emit = [&](const std::vector<int>& path) {
        if (path.size() < 2) return;
        Chain c;
        c.closed = path.size() > 2 && path.front() == path.back();
        for (std::size_t k = 0; k < path.size(); ++k) {
            const auto& v = st.verts[std::size_t(path[k])];
            if (!c.pts.empty()) {
                double d = std::abs(c.pts.back().x - v.x) + std::abs(c.pts.back().y - v.y);
                if (d < 1e-12) continue;
            }
            c.pts.push_back(v);
        }
        if (c.pts.size() >= 2) out.chains.push_back(std::move(c));
    };

    for (std::size_t i = 0; i < st.verts.size(); ++i)
        if (remaining[i].size() == 1) emit(walk(int(i)));
    for (std::size_t i = 0; i < st.verts.size(); ++i)
        while (!remaining[i].empty()) emit(walk(int(i)));

    std::sort(out.chains.begin(), out.chains.end(), [](const Chain& a, const Chain& b) {
        if (a.pts[0].x != b.pts[0].x) return a.pts[0].x < b.pts[0].x;
        return a.pts[0].y < b.pts[0].y;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Univariate real roots in the slope variable.
// ---------------------------------------------------------------------------

namespace {

std::vector<double> poly_real_roots(std::vector<double> c, double lo, double hi, double tol) {
    // strip negligible leading coefficients
    double scale = 0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0) return {};
    while (c.size() > 1 && std::abs(c.back()) < 1e-13 * scale) c.pop_back();
    int deg = int(c.size()) - 1;
    auto eval = [&](double t) {
        double acc = 0;
        for (int k = deg; k >= 0; --k) acc = acc * t + c[std::size_t(k)];
        return acc;
    };
    std::vector<double> roots;
    if (deg <= 0) return roots;
    if (deg == 1) {
        double r = -c[0] / c[1];
        if (r >= lo && r <= hi) roots.push_back(r);
        return roots;
    }
    if (deg == 2) {
        double a = c[2], b = c[1], d = c[0];
        double disc = b * b - 4 * a * d;
        if (disc < 0 && disc > -1e-11 * (b * b + std::abs(4 * a * d) + 1e-300)) disc = 0;
        if (disc < 0) return roots;
        double sq = std::sqrt(disc);
        double q = -0.5 * (b + (b >= 0 ? sq : -sq));
        double r1 = q / a;
        double r2 = (q != 0) ? d / q : r1;
        for (double r : {std::min(r1, r2), std::max(r1, r2)})
            if (r >= lo && r <= hi && (roots.empty() || std::abs(roots.back() - r) > 1e-12))
                roots.push_back(r);
        return roots;
    }
    // derivative roots split the axis into monotone pieces
    std::vector<double> dc(static_cast<std::size_t>(deg));
    for (int k = 1; k <= deg; ++k) dc[std::size_t(k - 1)] = k * c[std::size_t(k)];
    std::vector<double> crit = poly_real_roots(dc, lo, hi, tol);
    std::vector<double> knots{lo};
    for (double t : crit) knots.push_back(t);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], b = knots[i + 1];
        if (b - a < 1e-15) continue;
        double fa = eval(a), fb = eval(b);
        if (fa == 0) roots.push_back(a);
        if (fa * fb > 0) continue;
        for (int it = 0; it < 80; ++it) {
            double m = 0.5 * (a + b);
            double fm = eval(m);
            if (fm == 0 || b - a < 1e-15 * std::max(1.0, std::abs(m))) {
                a = b = m;
                break;
            }
            if (fa * fm <= 0) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    // near-double roots at critical points
    for (double t : crit)
        if (std::abs(eval(t)) < tol * scale * std::max(1.0, std::pow(std::abs(t), deg)))
            roots.push_back(t);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                roots.end());
    return roots;
}

}  // namespace

std::vector<double> slope_roots(const IdeSurface& e, double x, double y, double lo, double hi,
                                double tol) {
    auto cs = e.F().coefficients_in(Var::p);
    std::vector<double> c;
    c.reserve(cs.size());
    for (const auto& cp : cs) c.push_back(cp.eval_d({x, y, 0.0, 0.0}));
    return poly_real_roots(std::move(c), lo, hi, tol);
}

// ---------------------------------------------------------------------------
// Resultant-based curve polynomials.
// ---------------------------------------------------------------------------

Poly hessian_poly(const MongeSurface& s) {
    Poly fxx = s.f.diff(Var::x, 2);
    Poly fxy = s.f.diff(Var::x).diff(Var::y);
    Poly fyy = s.f.diff(Var::y, 2);
    return fxx * fyy - fxy * fxy;
}

std::pair<Poly, PlaneCurve> hessian_curve(const MongeSurface& s, const Window2& w,
                                          const TraceOptions& opt) {
    Poly H = hessian_poly(s);
    if (H.is_zero()) throw std::domain_error("developable/degenerate surface");
    return {H, trace_curve(H.uses(Var::eps) ? H.subst(Var::eps, Poly(0)) : H, w,
                           CurveSource::parabolic, opt)};
}

Poly discriminant_poly(const IdeSurface& e) {
    if (e.F().degree(Var::p) < 1) return Poly();
    return resultant(e.F(), e.Fp(), Var::p).normalized();
}

Poly inflection_poly(const IdeSurface& e) {
    Poly I = inflection_function(e);
    if (e.F().degree(Var::p) < 1 && I.degree(Var::p) < 1) return (e.F() * I).normalized();
    return resultant(e.F(), I, Var::p).normalized();
}

namespace {

// Tag vertices with the witnessing slope root and its left/right side; drop
// vertices with no witness (extraneous resultant factors), splitting chains.
void tag_and_validate(PlaneCurve& pc, const IdeSurface& e, double tol) {
    Poly I = inflection_function(e);
    PolyEvalD Iv(I), Fpv(e.Fp());
    double iscale = max_abs_coeff(I);
    std::vector<Chain> kept;
    for (auto& ch : pc.chains) {
        Chain cur;
        auto flush = [&]() {
            if (cur.pts.size() >= 2) kept.push_back(cur);
            cur.pts.clear();
            cur.closed = false;
        };
        for (std::size_t k = 0; k < ch.pts.size(); ++k) {
            auto v = ch.pts[k];
            auto roots = slope_roots(e, v.x, v.y);
            double slope = 0;
            bool have_slope = false;
            if (ch.pts.size() > 1) {
                std::size_t a = k > 0 ? k - 1 : k, b = k + 1 < ch.pts.size() ? k + 1 : k;
                double dx = ch.pts[b].x - ch.pts[a].x, dy = ch.pts[b].y - ch.pts[a].y;
                if (std::abs(dx) > 1e-14) {
                    slope = dy / dx;
                    have_slope = true;
                }
            }
            double best = 0, bestScore = 1e300;
            bool found = false;
            for (double r : roots) {
                if (std::abs(Iv(v.x, v.y, r)) >
                    tol * iscale * std::max(1.0, std::pow(std::abs(r) + 1, I.degree(Var::p))))
                    continue;
                double score = have_slope ? std::abs(r - slope) : std::abs(r);
                if (!cur.pts.empty()) score += 0.5 * std::abs(r - cur.pts.back().p);
                if (score < bestScore) {
                    bestScore = score;
                    best = r;
                    found = true;
                }
            }
            if (!found) {
                flush();
                continue;
            }
            v.p = best;
            double fp = Fpv(v.x, v.y, best);
            v.branch = std::abs(fp) < 1e-9 ? Side::fold : (fp > 0 ? Side::right : Side::left);
            cur.pts.push_back(v);
        }
        cur.closed = ch.closed && cur.pts.size() == ch.pts.size();
        flush();
    }
    pc.chains = std::move(kept);
}

}  // namespace

std::pair<Poly, PlaneCurve> discriminant_curve(const IdeSurface& e, const Window2& w,
                                               const TraceOptions& opt) {
    Poly D = discriminant_poly(e);
    if (D.is_zero()) throw std::domain_error("discriminant not of codimension 1");
    Poly Dn = D.uses(Var::eps) ? D.subst(Var::eps, Poly(0)) : D;
    PlaneCurve pc = trace_curve(Dn, w, CurveSource::discriminant, opt);
    return {D, pc};
}

std::pair<Poly, PlaneCurve> inflection_curve(const IdeSurface& e, const Window2& w,
                                             const TraceOptions& opt) {
    Poly R = inflection_poly(e);
    if (R.is_zero()) throw std::domain_error("inflection curve not of codimension 1");
    PlaneCurve pc = trace_curve(R, w, CurveSource::inflection, opt);
    tag_and_validate(pc, e, 1e-5);
    // dual chart contributes the vertical-slope points
    IdeSurface dual = e.dual();
    Poly Rq = inflection_poly(dual);
    if (!Rq.is_zero() && !Rq.proportional_to(R)) {
        PlaneCurve qc = trace_curve(Rq, w, CurveSource::inflection, opt);
        tag_and_validate(qc, dual, 1e-5);
        PolyEvalD Rv(R);
        double rscale = max_abs_coeff(R);
        for (auto& ch : qc.chains) {
            bool dup = true;
            for (auto& v : ch.pts)
                if (std::abs(Rv(v.x, v.y)) > 1e-4 * rscale) {
                    dup = false;
                    break;
                }
            if (!dup) pc.chains.push_back(ch);
        }
    }
    return {R, pc};
}

Poly flecnodal_poly(const MongeSurface& s) {
    IdeSurface a = asymptotic_ide(s);
    Poly R = resultant(a.F(), inflection_function(a), Var::p);
    if (R.is_zero()) throw std::domain_error("flecnodal curve not of codimension 1");
    return R.normalized();
}

std::pair<Poly, PlaneCurve> flecnodal_curve(const MongeSurface& s, const Window2& w,
                                            const TraceOptions& opt) {
    MongeSurface s0{s.f.uses(Var::eps) ? s.f.subst(Var::eps, Poly(0)) : s.f};
    IdeSurface a = asymptotic_ide(s0);
    Poly R = flecnodal_poly(s);
    Poly Rn = R.uses(Var::eps) ? R.subst(Var::eps, Poly(0)) : R;
    if (Rn.is_zero()) throw std::domain_error("flecnodal curve not of codimension 1");
    PlaneCurve pc = trace_curve(Rn, w, CurveSource::flecnodal, opt);
    tag_and_validate(pc, a, 1e-5);
    IdeSurface ad = asymptotic_ide_dual(s0);
    Poly Rq = resultant(ad.F(), inflection_function(ad), Var::p);
    if (!Rq.is_zero()) {
        Rq = Rq.normalized();
        if (!Rq.proportional_to(Rn)) {
            PlaneCurve qc = trace_curve(Rq, w, CurveSource::flecnodal, opt);
            tag_and_validate(qc, ad, 1e-5);
            PolyEvalD Rv(Rn);
            double rscale = max_abs_coeff(Rn);
            for (auto& ch : qc.chains) {
                bool dup = true;
                for (auto& v : ch.pts)
                    if (std::abs(Rv(v.x, v.y)) > 1e-4 * rscale) {
                        dup = false;
                        break;
                    }
                if (!dup) pc.chains.push_back(ch);
            }
        }
    }
    return {R, pc};
}

// ---------------------------------------------------------------------------
// Contact order.
// ---------------------------------------------------------------------------

namespace {

using Series = std::vector<Rational>;  // coefficients of x^0..x^K

Series s_zero(int K) { return Series(std::size_t(K) + 1, Rational(0)); }

Series s_mul(const Series& a, const Series& b, int K) {
    Series r = s_zero(K);
    for (int i = 0; i <= K; ++i) {
        if (a[std::size_t(i)] == 0) continue;
        for (int j = 0; i + j <= K; ++j) {
            if (b[std::size_t(j)] == 0) continue;
            r[std::size_t(i + j)] += a[std::size_t(i)] * b[std::size_t(j)];
        }
    }
    return r;
}

Series s_add(const Series& a, const Series& b) {
    Series r = a;
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Series s_inv(const Series& a, int K) {
    if (a[0] == 0) throw std::domain_error("series not invertible");
    Series r = s_zero(K);
    r[0] = Rational(1) / a[0];
    for (int n = 1; n <= K; ++n) {
        Rational acc(0);
        for (int k = 1; k <= n; ++k) acc += a[std::size_t(k)] * r[std::size_t(n - k)];
        r[std::size_t(n)] = -acc / a[0];
    }
    return r;
}

// C(x, s(x)) truncated, with C a poly in x and y.
Series s_compose(const Poly& C, const Series& s, int K) {
    auto cs = C.coefficients_in(Var::y);
    Series r = s_zero(K);
    for (int k = int(cs.size()) - 1; k >= 0; --k) {
        r = s_mul(r, s, K);
        Series cser = s_zero(K);
        for (const auto& [e, c] : cs[std::size_t(k)].terms()) {
            if (e[0] <= std::uint16_t(K)) cser[e[0]] += c;
        }
        r = s_add(r, cser);
    }
    return r;
}

// Branch y = s(x) of C = 0 at the origin; requires C(0,0)=0, C_y(0,0)!=0.
Series solve_branch(const Poly& C, int K) {
    Poly Cy = C.diff(Var::y);
    Series s = s_zero(K);
    // Newton doubles the number of correct coefficients per step.
    for (int ord = 1; ord <= 2 * K + 2; ord *= 2) {
        Series val = s_compose(C, s, K);
        Series der = s_compose(Cy, s, K);
        Series corr = s_mul(val, s_inv(der, K), K);
        for (int i = 0; i <= K; ++i) s[std::size_t(i)] -= corr[std::size_t(i)];
        s[0] = Rational(0);
    }
    return s;
}

struct RationalSnap {
    bool ok = false;
    Rational x, y;
};

bool snap_1d(double v, Rational& out) {
    // continued fraction with bounded denominator
    double target = v;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = target;
    for (int it = 0; it < 40; ++it) {
        double fl = std::floor(x);
        if (std::abs(fl) > 9e17) break;
        long long a = (long long)fl;
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > 1000000 || q2 < 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double approx = double(p1) / double(q1);
        if (std::abs(approx - target) < 1e-9 * std::max(1.0, std::abs(target))) {
            out = Rational(BigInt(p1), BigInt(q1));
            return true;
        }
        double frac = x - fl;
        if (frac < 1e-12) break;
        x = 1.0 / frac;
    }
    return false;
}

RationalSnap snap_point(double x, double y) {
    RationalSnap s;
    Rational rx, ry;
    if (snap_1d(x, rx) && snap_1d(y, ry)) {
        s.ok = true;
        s.x = rx;
        s.y = ry;
    }
    return s;
}

int exact_contact_order(Poly C1, Poly C2, const Rational& x0, const Rational& y0) {
    std::array<Rational, kNumVars> sh{x0, y0, Rational(0), Rational(0)};
    C1 = C1.shift(sh);
    C2 = C2.shift(sh);
    std::array<Rational, kNumVars> origin{Rational(0), Rational(0), Rational(0), Rational(0)};
    Rational g1x = C1.diff(Var::x).eval(origin), g1y = C1.diff(Var::y).eval(origin);
    Rational g2x = C2.diff(Var::x).eval(origin), g2y = C2.diff(Var::y).eval(origin);
    bool sing1 = g1x == 0 && g1y == 0, sing2 = g2x == 0 && g2y == 0;
    if (sing1 && sing2) throw std::domain_error("both branches singular at contact point");
    if (sing2) {
        std::swap(C1, C2);
        std::swap(g1x, g2x);
        std::swap(g1y, g2y);
    }
    if (!sing1 && !sing2 && g1x * g2y - g1y * g2x != 0) return 1;  // transverse
    // parametrise the branch of C2; swap axes if its tangent is vertical
    if (g2y == 0) {
        auto swap_xy = [](const Poly& P) {
            Poly t = P.subst(Var::x, Poly::variable(Var::p));
            t = t.subst(Var::y, Poly::variable(Var::x));
            return t.subst(Var::p, Poly::variable(Var::y));
        };
        C1 = swap_xy(C1);
        C2 = swap_xy(C2);
    }
    int K = std::min(24, (C1.total_degree() + 1) * (C2.total_degree() + 1) + 2);
    Series s = solve_branch(C2, K);
    Series g = s_compose(C1, s, K);
    for (int k = 0; k <= K; ++k)
        if (g[std::size_t(k)] != 0) return k;
    throw std::domain_error("non-isolated contact");
}

}  // namespace

int tangency_order(const Poly& C1in, const Poly& C2in, double nx, double ny, double tol) {
    Poly C1 = C1in.uses(Var::eps) ? C1in.subst(Var::eps, Poly(0)) : C1in;
    Poly C2 = C2in.uses(Var::eps) ? C2in.subst(Var::eps, Poly(0)) : C2in;
    if (C1.is_zero() || C2.is_zero()) throw std::invalid_argument("zero polynomial curve");
    double s1 = max_abs_coeff(C1), s2 = max_abs_coeff(C2);
    double v1 = std::abs(C1.eval_d({nx, ny, 0, 0})) / s1;
    double v2 = std::abs(C2.eval_d({nx, ny, 0, 0})) / s2;
    if (v1 > std::sqrt(tol) || v2 > std::sqrt(tol))
        throw std::invalid_argument("curves do not pass near the given point");

    auto snap = snap_point(nx, ny);
    if (snap.ok) {
        std::array<Rational, kNumVars> pt{snap.x, snap.y, Rational(0), Rational(0)};
        if (C1.eval(pt) == 0 && C2.eval(pt) == 0) return exact_contact_order(C1, C2, snap.x, snap.y);
    }

    // Derivative-order counting on the elimination polynomial.
    Poly R;
    double base = nx;
    Poly lc1 = C1.leading_coefficient_in(Var::y), lc2 = C2.leading_coefficient_in(Var::y);
    bool use_y = C1.degree(Var::y) > 0 && C2.degree(Var::y) > 0 &&
                 std::abs(lc1.eval_d({nx, ny, 0, 0})) > 1e-8 * s1 &&
                 std::abs(lc2.eval_d({nx, ny, 0, 0})) > 1e-8 * s2;
    if (use_y) {
        R = resultant(C1, C2, Var::y);
    } else {
        R = resultant(C1, C2, Var::x);
        base = ny;
    }
    if (R.is_zero()) throw std::domain_error("non-isolated contact");
    R = R.normalized();
    int d = std::max(R.degree(Var::x), R.degree(Var::y));
    std::vector<double> m;
    Poly Rk = R;
    Var bv = use_y ? Var::x : Var::y;
    double fact = 1;
    for (int k = 0; k <= d; ++k) {
        m.push_back(std::abs(Rk.eval_d({use_y ? base : 0, use_y ? 0 : base, 0, 0})) / fact);
        Rk = Rk.diff(bv);
        fact *= (k + 1);
        if (Rk.is_zero()) break;
    }
    double M = 0;
    for (double v : m) M = std::max(M, v);
    if (M == 0) throw std::domain_error("non-isolated contact");
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k] > std::sqrt(tol) * M) return int(k);
    return int(m.size()) - 1;
}

int folded_point_multiplicity(const IdeSurface& e, double x, double y) {
    Poly D = discriminant_poly(e);
    Poly I = inflection_poly(e);
    int ord = tangency_order(D, I, x, y);
    if (ord % 2 != 0) return ord;  // shouldn't happen at a folded point; report raw
    return ord / 2;
}

std::string curves_to_csv(const std::vector<PlaneCurve>& curves) {
    std::ostringstream os;
    os << "chain,x,y,branch,source\n";
    int id = 0;
    char buf[64];
    for (const auto& pc : curves) {
        for (const auto& ch : pc.chains) {
            for (const auto& v : ch.pts) {
                std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%s,%s\n", id, v.x, v.y,
                              side_name(v.branch), curve_source_name(pc.source));
                os << buf;
            }
            ++id;
        }
    }
    return os.str();
}

}  // namespace flecscope
