#include "flecscope/detail/newton.hpp"

#include <cmath>
#include <stdexcept>

namespace flecscope::detail {

double poly_scale(const Poly& p) {
    double m = 0;
    for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(to_double(c)));
    return m == 0 ? 1.0 : m;
}

NewtonSystem::NewtonSystem(std::vector<Poly> polys, std::vector<Var> vs) {
    for (auto& p : polys) {
        eqs.emplace_back(p);
        jac.push_back({PolyEvalD(p.diff(Var::x)), PolyEvalD(p.diff(Var::y)),
                       PolyEvalD(p.diff(Var::p)), PolyEvalD(p.diff(Var::eps))});
    }
    for (auto v : vs) vars.push_back(static_cast<int>(v));
}

bool NewtonSystem::solve(std::array<double, 4>& pt, double tol, double cap, int iters) const {
    const std::size_t n = eqs.size();
    if (n != vars.size()) throw std::logic_error("NewtonSystem shape");
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
    for (int it = 0; it < iters; ++it) {
        double res = 0;
        for (std::size_t r = 0; r < n; ++r) {
            double v = eqs[r](pt[0], pt[1], pt[2], pt[3]);
            res = std::max(res, std::abs(v));
            a[r][n] = -v;
            for (std::size_t c = 0; c < n; ++c)
                a[r][c] = jac[r][std::size_t(vars[c])](pt[0], pt[1], pt[2], pt[3]);
        }
        if (res < tol && it > 0) return true;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-15) return false;
            std::swap(a[piv], a[col]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                double m = a[r][col] / a[col][col];
                for (std::size_t c = col; c <= n; ++c) a[r][c] -= m * a[col][c];
            }
        }
        double len = 0;
        for (std::size_t c = 0; c < n; ++c) {
            a[c][n] /= a[c][c];
            len += a[c][n] * a[c][n];
        }
        len = std::sqrt(len);
        double damp = len > cap ? cap / len : 1.0;
        for (std::size_t c = 0; c < n; ++c) pt[std::size_t(vars[c])] += damp * a[c][n];
    }
    double res = 0;
    for (std::size_t r = 0; r < n; ++r)
        res = std::max(res, std::abs(eqs[r](pt[0], pt[1], pt[2], pt[3])));
    return res < tol;
}

TwoSlopeSystem::TwoSlopeSystem(const Poly& F, const Poly& I, bool flec_mode)
    : flec_(flec_mode),
      F_(F),
      I_(I),
      dF_{PolyEvalD(F.diff(Var::x)), PolyEvalD(F.diff(Var::y)), PolyEvalD(F.diff(Var::p)),
          PolyEvalD(F.diff(Var::eps))},
      dI_{PolyEvalD(I.diff(Var::x)), PolyEvalD(I.diff(Var::y)), PolyEvalD(I.diff(Var::p)),
          PolyEvalD(I.diff(Var::eps))},
      wx_(F.diff(Var::y) * I.diff(Var::p) - F.diff(Var::p) * I.diff(Var::y)),
      wy_(F.diff(Var::p) * I.diff(Var::x) - F.diff(Var::x) * I.diff(Var::p)),
      T_(I.diff(Var::x) + Poly::variable(Var::p) * I.diff(Var::y)) {
    Poly wx = F.diff(Var::y) * I.diff(Var::p) - F.diff(Var::p) * I.diff(Var::y);
    Poly wy = F.diff(Var::p) * I.diff(Var::x) - F.diff(Var::x) * I.diff(Var::p);
    Poly T = I.diff(Var::x) + Poly::variable(Var::p) * I.diff(Var::y);
    dwx_ = {PolyEvalD(wx.diff(Var::x)), PolyEvalD(wx.diff(Var::y)), PolyEvalD(wx.diff(Var::p)),
            PolyEvalD(wx.diff(Var::eps))};
    dwy_ = {PolyEvalD(wy.diff(Var::x)), PolyEvalD(wy.diff(Var::y)), PolyEvalD(wy.diff(Var::p)),
            PolyEvalD(wy.diff(Var::eps))};
    dT_ = {PolyEvalD(T.diff(Var::x)), PolyEvalD(T.diff(Var::y)), PolyEvalD(T.diff(Var::p)),
           PolyEvalD(T.diff(Var::eps))};
}

bool TwoSlopeSystem::solve(std::array<double, 5>& v, double tol, double cap, int iters) const {
    for (int it = 0; it < iters; ++it) {
        const double x = v[0], y = v[1], p1 = v[2], p2 = v[3], e = v[4];
        double eq[5], J[5][6];
        eq[0] = F_(x, y, p1, e);
        eq[1] = I_(x, y, p1, e);
        eq[2] = F_(x, y, p2, e);
        eq[3] = I_(x, y, p2, e);
        double a1 = wx_(x, y, p1, e), b1 = wy_(x, y, p1, e);
        double a2 = wx_(x, y, p2, e), b2 = wy_(x, y, p2, e);
        eq[4] = flec_ ? T_(x, y, p1, e) : (a1 * b2 - b1 * a2);
        double res = 0;
        for (double q : eq) res = std::max(res, std::abs(q));
        if (res < tol && it > 0) return true;

        auto fill = [&](int r, const std::array<PolyEvalD, 4>& d, double p, bool at_p1) {
            J[r][0] = d[0](x, y, p, e);
            J[r][1] = d[1](x, y, p, e);
            J[r][2] = at_p1 ? d[2](x, y, p, e) : 0.0;
            J[r][3] = at_p1 ? 0.0 : d[2](x, y, p, e);
            J[r][4] = d[3](x, y, p, e);
        };
        fill(0, dF_, p1, true);
        fill(1, dI_, p1, true);
        fill(2, dF_, p2, false);
        fill(3, dI_, p2, false);
        if (flec_) {
            fill(4, dT_, p1, true);
        } else {
            // d/du [wx(p1) wy(p2) - wy(p1) wx(p2)]
            auto dwx1 = [&](int k) { return dwx_[std::size_t(k)](x, y, p1, e); };
            auto dwy1 = [&](int k) { return dwy_[std::size_t(k)](x, y, p1, e); };
            auto dwx2 = [&](int k) { return dwx_[std::size_t(k)](x, y, p2, e); };
            auto dwy2 = [&](int k) { return dwy_[std::size_t(k)](x, y, p2, e); };
            J[4][0] = dwx1(0) * b2 + a1 * dwy2(0) - dwy1(0) * a2 - b1 * dwx2(0);
            J[4][1] = dwx1(1) * b2 + a1 * dwy2(1) - dwy1(1) * a2 - b1 * dwx2(1);
            J[4][2] = dwx1(2) * b2 - dwy1(2) * a2;
            J[4][3] = a1 * dwy2(2) - b1 * dwx2(2);
            J[4][4] = dwx1(3) * b2 + a1 * dwy2(3) - dwy1(3) * a2 - b1 * dwx2(3);
        }
        for (int r = 0; r < 5; ++r) J[r][5] = -eq[r];
        for (int col = 0; col < 5; ++col) {
            int piv = col;
            for (int r = col + 1; r < 5; ++r)
                if (std::abs(J[r][col]) > std::abs(J[piv][col])) piv = r;
            if (std::abs(J[piv][col]) < 1e-14) return false;
            for (int c = 0; c < 6; ++c) std::swap(J[piv][c], J[col][c]);
            for (int r = 0; r < 5; ++r) {
                if (r == col) continue;
                double m = J[r][col] / J[col][col];
                for (int c = col; c < 6; ++c) J[r][c] -= m * J[col][c];
            }
        }
        double len = 0;
        for (int c = 0; c < 5; ++c) {
            J[c][5] /= J[c][c];
            len += J[c][5] * J[c][5];
        }
        len = std::sqrt(len);
        double damp = len > cap ? cap / len : 1.0;
        for (int c = 0; c < 5; ++c) v[std::size_t(c)] += damp * J[c][5];
    }
    return false;
}

}  // namespace flecscope::detail
