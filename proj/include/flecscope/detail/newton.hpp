#pragma once

#include "flecscope/poly.hpp"

#include <array>
#include <vector>

namespace flecscope::detail {

// Damped Newton on n polynomial equations in a subset of (x,y,p,eps).
struct NewtonSystem {
    std::vector<PolyEvalD> eqs;
    std::vector<std::array<PolyEvalD, 4>> jac;
    std::vector<int> vars;

    NewtonSystem(std::vector<Poly> polys, std::vector<Var> vs);
    bool solve(std::array<double, 4>& pt, double tol, double cap, int iters = 80) const;
};

// Newton for the two-slope multisingularity systems:
//   F(x,y,p1,e) = 0, I(x,y,p1,e) = 0, F(x,y,p2,e) = 0, I(x,y,p2,e) = 0,
//   last = 0, where last is either the parallel-tangency bracket of the two
//   projected inflection branches (tangency mode) or the bi-inflection
//   condition T = I_x + p I_y at p1 (flec mode).
struct TwoSlopeSystem {
    TwoSlopeSystem(const Poly& F, const Poly& I, bool flec_mode);
    // v = (x, y, p1, p2, eps)
    bool solve(std::array<double, 5>& v, double tol, double cap, int iters = 80) const;

  private:
    bool flec_;
    PolyEvalD F_, I_;
    std::array<PolyEvalD, 4> dF_, dI_;
    PolyEvalD wx_, wy_, T_;
    std::array<PolyEvalD, 4> dwx_, dwy_, dT_;
};

double poly_scale(const Poly& p);

}  // namespace flecscope::detail
