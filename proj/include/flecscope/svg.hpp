#pragma once

#include "flecscope/plane_curves.hpp"
#include "flecscope/points.hpp"

#include <string>
#include <vector>

namespace flecscope {

struct SvgStyle {
    int width_px = 640;
    int height_px = 640;
    int shade_res = 220;  // hyperbolic-domain shading grid
};

// Deterministic SVG (stable element order, 9 significant digits).
// Conventions: elliptic domain white, hyperbolic domain gray, right branches
// black, left branches white; godrons are white dots, hyperbonodes black dots,
// ellipnodes white squares, biflecnodes black squares.
// `domain_sign` (optional) shades the region where it is negative.
std::string render_svg(const std::vector<PlaneCurve>& curves,
                       const std::vector<SpecialPoint>& points, const Window2& window,
                       const Poly* domain_sign = nullptr,
                       const std::vector<std::vector<std::pair<double, double>>>* trajectories =
                           nullptr,
                       const SvgStyle& style = {});

}  // namespace flecscope
