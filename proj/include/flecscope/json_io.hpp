#pragma once

#include "flecscope/bifurcation.hpp"
#include "flecscope/ide.hpp"
#include "flecscope/points.hpp"
#include "flecscope/poly.hpp"

#include <string>
#include <vector>

namespace flecscope {

// Polynomial literal: {"vars":["x","y"],"terms":[{"e":[2,0],"c":"1/2"},...]}
// with coefficients as decimal or "num/den" strings (bare numbers accepted).
Poly poly_from_json(const std::string& text);
std::string poly_to_json(const Poly& p);

std::string special_points_to_json(const std::vector<SpecialPoint>& pts);
std::string char_points_to_json(const std::vector<CharPoint>& pts);
std::string events_to_json(const std::vector<BifurcationEvent>& evs);

}  // namespace flecscope
