#pragma once

#include "flecscope/ide.hpp"
#include "flecscope/jet_conditions.hpp"
#include "flecscope/plane_curves.hpp"

#include <map>
#include <string>
#include <vector>

namespace flecscope {

enum class PointKind { godron, hyperbonode, ellipnode, biflecnode };
const char* point_kind_name(PointKind k);

// The affine change used to reach the normal position at a detected point.
struct AdaptedFrame {
    double x0 = 0, y0 = 0;
    double basis[2][2] = {{1, 0}, {0, 1}};  // columns: new x-axis, new y-axis in old coords
    bool z_flipped = false;
    double shear_a = 0, shear_b = 0;  // (x,y,z) -> (x+az, y+bz, z), ellipnode frame only
};

struct SpecialPoint {
    PointKind kind = PointKind::godron;
    double x = 0, y = 0;
    int index = 0;                 // godron geometric index (+1/-1), 0 = none
    int index_characteristic = 0;  // godron index via the characteristic point
    std::map<std::string, std::string> certificate;  // named exact values
    bool flagged = false;
    std::string flag;  // e.g. "non-simple godron candidate"
    AdaptedFrame frame;
    Side branch = Side::fold;  // biflecnodes: branch carrying the 5-point contact
    double p_witness = 0;      // slope of the over-osculating asymptotic line
};

struct DetectOptions {
    Window2 window{};
    int res = 192;        // seed-tracing resolution
    double tol = 1e-8;    // certificate equality tolerance (unit-normalized jets)
    double newton = 1e-11;
};

std::vector<SpecialPoint> detect_godrons(const MongeSurface& s, const DetectOptions& opt = {});
std::vector<SpecialPoint> detect_hyperbonodes(const MongeSurface& s, const DetectOptions& opt = {});
std::vector<SpecialPoint> detect_ellipnodes(const MongeSurface& s, const DetectOptions& opt = {});
std::vector<SpecialPoint> detect_biflecnodes(const MongeSurface& s, const DetectOptions& opt = {});
std::vector<SpecialPoint> detect_all(const MongeSurface& s, const DetectOptions& opt = {});

// Node residuals: the two coefficients of the remainder of the cubic jet
// modulo the quadratic jet at (x,y), as exact polynomials in (x,y).
// Their common zeros are the projective umbilics (hyperbonodes/ellipnodes).
// Throws std::domain_error("every point is a node") when both vanish
// identically (quadrics).
std::pair<Poly, Poly> node_residuals(const MongeSurface& s);

// Exact jets in the adapted frames (frames built in doubles, applied exactly).
JetTable adapted_godron_jets(const MongeSurface& s, double x, double y, int order,
                             AdaptedFrame* frame_out = nullptr);
JetTable adapted_node_jets(const MongeSurface& s, double x, double y, double p_over, int order,
                           AdaptedFrame* frame_out = nullptr);
JetTable adapted_ellipnode_jets(const MongeSurface& s, double x, double y, int order,
                                AdaptedFrame* frame_out = nullptr);

// Linear change of surface coordinates applied exactly:
// returns g(u,v) = f(x0 + m00 u + m01 v, y0 + m10 u + m11 v) with the value
// and the linear part at the new origin removed (graph recentering).
Poly recentred_graph(const Poly& f, const Rational& x0, const Rational& y0,
                     const std::array<std::array<Rational, 2>, 2>& m);

// Graph transform under (x,y,z) -> (x + a z, y + b z, z), truncated at
// total degree `order` (series inversion; f must have zero 1-jet).
Poly graph_shear(const Poly& f, const Rational& a, const Rational& b, int order);

}  // namespace flecscope
