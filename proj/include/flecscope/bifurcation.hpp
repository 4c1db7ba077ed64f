#pragma once

#include "flecscope/cone.hpp"
#include "flecscope/ide.hpp"
#include "flecscope/jet_conditions.hpp"
#include "flecscope/plane_curves.hpp"
#include "flecscope/points.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flecscope {

enum class BifKind {
    A4_bigodron,
    flecgodron,
    A3,
    lips,
    bec_a_bec,
    swallowtail_biflec,
    bi_hyperbonode,
    flec_hyperbonode,
    bi_ellipnode,
    D4_plus,
    D4_minus,
    UW,
    gamma_v,
    double_hn,
    flec_hn,
};
const char* bif_kind_name(BifKind k);

// Counts of special objects in the scan window (-1 = not counted).
struct Census {
    int godrons = -1;
    int hyperbonodes = -1;
    int ellipnodes = -1;
    int biflecnodes = -1;
    int folded_points = -1;
    int folded_index_sum = 0;
    int bi_inflections = -1;
};

struct BifurcationEvent {
    BifKind kind = BifKind::A3;
    double eps_star = 0;
    double eps_lo = 0, eps_hi = 0;  // bracket
    double x = 0, y = 0, p = 0;
    bool has_p = false;
    std::map<std::string, std::string> certificate;
    std::map<std::string, std::string> model;  // local-model coefficients
    Census before, after;
    bool census_consistent = false;
    // A3 payload
    bool has_cone = false;
    ConePosition cone_position = ConePosition::d;
    bool surface_route = false;       // conjugate-fibre (a^f) cone path
    bool umbrella_elliptic = false;   // surface A3: a*delta > 0
    bool interpretation_dependent = false;  // bi-ellipnode dotted-box semantics
    bool unresolved_ordering = false;
    std::string detail;
};

struct ScanOptions {
    Window2 window{};
    double p_lo = -4, p_hi = 4;   // slope range for IDE scans
    double eps_tol = 1e-10;
    int eps_samples = 25;
    double census_delta = 0;      // 0 = max(1e-4, 10*eps_tol)
    int res = 160;                // detection resolution per sample
    double tol = 1e-8;
};

double census_delta_of(const ScanOptions& opt);

// Surface families z = f(x,y,eps); finds every codimension-1 event in range.
// Throws std::domain_error("non-generic family") when a tracked condition
// functional vanishes identically on the range.
std::vector<BifurcationEvent> scan_family(const MongeSurface& family, double eps_lo,
                                          double eps_hi, const ScanOptions& opt = {});

// IDE families F(x,y,p,eps) = 0. List-2 classifiers require a binary IDE.
std::vector<BifurcationEvent> scan_ide_family(const IdeSurface& family, double eps_lo,
                                              double eps_hi, const ScanOptions& opt = {});

// Remainder of I^F modulo F in the slope variable (pseudo-division), as the
// pair (rho0, rho1) with I = rho0 + rho1 p on V_F. Common zeros are the
// hyperbolic nodes (p-discriminant > 0) and elliptic nodes (< 0) of the IDE.
std::pair<Poly, Poly> ide_node_residuals(const IdeSurface& e);

// Census helpers (exposed for tests and the CLI).
Census surface_census(const MongeSurface& s_at_eps, const ScanOptions& opt);
Census ide_census(const IdeSurface& e_at_eps, const ScanOptions& opt);

// Classify the A3 event of a surface family at a Morse critical point of a^f
// located at (x,y) for parameter eps (exactified internally).
BifurcationEvent classify_A3_surface(const MongeSurface& family, double eps_star, double x,
                                     double y, const ScanOptions& opt);

}  // namespace flecscope
