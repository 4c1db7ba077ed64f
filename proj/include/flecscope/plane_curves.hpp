#pragma once

#include "flecscope/ide.hpp"
#include "flecscope/poly.hpp"

#include <string>
#include <utility>
#include <vector>

namespace flecscope {

enum class CurveSource { parabolic, discriminant, flecnodal, inflection };
const char* curve_source_name(CurveSource s);

struct Window2 {
    double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

struct CurveVertex {
    double x = 0, y = 0;
    Side branch = Side::fold;  // meaningful for flecnodal/inflection curves
    double p = 0;              // witnessing slope
};

struct Chain {
    std::vector<CurveVertex> pts;
    bool closed = false;
};

struct PlaneCurve {
    std::vector<Chain> chains;
    CurveSource source = CurveSource::parabolic;
    Poly defining;
    Window2 window;
};

struct TraceOptions {
    int res = 512;
    double tol = 1e-10;  // polish residual, relative to unit-normalized poly
    int threads = 0;     // 0 = read FLECSCOPE_THREADS, fallback 1
};

// Marching squares on the sign grid of C followed by Newton polish.
PlaneCurve trace_curve(const Poly& C, const Window2& w, CurveSource source,
                       const TraceOptions& opt = {});

// Cells of the res x res grid whose corners show a sign change (test oracle).
std::vector<std::pair<int, int>> sign_change_cells(const Poly& C, const Window2& w, int res);

Poly hessian_poly(const MongeSurface& s);  // f_xx f_yy - f_xy^2
// Throws std::domain_error("developable/degenerate surface") when identically zero.
std::pair<Poly, PlaneCurve> hessian_curve(const MongeSurface& s, const Window2& w,
                                          const TraceOptions& opt = {});

// Discriminant of an IDE: Res_p(F, F_p), traced with witness validation.
Poly discriminant_poly(const IdeSurface& e);
std::pair<Poly, PlaneCurve> discriminant_curve(const IdeSurface& e, const Window2& w,
                                               const TraceOptions& opt = {});

// Curve of inflections of an IDE: Res_p(F, I^F), both charts merged,
// vertices tagged by the left/right side of the witnessing root.
Poly inflection_poly(const IdeSurface& e);
std::pair<Poly, PlaneCurve> inflection_curve(const IdeSurface& e, const Window2& w,
                                             const TraceOptions& opt = {});

// Flecnodal curve of a Monge surface via the asymptotic IDE.
// Throws std::domain_error("flecnodal curve not of codimension 1") when the
// resultant vanishes identically (e.g. quadrics: every point is a node).
Poly flecnodal_poly(const MongeSurface& s);
std::pair<Poly, PlaneCurve> flecnodal_curve(const MongeSurface& s, const Window2& w,
                                            const TraceOptions& opt = {});

// Contact order of two implicitly defined curves at a common point.
// 1 = transverse, 2 = quadratic tangency, ... Exact jet comparison when the
// point is recognized as rational; polynomial-derivative counting otherwise.
// Throws std::domain_error("non-isolated contact") for identical local
// branches and std::invalid_argument when a curve misses the point.
int tangency_order(const Poly& C1, const Poly& C2, double near_x, double near_y,
                   double tol = 1e-7);

// Multiplicity of a folded singular point: half the intersection multiplicity
// of the discriminant with the curve of inflections there.
int folded_point_multiplicity(const IdeSurface& e, double x, double y);

// Real roots of F(x0,y0,.) in [lo,hi]; tolerant of double roots on the criminant.
std::vector<double> slope_roots(const IdeSurface& e, double x, double y, double lo = -64,
                                double hi = 64, double tol = 1e-9);

// One row per vertex: chain id, x, y, branch, source.
std::string curves_to_csv(const std::vector<PlaneCurve>& curves);

}  // namespace flecscope
