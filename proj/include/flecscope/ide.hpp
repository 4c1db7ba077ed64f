#pragma once

#include "flecscope/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flecscope {

// Chart on the space of contact elements. The standard chart uses the slope
// p = dy/dx; the dual chart uses q = dx/dy and owns vertical directions.
enum class Chart { standard_p, dual_q };

struct MongeSurface {
    Poly f;  // polynomial in x, y and optionally eps
    bool centered_at_origin() const;
};

// An IDE F(x,y,p)=0 with cached first and second partials.
class IdeSurface {
  public:
    explicit IdeSurface(Poly F, Chart chart = Chart::standard_p);

    const Poly& F() const { return F_; }
    Chart chart() const { return chart_; }
    const Poly& Fx() const { return Fx_; }
    const Poly& Fy() const { return Fy_; }
    const Poly& Fp() const { return Fp_; }

    int p_degree() const { return F_.degree(Var::p); }
    bool binary() const { return p_degree() <= 2; }

    // Chart swap q = 1/p with cleared denominators (involution up to the
    // monomial factor stripped by normalization).
    IdeSurface dual() const;

    // Substitute a numeric value for eps.
    IdeSurface at_eps(const Rational& e) const;

  private:
    Poly F_;
    Chart chart_;
    Poly Fx_, Fy_, Fp_;
};

// F = f_xx + 2 f_xy p + f_yy p^2 in the standard chart.
IdeSurface asymptotic_ide(const MongeSurface& s);
// Companion in the dual chart: f_yy + 2 f_xy q + f_xx q^2.
IdeSurface asymptotic_ide_dual(const MongeSurface& s);

// I^F = F_x + p F_y (standard chart); F_y + q F_x in the dual chart.
Poly inflection_function(const IdeSurface& e);

// The characteristic direction field (xdot, ydot, pdot) = (-F_p, -p F_p, I^F).
struct CharField {
    Poly xdot, ydot, pdot;
};
CharField characteristic_field(const IdeSurface& e);

enum class CharType { saddle, node, focus, degenerate };
const char* char_type_name(CharType t);

struct CharPoint {
    double x = 0, y = 0, p = 0;
    double res_F = 0, res_Fp = 0, res_I = 0;  // residuals at the location
    double jac[2][2] = {{0, 0}, {0, 0}};      // characteristic field in surface coords (x,p)
    CharType type = CharType::degenerate;
    int index = 0;          // -1 for saddle, +1 otherwise, 0 when degenerate
    bool degenerate = false;
    int multiplicity = 1;   // filled in by folded_point_multiplicity when requested
};

struct Window3 {
    double x0 = -1, x1 = 1, y0 = -1, y1 = 1, p0 = -1, p1 = 1;
};

struct CharScan {
    std::vector<CharPoint> points;
    std::vector<std::array<double, 3>> unresolved;       // Newton seeds that stalled near a zero
    std::vector<std::array<double, 3>> morse_candidates; // |grad F| ~ 0: route to cone module
};

struct CharScanOptions {
    int cells = 20;             // subdivision per axis
    double newton_tol = 1e-10;  // residual tolerance
    double dedupe = 1e-7;
};

// All solutions of F = F_p = I^F = 0 with grad F != 0 in the window, classified.
CharScan characteristic_points(const IdeSurface& e, const Window3& w, const CharScanOptions& opt = {});

// Newton refinement of a single characteristic point from a nearby seed.
// Returns nothing when Newton fails or grad F vanishes at the limit.
std::optional<CharPoint> refine_char_point(const IdeSurface& e, double x, double y, double p,
                                           double tol = 1e-10);

enum class Side { left, right, fold };
const char* side_name(Side s);

// Right <=> F_p > 0 under the fixed orientation convention.
Side left_right_tag(const IdeSurface& e, double x, double y, double p, double tol = 1e-12);

// The three genericity conditions at a folded singular point, as printed:
//   a) F_y * | F_xp              F_pp            |
//            | F_xx + p F_xy     F_xp + p F_yp + F_y |  != 0
//   b) (d_x + p d_y)^2 F != 0
//   c) F_xp + p F_yp + F_y != 0
struct Theorem0Conditions {
    bool a = false, b = false, c = false;
    double value_a = 0, value_b = 0, value_c = 0;
};
Theorem0Conditions theorem0_conditions(const IdeSurface& e, const CharPoint& c);

// Same evaluation on exact rational data (for symbolic tests and certificates).
struct Theorem0Exact {
    Rational value_a, value_b, value_c;
};
Theorem0Exact theorem0_conditions_exact(const Poly& F, const Rational& x, const Rational& y,
                                        const Rational& p);

}  // namespace flecscope
