#pragma once

#include "flecscope/poly.hpp"

#include <array>
#include <string>

namespace flecscope {

// A direction in a plane as a homogeneous slope pair m = u/v ((1,0) = infinity).
struct SlopeDir {
    Rational u, v;
};

// Symmetric rational 3x3 form on (x,y,p): Q(v) = v^T q v, q = Hessian of F at
// the critical point (q[0][0] = F_xx, q[0][1] = F_xy, q[2][2] = F_pp, ...).
class QuadraticCone {
  public:
    QuadraticCone() = default;
    explicit QuadraticCone(const std::array<std::array<Rational, 3>, 3>& q);

    // Hessian of F at a rational point (eps already substituted).
    static QuadraticCone from_ide(const Poly& F, const Rational& x0, const Rational& y0,
                                  const Rational& p0);

    const Rational& q(int i, int j) const { return q_[std::size_t(i)][std::size_t(j)]; }
    Rational det() const;
    bool is_morse() const { return det() != 0; }

    Rational value(const Rational& x, const Rational& y, const Rational& p) const;

    // Exact signature via Descartes on the characteristic polynomial.
    // Returns {positive, negative} eigenvalue counts.
    std::pair<int, int> signature() const;

  private:
    std::array<std::array<Rational, 3>, 3> q_{};
};

// The three printed inequalities: (F_xp^2 - F_xx F_pp) != 0, F_pp != 0, F_xx != 0.
struct GeneralPosition {
    bool ok = false;
    Rational cross;  // F_xp^2 - F_xx F_pp
    Rational fpp, fxx;
    std::string reason;  // set when not ok
};
// Throws std::domain_error("not Morse") for degenerate Q.
GeneralPosition general_position(const QuadraticCone& Q);

enum class ConePosition { a, b, c, d, e, f };
const char* cone_position_name(ConePosition p);

struct ConeClass {
    ConePosition label = ConePosition::d;
    bool inside_l1 = false;  // p-axis (pi-fibre tangent)
    bool inside_l2 = false;  // x-axis (dual-fibre tangent)
    bool imaginary = false;  // definite form: cone has no real points beyond the vertex
    bool section_real = false;   // plane y=0 meets the cone in real lines
    bool conjugate_fibres = false;  // Q_xp = 0: the fibre tangents are conjugate diameters
};

// Positions per the six-way list; for cones with non-conjugate fibre tangents
// the labels of the imaginary and both-inside cases are exchanged so that the
// reported letter matches the bifurcation it triggers in an evolving IDE
// (imaginary cone -> f, both fibres inside -> d).
// Throws std::domain_error("non-generic position") when an axis lies on the
// cone or the fibre plane is tangent to it.
ConeClass classify_position(const QuadraticCone& Q);

// Plane conjugate to the direction l: { v : <Q l, v> = 0 }. `tangent` is set
// when l lies on the cone (the plane is then tangent along l).
struct DiametralPlane {
    std::array<Rational, 3> normal;
    bool tangent = false;
};
DiametralPlane conjugate_diametral_plane(const QuadraticCone& Q, const std::array<Rational, 3>& l);

// Cross-ratio of four pairwise distinct concurrent coplanar directions.
// Throws std::invalid_argument on a repeated direction.
Rational cross_ratio(const SlopeDir& a, const SlopeDir& b, const SlopeDir& c, const SlopeDir& d);

// Residual of the harmonicity condition (r1,r2; s,t) = -1 where r1, r2 are the
// (possibly complex-conjugate) roots of alpha m^2 + beta m + gamma.
// Zero <=> harmonic. Avoids complex arithmetic entirely.
Rational harmonic_residual_with_pair(const Rational& alpha, const Rational& beta,
                                     const Rational& gamma, const SlopeDir& s, const SlopeDir& t);

}  // namespace flecscope
