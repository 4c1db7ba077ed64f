#pragma once

#include "flecscope/poly.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace flecscope {

// Partial derivatives f_{ij} = d^{i+j} f / dx^i dy^j at a base point, exact.
class JetTable {
  public:
    JetTable() = default;
    JetTable(const Poly& f, const Rational& x0, const Rational& y0, int order);
    static JetTable from_map(std::map<std::pair<int, int>, Rational> vals, int order);

    Rational f(int i, int j) const;
    int order() const { return order_; }

    // Largest |f_ij| as double, for tolerance normalization.
    double scale() const;

  private:
    std::map<std::pair<int, int>, Rational> vals_;
    int order_ = 0;
};

// --- Godron stratum (f_20 = f_11 = f_30 = 0, f_02 f_21 f_40 != 0) ----------
struct GodronCertificate {
    Rational f20, f11, f30;       // must vanish
    Rational f02, f21, f40;       // must not vanish
    Rational double_godron;       // 3 f21^2 - f02 f40 (= 0 at a bigodron)
    Rational not_triple;          // 9 f21 f31 - 4 f12 f40 - f02 f50
    Rational f50;                 // flecgodron: f40 = 0, f50 != 0
};
GodronCertificate godron_certificate(const JetTable& J);

// --- A3 stratum: Morse critical point of a^f -------------------------------
struct A3Certificate {
    Rational critical_f20, critical_f11, critical_f30, critical_f21;  // must vanish
    Rational general_f22, general_f02;                                // must not vanish
    Rational morse;        // f40 (f22 f02 - 2 f12^2) - f31^2 f02, cleared of f02
    Rational a, b, c_eff;  // reduced cone data with f02 normalized to 1, f12 sheared away
    Rational delta;        // a*c_eff - b^2
    Rational a_delta;      // elliptic umbrella iff > 0, hyperbolic iff < 0
};
A3Certificate a3_certificate(const JetTable& J);

// --- Higher-codimension conic strata (5.2.1 table) --------------------------
enum class ConicRow { A1A3, A2A6, A3A9 };
const char* conic_row_name(ConicRow r);
struct HigherConic {
    ConicRow row;
    Rational morse;   // f40(f22-2 f12^2) - f31^2 with f02 normalized to 1
    Rational delta;   // the long bracket expression
};
// Requires f40 != 0; normalizes f02 to 1 internally (f02 > 0 expected).
HigherConic classify_higher_conic(const JetTable& J);

// --- Biflecnode stratum (f20 = f02 = 0, f11 != 0, f30 = f40 = 0) ------------
enum class Theorem3Kind { swallowtail_biflec, lips, bec_a_bec, cusp_flag };
const char* theorem3_kind_name(Theorem3Kind k);
struct Theorem3Certificate {
    Theorem3Kind kind;
    Rational frame_f20, frame_f02, frame_f30, frame_f40;  // must vanish
    Rational f11;                                         // must not vanish
    Rational smooth;   // 3 f21^2 - 2 f31 f11
    Rational A, B, C;  // A = f50 f11, B = f41 f11 - 2 f31 f21,
                       // C = 3 f31 f12 - 9/2 f22 f21 + f32 f11
    Rational ac_b2;    // A C - B^2
    Rational f50, f60;
};
// Throws std::domain_error("not a biflecnode stratum") if the frame
// conditions are broken beyond tolerance (exact zero for rational input).
Theorem3Certificate classify_theorem3(const JetTable& J);

// --- Node strata (Theorem 4) -------------------------------------------------
enum class Theorem4Kind { bi_hyperbonode, flec_hyperbonode, bi_ellipnode, ordinary };
const char* theorem4_kind_name(Theorem4Kind k);
struct Theorem4Certificate {
    Theorem4Kind kind;
    Rational tangency;       // (a): 4 f40 f04 f11 - (3f21^2-2f31f11)(3f12^2-2f13f11)
    Rational left_factor;    // 3 f21^2 - 2 f31 f11
    Rational right_factor;   // 3 f12^2 - 2 f13 f11
    Rational f40, f50;
    Rational ellip_tangency; // (c): (f40-3f22)(f04-3f22) - (f31-3f13)(f13-3f31)
};
// Hyperbonode frame (f20=f02=0, f11!=0, f30=f03=0).
Theorem4Certificate theorem4_hyperbonode(const JetTable& J);
// Ellipnode frame (f20=f02!=0, f11=0, f30=f03=f21=f12=0).
Theorem4Certificate theorem4_ellipnode(const JetTable& J);

// --- Flat umbilics (Theorem 5) ----------------------------------------------
enum class D4Kind { d4_plus, d4_minus, degenerate };
struct D4Certificate {
    D4Kind kind;
    // real kernel directions of the cubic form (roots of f3(u)=0)
    std::vector<std::array<Rational, 2>> kernel_dirs;
    std::vector<Rational> quartic_values;  // d^4_u f along each kernel direction
    bool nondegenerate = false;            // all quartic values nonzero
};
// Requires f20 = f11 = f02 = 0 and a nondegenerate cubic form.
D4Certificate classify_d4(const JetTable& J);

// Real roots of a binary cubic c30 u^3 + c21 u^2 v + c12 u v^2 + c03 v^3 as
// directions [u:v]; exact rational roots found exactly, irrational ones to
// 1e-14 and converted; the count of real roots is decided exactly via the
// cubic discriminant.
std::vector<std::array<Rational, 2>> binary_cubic_real_roots(const Rational& c30,
                                                             const Rational& c21,
                                                             const Rational& c12,
                                                             const Rational& c03);

}  // namespace flecscope
