#pragma once

#include "flecscope/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flecscope {

// Variable slots. Every polynomial lives in Q[x,y,p,eps]; which slots are
// actually used is tracked per object.
enum class Var : int { x = 0, y = 1, p = 2, eps = 3 };
constexpr int kNumVars = 4;

const char* var_name(Var v);
std::optional<Var> var_from_name(const std::string& name);

using Expo = std::array<std::uint16_t, kNumVars>;

// Exact multivariate polynomial with rational coefficients.
// Invariant: no zero coefficients are stored.
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rational& c);
    explicit Poly(long long c);

    static Poly variable(Var v, unsigned deg = 1);
    static Poly monomial(const Rational& c, const Expo& e);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const std::map<Expo, Rational>& terms() const { return terms_; }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly operator/(const Rational& c) const;
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly pow(unsigned k) const;

    // k-th exact partial derivative.
    Poly diff(Var v, unsigned k = 1) const;

    Rational eval(const std::array<Rational, kNumVars>& pt) const;
    double eval_d(const std::array<double, kNumVars>& pt) const;

    int degree(Var v) const;        // -1 for the zero polynomial
    int total_degree() const;       // -1 for the zero polynomial
    bool uses(Var v) const { return degree(v) > 0; }

    Rational coefficient(const Expo& e) const;

    // Coefficient polynomials of v^0..v^deg (in the remaining variables).
    std::vector<Poly> coefficients_in(Var v) const;
    Poly leading_coefficient_in(Var v) const;

    // Substitute a polynomial for a variable (Horner).
    Poly subst(Var v, const Poly& value) const;
    // Taylor shift: P(.., v + c, ..) for each entry of the point.
    Poly shift(const std::array<Rational, kNumVars>& c) const;
    Poly truncate_total_degree(int max_deg) const;

    // Divide by the gcd of all integer numerators/denominators and fix the
    // sign of the lexicographically leading term to +. Used for comparing
    // curves defined up to a nonzero constant factor.
    Poly normalized() const;
    // True when a*other == b*this for nonzero constants (same zero set scale).
    bool proportional_to(const Poly& o) const;

    std::string str() const;  // human-readable, for diagnostics

  private:
    void add_term(const Expo& e, const Rational& c);
    std::map<Expo, Rational> terms_;
};

Poly operator*(const Rational& c, const Poly& p);

// Exact polynomial division; throws std::domain_error when not divisible.
Poly divide_exact(const Poly& num, const Poly& den);

// Sylvester resultant eliminating `v`. Both inputs are polynomials in `v`
// whose coefficients may involve the other variables; at least one must have
// positive degree in `v` (else std::invalid_argument).
Poly resultant(const Poly& A, const Poly& B, Var v);

// Jet of a polynomial at a rational base point: the shifted polynomial
// truncated at `order`, stored so that partial(i,j) = d^{i+j}f/dx^i dy^j
// at the base point (exactly).
class Jet2 {
  public:
    Jet2() = default;
    Jet2(const Poly& f, const Rational& x0, const Rational& y0, int order);

    // d^{i+j} f / dx^i dy^j at the base point.
    Rational partial(int i, int j) const;
    int order() const { return order_; }
    const Poly& taylor() const { return taylor_; }  // shifted, truncated poly
    Rational x0() const { return x0_; }
    Rational y0() const { return y0_; }

  private:
    Poly taylor_;
    Rational x0_, y0_;
    int order_ = 0;
};

// Compiled double-precision evaluator (tracing / rendering only).
class PolyEvalD {
  public:
    PolyEvalD() = default;
    explicit PolyEvalD(const Poly& p);
    double operator()(double x, double y, double p = 0.0, double e = 0.0) const;

  private:
    struct Term {
        Expo e;
        double c;
    };
    std::vector<Term> terms_;
};

}  // namespace flecscope
