#include "flecscope/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flecscope {

const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::y: return "y";
        case Var::p: return "p";
        case Var::eps: return "eps";
    }
    return "?";
}

std::optional<Var> var_from_name(const std::string& name) {
    if (name == "x") return Var::x;
    if (name == "y") return Var::y;
    if (name == "p") return Var::p;
    if (name == "eps" || name == "e" || name == "epsilon") return Var::eps;
    return std::nullopt;
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_[{0, 0, 0, 0}] = c;
}

Poly::Poly(long long c) {
    if (c != 0) terms_[{0, 0, 0, 0}] = Rational(c);
}

Poly Poly::variable(Var v, unsigned deg) {
    Poly r;
    if (deg == 0) return Poly(1);
    Expo e{0, 0, 0, 0};
    e[static_cast<int>(v)] = static_cast<std::uint16_t>(deg);
    r.terms_[e] = Rational(1);
    return r;
}

Poly Poly::monomial(const Rational& c, const Expo& e) {
    Poly r;
    if (c != 0) r.terms_[e] = c;
    return r;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0, 0};
}

void Poly::add_term(const Expo& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Expo e;
            for (int i = 0; i < kNumVars; ++i) {
                unsigned s = unsigned(ea[i]) + unsigned(eb[i]);
                if (s > 0xFFFF) throw std::overflow_error("exponent overflow");
                e[i] = static_cast<std::uint16_t>(s);
            }
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::operator*(const Rational& c) const {
    Poly r;
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
    return r;
}

Poly Poly::operator/(const Rational& c) const {
    if (c == 0) throw std::invalid_argument("division by zero");
    return *this * (Rational(1) / c);
}

Poly operator*(const Rational& c, const Poly& p) { return p * c; }

Poly Poly::pow(unsigned k) const {
    Poly r(1);
    Poly base = *this;
    while (k) {
        if (k & 1) r = r * base;
        base = (k >>= 1) ? base * base : base;
    }
    return r;
}

Poly Poly::diff(Var v, unsigned k) const {
    const int vi = static_cast<int>(v);
    Poly cur = *this;
    for (unsigned step = 0; step < k; ++step) {
        Poly next;
        for (const auto& [e, c] : cur.terms_) {
            if (e[vi] == 0) continue;
            Expo d = e;
            d[vi] -= 1;
            next.add_term(d, c * Rational(e[vi]));
        }
        cur = std::move(next);
        if (cur.is_zero()) break;
    }
    return cur;
}

Rational Poly::eval(const std::array<Rational, kNumVars>& pt) const {
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < kNumVars; ++i) {
            for (unsigned k = 0; k < e[i]; ++k) t *= pt[i];
        }
        acc += t;
    }
    return acc;
}

double Poly::eval_d(const std::array<double, kNumVars>& pt) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < kNumVars; ++i) {
            for (unsigned k = 0; k < e[i]; ++k) t *= pt[i];
        }
        acc += t;
    }
    return acc;
}

int Poly::degree(Var v) const {
    const int vi = static_cast<int>(v);
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, int(e[vi]));
    return d;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int i = 0; i < kNumVars; ++i) s += e[i];
        d = std::max(d, s);
    }
    return d;
}

Rational Poly::coefficient(const Expo& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Poly> Poly::coefficients_in(Var v) const {
    const int vi = static_cast<int>(v);
    int d = degree(v);
    std::vector<Poly> out(std::size_t(std::max(d, 0)) + 1);
    for (const auto& [e, c] : terms_) {
        Expo r = e;
        int k = r[vi];
        r[vi] = 0;
        out[std::size_t(k)].add_term(r, c);
    }
    return out;
}

Poly Poly::leading_coefficient_in(Var v) const {
    auto cs = coefficients_in(v);
    return cs.empty() ? Poly() : cs.back();
}

Poly Poly::subst(Var v, const Poly& value) const {
    auto cs = coefficients_in(v);
    if (cs.empty()) return Poly();
    Poly acc = cs.back();
    for (int k = int(cs.size()) - 2; k >= 0; --k) acc = acc * value + cs[std::size_t(k)];
    return acc;
}

Poly Poly::shift(const std::array<Rational, kNumVars>& c) const {
    Poly r = *this;
    for (int i = 0; i < kNumVars; ++i) {
        if (c[i] == 0) continue;
        Var v = static_cast<Var>(i);
        r = r.subst(v, Poly::variable(v) + Poly(c[i]));
    }
    return r;
}

Poly Poly::truncate_total_degree(int max_deg) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int i = 0; i < kNumVars; ++i) s += e[i];
        if (s <= max_deg) r.terms_[e] = c;
    }
    return r;
}

Poly Poly::normalized() const {
    if (terms_.empty()) return *this;
    BigInt num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
        num_gcd = gcd(num_gcd, numerator(c));
        den_lcm = lcm(den_lcm, denominator(c));
    }
    Rational scale(den_lcm, num_gcd == 0 ? BigInt(1) : num_gcd);
    Poly r = *this * scale;
    // Leading (lex-largest) coefficient made positive.
    if (r.terms_.rbegin()->second < 0) r = -r;
    return r;
}

bool Poly::proportional_to(const Poly& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    const auto& [ea, ca] = *terms_.rbegin();
    const auto& [eb, cb] = *o.terms_.rbegin();
    if (ea != eb) return false;
    return (*this * cb) == (o * ca);
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        Rational a = abs(c);
        bool has_var = e != Expo{0, 0, 0, 0};
        if (a != 1 || !has_var) os << to_string(a);
        bool star = (a != 1);
        for (int i = 0; i < kNumVars; ++i) {
            if (e[i] == 0) continue;
            if (star) os << "*";
            os << var_name(static_cast<Var>(i));
            if (e[i] > 1) os << "^" << e[i];
            star = true;
        }
    }
    return os.str();
}

Poly divide_exact(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("division by zero polynomial");
    Poly r = num, q;
    const auto& dlead = *den.terms().rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms().rbegin();
        Expo e;
        for (int i = 0; i < kNumVars; ++i) {
            if (rlead.first[i] < dlead.first[i])
                throw std::domain_error("inexact polynomial division");
            e[i] = static_cast<std::uint16_t>(rlead.first[i] - dlead.first[i]);
        }
        Poly t = Poly::monomial(rlead.second / dlead.second, e);
        q += t;
        r -= t * den;
    }
    return q;
}

namespace {

// Fraction-free (Bareiss) determinant over the polynomial ring.
Poly bareiss_det(std::vector<std::vector<Poly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return Poly(1);
    int sign = 1;
    Poly prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero()) ++piv;
            if (piv == n) return Poly();  // singular
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                m[i][j] = divide_exact(t, prev);
            }
            m[i][k] = Poly();
        }
        prev = m[k][k];
    }
    Poly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

}  // namespace

Poly resultant(const Poly& A, const Poly& B, Var v) {
    const int da = A.degree(v), db = B.degree(v);
    if (da <= 0 && db <= 0)
        throw std::invalid_argument("resultant: nothing to eliminate, both operands constant in " +
                                    std::string(var_name(v)));
    if (A.is_zero() || B.is_zero()) return Poly();
    if (da <= 0) return A.pow(unsigned(db));
    if (db <= 0) return B.pow(unsigned(da));

    auto ca = A.coefficients_in(v);
    auto cb = B.coefficients_in(v);
    const std::size_t n = std::size_t(da + db);
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
    for (int row = 0; row < db; ++row)
        for (int k = 0; k <= da; ++k) m[std::size_t(row)][std::size_t(row + k)] = ca[std::size_t(da - k)];
    for (int row = 0; row < da; ++row)
        for (int k = 0; k <= db; ++k) m[std::size_t(db + row)][std::size_t(row + k)] = cb[std::size_t(db - k)];
    return bareiss_det(std::move(m));
}

Jet2::Jet2(const Poly& f, const Rational& x0, const Rational& y0, int order)
    : x0_(x0), y0_(y0), order_(order) {
    std::array<Rational, kNumVars> c{x0, y0, Rational(0), Rational(0)};
    taylor_ = f.shift(c).truncate_total_degree(order);
}

Rational Jet2::partial(int i, int j) const {
    if (i + j > order_) throw std::out_of_range("jet order exceeded");
    Expo e{std::uint16_t(i), std::uint16_t(j), 0, 0};
    Rational c = taylor_.coefficient(e);
    Rational fact(1);
    for (int k = 2; k <= i; ++k) fact *= k;
    for (int k = 2; k <= j; ++k) fact *= k;
    return c * fact;
}

PolyEvalD::PolyEvalD(const Poly& p) {
    terms_.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) terms_.push_back({e, to_double(c)});
}

double PolyEvalD::operator()(double x, double y, double p, double e) const {
    const double pt[4] = {x, y, p, e};
    double acc = 0.0;
    for (const auto& t : terms_) {
        double m = t.c;
        for (int i = 0; i < 4; ++i) {
            double b = pt[i];
            unsigned k = t.e[i];
            while (k--) m *= b;
        }
        acc += m;
    }
    return acc;
}

}  // namespace flecscope
