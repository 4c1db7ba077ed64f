#include "flecscope/cone.hpp"

#include <stdexcept>

namespace flecscope {

QuadraticCone::QuadraticCone(const std::array<std::array<Rational, 3>, 3>& q) : q_(q) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (q_[std::size_t(i)][std::size_t(j)] != q_[std::size_t(j)][std::size_t(i)])
                throw std::invalid_argument("cone matrix must be symmetric");
}

QuadraticCone QuadraticCone::from_ide(const Poly& F, const Rational& x0, const Rational& y0,
                                      const Rational& p0) {
    std::array<Rational, kNumVars> pt{x0, y0, p0, Rational(0)};
    auto d2 = [&](Var a, Var b) { return F.diff(a).diff(b).eval(pt); };
    std::array<std::array<Rational, 3>, 3> q;
    Var vars[3] = {Var::x, Var::y, Var::p};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) q[std::size_t(i)][std::size_t(j)] = d2(vars[i], vars[j]);
    return QuadraticCone(q);
}

Rational QuadraticCone::det() const {
    const auto& q = q_;
    return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[1][2]) -
           q[0][1] * (q[0][1] * q[2][2] - q[1][2] * q[0][2]) +
           q[0][2] * (q[0][1] * q[1][2] - q[1][1] * q[0][2]);
}

Rational QuadraticCone::value(const Rational& x, const Rational& y, const Rational& p) const {
    std::array<Rational, 3> v{x, y, p};
    Rational acc(0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += q_[std::size_t(i)][std::size_t(j)] * v[std::size_t(i)] * v[std::size_t(j)];
    return acc;
}

std::pair<int, int> QuadraticCone::signature() const {
    // char poly: lambda^3 - t lambda^2 + s lambda - d, real-rooted (symmetric).
    const auto& q = q_;
    Rational t = q[0][0] + q[1][1] + q[2][2];
    Rational s = q[0][0] * q[1][1] - q[0][1] * q[0][1] + q[0][0] * q[2][2] -
                 q[0][2] * q[0][2] + q[1][1] * q[2][2] - q[1][2] * q[1][2];
    Rational d = det();
    auto sgn = [](const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); };
    auto variations = [&](std::array<Rational, 4> seq) {
        int var = 0, prev = 0;
        for (const auto& v : seq) {
            int sv = sgn(v);
            if (sv == 0) continue;
            if (prev != 0 && sv != prev) ++var;
            prev = sv;
        }
        return var;
    };
    int pos = variations({Rational(1), -t, s, -d});
    int neg = variations({Rational(-1), -t, -s, -d});
    return {pos, neg};
}

const char* cone_position_name(ConePosition p) {
    switch (p) {
        case ConePosition::a: return "a";
        case ConePosition::b: return "b";
        case ConePosition::c: return "c";
        case ConePosition::d: return "d";
        case ConePosition::e: return "e";
        case ConePosition::f: return "f";
    }
    return "?";
}

GeneralPosition general_position(const QuadraticCone& Q) {
    if (!Q.is_morse()) throw std::domain_error("not Morse");
    GeneralPosition g;
    g.cross = Q.q(0, 2) * Q.q(0, 2) - Q.q(0, 0) * Q.q(2, 2);
    g.fpp = Q.q(2, 2);
    g.fxx = Q.q(0, 0);
    g.ok = g.cross != 0 && g.fpp != 0 && g.fxx != 0;
    if (!g.ok) {
        if (g.fpp == 0) g.reason = "F_pp vanishes: pi-fibre tangent lies on the cone";
        else if (g.fxx == 0) g.reason = "F_xx vanishes: dual-fibre tangent lies on the cone";
        else g.reason = "F_xp^2 - F_xx F_pp vanishes: fibre plane tangent to the cone";
    }
    return g;
}

ConeClass classify_position(const QuadraticCone& Q) {
    GeneralPosition g = general_position(Q);
    if (!g.ok) throw std::domain_error("non-generic position: " + g.reason);
    ConeClass c;
    c.conjugate_fibres = Q.q(0, 2) == 0;
    auto [pos, neg] = Q.signature();
    if (pos == 3 || neg == 3) {
        c.imaginary = true;
        c.inside_l1 = c.inside_l2 = false;
        c.section_real = false;
        c.label = c.conjugate_fibres ? ConePosition::d : ConePosition::f;
        return c;
    }
    // Normalize to signature (2,1): inside <=> the form is negative there.
    int sigma = (pos == 2 && neg == 1) ? 1 : -1;
    Rational qx = Rational(sigma) * Q.q(0, 0);   // value on the x-axis (l2)
    Rational qp = Rational(sigma) * Q.q(2, 2);   // value on the p-axis (l1)
    c.inside_l1 = qp < 0;
    c.inside_l2 = qx < 0;
    // plane y = 0 section: q00 x^2 + 2 q02 xp + q22 p^2
    Rational sec = Q.q(0, 0) * Q.q(2, 2) - Q.q(0, 2) * Q.q(0, 2);  // = -cross
    c.section_real = sec < 0;
    if (sec > 0) {
        c.label = ConePosition::b;  // plane meets the cone only at the vertex
        return c;
    }
    if (c.inside_l1 && c.inside_l2) {
        c.label = ConePosition::d;  // both fibres inside (reported letter, see header)
    } else if (c.inside_l1) {
        c.label = ConePosition::a;
    } else if (c.inside_l2) {
        c.label = ConePosition::c;
    } else {
        c.label = ConePosition::e;
    }
    return c;
}

DiametralPlane conjugate_diametral_plane(const QuadraticCone& Q, const std::array<Rational, 3>& l) {
    DiametralPlane d;
    for (int i = 0; i < 3; ++i) {
        Rational acc(0);
        for (int j = 0; j < 3; ++j) acc += Q.q(i, j) * l[std::size_t(j)];
        d.normal[std::size_t(i)] = acc;
    }
    Rational on_cone(0);
    for (int i = 0; i < 3; ++i) on_cone += d.normal[std::size_t(i)] * l[std::size_t(i)];
    d.tangent = (on_cone == 0);
    return d;
}

namespace {
Rational pdiff(const SlopeDir& a, const SlopeDir& b) { return a.u * b.v - b.u * a.v; }
}

Rational cross_ratio(const SlopeDir& a, const SlopeDir& b, const SlopeDir& c, const SlopeDir& d) {
    const SlopeDir* dirs[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (pdiff(*dirs[i], *dirs[j]) == 0)
                throw std::invalid_argument("cross_ratio: repeated direction");
    Rational num = pdiff(a, c) * pdiff(b, d);
    Rational den = pdiff(a, d) * pdiff(b, c);
    return num / den;
}

Rational harmonic_residual_with_pair(const Rational& alpha, const Rational& beta,
                                     const Rational& gamma, const SlopeDir& s, const SlopeDir& t) {
    // (r1,r2; s,t) = -1  <=>  2 r1 r2 - (r1+r2)(s+t) + 2 s t = 0, cleared of
    // denominators: 2 gamma v_s v_t + beta (u_s v_t + u_t v_s) + 2 alpha u_s u_t.
    return Rational(2) * gamma * s.v * t.v + beta * (s.u * t.v + t.u * s.v) +
           Rational(2) * alpha * s.u * t.u;
}

}  // namespace flecscope
