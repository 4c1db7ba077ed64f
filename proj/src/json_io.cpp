#include "flecscope/json_io.hpp"

#include <json.hpp>

#include <cstdio>

namespace flecscope {

using nlohmann::json;

namespace {

std::string coeff_string(const json& c) {
    if (c.is_string()) return c.get<std::string>();
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.get<double>());
        return buf;
    }
    throw std::invalid_argument("bad coefficient in polynomial JSON");
}

json rounded(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return json::parse(buf);
}

}  // namespace

Poly poly_from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("vars") || !j.contains("terms"))
        throw std::invalid_argument("polynomial JSON needs 'vars' and 'terms'");
    std::vector<Var> vars;
    for (const auto& v : j["vars"]) {
        auto mv = var_from_name(v.get<std::string>());
        if (!mv) throw std::invalid_argument("unknown variable '" + v.get<std::string>() + "'");
        vars.push_back(*mv);
    }
    Poly out;
    for (const auto& t : j["terms"]) {
        if (!t.contains("e") || !t.contains("c"))
            throw std::invalid_argument("term needs 'e' and 'c'");
        const auto& e = t["e"];
        if (e.size() != vars.size())
            throw std::invalid_argument("exponent tuple length mismatch");
        Expo expo{0, 0, 0, 0};
        for (std::size_t k = 0; k < vars.size(); ++k) {
            long long d = e[k].get<long long>();
            if (d < 0) throw std::invalid_argument("negative exponent");
            expo[static_cast<int>(vars[k])] = static_cast<std::uint16_t>(d);
        }
        out += Poly::monomial(parse_rational(coeff_string(t["c"])), expo);
    }
    return out;
}

std::string poly_to_json(const Poly& p) {
    json j;
    std::vector<Var> vars;
    for (int i = 0; i < kNumVars; ++i)
        if (p.degree(static_cast<Var>(i)) > 0) vars.push_back(static_cast<Var>(i));
    if (vars.empty()) vars.push_back(Var::x);
    j["vars"] = json::array();
    for (auto v : vars) j["vars"].push_back(var_name(v));
    j["terms"] = json::array();
    for (const auto& [e, c] : p.terms()) {
        json t;
        t["e"] = json::array();
        for (auto v : vars) t["e"].push_back(e[static_cast<int>(v)]);
        t["c"] = to_string(c);
        j["terms"].push_back(t);
    }
    return j.dump();
}

std::string special_points_to_json(const std::vector<SpecialPoint>& pts) {
    json arr = json::array();
    for (const auto& sp : pts) {
        json j;
        j["kind"] = point_kind_name(sp.kind);
        j["x"] = rounded(sp.x);
        j["y"] = rounded(sp.y);
        if (sp.kind == PointKind::godron) {
            j["index"] = sp.index;
            j["index_characteristic"] = sp.index_characteristic;
        }
        if (sp.kind == PointKind::biflecnode) j["branch"] = side_name(sp.branch);
        if (sp.flagged) j["flag"] = sp.flag;
        json cert = json::object();
        for (const auto& [k, v] : sp.certificate) cert[k] = v;
        j["certificate"] = cert;
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::string char_points_to_json(const std::vector<CharPoint>& pts) {
    json arr = json::array();
    for (const auto& c : pts) {
        json j;
        j["x"] = rounded(c.x);
        j["y"] = rounded(c.y);
        j["p"] = rounded(c.p);
        j["type"] = char_type_name(c.type);
        j["index"] = c.index;
        j["residuals"] = {rounded(c.res_F), rounded(c.res_Fp), rounded(c.res_I)};
        if (c.degenerate) j["multiplicity"] = c.multiplicity;
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::string events_to_json(const std::vector<BifurcationEvent>& evs) {
    json arr = json::array();
    for (const auto& ev : evs) {
        json j;
        j["kind"] = bif_kind_name(ev.kind);
        j["eps_star"] = rounded(ev.eps_star);
        j["eps_bracket"] = {rounded(ev.eps_lo), rounded(ev.eps_hi)};
        j["x"] = rounded(ev.x);
        j["y"] = rounded(ev.y);
        if (ev.has_p) j["p"] = rounded(ev.p);
        if (ev.has_cone) {
            j["cone_position"] = cone_position_name(ev.cone_position);
            j["surface_route"] = ev.surface_route;
        }
        if (ev.kind == BifKind::A3)
            j["umbrella"] = ev.umbrella_elliptic ? "elliptic" : "hyperbolic";
        json cert = json::object();
        for (const auto& [k, v] : ev.certificate) cert[k] = v;
        j["certificate"] = cert;
        if (!ev.model.empty()) {
            json mod = json::object();
            for (const auto& [k, v] : ev.model) mod[k] = v;
            j["model"] = mod;
        }
        auto census_json = [](const Census& c) {
            json q;
            if (c.godrons >= 0) q["godrons"] = c.godrons;
            if (c.hyperbonodes >= 0) q["hyperbonodes"] = c.hyperbonodes;
            if (c.ellipnodes >= 0) q["ellipnodes"] = c.ellipnodes;
            if (c.biflecnodes >= 0) q["biflecnodes"] = c.biflecnodes;
            if (c.folded_points >= 0) {
                q["folded_points"] = c.folded_points;
                q["folded_index_sum"] = c.folded_index_sum;
            }
            if (c.bi_inflections >= 0) q["bi_inflections"] = c.bi_inflections;
            return q;
        };
        j["census_before"] = census_json(ev.before);
        j["census_after"] = census_json(ev.after);
        j["census_consistent"] = ev.census_consistent;
        if (ev.interpretation_dependent) j["interpretation_dependent"] = true;
        if (ev.unresolved_ordering) j["unresolved_ordering"] = true;
        if (!ev.detail.empty()) j["detail"] = ev.detail;
        arr.push_back(j);
    }
    return arr.dump(2);
}

}  // namespace flecscope
