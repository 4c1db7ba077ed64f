#include "flecscope/run.hpp"

#include "flecscope/bifurcation.hpp"
#include "flecscope/detail/newton.hpp"
#include "flecscope/json_io.hpp"
#include "flecscope/svg.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace flecscope {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (os.str().empty()) throw std::runtime_error("empty input file '" + path + "'");
    return os.str();
}

void write_output(const JobConfig& cfg, const std::string& content) {
    if (cfg.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + cfg.out_path + "'");
    out << content;
}

Poly load_poly(const JobConfig& cfg) { return poly_from_json(read_file(cfg.input_path)); }

Poly fix_eps(const Poly& p, const JobConfig& cfg) {
    if (!p.uses(Var::eps)) return p;
    if (!cfg.eps_given) throw std::runtime_error("input depends on eps: pass --eps VALUE");
    return p.subst(Var::eps, Poly(rational_from_double(cfg.eps_a)));
}

TraceOptions trace_opts(const JobConfig& cfg) {
    TraceOptions t;
    t.res = cfg.res;
    t.tol = cfg.tol;
    return t;
}

int run_surface(const JobConfig& cfg) {
    MongeSurface s{fix_eps(load_poly(cfg), cfg)};
    auto [H, parab] = hessian_curve(s, cfg.window, trace_opts(cfg));
    auto [R, flec] = flecnodal_curve(s, cfg.window, trace_opts(cfg));
    DetectOptions dopt;
    dopt.window = cfg.window;
    dopt.res = std::min(cfg.res, 256);
    auto pts = detect_all(s, dopt);
    std::vector<PlaneCurve> curves{parab, flec};
    if (cfg.format == "csv") {
        write_output(cfg, curves_to_csv(curves));
    } else if (cfg.format == "json") {
        write_output(cfg, special_points_to_json(pts));
    } else {
        Poly Hn = H.uses(Var::eps) ? H.subst(Var::eps, Poly(0)) : H;
        write_output(cfg, render_svg(curves, pts, cfg.window, &Hn));
    }
    return 0;
}

int run_ide(const JobConfig& cfg) {
    Poly F = fix_eps(load_poly(cfg), cfg);
    if (!F.uses(Var::p)) throw std::runtime_error("IDE input must use the variable p");
    IdeSurface e(cfg.chart == "q" ? IdeSurface(F, Chart::dual_q) : IdeSurface(F));
    auto [D, disc] = discriminant_curve(e, cfg.window, trace_opts(cfg));
    auto [R, infl] = inflection_curve(e, cfg.window, trace_opts(cfg));
    Window3 w3{cfg.window.x0, cfg.window.x1, cfg.window.y0, cfg.window.y1, cfg.p_lo, cfg.p_hi};
    CharScan cs = characteristic_points(e, w3);
    for (auto& c : cs.points) {
        if (c.degenerate) {
            try {
                c.multiplicity = folded_point_multiplicity(e, c.x, c.y);
            } catch (const std::exception&) {
            }
        }
    }
    std::vector<PlaneCurve> curves{disc, infl};
    if (cfg.format == "csv") {
        write_output(cfg, curves_to_csv(curves));
    } else if (cfg.format == "json") {
        write_output(cfg, char_points_to_json(cs.points));
    } else {
        write_output(cfg, render_svg(curves, {}, cfg.window, nullptr));
    }
    return 0;
}

int run_family_scan(const JobConfig& cfg, bool ide) {
    if (!cfg.eps_range) throw std::runtime_error("family scan needs --eps a:b");
    Poly P = load_poly(cfg);
    if (!P.uses(Var::eps)) throw std::runtime_error("family input must use eps");
    ScanOptions sopt;
    sopt.window = cfg.window;
    sopt.res = std::min(cfg.res, 192);
    sopt.p_lo = cfg.p_lo;
    sopt.p_hi = cfg.p_hi;
    std::vector<BifurcationEvent> evs;
    if (ide)
        evs = scan_ide_family(IdeSurface(P), cfg.eps_a, cfg.eps_b, sopt);
    else
        evs = scan_family(MongeSurface{P}, cfg.eps_a, cfg.eps_b, sopt);
    write_output(cfg, events_to_json(evs));
    return 0;
}

int run_cone(const JobConfig& cfg) {
    Poly F = fix_eps(load_poly(cfg), cfg);
    // find Morse critical points of F in the window and classify their cones
    detail::NewtonSystem sys({F, F.diff(Var::x), F.diff(Var::y), F.diff(Var::p)},
                             {Var::x, Var::y, Var::p, Var::eps});
    std::ostringstream os;
    os << "[\n";
    bool first = true;
    const int G = 6;
    std::vector<std::array<double, 3>> found;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j)
            for (int k = 0; k < G; ++k) {
                std::array<double, 4> pt{cfg.window.x0 + (i + 0.5) * cfg.window.width() / G,
                                         cfg.window.y0 + (j + 0.5) * cfg.window.height() / G,
                                         cfg.p_lo + (k + 0.5) * (cfg.p_hi - cfg.p_lo) / G, 0.0};
                if (!sys.solve(pt, 1e-11, 0.5)) continue;
                bool dup = false;
                for (auto& q : found)
                    if (std::abs(q[0] - pt[0]) + std::abs(q[1] - pt[1]) + std::abs(q[2] - pt[2]) <
                        1e-6)
                        dup = true;
                if (dup) continue;
                found.push_back({pt[0], pt[1], pt[2]});
                QuadraticCone Q = QuadraticCone::from_ide(F, rational_from_double(pt[0]),
                                                          rational_from_double(pt[1]),
                                                          rational_from_double(pt[2]));
                if (!first) os << ",\n";
                first = false;
                os << "  {\"x\": " << pt[0] << ", \"y\": " << pt[1] << ", \"p\": " << pt[2];
                try {
                    GeneralPosition gp = general_position(Q);
                    os << ", \"general_position\": " << (gp.ok ? "true" : "false");
                    if (gp.ok) {
                        ConeClass cc = classify_position(Q);
                        os << ", \"position\": \"" << cone_position_name(cc.label) << "\""
                           << ", \"conjugate_fibres\": " << (cc.conjugate_fibres ? "true" : "false");
                    } else {
                        os << ", \"reason\": \"" << gp.reason << "\"";
                    }
                } catch (const std::domain_error& e) {
                    os << ", \"error\": \"" << e.what() << "\"";
                }
                os << "}";
            }
    os << "\n]\n";
    write_output(cfg, os.str());
    return 0;
}

int run_portrait(const JobConfig& cfg) {
    Poly F = fix_eps(load_poly(cfg), cfg);
    IdeSurface e(F);
    CharField field = characteristic_field(e);
    PolyEvalD fx(field.xdot), fy(field.ydot), fp(field.pdot), Fv(e.F());
    std::vector<std::vector<std::pair<double, double>>> traj;
    const double step = cfg.window.width() / 2000.0;
    for (int i = 0; i < 14; ++i) {
        for (int j = 0; j < 14; ++j) {
            double x0 = cfg.window.x0 + (i + 0.5) * cfg.window.width() / 14;
            double y0 = cfg.window.y0 + (j + 0.5) * cfg.window.height() / 14;
            // lift to the surface: nearest slope root
            auto roots = slope_roots(e, x0, y0);
            if (roots.empty()) continue;
            double p0 = roots[roots.size() / 2];
            for (double dir : {1.0, -1.0}) {
                std::vector<std::pair<double, double>> path{{x0, y0}};
                double x = x0, y = y0, p = p0;
                for (int n = 0; n < 400; ++n) {
                    auto rk = [&](double& ox, double& oy, double& op, double sx, double sy,
                                  double sp) {
                        ox = dir * fx(sx, sy, sp);
                        oy = dir * fy(sx, sy, sp);
                        op = dir * fp(sx, sy, sp);
                    };
                    double k1x, k1y, k1p, k2x, k2y, k2p, k3x, k3y, k3p, k4x, k4y, k4p;
                    rk(k1x, k1y, k1p, x, y, p);
                    double norm = std::sqrt(k1x * k1x + k1y * k1y + k1p * k1p) + 1e-12;
                    double h = step / norm;
                    rk(k2x, k2y, k2p, x + 0.5 * h * k1x, y + 0.5 * h * k1y, p + 0.5 * h * k1p);
                    rk(k3x, k3y, k3p, x + 0.5 * h * k2x, y + 0.5 * h * k2y, p + 0.5 * h * k2p);
                    rk(k4x, k4y, k4p, x + h * k3x, y + h * k3y, p + h * k3p);
                    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
                    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
                    p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
                    if (x < cfg.window.x0 || x > cfg.window.x1 || y < cfg.window.y0 ||
                        y > cfg.window.y1)
                        break;
                    path.emplace_back(x, y);
                }
                if (path.size() > 4) traj.push_back(std::move(path));
            }
        }
    }
    auto [D, disc] = discriminant_curve(e, cfg.window, trace_opts(cfg));
    std::vector<PlaneCurve> curves{disc};
    write_output(cfg, render_svg(curves, {}, cfg.window, nullptr, &traj));
    return 0;
}

}  // namespace

int run(const JobConfig& cfg) {
    try {
        switch (cfg.mode) {
            case JobMode::surface: return run_surface(cfg);
            case JobMode::ide: return run_ide(cfg);
            case JobMode::family_scan: return run_family_scan(cfg, false);
            case JobMode::ide_family_scan: return run_family_scan(cfg, true);
            case JobMode::cone: return run_cone(cfg);
            case JobMode::portrait: return run_portrait(cfg);
        }
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace flecscope
