#include "flecscope/run.hpp"

#include <CLI11.hpp>

#include <string>

namespace {

void add_common(CLI::App* cmd, flecscope::JobConfig& cfg, std::string& window, std::string& eps) {
    cmd->add_option("--window", window, "window as x0:x1:y0:y1 (default -1:1:-1:1)");
    cmd->add_option("--res", cfg.res, "trace resolution (default 512)");
    cmd->add_option("--tol", cfg.tol, "numeric tolerance (default 1e-10)");
    cmd->add_option("--eps", eps, "parameter value a, or range a:b for scans");
    cmd->add_option("--chart", cfg.chart, "slope chart: p, q or both")
        ->check(CLI::IsMember({"p", "q", "both"}));
    cmd->add_option("--out", cfg.out_path, "output path (default stdout)");
    cmd->add_option("--format", cfg.format, "svg, csv or json")
        ->check(CLI::IsMember({"svg", "csv", "json"}));
    cmd->add_option("--prange", cfg.p_lo, "lower slope bound (default -4)");
    cmd->add_option("--prange-hi", cfg.p_hi, "upper slope bound (default 4)");
}

bool parse_window(const std::string& s, flecscope::Window2& w) {
    if (s.empty()) return true;
    double a, b, c, d;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf:%lf", &a, &b, &c, &d) != 4) return false;
    w = {a, b, c, d};
    return w.x1 > w.x0 && w.y1 > w.y0;
}

bool parse_eps(const std::string& s, flecscope::JobConfig& cfg) {
    if (s.empty()) return true;
    double a, b;
    if (std::sscanf(s.c_str(), "%lf:%lf", &a, &b) == 2) {
        cfg.eps_a = a;
        cfg.eps_b = b;
        cfg.eps_given = cfg.eps_range = true;
        return b > a;
    }
    if (std::sscanf(s.c_str(), "%lf", &a) == 1) {
        cfg.eps_a = a;
        cfg.eps_given = true;
        return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flecscope: tangential singularities of surfaces and IDE inflections"};
    app.require_subcommand(1);

    flecscope::JobConfig cfg;
    std::string window_str, eps_str;

    auto* surface = app.add_subcommand("surface", "parabolic/flecnodal curves and special points");
    surface->add_option("input", cfg.input_path, "surface polynomial JSON")->required();
    add_common(surface, cfg, window_str, eps_str);

    auto* ide = app.add_subcommand("ide", "discriminant, curve of inflections, folded points");
    ide->add_option("input", cfg.input_path, "IDE polynomial JSON (vars x,y,p)")->required();
    add_common(ide, cfg, window_str, eps_str);

    auto* scan = app.add_subcommand("scan", "bifurcation scan of a surface family");
    scan->add_option("--family", cfg.input_path, "family polynomial JSON (vars x,y,eps)")
        ->required();
    add_common(scan, cfg, window_str, eps_str);

    auto* iscan = app.add_subcommand("ide-scan", "bifurcation scan of an IDE family");
    iscan->add_option("--family", cfg.input_path, "family polynomial JSON (vars x,y,p,eps)")
        ->required();
    add_common(iscan, cfg, window_str, eps_str);

    auto* cone = app.add_subcommand("cone", "Morse critical points of F and cone positions");
    cone->add_option("input", cfg.input_path, "IDE polynomial JSON")->required();
    add_common(cone, cfg, window_str, eps_str);

    auto* portrait = app.add_subcommand("portrait", "characteristic-field phase portrait");
    portrait->add_option("input", cfg.input_path, "IDE polynomial JSON")->required();
    add_common(portrait, cfg, window_str, eps_str);

    CLI11_PARSE(app, argc, argv);

    if (surface->parsed()) cfg.mode = flecscope::JobMode::surface;
    if (ide->parsed()) cfg.mode = flecscope::JobMode::ide;
    if (scan->parsed()) cfg.mode = flecscope::JobMode::family_scan;
    if (iscan->parsed()) cfg.mode = flecscope::JobMode::ide_family_scan;
    if (cone->parsed()) cfg.mode = flecscope::JobMode::cone;
    if (portrait->parsed()) cfg.mode = flecscope::JobMode::portrait;

    if (!parse_window(window_str, cfg.window)) {
        std::fprintf(stderr, "error: bad --window (want x0:x1:y0:y1 with nonempty extent)\n");
        return 1;
    }
    if (!parse_eps(eps_str, cfg)) {
        std::fprintf(stderr, "error: bad --eps (want a or a:b with b > a)\n");
        return 1;
    }
    if (cfg.res < 16) {
        std::fprintf(stderr, "error: --res must be at least 16\n");
        return 1;
    }
    if (cfg.tol <= 0) {
        std::fprintf(stderr, "error: --tol must be positive\n");
        return 1;
    }
    return flecscope::run(cfg);
}
