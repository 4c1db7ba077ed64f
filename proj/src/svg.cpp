#include "flecscope/svg.hpp"

#include <cstdio>
#include <sstream>

namespace flecscope {

namespace {

std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<PlaneCurve>& curves,
                       const std::vector<SpecialPoint>& points, const Window2& w,
                       const Poly* domain_sign,
                       const std::vector<std::vector<std::pair<double, double>>>* trajectories,
                       const SvgStyle& style) {
    const double W = style.width_px, H = style.height_px;
    auto px = [&](double x) { return (x - w.x0) / w.width() * W; };
    auto py = [&](double y) { return H - (y - w.y0) / w.height() * H; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width_px << "\" height=\""
       << style.height_px << "\" viewBox=\"0 0 " << style.width_px << " " << style.height_px
       << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << style.width_px << "\" height=\"" << style.height_px
       << "\" fill=\"#ffffff\"/>\n";

    // hyperbolic domain shading: gray row runs where the sign polynomial is negative
    if (domain_sign && !domain_sign->is_zero()) {
        PolyEvalD f(*domain_sign);
        const int n = style.shade_res;
        const double dx = w.width() / n, dy = w.height() / n;
        const double cw = W / n, ch = H / n;
        for (int j = 0; j < n; ++j) {
            double yc = w.y0 + (j + 0.5) * dy;
            int run_start = -1;
            for (int i = 0; i <= n; ++i) {
                bool neg = i < n && f(w.x0 + (i + 0.5) * dx, yc) < 0;
                if (neg && run_start < 0) run_start = i;
                if (!neg && run_start >= 0) {
                    os << "<rect x=\"" << fmt9(run_start * cw) << "\" y=\""
                       << fmt9(H - (j + 1) * ch) << "\" width=\"" << fmt9((i - run_start) * cw)
                       << "\" height=\"" << fmt9(ch) << "\" fill=\"#c8c8c8\"/>\n";
                    run_start = -1;
                }
            }
        }
    }

    if (trajectories) {
        for (const auto& tr : *trajectories) {
            if (tr.size() < 2) continue;
            os << "<polyline fill=\"none\" stroke=\"#909090\" stroke-width=\"0.8\" points=\"";
            for (std::size_t k = 0; k < tr.size(); ++k) {
                if (k) os << " ";
                os << fmt9(px(tr[k].first)) << "," << fmt9(py(tr[k].second));
            }
            os << "\"/>\n";
        }
    }

    auto emit_polyline = [&](const std::vector<const CurveVertex*>& run, const char* stroke,
                             double width) {
        if (run.size() < 2) return;
        os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt9(width)
           << "\" points=\"";
        for (std::size_t k = 0; k < run.size(); ++k) {
            if (k) os << " ";
            os << fmt9(px(run[k]->x)) << "," << fmt9(py(run[k]->y));
        }
        os << "\"/>\n";
    };

    for (const auto& pc : curves) {
        bool branch_styled =
            pc.source == CurveSource::flecnodal || pc.source == CurveSource::inflection;
        for (const auto& ch : pc.chains) {
            if (!branch_styled) {
                std::vector<const CurveVertex*> run;
                for (const auto& v : ch.pts) run.push_back(&v);
                emit_polyline(run, "#000000", 1.4);
                continue;
            }
            // split the chain into runs of constant branch tag
            std::size_t k = 0;
            while (k < ch.pts.size()) {
                Side tag = ch.pts[k].branch;
                std::vector<const CurveVertex*> run;
                while (k < ch.pts.size() &&
                       (ch.pts[k].branch == tag || ch.pts[k].branch == Side::fold)) {
                    run.push_back(&ch.pts[k]);
                    ++k;
                }
                if (tag == Side::left) {
                    emit_polyline(run, "#000000", 3.0);
                    emit_polyline(run, "#ffffff", 1.8);
                } else {
                    emit_polyline(run, "#000000", 1.8);
                }
            }
        }
    }

    for (const auto& sp : points) {
        double cx = px(sp.x), cy = py(sp.y);
        switch (sp.kind) {
            case PointKind::godron:
                os << "<circle cx=\"" << fmt9(cx) << "\" cy=\"" << fmt9(cy)
                   << "\" r=\"4\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.2\"/>\n";
                break;
            case PointKind::hyperbonode:
                os << "<circle cx=\"" << fmt9(cx) << "\" cy=\"" << fmt9(cy)
                   << "\" r=\"3.5\" fill=\"#000000\"/>\n";
                break;
            case PointKind::ellipnode:
                os << "<rect x=\"" << fmt9(cx - 3.5) << "\" y=\"" << fmt9(cy - 3.5)
                   << "\" width=\"7\" height=\"7\" fill=\"#ffffff\" stroke=\"#000000\" "
                      "stroke-width=\"1.2\"/>\n";
                break;
            case PointKind::biflecnode:
                os << "<rect x=\"" << fmt9(cx - 3) << "\" y=\"" << fmt9(cy - 3)
                   << "\" width=\"6\" height=\"6\" fill=\"#000000\"/>\n";
                break;
        }
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace flecscope
