#include "loopsoup/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace loopsoup {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

const char* kClusterPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

const char* cluster_color(std::uint32_t cluster_id) { return kClusterPalette[cluster_id % 10]; }

SvgScene::SvgScene(const BBox& view_box, double width) : width_px(width), view(view_box) {}

void SvgScene::add_polyline(std::span<const Vec2> pts, const std::string& stroke,
                            double stroke_width, const std::string& fill, double opacity) {
    if (pts.size() < 2) return;
    body += "<polyline points=\"";
    for (const auto& p : pts) {
        body += fmt(p.x);
        body += ',';
        // SVG y grows downward; flip inside the view box.
        body += fmt(view.hi.y - (p.y - view.lo.y));
        body += ' ';
    }
    body.pop_back();
    body += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            fmt(stroke_width) + "\" opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgScene::add_mask(const RasterGrid& grid, const std::vector<std::uint8_t>& mask,
                        const std::string& fill, double opacity) {
    // Row runs keep the output compact.
    for (int iy = 0; iy < grid.ny; ++iy) {
        int run_start = -1;
        for (int ix = 0; ix <= grid.nx; ++ix) {
            const bool on = ix < grid.nx && mask[grid.index(ix, iy)] != 0;
            if (on && run_start < 0) run_start = ix;
            if (!on && run_start >= 0) {
                const BBox cell0 = grid.cell_box(run_start, iy);
                const BBox cell1 = grid.cell_box(ix - 1, iy);
                body += "<rect x=\"" + fmt(cell0.lo.x) + "\" y=\"" +
                        fmt(view.hi.y - (cell1.hi.y - view.lo.y)) + "\" width=\"" +
                        fmt(cell1.hi.x - cell0.lo.x) + "\" height=\"" +
                        fmt(cell0.hi.y - cell0.lo.y) + "\" fill=\"" + fill + "\" opacity=\"" +
                        fmt(opacity) + "\"/>\n";
                run_start = -1;
            }
        }
    }
}

std::string SvgScene::str() const {
    const double h = width_px * view.height() / view.width();
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_px) +
                      "\" height=\"" + fmt(h) + "\" viewBox=\"" + fmt(view.lo.x) + " " +
                      fmt(view.lo.y) + " " + fmt(view.width()) + " " + fmt(view.height()) +
                      "\">\n";
    out += body;
    out += "</svg>\n";
    return out;
}

void SvgScene::save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("svg: cannot open " + path);
    os << str();
}

std::string render_soup_svg(const LoopSoup& soup, const ClusterSet* clusters,
                            const std::vector<ClusterBoundary>* boundaries,
                            const FreePointMask* mask) {
    SvgScene scene(soup.config.domain.bbox().inflated(0.02 * soup.config.domain.bbox().width()));
    if (mask) scene.add_mask(mask->grid, mask->free, "#f0e8d8", 0.8);
    for (std::size_t i = 0; i < soup.loops.size(); ++i) {
        std::string color = "#333333";
        if (clusters && i < clusters->labels.size()) color = cluster_color(clusters->labels[i]);
        scene.add_polyline(soup.loops[i].points, color, 0.0015 * scene.view.width(), "none", 0.9);
    }
    if (boundaries)
        for (const auto& b : *boundaries)
            scene.add_polyline(b.polyline, "#000000", 0.004 * scene.view.width(), "none", 1.0);
    return scene.str();
}

}  // namespace loopsoup
