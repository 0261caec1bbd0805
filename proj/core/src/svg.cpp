#include "cotab/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cotab/io_util.hpp"

namespace cotab {

namespace {

constexpr double kSize = 720.0;
constexpr double kMargin = 70.0;

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_biplot_svg(const BiplotGeometry& geom, const std::string& title) {
    if (geom.arrows.cols() < 2 || geom.points.cols() < 2) {
        throw DegenerateAxis("SVG biplot needs rank-2 geometry");
    }
    double extent = 0.0;
    for (Eigen::Index i = 0; i < geom.arrows.rows(); ++i) {
        extent = std::max({extent, std::abs(geom.arrows(i, 0)), std::abs(geom.arrows(i, 1))});
    }
    for (Eigen::Index i = 0; i < geom.points.rows(); ++i) {
        extent = std::max({extent, std::abs(geom.points(i, 0)), std::abs(geom.points(i, 1))});
    }
    if (extent <= 0.0) extent = 1.0;
    const double c = kSize / 2.0;
    const double scale = (kSize / 2.0 - kMargin) / extent;
    const auto px = [&](double x) { return c + scale * x; };
    const auto py = [&](double y) { return c - scale * y; };

    char scale_buf[64];
    std::snprintf(scale_buf, sizeof(scale_buf), "%.12g", scale);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"720\" "
           "viewBox=\"0 0 720 720\">\n"
        << "<desc>center:" << fixed2(c) << ";scale:" << scale_buf << "</desc>\n"
        << "<defs><marker id=\"ah\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#b03030\"/></marker></defs>\n"
        << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"720\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg << "<text class=\"title\" x=\"" << fixed2(c)
            << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
            << escape_xml(title) << "</text>\n";
    }

    svg << "<g class=\"axes\" stroke=\"#c0c0c0\" stroke-width=\"1\">\n"
        << "<line x1=\"" << fixed2(kMargin / 2) << "\" y1=\"" << fixed2(c) << "\" x2=\""
        << fixed2(kSize - kMargin / 2) << "\" y2=\"" << fixed2(c) << "\"/>\n"
        << "<line x1=\"" << fixed2(c) << "\" y1=\"" << fixed2(kMargin / 2) << "\" x2=\""
        << fixed2(c) << "\" y2=\"" << fixed2(kSize - kMargin / 2) << "\"/>\n"
        << "</g>\n";

    char axis_label[64];
    std::snprintf(axis_label, sizeof(axis_label), "PC1 (%.1f%%)",
                  100.0 * geom.axis_explained[0]);
    svg << "<text class=\"axis-label\" x=\"" << fixed2(kSize - kMargin / 2) << "\" y=\""
        << fixed2(c - 8) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"13\">" << axis_label << "</text>\n";
    std::snprintf(axis_label, sizeof(axis_label), "PC2 (%.1f%%)",
                  100.0 * geom.axis_explained[1]);
    svg << "<text class=\"axis-label\" x=\"" << fixed2(c + 8) << "\" y=\""
        << fixed2(kMargin / 2 + 12) << "\" text-anchor=\"start\" font-family=\"sans-serif\" "
           "font-size=\"13\">" << axis_label << "</text>\n";

    svg << "<g class=\"arrows\" stroke=\"#b03030\" stroke-width=\"1.5\" fill=\"#b03030\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    for (Eigen::Index i = 0; i < geom.arrows.rows(); ++i) {
        const double x2 = px(geom.arrows(i, 0));
        const double y2 = py(geom.arrows(i, 1));
        svg << "<line class=\"arrow\" x1=\"" << fixed2(c) << "\" y1=\"" << fixed2(c)
            << "\" x2=\"" << fixed2(x2) << "\" y2=\"" << fixed2(y2)
            << "\" marker-end=\"url(#ah)\"/>\n";
        const double anchor_dx = geom.arrows(i, 0) >= 0.0 ? 4.0 : -4.0;
        svg << "<text class=\"arrow-label\" x=\"" << fixed2(x2 + anchor_dx) << "\" y=\""
            << fixed2(y2 - 4) << "\" text-anchor=\""
            << (geom.arrows(i, 0) >= 0.0 ? "start" : "end") << "\" stroke=\"none\">"
            << escape_xml(geom.arrow_labels[i]) << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"points\" fill=\"#305090\" font-family=\"sans-serif\" "
           "font-size=\"11\">\n";
    for (Eigen::Index i = 0; i < geom.points.rows(); ++i) {
        const double cx = px(geom.points(i, 0));
        const double cy = py(geom.points(i, 1));
        svg << "<circle class=\"point\" cx=\"" << fixed2(cx) << "\" cy=\"" << fixed2(cy)
            << "\" r=\"3\"/>\n"
            << "<text class=\"point-label\" x=\"" << fixed2(cx + 5) << "\" y=\""
            << fixed2(cy + 4) << "\">" << escape_xml(geom.point_labels[i]) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void emit_biplot_svg(const BiplotGeometry& geom, const std::string& path,
                     const std::string& title) {
    write_text_atomic(path, render_biplot_svg(geom, title));
}

} // namespace cotab
