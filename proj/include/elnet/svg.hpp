#ifndef ELNET_SVG_HPP
#define ELNET_SVG_HPP

#include <algorithm>
#include <sstream>
#include <string>

#include "elnet/network.hpp"

namespace elnet {

/// SVG 1.1 rendering: curves as polylines, junctions as dots, collapsed parts
/// as crossed markers. The viewBox is the network bounding box with a 5%
/// margin; `scale` sets pixels per model unit.
inline std::string render_svg(const Network& n, double scale = 200.0) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](const Vec2& p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    };
    for (const auto& c : n.curves())
        for (const Vec2& p : c.points()) grow(p);
    if (xmin > xmax) {
        xmin = ymin = -1.0;
        xmax = ymax = 1.0;
    }
    const double mx = 0.05 * std::max(xmax - xmin, 1e-9);
    const double my = 0.05 * std::max(ymax - ymin, 1e-9);
    xmin -= mx;
    xmax += mx;
    ymin -= my;
    ymax += my;
    const double w = (xmax - xmin) * scale;
    const double h = (ymax - ymin) * scale;
    auto X = [&](double x) { return (x - xmin) * scale; };
    auto Y = [&](double y) { return (ymax - y) * scale; };  // flip to SVG axes

    std::ostringstream os;
    os.precision(10);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    for (int e = 0; e < n.graph().num_edges(); ++e) {
        const DiscreteCurve& c = n.curve(e);
        if (c.is_singular()) continue;
        os << "  <polyline fill=\"none\" stroke=\"#1f3552\" stroke-width=\""
           << std::max(1.0, 0.004 * std::max(w, h)) << "\" points=\"";
        for (const Vec2& p : c.points()) os << X(p.x) << "," << Y(p.y) << " ";
        os << "\"/>\n";
    }
    const double r = std::max(2.0, 0.008 * std::max(w, h));
    for (int v = 0; v < n.graph().num_vertices(); ++v) {
        const Vec2 p = n.junction_position(v);
        os << "  <circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"" << r
           << "\" fill=\"#333333\"/>\n";
    }
    for (int e : n.singular_edges()) {
        const Vec2 p = n.curve(e).front();
        const double s = 1.6 * r;
        os << "  <g stroke=\"#c0392b\" stroke-width=\"" << std::max(1.0, r / 2.0) << "\">"
           << "<line x1=\"" << X(p.x) - s << "\" y1=\"" << Y(p.y) - s << "\" x2=\""
           << X(p.x) + s << "\" y2=\"" << Y(p.y) + s << "\"/>"
           << "<line x1=\"" << X(p.x) - s << "\" y1=\"" << Y(p.y) + s << "\" x2=\""
           << X(p.x) + s << "\" y2=\"" << Y(p.y) - s << "\"/></g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace elnet

#endif
