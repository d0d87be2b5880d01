#include "sepint/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sepint {

std::string render_svg(const Configuration& c) {
    // Axial to cartesian: x = q + r/2, y = -r*sqrt(3)/2 (y flipped for SVG).
    const double s3h = std::sqrt(3.0) / 2.0;
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    const Site base = c.n() > 0 ? c.sites().begin()->first : Site{0, 0};
    std::vector<std::pair<std::pair<double, double>, Color>> dots;
    for (const auto& [s0, col] : c.sites()) {
        const Site s = s0 - base;
        const double x = s.q + 0.5 * s.r;
        const double y = -s3h * s.r;
        dots.push_back({{x, y}, col});
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
        } else {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(3);
    const double pad = 1.0;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << (xmin - pad) << " "
        << (ymin - pad) << " " << (xmax - xmin + 2 * pad) << " " << (ymax - ymin + 2 * pad)
        << "\">\n";
    for (const auto& [xy, col] : dots) {
        svg << "<circle cx=\"" << xy.first << "\" cy=\"" << xy.second
            << "\" r=\"0.42\" stroke=\"#333333\" stroke-width=\"0.04\" fill=\""
            << (col == Color::C1 ? "#3b6fb6" : "#d1495b") << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sepint
