#pragma once

// Text and SVG renderings of the iterate tower I_1..I_depth.  SVG output is
// static: one horizontal bar row per depth, components filled, principal
// gaps of each order highlighted.

#include <sstream>
#include <string>
#include <vector>

#include "achsets/intervals.hpp"
#include "achsets/series.hpp"

namespace achsets {

inline std::string render_text(const SeriesSpec& spec, long depth) {
    std::ostringstream out;
    for (long k = 0; k <= depth; ++k) {
        MultiIntervalSet ik = iterate(spec, k);
        out << "I_" << k << " (" << ik.components().size() << " components):";
        for (const auto& c : ik.components()) out << " [" << c.lo.str() << ", " << c.hi.str() << "]";
        out << "\n";
    }
    return out.str();
}

inline std::string render_svg(const SeriesSpec& spec, long depth, long width = 900,
                              long row_height = 26) {
    Exact total = total_sum(spec);
    if (total.sign() <= 0) throw ParameterError("series has zero sum; nothing to draw");
    auto x_of = [&](const Exact& v) { return (v / total).to_double() * (width - 40) + 20; };

    std::ostringstream svg;
    long height = (depth + 1) * row_height + 20;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    for (long k = 0; k <= depth; ++k) {
        MultiIntervalSet ik = iterate(spec, k);
        double y = 10.0 + k * row_height;
        svg << "<text x=\"2\" y=\"" << y + row_height * 0.6 << "\" font-size=\"10\">I" << k
            << "</text>\n";
        for (const auto& c : ik.components()) {
            double x0 = x_of(c.lo), x1 = x_of(c.hi);
            double w = x1 - x0;
            if (w < 0.5) w = 0.5;  // keep degenerate components visible
            svg << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << w << "\" height=\""
                << row_height - 8 << "\" fill=\"#3366aa\"/>\n";
        }
        if (k >= 1) {
            Exact ak = term(spec, k), rk = remainder(spec, k);
            if (rk < ak) {  // principal gap (r_k, a_k)
                double x0 = x_of(rk), x1 = x_of(ak);
                svg << "<rect x=\"" << x0 << "\" y=\"" << y + row_height - 8 << "\" width=\""
                    << x1 - x0 << "\" height=\"3\" fill=\"#cc3333\"/>\n";
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace achsets
