#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "citefilter/errors.hpp"
#include "citefilter/evaluation.hpp"
#include "citefilter/table_io.hpp"

namespace citefilter {

namespace detail {

inline const char* series_color(const std::string& name, std::size_t index) {
    if (name == "RS") return "#2ca02c";   // readership in green
    if (name == "JCS") return "#1f77b4";  // journal scores in blue
    static const char* palette[] = {"#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[index % 5];
}

}  // namespace detail

// Minimal standalone SVG: recall on x, precision on y, one polyline per signal.
inline void write_pr_svg(std::ostream& out, const std::vector<PrCurve>& curves,
                         int max_points_per_curve = 400) {
    const double w = 640, h = 480;
    const double ml = 64, mr = 24, mt = 24, mb = 56;
    const double pw = w - ml - mr, ph = h - mt - mb;
    auto px = [&](double recall) { return ml + recall * pw; };
    auto py = [&](double precision) { return mt + (1.0 - precision) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

    // axes with ticks every 0.2
    out << "<g stroke=\"#333\" fill=\"none\" stroke-width=\"1\">\n";
    out << "<path d=\"M" << ml << ' ' << mt << " L" << ml << ' ' << mt + ph << " L" << ml + pw
        << ' ' << mt + ph << "\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        out << "<line x1=\"" << px(v) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(v) << "\" y2=\""
            << mt + ph + 5 << "\"/>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << ml << "\" y2=\""
            << py(v) << "\"/>\n";
    }
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        out << "<text x=\"" << px(v) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\">" << detail::fixed(v, 1) << "</text>\n";
        out << "<text x=\"" << ml - 10 << "\" y=\"" << py(v) + 4
            << "\" text-anchor=\"end\">" << detail::fixed(v, 1) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">Recall</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 " << mt + ph / 2
        << ")\">Precision</text>\n";
    out << "</g>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        const std::size_t n = curve.points.size();
        const std::size_t stride = n > static_cast<std::size_t>(max_points_per_curve)
                                       ? n / max_points_per_curve
                                       : 1;
        out << "<polyline fill=\"none\" stroke=\""
            << detail::series_color(curve.signal_name, c) << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < n; i += stride)
            out << detail::fixed(px(curve.points[i].recall), 2) << ','
                << detail::fixed(py(curve.points[i].precision), 2) << ' ';
        const auto& last = curve.points.back();
        out << detail::fixed(px(last.recall), 2) << ',' << detail::fixed(py(last.precision), 2);
        out << "\"/>\n";
    }

    out << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const double y = mt + 16 + 18.0 * c;
        out << "<line x1=\"" << ml + pw - 120 << "\" y1=\"" << y << "\" x2=\"" << ml + pw - 96
            << "\" y2=\"" << y << "\" stroke=\"" << detail::series_color(curves[c].signal_name, c)
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw - 90 << "\" y=\"" << y + 4 << "\">"
            << curves[c].signal_name << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

inline void write_pr_svg(const std::filesystem::path& path, const std::vector<PrCurve>& curves) {
    auto out = detail::open_out(path);
    write_pr_svg(out, curves);
}

}  // namespace citefilter
