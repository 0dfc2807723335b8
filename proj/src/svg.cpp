#include "rikit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rikit {

std::string svg_scatter(const std::vector<std::pair<double, double>>& points,
                        double band_lo, double band_hi, const std::string& title) {
    const int W = 640, H = 400, ML = 60, MR = 20, MT = 36, MB = 40;
    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n";
    if (points.empty()) {
        out << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">no samples</text>\n</svg>\n";
        return out.str();
    }
    double xmin = points[0].first, xmax = xmin, ymin = points[0].second, ymax = ymin;
    for (auto& [x, y] : points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    ymin = std::min(ymin, band_lo);
    ymax = std::max(ymax, band_hi);
    bool logx = xmin > 0.0 && xmax / xmin > 50.0;
    auto tx = [&](double x) {
        double lo = logx ? std::log(xmin) : xmin;
        double hi = logx ? std::log(xmax) : xmax;
        double v = logx ? std::log(x) : x;
        if (hi == lo) return ML + (W - ML - MR) / 2.0;
        return ML + (W - ML - MR) * (v - lo) / (hi - lo);
    };
    double pad = (ymax - ymin) * 0.08 + 1e-12;
    double ylo = ymin - pad, yhi = ymax + pad;
    auto ty = [&](double y) { return H - MB - (H - MT - MB) * (y - ylo) / (yhi - ylo); };
    out << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
        << "\" height=\"" << H - MT - MB << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (double b : {band_lo, band_hi}) {
        out << "<line x1=\"" << ML << "\" y1=\"" << ty(b) << "\" x2=\"" << W - MR << "\" y2=\""
            << ty(b) << "\" stroke=\"#c44\" stroke-dasharray=\"5 3\"/>\n";
        out << "<text x=\"" << W - MR - 4 << "\" y=\"" << ty(b) - 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#c44\">"
            << b << "</text>\n";
    }
    for (auto& [x, y] : points)
        out << "<circle cx=\"" << tx(x) << "\" cy=\"" << ty(y)
            << "\" r=\"2.5\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n";
    out << "<text x=\"" << ML - 8 << "\" y=\"" << ty(ylo + pad)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << ymin
        << "</text>\n";
    out << "<text x=\"" << ML - 8 << "\" y=\"" << ty(yhi - pad)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << ymax
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace rikit
