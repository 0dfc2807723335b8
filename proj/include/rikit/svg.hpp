#ifndef RIKIT_SVG_HPP
#define RIKIT_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace rikit {

/// Self-contained SVG scatter plot (log-x when all x > 0 span decades).
/// Points are (x, ratio); horizontal guide lines mark the band.
std::string svg_scatter(const std::vector<std::pair<double, double>>& points,
                        double band_lo, double band_hi, const std::string& title);

}  // namespace rikit

#endif
