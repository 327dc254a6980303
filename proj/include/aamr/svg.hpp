#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace aamr::svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool lines = true;   ///< polyline through the points
    bool markers = false;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

/// Writes a self-contained SVG line/scatter chart. Non-finite points (and
/// non-positive ones on a log axis) are skipped.
void write(std::ostream& out, const Plot& plot);

} // namespace aamr::svg
