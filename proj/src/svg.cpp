#include "aamr/svg.hpp"

#include "aamr/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <iterator>
#include <limits>

namespace aamr::svg {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string num(double x) { return format_fixed(x, 2); }

// Tick label: short and locale-free.
std::string tick(double x)
{
    if (x != 0.0 && (std::abs(x) >= 1e5 || std::abs(x) < 1e-2)) {
        char buf[32];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 1);
        return ec == std::errc() ? std::string(buf, end) : format_number(x);
    }
    return format_number(std::round(x * 1000.0) / 1000.0);
}

} // namespace

void write(std::ostream& out, const Plot& plot)
{
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    auto usable = [&plot](const std::pair<double, double>& p) {
        return std::isfinite(p.first) && std::isfinite(p.second) && (!plot.log_y || p.second > 0.0);
    };
    for (const auto& s : plot.series) {
        for (const auto& p : s.points) {
            if (!usable(p)) {
                continue;
            }
            const double y = plot.log_y ? std::log10(p.second) : p.second;
            xmin = std::min(xmin, p.first);
            xmax = std::max(xmax, p.first);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(plot.title) << "</text>\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double xv = xmin + (xmax - xmin) * i / ticks;
        const double yv = ymin + (ymax - ymin) * i / ticks;
        out << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(xv))
            << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
            << tick(xv) << "</text>\n";
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(kLeft)
            << "\" y2=\"" << num(sy(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << tick(plot.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
        << escape(plot.x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(plot.y_label) << (plot.log_y ? " (log scale)" : "") << "</text>\n";

    for (std::size_t i = 0; i < plot.series.size(); ++i) {
        const auto& s = plot.series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : s.points) {
            if (usable(p)) {
                pts.emplace_back(sx(p.first), sy(plot.log_y ? std::log10(p.second) : p.second));
            }
        }
        if (s.lines && pts.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t j = 0; j < pts.size(); ++j) {
                out << (j ? " " : "") << num(pts[j].first) << ',' << num(pts[j].second);
            }
            out << "\"/>\n";
        }
        if (s.markers || pts.size() == 1) {
            for (const auto& p : pts) {
                out << "<circle cx=\"" << num(p.first) << "\" cy=\"" << num(p.second) << "\" r=\"2.5\" fill=\""
                    << color << "\"/>\n";
            }
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 12;
        out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\""
            << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace aamr::svg
