#include "epimob/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "epimob/csv.hpp"
#include "epimob/error.hpp"

namespace epimob {

namespace {

const char* kPalette[] = {"#1b6ca8", "#d4782c", "#3d8c40", "#9440a8",
                          "#c23b3b", "#6b6b6b", "#2aa198", "#8a6d3b"};
constexpr double kW = 760, kH = 420;
constexpr double kLeft = 64, kRight = 150, kTop = 40, kBottom = 48;

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

} // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_line(const std::string& name,
                        const std::vector<std::pair<double, std::optional<double>>>& points) {
    series_.push_back({name, false, points});
}

void SvgChart::add_bars(const std::string& name,
                        const std::vector<std::pair<double, double>>& bars) {
    Series s;
    s.name = name;
    s.bars = true;
    for (const auto& [x, y] : bars) s.points.emplace_back(x, y);
    series_.push_back(std::move(s));
}

void SvgChart::write(const std::filesystem::path& path) const {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& s : series_) {
        for (const auto& [x, y] : s.points) {
            if (!y.has_value()) continue;
            if (first) {
                x_min = x_max = x;
                y_min = y_max = *y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, *y);
                y_max = std::max(y_max, *y);
            }
        }
    }
    if (x_max <= x_min) x_max = x_min + 1;
    if (y_max <= y_min) y_max = y_min + 1;
    y_min = std::min(y_min, 0.0); // include zero so bars are anchored
    double y_pad = 0.05 * (y_max - y_min);
    y_max += y_pad;

    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kW - kLeft - kRight); };
    auto py = [&](double y) { return kH - kBottom - (y - y_min) / (y_max - y_min) * (kH - kTop - kBottom); };

    std::ofstream out(path);
    if (!out) throw input_error("cannot open '" + path.string() + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
        << esc(title_) << "</text>\n";

    // Axes with 5 ticks each.
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
        << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kH - kBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = x_min + (x_max - x_min) * i / 5.0;
        double yv = y_min + (y_max - y_min) * i / 5.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << kH - kBottom + 16
            << "\" text-anchor=\"middle\">" << fmt_num(std::round(xv * 100) / 100) << "</text>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\">" << fmt_num(std::round(yv * 100) / 100) << "</text>\n";
        out << "<line x1=\"" << kLeft << "\" y1=\"" << py(yv) << "\" x2=\"" << kW - kRight
            << "\" y2=\"" << py(yv) << "\" stroke=\"#dddddd\"/>\n";
    }
    out << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 10
        << "\" text-anchor=\"middle\">" << esc(x_label_) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kTop + kH - kBottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (kTop + kH - kBottom) / 2 << ")\">" << esc(y_label_) << "</text>\n";

    size_t color_idx = 0;
    double legend_y = kTop;
    for (const auto& s : series_) {
        const char* color = kPalette[color_idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
        ++color_idx;
        if (s.bars) {
            double bw = std::max(1.0, (kW - kLeft - kRight) / std::max<size_t>(1, s.points.size()) * 0.8);
            for (const auto& [x, y] : s.points) {
                if (!y.has_value()) continue;
                double top = py(std::max(0.0, *y));
                double bottom = py(std::min(0.0, *y));
                out << "<rect x=\"" << px(x) - bw / 2 << "\" y=\"" << top << "\" width=\"" << bw
                    << "\" height=\"" << std::max(0.5, bottom - top) << "\" fill=\"" << color
                    << "\" fill-opacity=\"0.6\"/>\n";
            }
        } else {
            std::string points;
            bool open = false;
            for (const auto& [x, y] : s.points) {
                if (!y.has_value()) {
                    if (open) {
                        out << "<polyline fill=\"none\" stroke=\"" << color
                            << "\" stroke-width=\"1.6\" points=\"" << points << "\"/>\n";
                        points.clear();
                        open = false;
                    }
                    continue;
                }
                points += fmt_num(px(x)) + "," + fmt_num(py(*y)) + " ";
                open = true;
            }
            if (open) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.6\" points=\"" << points << "\"/>\n";
            }
        }
        if (series_.size() <= 12) {
            out << "<rect x=\"" << kW - kRight + 10 << "\" y=\"" << legend_y << "\" width=\"12\" "
                << "height=\"12\" fill=\"" << color << "\"/>\n";
            out << "<text x=\"" << kW - kRight + 26 << "\" y=\"" << legend_y + 10 << "\">"
                << esc(s.name) << "</text>\n";
            legend_y += 18;
        }
    }
    out << "</svg>\n";
}

} // namespace epimob
