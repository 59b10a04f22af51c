#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epimob {

/// Minimal line/bar chart emitter. The CSV next to each figure is the
/// tested artifact; these charts are a human-readable rendering only.
class SvgChart {
public:
    SvgChart(std::string title, std::string x_label, std::string y_label);

    /// Points with absent y are breaks in the polyline.
    void add_line(const std::string& name,
                  const std::vector<std::pair<double, std::optional<double>>>& points);
    void add_bars(const std::string& name, const std::vector<std::pair<double, double>>& bars);

    void write(const std::filesystem::path& path) const;

private:
    struct Series {
        std::string name;
        bool bars = false;
        std::vector<std::pair<double, std::optional<double>>> points;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

} // namespace epimob
