#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jcm::cli {

// %.17g, the round-trip form used for every CSV number.
std::string format_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

// RFC-4180 style, LF line endings; integer-valued first columns print without
// an exponent because %.17g does so already.
void write_csv(std::ostream& out, const CsvTable& table);

enum class PlotStyle { Line, Stem };

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    PlotStyle style = PlotStyle::Line;
    std::string color = "#1f4e9c";
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

// Static SVG 1.1 document.  Long line series are reduced to per-pixel min/max
// pairs so the file size stays bounded.
void write_svg(std::ostream& out, const Plot& plot);

}  // namespace jcm::cli
