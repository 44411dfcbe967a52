#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace jcm::cli {

namespace {

constexpr double kWidth = 720.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 36.0, kBottom = 50.0;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-300) {
            const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

// Round step 1, 2 or 5 times a power of ten giving about five ticks.
double tick_step(const Range& r) {
    const double raw = (r.hi - r.lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

struct Frame {
    Range x, y;
    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom); }
};

void axes(std::ostream& out, const Frame& f, const Plot& plot) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out << "<rect x=\"" << fmt("%.2f", x0) << "\" y=\"" << fmt("%.2f", y1) << "\" width=\"" << fmt("%.2f", x1 - x0)
        << "\" height=\"" << fmt("%.2f", y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const double sx = tick_step(f.x), sy = tick_step(f.y);
    for (double v = std::ceil(f.x.lo / sx) * sx; v <= f.x.hi + 1e-9 * sx; v += sx) {
        const double p = f.px(v);
        out << "<line x1=\"" << fmt("%.2f", p) << "\" y1=\"" << fmt("%.2f", y0) << "\" x2=\"" << fmt("%.2f", p)
            << "\" y2=\"" << fmt("%.2f", y0 + 5) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << fmt("%.2f", p) << "\" y=\"" << fmt("%.2f", y0 + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt("%g", std::abs(v) < 1e-12 * sx ? 0.0 : v)
            << "</text>\n";
    }
    for (double v = std::ceil(f.y.lo / sy) * sy; v <= f.y.hi + 1e-9 * sy; v += sy) {
        const double p = f.py(v);
        out << "<line x1=\"" << fmt("%.2f", x0 - 5) << "\" y1=\"" << fmt("%.2f", p) << "\" x2=\"" << fmt("%.2f", x0)
            << "\" y2=\"" << fmt("%.2f", p) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << fmt("%.2f", x0 - 8) << "\" y=\"" << fmt("%.2f", p + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt("%g", std::abs(v) < 1e-12 * sy ? 0.0 : v)
            << "</text>\n";
    }
    out << "<text x=\"" << fmt("%.2f", 0.5 * (x0 + x1)) << "\" y=\"" << fmt("%.2f", kHeight - 12)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(plot.x_label) << "</text>\n";
    out << "<text transform=\"translate(16," << fmt("%.2f", 0.5 * (y0 + y1))
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(plot.y_label) << "</text>\n";
    out << "<text x=\"" << fmt("%.2f", 0.5 * kWidth) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(plot.title) << "</text>\n";
}

// Per-pixel-column min and max, in x order.
std::vector<std::pair<double, double>> reduce_line(const Frame& f, const PlotSeries& s) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n <= 4000) {
        for (std::size_t i = 0; i < n; ++i) pts.emplace_back(f.px(s.x[i]), f.py(s.y[i]));
        return pts;
    }
    std::size_t i = 0;
    while (i < n) {
        const long column = std::lround(f.px(s.x[i]));
        double lo = s.y[i], hi = s.y[i];
        std::size_t lo_at = i, hi_at = i, j = i;
        while (j < n && std::lround(f.px(s.x[j])) == column) {
            if (s.y[j] < lo) lo = s.y[j], lo_at = j;
            if (s.y[j] > hi) hi = s.y[j], hi_at = j;
            ++j;
        }
        const std::size_t first = std::min(lo_at, hi_at), second = std::max(lo_at, hi_at);
        pts.emplace_back(f.px(s.x[first]), f.py(s.y[first]));
        if (second != first) pts.emplace_back(f.px(s.x[second]), f.py(s.y[second]));
        i = j;
    }
    return pts;
}

}  // namespace

std::string format_number(double v) { return fmt("%.17g", v); }

void write_csv(std::ostream& out, const CsvTable& table) {
    if (table.header.size() != table.columns.size()) throw std::logic_error("csv: header and column count differ");
    for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
    out << '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& col : table.columns)
        if (col.size() != rows) throw std::logic_error("csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << format_number(table.columns[c][r]);
        out << '\n';
    }
}

void write_svg(std::ostream& out, const Plot& plot) {
    Frame f;
    for (const auto& s : plot.series) {
        for (double v : s.x) f.x.include(v);
        for (double v : s.y) f.y.include(v);
        if (s.style == PlotStyle::Stem) f.y.include(0.0);
    }
    f.x.finish();
    f.y.finish();
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt("%.0f", kWidth)
        << "\" height=\"" << fmt("%.0f", kHeight) << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    axes(out, f, plot);
    double legend_y = kTop + 14;
    for (const auto& s : plot.series) {
        if (s.style == PlotStyle::Stem) {
            out << "<g stroke=\"" << s.color << "\" stroke-width=\"1\">\n";
            const double base = f.py(std::max(f.y.lo, 0.0));
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
                const double px = f.px(s.x[i]);
                out << "<line x1=\"" << fmt("%.2f", px) << "\" y1=\"" << fmt("%.2f", base) << "\" x2=\""
                    << fmt("%.2f", px) << "\" y2=\"" << fmt("%.2f", f.py(s.y[i])) << "\"/>\n";
            }
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
            bool first = true;
            for (const auto& [px, py] : reduce_line(f, s)) {
                out << (first ? "" : " ") << fmt("%.2f", px) << ',' << fmt("%.2f", py);
                first = false;
            }
            out << "\"/>\n";
        }
        if (!s.label.empty()) {
            out << "<text x=\"" << fmt("%.2f", kWidth - kRight - 8) << "\" y=\"" << fmt("%.2f", legend_y)
                << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << escape(s.label)
                << "</text>\n";
            legend_y += 14;
        }
    }
    out << "</svg>\n";
}

}  // namespace jcm::cli
