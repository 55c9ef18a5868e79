#include "pumpout/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pumpout/common.hpp"
#include "pumpout/experiment.hpp"

namespace pumpout {

namespace {

struct Series {
    std::string label;
    std::vector<double> epochs;
    std::vector<double> values;
};

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

Series read_series(const std::string& path, ChartMetric metric) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open CSV: " + path);

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kMetricsCsvHeader) {
        throw FormatError(path + ":1: unexpected header '" + line + "'");
    }

    int column = metric == ChartMetric::TestAccuracy ? 1
                 : metric == ChartMetric::LabelPrecision ? 2 : 3;

    Series s;
    s.label = file_stem(path);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected 5 fields, got " +
                              std::to_string(fields.size()));
        }
        const std::string& cell = fields[column];
        if (cell.empty()) continue;  // BC-family rows leave label_precision blank
        try {
            std::size_t pos = 0;
            double epoch = std::stod(fields[0], &pos);
            if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
            double value = std::stod(cell, &pos);
            if (pos != cell.size()) throw std::invalid_argument(cell);
            s.epochs.push_back(epoch);
            s.values.push_back(value);
        } catch (const std::exception&) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric cell");
        }
    }
    if (s.values.empty()) {
        throw FormatError(path + ": no usable data rows for the requested metric");
    }
    return s;
}

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

const char* metric_title(ChartMetric m) {
    switch (m) {
        case ChartMetric::TestAccuracy: return "test accuracy";
        case ChartMetric::LabelPrecision: return "label precision";
        case ChartMetric::MeanTrainLoss: return "mean train loss";
    }
    return "";
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_chart_svg(const std::vector<std::string>& csv_paths, ChartMetric metric) {
    if (csv_paths.empty()) throw FormatError("chart: no input CSV files");
    std::vector<Series> series;
    for (const auto& p : csv_paths) series.push_back(read_series(p, metric));

    double x_min = series[0].epochs.front(), x_max = x_min;
    double y_min = 0.0, y_max = 1.0;
    bool fixed_unit_range =
        metric == ChartMetric::TestAccuracy || metric == ChartMetric::LabelPrecision;
    if (!fixed_unit_range) {
        y_min = series[0].values.front();
        y_max = y_min;
    }
    for (const auto& s : series) {
        for (double e : s.epochs) { x_min = std::min(x_min, e); x_max = std::max(x_max, e); }
        if (!fixed_unit_range) {
            for (double v : s.values) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) { y_max += 1.0; y_min -= 1.0; }
    if (!fixed_unit_range) {
        double pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }

    const double width = 860, height = 520;
    const double left = 70, right = 660, top = 30, bottom = 470;
    auto sx = [&](double e) { return left + (e - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double v) { return bottom - (v - y_min) / (y_max - y_min) * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        double fx = x_min + (x_max - x_min) * i / n_ticks;
        double px = sx(fx);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << bottom << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << bottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(fx, "%.0f") << "</text>\n";

        double fy = y_min + (y_max - y_min) * i / n_ticks;
        double py = sy(fy);
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << left
            << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(fy, "%.3g") << "</text>\n";
    }

    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 8
        << "\" font-size=\"13\" text-anchor=\"middle\">epoch</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (top + bottom) / 2 << ")\">" << metric_title(metric) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t p = 0; p < series[i].epochs.size(); ++p) {
            if (p) svg << ' ';
            svg << fmt(sx(series[i].epochs[p])) << ',' << fmt(sy(series[i].values[p]));
        }
        svg << "\"/>\n";

        double ly = top + 18 + 20.0 * static_cast<double>(i);
        svg << "<line x1=\"" << right + 16 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << right + 44 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << right + 50 << "\" y=\"" << fmt(ly)
            << "\" font-size=\"12\">" << series[i].label << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

void emit_chart(const std::vector<std::string>& csv_paths, const std::string& out_path,
                ChartMetric metric) {
    std::string svg = render_chart_svg(csv_paths, metric);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open SVG output: " + out_path);
    out << svg;
}

}  // namespace pumpout
