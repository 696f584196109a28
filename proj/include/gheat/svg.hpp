#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gheat/csv.hpp"

namespace gheat {
namespace detail {

/// Pixel coordinates use fixed two-decimal form: deterministic and short.
inline std::string px(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

inline constexpr std::array<const char*, 10> plot_palette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

/// Largest "nice" tick step (1, 2 or 5 times a power of ten) giving at
/// most `max_ticks` intervals over `range`.
inline double nice_step(double range, int max_ticks) {
    const double raw = range / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0})
        if (mult * mag >= raw) return mult * mag;
    return 10.0 * mag;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    std::vector<double> ticks;
};

inline Axis build_axis(double lo, double hi) {
    Axis ax;
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        lo -= pad;
        hi += pad;
    }
    const double step = nice_step(hi - lo, 6);
    ax.lo = lo;
    ax.hi = hi;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
        ax.ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return ax;
}

}  // namespace detail

/**
 * Deterministic line plot: named series over a shared abscissa. Byte
 * output depends only on the inputs. Single-point series degrade to
 * markers.
 */
inline std::string render_series_svg(const std::string& title,
                                     const std::vector<std::string>& names,
                                     const std::vector<double>& xs,
                                     const std::vector<std::vector<double>>& series) {
    require(!xs.empty(), errc::malformed_input, "plot needs at least one point");
    require(!series.empty() && names.size() == series.size(), errc::malformed_input,
            "plot needs matching series and names");
    for (const auto& s : series)
        require(s.size() == xs.size(), errc::malformed_input,
                "series length does not match abscissa");

    const double width = 800, height = 500;
    const double ml = 74, mr = 20, mt = 34, mb = 46;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double ylo = series[0][0], yhi = series[0][0];
    for (const auto& s : series)
        for (double v : s) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    if (yhi > ylo) {
        const double pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
    }
    const detail::Axis ax = detail::build_axis(xs.front(), xs.back());
    const detail::Axis ay = detail::build_axis(ylo, yhi);

    auto sx = [&](double v) { return ml + (v - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";
    if (!title.empty())
        svg += "<text x=\"" + detail::px(width / 2) +
               "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"14\">" +
               title + "</text>\n";

    // Frame and ticks.
    svg += "<rect x=\"" + detail::px(ml) + "\" y=\"" + detail::px(mt) + "\" width=\"" +
           detail::px(pw) + "\" height=\"" + detail::px(ph) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (double t : ax.ticks) {
        const double x = sx(t);
        svg += "<line x1=\"" + detail::px(x) + "\" y1=\"" + detail::px(mt + ph) + "\" x2=\"" +
               detail::px(x) + "\" y2=\"" + detail::px(mt + ph + 5) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::px(x) + "\" y=\"" + detail::px(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(t) + "</text>\n";
    }
    for (double t : ay.ticks) {
        const double y = sy(t);
        svg += "<line x1=\"" + detail::px(ml - 5) + "\" y1=\"" + detail::px(y) + "\" x2=\"" +
               detail::px(ml) + "\" y2=\"" + detail::px(y) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::px(ml - 8) + "\" y=\"" + detail::px(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(t) + "</text>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = detail::plot_palette[k % detail::plot_palette.size()];
        if (xs.size() == 1) {
            svg += "<circle cx=\"" + detail::px(sx(xs[0])) + "\" cy=\"" +
                   detail::px(sy(series[k][0])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
            continue;
        }
        std::string pts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) pts += " ";
            pts += detail::px(sx(xs[i])) + "," + detail::px(sy(series[k][i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }

    // Legend, top-right inside the frame.
    const double lx = ml + pw - 110, ly0 = mt + 10;
    for (std::size_t k = 0; k < names.size(); ++k) {
        const char* color = detail::plot_palette[k % detail::plot_palette.size()];
        const double y = ly0 + 16 * static_cast<double>(k);
        svg += "<line x1=\"" + detail::px(lx) + "\" y1=\"" + detail::px(y) + "\" x2=\"" +
               detail::px(lx + 18) + "\" y2=\"" + detail::px(y) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::px(lx + 24) + "\" y=\"" + detail::px(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + names[k] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Plot a trajectory CSV (as written by trajectory_to_csv): time on the
/// abscissa, one line per vertex column.
inline std::string trajectory_csv_to_svg(const std::string& csv_text,
                                         const std::string& title = "") {
    const CsvTable table = parse_csv(csv_text, "trajectory csv");
    require(table.header.size() >= 4 && table.header[0] == "time", errc::malformed_input,
            "trajectory csv must start with a time column");
    require(!table.rows.empty(), errc::malformed_input, "trajectory csv has no data rows");

    std::vector<double> xs;
    xs.reserve(table.rows.size());
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (std::size_t c = 1; c + 2 < table.header.size(); ++c) {
        names.push_back(table.header[c]);
        series.emplace_back();
    }
    require(!names.empty(), errc::malformed_input, "trajectory csv has no vertex columns");
    for (const auto& row : table.rows) {
        xs.push_back(csv_number(row[0], "trajectory csv"));
        for (std::size_t c = 1; c + 2 < table.header.size(); ++c)
            series[c - 1].push_back(csv_number(row[c], "trajectory csv"));
    }
    return render_series_svg(title, names, xs, series);
}

/// Render a sweep CSV as a verdict-colored table: one row per alpha,
/// one column per scale.
inline std::string sweep_csv_to_svg(const std::string& csv_text) {
    const CsvTable table = parse_csv(csv_text, "sweep csv");
    require(table.header.size() == 6 && table.header[0] == "m_fit", errc::malformed_input,
            "not a sweep csv");
    require(!table.rows.empty(), errc::malformed_input, "sweep csv has no data rows");

    std::set<double> alpha_set, scale_set;
    for (const auto& row : table.rows) {
        alpha_set.insert(csv_number(row[1], "sweep csv"));
        scale_set.insert(csv_number(row[3], "sweep csv"));
    }
    const std::vector<double> alphas(alpha_set.begin(), alpha_set.end());
    const std::vector<double> scales(scale_set.begin(), scale_set.end());

    auto color_of = [](const std::string& verdict) {
        if (verdict == "blow_up") return "#d62728";
        if (verdict == "decay_on_horizon") return "#2ca02c";
        return "#7f7f7f";
    };

    const double cell_w = 132, cell_h = 46, ml = 96, mt = 56;
    const double width = ml + cell_w * static_cast<double>(scales.size()) + 20;
    const double height = mt + cell_h * static_cast<double>(alphas.size()) + 20;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::px(width) +
           "\" height=\"" + detail::px(height) + "\" viewBox=\"0 0 " + detail::px(width) + " " +
           detail::px(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + detail::px(width) + "\" height=\"" +
           detail::px(height) + "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"10\" y=\"22\" font-family=\"sans-serif\" font-size=\"13\">growth degree "
           "m_fit = " +
           table.rows[0][0] + "</text>\n";

    for (std::size_t c = 0; c < scales.size(); ++c)
        svg += "<text x=\"" + detail::px(ml + cell_w * (c + 0.5)) + "\" y=\"" +
               detail::px(mt - 8) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">scale " +
               format_double(scales[c]) + "</text>\n";
    for (std::size_t r = 0; r < alphas.size(); ++r)
        svg += "<text x=\"" + detail::px(ml - 8) + "\" y=\"" +
               detail::px(mt + cell_h * (r + 0.5) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">alpha " +
               format_double(alphas[r]) + "</text>\n";

    for (const auto& row : table.rows) {
        const double alpha = csv_number(row[1], "sweep csv");
        const double scale = csv_number(row[3], "sweep csv");
        const std::size_t r = std::lower_bound(alphas.begin(), alphas.end(), alpha) -
                              alphas.begin();
        const std::size_t c = std::lower_bound(scales.begin(), scales.end(), scale) -
                              scales.begin();
        const double x = ml + cell_w * static_cast<double>(c);
        const double y = mt + cell_h * static_cast<double>(r);
        svg += "<rect x=\"" + detail::px(x + 2) + "\" y=\"" + detail::px(y + 2) + "\" width=\"" +
               detail::px(cell_w - 4) + "\" height=\"" + detail::px(cell_h - 4) + "\" fill=\"" +
               color_of(row[4]) + "\" fill-opacity=\"0.72\" stroke=\"#333333\" "
               "stroke-width=\"0.5\"/>\n";
        svg += "<text x=\"" + detail::px(x + cell_w / 2) + "\" y=\"" + detail::px(y + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               row[4] + "</text>\n";
        svg += "<text x=\"" + detail::px(x + cell_w / 2) + "\" y=\"" + detail::px(y + 36) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               row[5] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Dispatch on a CSV produced by this toolkit and render the matching
/// plot (line plot for trajectories, verdict table for sweeps).
inline std::string emit_plot(const std::string& csv_text, const std::string& title = "") {
    const CsvTable table = parse_csv(csv_text, "csv");
    if (!table.header.empty() && table.header[0] == "time")
        return trajectory_csv_to_svg(csv_text, title);
    if (!table.header.empty() && table.header[0] == "m_fit") return sweep_csv_to_svg(csv_text);
    fail(errc::malformed_input, "csv is neither a trajectory nor a sweep table");
}

}  // namespace gheat
