#pragma once
// Minimal SVG 1.1 line plot of trajectory channels against time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "dynsim/named_trajectory.hpp"

namespace dynsim {

struct PlotStyle {
    int width = 800;
    int height = 480;
    int margin_left = 70;
    int margin_right = 130;
    int margin_top = 30;
    int margin_bottom = 50;
    int ticks = 6;
};

namespace detail {

struct Axis {
    double lo, hi, step;
};

/// Round-number tick spacing covering [lo, hi] with about `target` ticks.
inline Axis nice_axis(double lo, double hi, int target) {
    if (!(hi > lo)) {
        const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    const double nice = frac <= 1.0 ? 1.0 : frac <= 2.0 ? 2.0 : frac <= 5.0 ? 5.0 : 10.0;
    const double step = nice * mag;
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                     "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/// Plots the named channels on one shared axis pair. Throws UnknownChannel.
inline void render_svg(const NamedTrajectory& traj, const std::vector<std::string>& channels,
                       std::ostream& out, const PlotStyle& style = {}) {
    using detail::fmt;
    std::vector<std::size_t> idx;
    for (const auto& c : channels) idx.push_back(traj.channel_index(c));

    double t_lo = 0.0, t_hi = 1.0;
    if (!traj.times.empty()) {
        t_lo = traj.times.front();
        t_hi = traj.times.back();
    }
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    for (std::size_t k : idx)
        for (const auto& row : traj.states) {
            y_lo = std::min(y_lo, row[k]);
            y_hi = std::max(y_hi, row[k]);
        }
    if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) y_lo = -1.0, y_hi = 1.0;

    const auto xa = detail::nice_axis(t_lo, t_hi, style.ticks);
    const auto ya = detail::nice_axis(y_lo, y_hi, style.ticks);
    const double pw = style.width - style.margin_left - style.margin_right;
    const double ph = style.height - style.margin_top - style.margin_bottom;
    const auto X = [&](double t) { return style.margin_left + (t - xa.lo) / (xa.hi - xa.lo) * pw; };
    const auto Y = [&](double y) { return style.margin_top + (ya.hi - y) / (ya.hi - ya.lo) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
        << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << ' '
        << style.height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" fill=\"white\"/>\n"
        << "<g font-family=\"sans-serif\" font-size=\"11\">\n";

    // Grid and tick labels.
    const auto count = [](const detail::Axis& a) {
        return static_cast<int>(std::lround((a.hi - a.lo) / a.step));
    };
    for (int i = 0; i <= count(xa); ++i) {
        const double t = xa.lo + i * xa.step;
        const std::string x = fmt("%.2f", X(t));
        out << "<line x1=\"" << x << "\" y1=\"" << style.margin_top << "\" x2=\"" << x
            << "\" y2=\"" << fmt("%.2f", style.margin_top + ph)
            << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << fmt("%.2f", style.margin_top + ph + 16)
            << "\" text-anchor=\"middle\">" << fmt("%g", t) << "</text>\n";
    }
    for (int i = 0; i <= count(ya); ++i) {
        const double v = ya.lo + i * ya.step;
        const std::string y = fmt("%.2f", Y(v));
        out << "<line x1=\"" << style.margin_left << "\" y1=\"" << y << "\" x2=\""
            << fmt("%.2f", style.margin_left + pw) << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n"
            << "<text x=\"" << style.margin_left - 6 << "\" y=\"" << y
            << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
            << fmt("%g", std::abs(v) < 1e-12 * ya.step ? 0.0 : v) << "</text>\n";
    }
    out << "<rect x=\"" << style.margin_left << "\" y=\"" << style.margin_top << "\" width=\""
        << fmt("%.2f", pw) << "\" height=\"" << fmt("%.2f", ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt("%.2f", style.margin_left + pw / 2) << "\" y=\""
        << style.height - 12 << "\" text-anchor=\"middle\">t [s]</text>\n";

    for (std::size_t c = 0; c < idx.size(); ++c) {
        const char* color = detail::kPalette[c % detail::kPalette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            if (k) out << ' ';
            out << fmt("%.2f", X(traj.times[k])) << ',' << fmt("%.2f", Y(traj.states[k][idx[c]]));
        }
        out << "\"/>\n";
        const double ly = style.margin_top + 10 + 18.0 * static_cast<double>(c);
        const double lx = style.margin_left + pw + 12;
        out << "<line x1=\"" << fmt("%.2f", lx) << "\" y1=\"" << fmt("%.2f", ly) << "\" x2=\""
            << fmt("%.2f", lx + 20) << "\" y2=\"" << fmt("%.2f", ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fmt("%.2f", lx + 26) << "\" y=\"" << fmt("%.2f", ly)
            << "\" dominant-baseline=\"middle\">" << detail::xml_escape(channels[c]) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

}  // namespace dynsim
