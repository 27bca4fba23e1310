#include "dqteleop/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dqteleop {

namespace {

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                         "#bcbd22", "#17becf"};

std::string escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
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

// Round step for about `target` ticks over [lo, hi].
double tick_step(double lo, double hi, int target)
{
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

std::string tick_label(double v, double step)
{
    std::ostringstream os;
    const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step))));
    os.setf(std::ios::fixed);
    os.precision(std::min(digits, 6));
    os << (std::abs(v) < step * 1e-9 ? 0.0 : v);
    return os.str();
}

// Keeps at most ~n points per series; plots of 60k-tick runs stay small.
std::vector<std::size_t> decimate(std::size_t size, std::size_t n)
{
    std::vector<std::size_t> idx;
    const std::size_t stride = std::max<std::size_t>(1, size / n);
    for (std::size_t i = 0; i < size; i += stride) {
        idx.push_back(i);
    }
    if (size > 0 && idx.back() != size - 1) {
        idx.push_back(size - 1);
    }
    return idx;
}

std::set<std::string> prefixes(const TelemetryTable& table, const std::string& head, const std::string& suffix)
{
    std::set<std::string> out;
    for (const auto& c : table.columns) {
        if (c.rfind(head, 0) == 0 && c.size() > head.size() + suffix.size() &&
            c.compare(c.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.insert(c.substr(head.size(), c.size() - head.size() - suffix.size()));
        }
    }
    return out;
}

// Column order, which is the declaration order, rather than the sorted set order.
std::vector<std::string> ordered(const TelemetryTable& table, const std::string& head, const std::string& suffix)
{
    const auto set = prefixes(table, head, suffix);
    std::vector<std::string> out;
    for (const auto& c : table.columns) {
        if (c.rfind(head, 0) == 0 && c.size() > suffix.size() &&
            c.compare(c.size() - suffix.size(), suffix.size(), suffix) == 0) {
            const auto name = c.substr(head.size(), c.size() - head.size() - suffix.size());
            if (set.contains(name)) {
                out.push_back(name);
            }
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const Chart& chart, int width, int height)
{
    const double left = 80;
    const double right = 180;
    const double top = 40;
    const double bottom = 56;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0;
        x1 = 1;
        y0 = 0;
        y1 = 1;
    }
    if (chart.zero_line) {
        y0 = std::min(y0, 0.0);
        y1 = std::max(y1, 0.0);
    }
    const auto widen = [](double& lo, double& hi) {
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            const double pad = std::max(1e-6, std::abs(hi) * 0.1);
            lo -= pad;
            hi += pad;
        }
    };
    widen(x0, x1);
    widen(y0, y1);
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;
    if (chart.equal_axes) {
        const double sx = (x1 - x0) / pw;
        const double sy = (y1 - y0) / ph;
        const double s = std::max(sx, sy);
        const double cx = 0.5 * (x0 + x1);
        const double cy = 0.5 * (y0 + y1);
        x0 = cx - 0.5 * s * pw;
        x1 = cx + 0.5 * s * pw;
        y0 = cy - 0.5 * s * ph;
        y1 = cy + 0.5 * s * ph;
    }
    const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
       << "</text>\n";

    const double xs = tick_step(x0, x1, 8);
    for (double v = std::ceil(x0 / xs) * xs; v <= x1 + 1e-9 * xs; v += xs) {
        os << "<line x1=\"" << px(v) << "\" y1=\"" << top << "\" x2=\"" << px(v) << "\" y2=\"" << top + ph
           << "\" stroke=\"#eee\"/>\n";
        os << "<text x=\"" << px(v) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << tick_label(v, xs)
           << "</text>\n";
    }
    const double ys = tick_step(y0, y1, 6);
    for (double v = std::ceil(y0 / ys) * ys; v <= y1 + 1e-9 * ys; v += ys) {
        os << "<line x1=\"" << left << "\" y1=\"" << py(v) << "\" x2=\"" << left + pw << "\" y2=\"" << py(v)
           << "\" stroke=\"#eee\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << tick_label(v, ys)
           << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333\"/>\n";
    if (chart.zero_line) {
        os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left + pw << "\" y2=\"" << py(0)
           << "\" stroke=\"#555\" stroke-dasharray=\"6,4\"/>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 14 << "\" text-anchor=\"middle\">"
       << escape(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(chart.y_label) << "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* color = palette[k % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto i : decimate(s.x.size(), 2000)) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            }
        }
        os << "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
           << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Chart distance_chart(const TelemetryTable& table)
{
    Chart c{"Constraint distances", "time (s)", "d - d_safe", {}, true, false};
    const auto t = table.series("time");
    for (const auto& name : ordered(table, "c:", ".d")) {
        const auto d = table.series("c:" + name + ".d");
        const auto ds = table.series("c:" + name + ".d_safe");
        Series s{name, t, {}};
        for (std::size_t i = 0; i < d.size(); ++i) {
            s.y.push_back(d[i] - ds[i]);
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

Chart force_chart(const TelemetryTable& table)
{
    Chart c{"Reflected master force", "time (s)", "|force| (N)", {}, false, false};
    const auto t = table.series("time");
    for (const auto& m : ordered(table, "", ".force.x")) {
        const auto fx = table.series(m + ".force.x");
        const auto fy = table.series(m + ".force.y");
        const auto fz = table.series(m + ".force.z");
        Series s{m, t, {}};
        for (std::size_t i = 0; i < fx.size(); ++i) {
            s.y.push_back(std::sqrt(fx[i] * fx[i] + fy[i] * fy[i] + fz[i] * fz[i]));
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

Chart trajectory_chart(const TelemetryTable& table)
{
    Chart c{"Tool tip paths (top view)", "x", "y", {}, false, true};
    for (const auto& r : ordered(table, "", ".t.x")) {
        c.series.push_back({r + " tip", table.series(r + ".t.x"), table.series(r + ".t.y")});
        c.series.push_back({r + " target", table.series(r + ".td.x"), table.series(r + ".td.y")});
    }
    return c;
}

std::vector<std::string> write_plots(const TelemetryTable& table, const std::string& prefix)
{
    std::vector<std::string> paths;
    const std::pair<const char*, Chart> charts[] = {{"_distances.svg", distance_chart(table)},
                                                    {"_forces.svg", force_chart(table)},
                                                    {"_trajectory.svg", trajectory_chart(table)}};
    for (const auto& [suffix, chart] : charts) {
        const std::string path = prefix + suffix;
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write '" + path + "'");
        }
        out << render_svg(chart);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace dqteleop
