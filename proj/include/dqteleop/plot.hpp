#pragma once

#include "dqteleop/telemetry.hpp"

#include <string>
#include <vector>

namespace dqteleop {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    /// Draw y = 0 as a dashed reference line.
    bool zero_line = false;
    /// Keep one unit on x equal to one unit on y (trajectory views).
    bool equal_axes = false;
};

/// Self-contained SVG line chart.
std::string render_svg(const Chart& chart, int width = 800, int height = 480);

/// Constraint margins (d - d_safe, or d_safe - d for safe zones is not known here,
/// so the raw d - d_safe is drawn), reflected force magnitudes, and top-down
/// tool tip paths with their targets.
Chart distance_chart(const TelemetryTable& table);
Chart force_chart(const TelemetryTable& table);
Chart trajectory_chart(const TelemetryTable& table);

/// Writes <prefix>_distances.svg, <prefix>_forces.svg and <prefix>_trajectory.svg; returns the paths.
std::vector<std::string> write_plots(const TelemetryTable& table, const std::string& prefix);

}  // namespace dqteleop
