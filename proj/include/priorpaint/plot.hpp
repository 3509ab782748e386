#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "priorpaint/image.hpp"

// Just enough raster plotting to ship grayscale PNG charts with the reports:
// filled bars, axis ticks, and a built-in 5x7 bitmap font.

namespace priorpaint::plot {

struct Canvas {
    Image im;
    explicit Canvas(int h, int w, double bg = 1.0) : im(h, w, bg) {}

    void fill_rect(int r0, int c0, int r1, int c1, double v);
    void text(int r, int c, const std::string& s, double v = 0.0);  // upper-cased 5x7 glyphs
    static int text_width(const std::string& s) { return static_cast<int>(s.size()) * 6; }
};

/// Horizontal bar chart; one bar per (label, value). Values get a linear
/// scale from 0 to max.
void bar_chart(const std::filesystem::path& path, const std::string& title,
               const std::vector<std::pair<std::string, double>>& bars, const std::string& unit);

}  // namespace priorpaint::plot
