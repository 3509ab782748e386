#include "priorpaint/plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "priorpaint/png_io.hpp"

namespace priorpaint::plot {

namespace {

// 5x7 glyphs, one byte per row, low 5 bits used.
struct Glyph {
    char ch;
    unsigned char rows[7];
};

const Glyph kFont[] = {
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'A', {0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'B', {0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e}},
    {'C', {0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e}},
    {'D', {0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c}},
    {'E', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f}},
    {'F', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10}},
    {'G', {0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f}},
    {'H', {0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'I', {0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f}},
    {'M', {0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'P', {0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10}},
    {'Q', {0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d}},
    {'R', {0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11}},
    {'S', {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e}},
    {'T', {0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a}},
    {'X', {0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {'-', {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f}},
    {':', {0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x0c, 0x00}},
    {'/', {0x01, 0x02, 0x02, 0x04, 0x08, 0x08, 0x10}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char c) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const auto& g : kFont)
        if (g.ch == u) return &g;
    return nullptr;
}

}  // namespace

void Canvas::fill_rect(int r0, int c0, int r1, int c1, double v) {
    r0 = std::max(0, r0);
    c0 = std::max(0, c0);
    r1 = std::min(im.h, r1);
    c1 = std::min(im.w, c1);
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) im.at(r, c) = v;
}

void Canvas::text(int r, int c, const std::string& s, double v) {
    int x = c;
    for (char ch : s) {
        if (const Glyph* g = find_glyph(ch)) {
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 5; ++col)
                    if (g->rows[row] & (1 << (4 - col))) {
                        const int rr = r + row, cc = x + col;
                        if (rr >= 0 && rr < im.h && cc >= 0 && cc < im.w) im.at(rr, cc) = v;
                    }
        }
        x += 6;
    }
}

void bar_chart(const std::filesystem::path& path, const std::string& title,
               const std::vector<std::pair<std::string, double>>& bars, const std::string& unit) {
    const int label_w = 90, bar_max = 220, row_h = 16, margin = 10;
    const int h = margin * 2 + 20 + row_h * static_cast<int>(bars.size());
    const int w = margin * 2 + label_w + bar_max + 70;
    Canvas cv(h, w);
    cv.text(margin, margin, title, 0.0);

    double vmax = 1e-9;
    for (const auto& [label, v] : bars) vmax = std::max(vmax, v);

    int y = margin + 20;
    for (const auto& [label, v] : bars) {
        cv.text(y + 4, margin, label, 0.1);
        const int len = static_cast<int>(std::lround(std::max(0.0, v) / vmax * bar_max));
        cv.fill_rect(y + 2, margin + label_w, y + row_h - 3, margin + label_w + len, 0.45);
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.2f %s", v, unit.c_str());
        cv.text(y + 4, margin + label_w + len + 6, buf, 0.1);
        y += row_h;
    }
    png::write_image(path, cv.im);
}

}  // namespace priorpaint::plot
