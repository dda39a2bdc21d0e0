#include "dicke/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace dicke {

namespace {

// Samples of the viridis map at equal steps in [0, 1].
constexpr std::array<Rgb, 9> kAnchors{{
    {68, 1, 84},
    {71, 44, 122},
    {59, 81, 139},
    {44, 113, 142},
    {33, 144, 141},
    {39, 173, 129},
    {92, 200, 99},
    {170, 220, 50},
    {253, 231, 37},
}};

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string num(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

Rgb colormap(double x) noexcept {
    if (std::isnan(x)) return {128, 128, 128};
    x = std::clamp(x, 0.0, 1.0) * (kAnchors.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(x), kAnchors.size() - 2);
    const double f = x - static_cast<double>(i);
    auto mix = [f](unsigned char a, unsigned char b) {
        return static_cast<unsigned char>(std::lround(a + f * (static_cast<double>(b) - a)));
    };
    return {mix(kAnchors[i].r, kAnchors[i + 1].r), mix(kAnchors[i].g, kAnchors[i + 1].g),
            mix(kAnchors[i].b, kAnchors[i + 1].b)};
}

void write_heatmap_svg(std::ostream& os, const SweepMatrix& m, std::string_view title) {
    const std::size_t cols = m.lambdas.size();
    const std::size_t rows = m.gammas.size();
    const std::size_t turn = cols == 0 ? 0
                                       : static_cast<std::size_t>(std::max_element(m.lambdas.begin(), m.lambdas.end()) -
                                                                  m.lambdas.begin());

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : m.values)
        for (double v : r)
            if (!std::isnan(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(hi > lo)) {
        lo = std::isfinite(lo) ? lo - 0.5 : 0.0;
        hi = lo + 1.0;
    }

    const double panel_w = 360, panel_h = 300, left = 70, top = 40, gap = 40, bar_w = 16;
    const double width = left + 2 * panel_w + gap + 90, height = top + panel_h + 60;
    const double cell_h = rows ? panel_h / static_cast<double>(rows) : panel_h;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";

    // Each branch panel maps lambda in [0, 1] to x; the down-branch runs right to left in time.
    struct Panel {
        std::size_t first, last;
        double x0;
        const char* label;
    };
    const std::array<Panel, 2> panels{{{0, turn, left, "up-branch"}, {turn, cols ? cols - 1 : 0, left + panel_w + gap, "down-branch"}}};
    for (const Panel& p : panels) {
        os << "<text x=\"" << p.x0 + panel_w / 2 << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">" << p.label
           << "</text>\n";
        for (std::size_t i = 0; i < rows; ++i) {
            // Highest gamma on top.
            const double y = top + static_cast<double>(rows - 1 - i) * cell_h;
            for (std::size_t j = p.first; j <= p.last && j < cols; ++j) {
                const double l0 = m.lambdas[j];
                const double l1 = j + 1 <= p.last && j + 1 < cols ? m.lambdas[j + 1] : l0;
                const double xa = p.x0 + std::min(l0, l1) * panel_w;
                const double w = std::max(std::abs(l1 - l0) * panel_w, 0.5);
                const double v = m.values[i][j];
                os << "<rect x=\"" << num(xa, 6) << "\" y=\"" << num(y, 6) << "\" width=\"" << num(w, 6)
                   << "\" height=\"" << num(cell_h, 6) << "\" fill=\""
                   << hex(colormap(std::isnan(v) ? v : (v - lo) / (hi - lo))) << "\"/>\n";
            }
        }
        os << "<rect x=\"" << p.x0 << "\" y=\"" << top << "\" width=\"" << panel_w << "\" height=\"" << panel_h
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int k = 0; k <= 4; ++k) {
            const double l = 0.25 * k;
            const double x = p.x0 + l * panel_w;
            os << "<line x1=\"" << x << "\" y1=\"" << top + panel_h << "\" x2=\"" << x << "\" y2=\""
               << top + panel_h + 4 << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << x << "\" y=\"" << top + panel_h + 16 << "\" text-anchor=\"middle\">" << num(l)
               << "</text>\n";
        }
        os << "<text x=\"" << p.x0 + panel_w / 2 << "\" y=\"" << top + panel_h + 32
           << "\" text-anchor=\"middle\">lambda</text>\n";
    }

    for (std::size_t i = 0; i < rows; ++i) {
        const double y = top + (static_cast<double>(rows - 1 - i) + 0.5) * cell_h + 4;
        os << "<text x=\"" << left - 6 << "\" y=\"" << num(y, 6) << "\" text-anchor=\"end\">" << num(m.gammas[i])
           << "</text>\n";
    }
    os << "<text x=\"16\" y=\"" << top + panel_h / 2 << "\" transform=\"rotate(-90 16 " << top + panel_h / 2
       << ")\" text-anchor=\"middle\">Gamma = log2(v)</text>\n";

    const double bx = left + 2 * panel_w + gap + 20;
    for (int k = 0; k < 64; ++k) {
        const double f = (k + 0.5) / 64.0;
        os << "<rect x=\"" << bx << "\" y=\"" << num(top + panel_h * (1.0 - (k + 1) / 64.0), 6) << "\" width=\"" << bar_w
           << "\" height=\"" << num(panel_h / 64.0 + 0.5, 6) << "\" fill=\"" << hex(colormap(f)) << "\"/>\n";
    }
    os << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + 8 << "\">" << num(hi) << "</text>\n";
    os << "<text x=\"" << bx + bar_w + 4 << "\" y=\"" << top + panel_h << "\">" << num(lo) << "</text>\n";
    os << "</svg>\n";
}

}  // namespace dicke
