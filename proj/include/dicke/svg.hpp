#pragma once
// Self-contained SVG heatmaps of sweep matrices: rows are gamma values, columns
// are samples, split into an up-branch and a down-branch panel at the peak.

#include <iosfwd>
#include <string_view>

#include "dicke/pipeline.hpp"

namespace dicke {

struct Rgb {
    unsigned char r, g, b;
};

// Perceptually ordered (viridis-like) map of x in [0, 1]; NaN maps to grey.
Rgb colormap(double x) noexcept;

void write_heatmap_svg(std::ostream& os, const SweepMatrix& matrix, std::string_view title);

}  // namespace dicke
