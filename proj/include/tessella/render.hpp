#pragma once

// SVG drawing of periodic patterns: each tile is a unit square cut along its diagonals
// into four triangles, each filled with the color of the edge it touches.

#include <array>
#include <string>
#include <string_view>

#include "tessella/decision.hpp"

namespace tessella {

/// Fill for edge colors 0..3.
inline constexpr std::array<std::string_view, kMaxColors> kPalette = {"#d62728", "#2ca02c", "#1f77b4",
                                                                      "#ffbf00"};

struct RenderOptions {
  int cell = 40;              // pixels per tile
  bool wrapped_border = true; // one extra ring of tiles taken from the opposite side
};

/// The fundamental domain, outlined, surrounded by a faded wrapped border.
std::string render_svg(const PeriodicPattern& pattern, const RenderOptions& options = {});

}  // namespace tessella
