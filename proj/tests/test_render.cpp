#include <doctest.h>

#include "tessella/render.hpp"

using namespace tessella;

TEST_CASE("checkerboard svg") {
  const Verdict v = decide(TileSet::from_phis(3, {5, 37}));
  const auto& w = std::get<Periodic>(v).witness;
  const std::string svg = render_svg(w, RenderOptions{.cell = 10});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("width=\"40\" height=\"40\"") != std::string::npos);
  // 16 drawn tiles (2x2 plus the wrapped ring), four triangles each.
  std::size_t polygons = 0;
  for (auto pos = svg.find("<polygon"); pos != std::string::npos; pos = svg.find("<polygon", pos + 1)) ++polygons;
  CHECK(polygons == 64);
  std::size_t faded = 0;
  for (auto pos = svg.find("opacity"); pos != std::string::npos; pos = svg.find("opacity", pos + 1)) ++faded;
  CHECK(faded == 12);
  // Tile 5 has bottom 1 and left 1: green triangles; tile 37 has top 1 and right 1.
  CHECK(svg.find(std::string(kPalette[1])) != std::string::npos);
  CHECK(svg.find(std::string(kPalette[2])) == std::string::npos);
  CHECK(render_svg(w, RenderOptions{.cell = 10}) == svg);
  const std::string bare = render_svg(w, RenderOptions{.cell = 10, .wrapped_border = false});
  CHECK(bare.find("opacity") == std::string::npos);
}
