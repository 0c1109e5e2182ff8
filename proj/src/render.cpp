#include "tessella/render.hpp"

#include <sstream>

namespace tessella {

std::string render_svg(const PeriodicPattern& pattern, const RenderOptions& options) {
  const int border = options.wrapped_border ? 1 : 0;
  const int c = options.cell;
  const int w = (pattern.m + 2 * border) * c, h = (pattern.n + 2 * border) * c;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
     << w << " " << h << "\">\n";
  for (int y = -border; y < pattern.n + border; ++y) {
    for (int x = -border; x < pattern.m + border; ++x) {
      const Tile& t = pattern.cells[(y + pattern.n) % pattern.n][(x + pattern.m) % pattern.m];
      // SVG y grows downward; row 0 is drawn at the bottom.
      const int x0 = (x + border) * c, y0 = (pattern.n - 1 - y + border) * c;
      const int x1 = x0 + c, y1 = y0 + c, cx = x0 + c / 2, cy = y0 + c / 2;
      const bool inside = x >= 0 && y >= 0 && x < pattern.m && y < pattern.n;
      os << "<g" << (inside ? "" : " opacity=\"0.45\"") << ">";
      auto tri = [&](int color, int ax, int ay, int bx, int by) {
        os << "<polygon points=\"" << ax << "," << ay << " " << bx << "," << by << " " << cx << "," << cy
           << "\" fill=\"" << kPalette[color] << "\" stroke=\"#000\" stroke-width=\"0.5\"/>";
      };
      tri(t.bottom, x0, y1, x1, y1);
      tri(t.left, x0, y0, x0, y1);
      tri(t.top, x0, y0, x1, y0);
      tri(t.right, x1, y0, x1, y1);
      os << "</g>\n";
    }
  }
  os << "<rect x=\"" << border * c << "\" y=\"" << border * c << "\" width=\"" << pattern.m * c << "\" height=\""
     << pattern.n * c << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace tessella
