#include "tessella/tiles.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tessella {

namespace {

void check_colors(int p) {
  if (p < kMinColors || p > kMaxColors)
    throw std::invalid_argument("color count must be in 2..4, got " + std::to_string(p));
}

}  // namespace

int universe_size(int p) {
  check_colors(p);
  return p * p * p * p;
}

int phi(const Tile& t) {
  const int p = t.p;
  return 1 + t.bottom + p * (t.left + p * (t.top + p * t.right));
}

Tile tile_from_phi(int n, int p) {
  const int total = universe_size(p);
  if (n < 1 || n > total)
    throw std::out_of_range("tile number " + std::to_string(n) + " outside 1.." +
                            std::to_string(total));
  int v = n - 1;
  Tile t;
  t.p = static_cast<std::uint8_t>(p);
  t.bottom = static_cast<std::uint8_t>(v % p);
  v /= p;
  t.left = static_cast<std::uint8_t>(v % p);
  v /= p;
  t.top = static_cast<std::uint8_t>(v % p);
  v /= p;
  t.right = static_cast<std::uint8_t>(v % p);
  return t;
}

std::string to_string(const Tile& t) {
  std::ostringstream os;
  os << phi(t) << "(b" << int(t.bottom) << ",l" << int(t.left) << ",t" << int(t.top) << ",r"
     << int(t.right) << ")";
  return os.str();
}

std::string_view to_string(TileGroup g) {
  switch (g) {
    case TileGroup::G0: return "G0";
    case TileGroup::G1: return "G1";
    case TileGroup::G2: return "G2";
  }
  return "?";
}

TileGroup classify(const Tile& t) {
  const int unequal = (t.bottom != t.top) + (t.left != t.right);
  return unequal == 0 ? TileGroup::G0 : unequal == 1 ? TileGroup::G1 : TileGroup::G2;
}

Tile g2_partner(const Tile& t) {
  if (classify(t) != TileGroup::G2)
    throw std::invalid_argument("tile " + std::to_string(phi(t)) + " is not in G2");
  Tile e = t;
  std::swap(e.bottom, e.top);
  std::swap(e.left, e.right);
  return e;
}

std::vector<Tile> g1_partners(const Tile& t) {
  if (classify(t) != TileGroup::G1)
    throw std::invalid_argument("tile " + std::to_string(phi(t)) + " is not in G1");
  // The unequal pair is swapped; the equal pair may take any common color.
  std::vector<Tile> out;
  for (int c = 0; c < t.p; ++c) {
    Tile e = t;
    if (t.bottom != t.top) {
      std::swap(e.bottom, e.top);
      e.left = e.right = static_cast<std::uint8_t>(c);
    } else {
      std::swap(e.left, e.right);
      e.bottom = e.top = static_cast<std::uint8_t>(c);
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Tile& a, const Tile& b) { return phi(a) < phi(b); });
  return out;
}

bool lex_less(const TileMask& a, const TileMask& b) {
  const TileMask diff = a ^ b;
  const int first = diff.lowest();
  if (first < 0) return false;
  if (a.test(first)) return b.highest() > first;
  return a.highest() < first;
}

TileSet::TileSet(int p) : p_(p) { check_colors(p); }

TileSet::TileSet(int p, const TileMask& members) : p_(p), mask_(members) {
  check_colors(p);
  if (mask_.highest() >= universe_size(p))
    throw std::out_of_range("tile mask has members outside the universe");
}

TileSet TileSet::from_phis(int p, const std::vector<int>& phis) {
  TileSet s(p);
  for (int n : phis) s.insert(n);
  return s;
}

TileSet TileSet::universe(int p) {
  TileSet s(p);
  for (int n = 1; n <= universe_size(p); ++n) s.insert(n);
  return s;
}

TileSet TileSet::of_group(int p, TileGroup g) {
  TileSet s(p);
  for (int n = 1; n <= universe_size(p); ++n)
    if (classify(tile_from_phi(n, p)) == g) s.insert(n);
  return s;
}

bool TileSet::contains(int n) const {
  if (n < 1 || n > universe_size(p_)) return false;
  return mask_.test(n - 1);
}

void TileSet::insert(int n) {
  if (n < 1 || n > universe_size(p_))
    throw std::out_of_range("tile number " + std::to_string(n) + " outside 1.." +
                            std::to_string(universe_size(p_)));
  mask_.set(n - 1);
}

void TileSet::erase(int n) {
  if (n >= 1 && n <= universe_size(p_)) mask_.reset(n - 1);
}

std::vector<int> TileSet::phis() const {
  std::vector<int> out;
  out.reserve(size());
  mask_.for_each([&](int i) { out.push_back(i + 1); });
  return out;
}

std::vector<Tile> TileSet::tiles() const {
  std::vector<Tile> out;
  out.reserve(size());
  mask_.for_each([&](int i) { out.push_back(tile_from_phi(i + 1, p_)); });
  return out;
}

std::string TileSet::to_text() const {
  std::string s = "p=" + std::to_string(p_) + ";tiles=";
  bool first = true;
  mask_.for_each([&](int i) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(i + 1);
  });
  return s;
}

namespace {

int parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

TileSet parse_tile_list(int p, std::string_view list) {
  TileSet s(p);
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    s.insert(parse_int(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
    if (list.empty()) throw std::invalid_argument("trailing comma in tile list");
  }
  return s;
}

TileSet TileSet::from_text(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos || text.substr(0, 2) != "p=")
    throw std::invalid_argument("tile set text must look like 'p=3;tiles=2,5'");
  const int p = parse_int(text.substr(2, semi - 2));
  auto rest = text.substr(semi + 1);
  if (rest.substr(0, 6) != "tiles=")
    throw std::invalid_argument("tile set text must look like 'p=3;tiles=2,5'");
  return parse_tile_list(p, rest.substr(6));
}

nlohmann::json TileSet::to_json() const { return {{"p", p_}, {"tiles", phis()}}; }

TileSet TileSet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("tiles") || !j["tiles"].is_array())
    throw std::invalid_argument("tile set JSON must be {\"p\":..,\"tiles\":[..]}");
  return from_phis(j["p"].get<int>(), j["tiles"].get<std::vector<int>>());
}

namespace {

// True when some 2x2 torus assignment over {a, b} matches every edge.
bool pair_tiles_2x2_torus(const Tile& a, const Tile& b) {
  const Tile pick[2] = {a, b};
  for (int code = 0; code < 16; ++code) {
    const Tile& c00 = pick[code & 1];
    const Tile& c10 = pick[(code >> 1) & 1];
    const Tile& c01 = pick[(code >> 2) & 1];
    const Tile& c11 = pick[(code >> 3) & 1];
    const Tile* grid[2][2] = {{&c00, &c10}, {&c01, &c11}};  // [y][x]
    bool ok = true;
    for (int y = 0; y < 2 && ok; ++y)
      for (int x = 0; x < 2 && ok; ++x) {
        const Tile& here = *grid[y][x];
        ok = here.right == grid[y][(x + 1) % 2]->left && here.top == grid[(y + 1) % 2][x]->bottom;
      }
    if (ok) return true;
  }
  return false;
}

void expect(bool cond, const std::string& what) {
  if (!cond) throw std::logic_error("edge-digit convention check failed: " + what);
}

void run_convention_checks() {
  constexpr int p = 3;
  const std::vector<int> g0 = {1, 11, 21, 31, 41, 51, 61, 71, 81};
  const std::vector<int> g1 = {2,  3,  4,  7,  10, 12, 14, 17, 19, 20, 24, 27,
                               28, 32, 33, 34, 38, 40, 42, 44, 48, 49, 50, 54,
                               55, 58, 62, 63, 65, 68, 70, 72, 75, 78, 79, 80};
  const std::vector<int> g2 = {5,  6,  8,  9,  13, 15, 16, 18, 22, 23, 25, 26,
                               29, 30, 35, 36, 37, 39, 43, 45, 46, 47, 52, 53,
                               56, 57, 59, 60, 64, 66, 67, 69, 73, 74, 76, 77};
  expect(TileSet::of_group(p, TileGroup::G0).phis() == g0, "G0 list");
  expect(TileSet::of_group(p, TileGroup::G1).phis() == g1, "G1 list");
  expect(TileSet::of_group(p, TileGroup::G2).phis() == g2, "G2 list");

  for (auto [a, b] : {std::pair{2, 10}, std::pair{2, 40}, std::pair{5, 37}})
    expect(pair_tiles_2x2_torus(tile_from_phi(a, p), tile_from_phi(b, p)),
           "{" + std::to_string(a) + "," + std::to_string(b) + "} must be a cycle generator");

  for (int n = 1; n <= 81; ++n) {
    const Tile t = tile_from_phi(n, p);
    const TileGroup g = classify(t);
    if (g == TileGroup::G0) continue;
    std::vector<int> partners;
    for (int k = 1; k <= 81; ++k) {
      const Tile e = tile_from_phi(k, p);
      if (k != n && classify(e) == g && pair_tiles_2x2_torus(t, e)) partners.push_back(k);
    }
    if (g == TileGroup::G2) {
      expect(partners.size() == 1 && partners[0] == phi(g2_partner(t)),
             "G2 tile " + std::to_string(n) + " must have exactly one periodic partner");
    } else {
      std::vector<int> structural;
      for (const Tile& e : g1_partners(t)) structural.push_back(phi(e));
      expect(partners == structural,
             "G1 tile " + std::to_string(n) + " must have exactly three periodic partners");
    }
  }
}

}  // namespace

void validate_edge_convention() {
  static std::once_flag once;
  std::call_once(once, run_convention_checks);
}

}  // namespace tessella
