#pragma once

// Brute-force reference implementations used only by the tests. None of them calls the
// library beyond plain data conversion, so they can disagree with it.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

struct Edges {
  int b, l, t, r;
  friend bool operator==(const Edges&, const Edges&) = default;
};

inline Edges decode(int phi, int p) {
  int n = phi - 1;
  Edges e{};
  e.b = n % p;
  n /= p;
  e.l = n % p;
  n /= p;
  e.t = n % p;
  n /= p;
  e.r = n % p;
  return e;
}

inline int encode(const Edges& e, int p) { return 1 + e.b + p * (e.l + p * (e.t + p * e.r)); }

inline std::vector<Edges> decode_all(const std::vector<int>& phis, int p) {
  std::vector<Edges> out;
  for (int f : phis) out.push_back(decode(f, p));
  return out;
}

// Counts assignments of tiles to an m-wide, n-high grid, cell (x, y) with y upward.
inline std::uint64_t count_grid(const std::vector<Edges>& tiles, int m, int n, bool torus) {
  std::vector<int> g(m * n, -1);
  std::uint64_t count = 0;
  auto ok = [&](int cell, const Edges& e) {
    const int x = cell % m, y = cell / m;
    if (x > 0 && tiles[g[cell - 1]].r != e.l) return false;
    if (y > 0 && tiles[g[cell - m]].t != e.b) return false;
    if (torus && x == m - 1) {
      const Edges& first = x == 0 ? e : tiles[g[cell - x]];
      if (e.r != first.l) return false;
    }
    if (torus && y == n - 1) {
      const Edges& below = y == 0 ? e : tiles[g[x]];
      if (e.t != below.b) return false;
    }
    return true;
  };
  // Iterative odometer so this shares nothing with the recursive library version.
  int cell = 0;
  std::vector<int> choice(m * n, -1);
  while (cell >= 0) {
    if (cell == m * n) {
      ++count;
      --cell;
      continue;
    }
    int next = choice[cell] + 1;
    while (next < static_cast<int>(tiles.size()) && !ok(cell, tiles[next])) ++next;
    if (next >= static_cast<int>(tiles.size())) {
      choice[cell] = -1;
      g[cell] = -1;
      --cell;
      continue;
    }
    choice[cell] = next;
    g[cell] = next;
    ++cell;
  }
  return count;
}

// Whether some torus of size at most `limit` in each direction is tileable.
inline bool has_small_torus(const std::vector<Edges>& tiles, int limit) {
  for (int m = 1; m <= limit; ++m)
    for (int n = 1; n <= limit; ++n)
      if (count_grid(tiles, m, n, true) > 0) return true;
  return false;
}

// Geometric symmetries acting on one tile: rotation by 90 degrees counterclockwise
// (bottom takes the old left, left the old top, and so on) and reflection about the
// vertical axis (left and right swap).
inline Edges rotate(const Edges& e) { return {e.l, e.t, e.r, e.b}; }
inline Edges reflect(const Edges& e) { return {e.b, e.r, e.t, e.l}; }

// A random element written out as a tile map: rotations, optional reflection, then
// recolorings of horizontal (bottom/top) and vertical (left/right) edges.
struct Symmetry {
  int rotations = 0;
  bool reflection = false;
  std::array<int, 4> h{0, 1, 2, 3}, v{0, 1, 2, 3};

  Edges operator()(Edges e) const {
    for (int i = 0; i < rotations; ++i) e = rotate(e);
    if (reflection) e = reflect(e);
    return {h[e.b], v[e.l], h[e.t], v[e.r]};
  }
};

inline Symmetry random_symmetry(std::mt19937_64& rng, int p) {
  Symmetry s;
  s.rotations = static_cast<int>(rng() % 4);
  s.reflection = rng() & 1;
  std::shuffle(s.h.begin(), s.h.begin() + p, rng);
  std::shuffle(s.v.begin(), s.v.begin() + p, rng);
  return s;
}

// Boolean adjacency matrix power test: nilpotent iff A^dim == 0.
inline bool nilpotent(const std::vector<std::vector<std::uint8_t>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return true;
  auto mul = [&](const auto& x, const auto& y) {
    std::vector<std::vector<std::uint8_t>> z(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (x[i][k])
          for (std::size_t j = 0; j < n; ++j) z[i][j] |= y[k][j];
    return z;
  };
  auto power = a;
  for (std::size_t e = 1; e < n; ++e) power = mul(power, a);
  for (const auto& row : power)
    for (auto v : row)
      if (v) return false;
  return true;
}

// The free row operator over all p^m words, built from scratch: bottom word -> top word
// for every row of m tiles whose neighbors match.
inline std::vector<std::vector<std::uint8_t>> row_matrix(const std::vector<Edges>& tiles, int p, int m,
                                                          bool wrapped) {
  int size = 1;
  for (int i = 0; i < m; ++i) size *= p;
  std::vector<std::vector<std::uint8_t>> a(size, std::vector<std::uint8_t>(size, 0));
  std::vector<int> row(m);
  auto rec = [&](auto&& self, int k) -> void {
    if (k == m) {
      if (wrapped && tiles[row[m - 1]].r != tiles[row[0]].l) return;
      int bottom = 0, top = 0;
      for (int i = 0; i < m; ++i) {
        bottom = bottom * p + tiles[row[i]].b;
        top = top * p + tiles[row[i]].t;
      }
      a[bottom][top] = 1;
      return;
    }
    for (int i = 0; i < static_cast<int>(tiles.size()); ++i) {
      if (k > 0 && tiles[row[k - 1]].r != tiles[i].l) continue;
      row[k] = i;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return a;
}

inline std::vector<int> random_phis(std::mt19937_64& rng, int p, int colors, int size) {
  std::vector<int> out;
  while (static_cast<int>(out.size()) < size) {
    Edges e{static_cast<int>(rng() % colors), static_cast<int>(rng() % colors), static_cast<int>(rng() % colors),
            static_cast<int>(rng() % colors)};
    const int f = encode(e, p);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
