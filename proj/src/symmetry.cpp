#include "tessella/symmetry.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace tessella {

Dihedral compose(const Dihedral& a, const Dihedral& b) {
  // rho^k m = m rho^-k
  Dihedral out;
  out.reflect = a.reflect != b.reflect;
  const int k = b.reflect ? (4 - a.rotation) % 4 : a.rotation;
  out.rotation = static_cast<std::uint8_t>((k + b.rotation) % 4);
  return out;
}

ColorPermutation identity_permutation() { return {0, 1, 2, 3}; }

std::string to_string(const GroupElement& g, int p) {
  std::string s = "(";
  if (g.tau.reflect) s += "m";
  if (g.tau.rotation == 0 && !g.tau.reflect) s += "I";
  if (g.tau.rotation >= 1) s += "rho";
  if (g.tau.rotation >= 2) s += "^" + std::to_string(g.tau.rotation);
  auto perm = [p](const ColorPermutation& e) {
    std::string t;
    for (int c = 0; c < p; ++c) t += char('0' + e[c]);
    return t;
  };
  return s + ", h:" + perm(g.eta_h) + ", v:" + perm(g.eta_v) + ")";
}

namespace {

Tile rotate_ccw(const Tile& t) {
  Tile r = t;
  r.bottom = t.left;
  r.left = t.top;
  r.top = t.right;
  r.right = t.bottom;
  return r;
}

Tile reflect_vertical_axis(const Tile& t) {
  Tile r = t;
  std::swap(r.left, r.right);
  return r;
}

ColorPermutation compose_perm(const ColorPermutation& a, const ColorPermutation& b) {
  ColorPermutation out = identity_permutation();
  for (int c = 0; c < kMaxColors; ++c) out[c] = a[b[c]];
  return out;
}

}  // namespace

Tile apply(const GroupElement& g, const Tile& t) {
  Tile r = t;
  for (int i = 0; i < g.tau.rotation; ++i) r = rotate_ccw(r);
  if (g.tau.reflect) r = reflect_vertical_axis(r);
  r.bottom = g.eta_h[r.bottom];
  r.top = g.eta_h[r.top];
  r.left = g.eta_v[r.left];
  r.right = g.eta_v[r.right];
  return r;
}

TileSet apply_set(const GroupElement& g, const TileSet& b) {
  TileSet out(b.p());
  for (const Tile& t : b.tiles()) out.insert(apply(g, t));
  return out;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  // tau_a followed by a recoloring pair equals the recoloring with the axes exchanged
  // (when tau_a turns the square by an odd multiple of 90 degrees) followed by tau_a.
  const bool swap = swaps_axes(a.tau);
  GroupElement out;
  out.tau = compose(a.tau, b.tau);
  out.eta_h = compose_perm(a.eta_h, swap ? b.eta_v : b.eta_h);
  out.eta_v = compose_perm(a.eta_v, swap ? b.eta_h : b.eta_v);
  return out;
}

SymmetryGroup::SymmetryGroup(int p) : p_(p), n_(universe_size(p)) {
  std::vector<ColorPermutation> perms;
  {
    ColorPermutation e = identity_permutation();
    std::vector<std::uint8_t> base(p);
    std::iota(base.begin(), base.end(), 0);
    do {
      for (int c = 0; c < p; ++c) e[c] = base[c];
      perms.push_back(e);
    } while (std::next_permutation(base.begin(), base.end()));
  }
  std::unordered_set<std::string> seen;
  for (int refl = 0; refl < 2; ++refl)
    for (int rot = 0; rot < 4; ++rot)
      for (const auto& h : perms)
        for (const auto& v : perms) {
          GroupElement g;
          g.tau = {static_cast<std::uint8_t>(rot), refl == 1};
          g.eta_h = h;
          g.eta_v = v;
          std::string table(n_, '\0');
          for (int i = 0; i < n_; ++i)
            table[i] = static_cast<char>(phi(apply(g, tile_from_phi(i + 1, p))) - 1);
          if (!seen.insert(table).second) continue;
          elements_.push_back(g);
          perms_.insert(perms_.end(), table.begin(), table.end());
        }
}

const SymmetryGroup& SymmetryGroup::of(int p) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SymmetryGroup>> cache;
  universe_size(p);
  std::lock_guard lock(mu);
  auto& slot = cache[p];
  if (!slot) slot.reset(new SymmetryGroup(p));
  return *slot;
}

TileMask canonical_mask(const SymmetryGroup& group, const TileMask& b, std::uint64_t* orbit_size) {
  TileMask best = b;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    const TileMask img = group.image(i, b);
    if (lex_less(img, best)) {
      best = img;
      hits = 1;
    } else if (img == best) {
      ++hits;
    }
  }
  // The elements mapping b onto its representative form a coset of the stabilizer.
  if (orbit_size) *orbit_size = group.size() / hits;
  return best;
}

CanonicalForm canonical(const TileSet& b) {
  const auto& group = SymmetryGroup::of(b.p());
  CanonicalForm out{TileSet(b.p()), 1};
  out.representative = TileSet(b.p(), canonical_mask(group, b.mask(), &out.orbit_size));
  return out;
}

std::vector<TileSet> orbit(const TileSet& b) {
  const auto& group = SymmetryGroup::of(b.p());
  std::vector<TileMask> masks;
  masks.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) masks.push_back(group.image(i, b.mask()));
  std::sort(masks.begin(), masks.end(), lex_less);
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<TileSet> out;
  out.reserve(masks.size());
  for (const auto& m : masks) out.emplace_back(b.p(), m);
  return out;
}

bool is_group_invariant(const TileSet& universe) {
  const auto& group = SymmetryGroup::of(universe.p());
  for (std::size_t i = 0; i < group.size(); ++i)
    if (group.image(i, universe.mask()) != universe.mask()) return false;
  return true;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

std::vector<CanonicalForm> reps_by_filtering(const TileSet& universe, int k) {
  const auto& group = SymmetryGroup::of(universe.p());
  const std::vector<int> members = [&] {
    std::vector<int> v;
    universe.mask().for_each([&](int i) { v.push_back(i); });
    return v;
  }();
  const int n = static_cast<int>(members.size());
  std::vector<CanonicalForm> out;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    TileMask m;
    for (int i : idx) m.set(members[i]);
    std::uint64_t orbit_size = 0;
    if (canonical_mask(group, m, &orbit_size) == m)
      out.push_back({TileSet(universe.p(), m), orbit_size});
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<CanonicalForm> reps_by_augmentation(const TileSet& universe,
                                                const std::vector<CanonicalForm>& smaller) {
  const auto& group = SymmetryGroup::of(universe.p());
  std::unordered_map<TileMask, std::uint64_t, TileMaskHash> found;
  for (const auto& rep : smaller) {
    const TileMask base = rep.representative.mask();
    (universe.mask() - base).for_each([&](int t) {
      TileMask m = base;
      m.set(t);
      std::uint64_t orbit_size = 0;
      const TileMask c = canonical_mask(group, m, &orbit_size);
      found.emplace(c, orbit_size);
    });
  }
  std::vector<CanonicalForm> out;
  out.reserve(found.size());
  for (const auto& [m, size] : found) out.push_back({TileSet(universe.p(), m), size});
  std::sort(out.begin(), out.end(), [](const CanonicalForm& a, const CanonicalForm& b) {
    return lex_less(a.representative.mask(), b.representative.mask());
  });
  return out;
}

}  // namespace

std::vector<CanonicalForm> orbit_reps(const TileSet& universe, int k,
                                      const OrbitRepOptions& options) {
  if (!is_group_invariant(universe))
    throw std::invalid_argument("universe is not invariant under the symmetry group");
  const int n = universe.size();
  if (k < 0 || k > n) throw std::invalid_argument("subset size out of range");
  if (k == 0) return {{TileSet(universe.p()), 1}};
  if (binomial(n, k) <= options.filtering_threshold) return reps_by_filtering(universe, k);
  return reps_by_augmentation(universe, orbit_reps(universe, k - 1, options));
}

}  // namespace tessella
