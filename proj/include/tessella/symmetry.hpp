#pragma once

// The action of D4 x Sp x Sp on tiles and tile sets: geometric symmetries of the
// square combined with independent recolorings of horizontal and vertical edges.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tessella/tiles.hpp"

namespace tessella {

/// tau = m^reflect * rho^rotation, where rho turns the square 90 degrees counterclockwise
/// and m reflects it about the vertical axis. As a map, rho^rotation is applied first.
struct Dihedral {
  std::uint8_t rotation = 0;  // 0..3
  bool reflect = false;

  friend bool operator==(const Dihedral&, const Dihedral&) = default;
};

/// Composition a * b (b applied first).
Dihedral compose(const Dihedral& a, const Dihedral& b);

/// True when tau exchanges horizontal edges (bottom/top) with vertical ones.
inline bool swaps_axes(const Dihedral& d) { return d.rotation % 2 == 1; }

using ColorPermutation = std::array<std::uint8_t, kMaxColors>;

ColorPermutation identity_permutation();

struct GroupElement {
  Dihedral tau;
  ColorPermutation eta_h = identity_permutation();  // colors on bottom/top edges
  ColorPermutation eta_v = identity_permutation();  // colors on left/right edges

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

std::string to_string(const GroupElement& g, int p);

/// tau first, then eta_h on the resulting bottom/top edges, then eta_v on left/right.
Tile apply(const GroupElement& g, const Tile& t);
TileSet apply_set(const GroupElement& g, const TileSet& b);

/// apply(compose(a, b), t) == apply(a, apply(b, t)).
GroupElement compose(const GroupElement& a, const GroupElement& b);

/// The full group for p colors, stored as distinct tile permutations.
class SymmetryGroup {
 public:
  static const SymmetryGroup& of(int p);

  int p() const { return p_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<GroupElement>& elements() const { return elements_; }

  /// Image of tile index (phi - 1) under element i.
  int image(std::size_t i, int tile_index) const { return perms_[i * n_ + tile_index]; }

  TileMask image(std::size_t i, const TileMask& m) const {
    TileMask out;
    const std::uint8_t* perm = &perms_[i * n_];
    m.for_each([&](int t) { out.set(perm[t]); });
    return out;
  }

 private:
  explicit SymmetryGroup(int p);

  int p_;
  int n_;
  std::vector<GroupElement> elements_;
  std::vector<std::uint8_t> perms_;
};

/// The orbit-minimal representative <B> (least ascending-phi list) and |[B]|.
struct CanonicalForm {
  TileSet representative;
  std::uint64_t orbit_size = 1;
};

/// All distinct images of b, ascending in lexicographic order.
std::vector<TileSet> orbit(const TileSet& b);

CanonicalForm canonical(const TileSet& b);

/// Mask-level canonicalization for hot loops; returns the representative mask and
/// writes the orbit size.
TileMask canonical_mask(const SymmetryGroup& group, const TileMask& b, std::uint64_t* orbit_size);

bool is_group_invariant(const TileSet& universe);

struct OrbitRepOptions {
  /// Below this many k-subsets, enumerate them all and keep the canonical ones;
  /// above it, grow representatives from (k-1)-subset representatives.
  std::uint64_t filtering_threshold = 2'000'000;
};

/// One representative per orbit of k-subsets of an invariant universe, in ascending
/// lexicographic order. Throws std::invalid_argument for a non-invariant universe.
std::vector<CanonicalForm> orbit_reps(const TileSet& universe, int k,
                                      const OrbitRepOptions& options = {});

/// Number of k-subsets of an n-set (saturating at UINT64_MAX).
std::uint64_t binomial(int n, int k);

}  // namespace tessella
