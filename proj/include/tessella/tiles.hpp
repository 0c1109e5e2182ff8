#pragma once

// Wang tiles over p colors, the phi-numbering, and tile sets as membership masks.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tessella {

inline constexpr int kMinColors = 2;
inline constexpr int kMaxColors = 4;
inline constexpr int kMaxTiles = 256;  // kMaxColors^4

/// Number of tiles in the universe for p colors (p^4).
int universe_size(int p);

/// One unit square with a color on each edge. Tiles are never rotated when placed.
struct Tile {
  std::uint8_t bottom = 0;
  std::uint8_t left = 0;
  std::uint8_t top = 0;
  std::uint8_t right = 0;
  std::uint8_t p = 3;

  friend bool operator==(const Tile&, const Tile&) = default;
};

/// 1 + bottom + left*p + top*p^2 + right*p^3.
int phi(const Tile& t);

/// Inverse of phi; throws std::out_of_range unless 1 <= n <= p^4.
Tile tile_from_phi(int n, int p);

std::string to_string(const Tile& t);

enum class TileGroup { G0, G1, G2 };

std::string_view to_string(TileGroup g);

/// G0: both opposite-edge pairs equal; G1: exactly one pair unequal; G2: neither equal.
TileGroup classify(const Tile& t);

/// Unique G2 tile pairing with t into a (2,2)-periodic minimal cycle generator.
/// Throws std::invalid_argument if t is not in G2.
Tile g2_partner(const Tile& t);

/// The G1 tiles pairing with t into a (2,2)-periodic minimal cycle generator, ascending
/// by phi (three of them when p = 3). Throws std::invalid_argument if t is not in G1.
std::vector<Tile> g1_partners(const Tile& t);

/// 256-bit membership mask indexed by phi - 1.
class TileMask {
 public:
  constexpr TileMask() = default;

  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  int count() const {
    return std::popcount(words_[0]) + std::popcount(words_[1]) + std::popcount(words_[2]) +
           std::popcount(words_[3]);
  }
  bool empty() const { return (words_[0] | words_[1] | words_[2] | words_[3]) == 0; }

  bool is_subset_of(const TileMask& o) const {
    return ((words_[0] & ~o.words_[0]) | (words_[1] & ~o.words_[1]) |
            (words_[2] & ~o.words_[2]) | (words_[3] & ~o.words_[3])) == 0;
  }

  /// Smallest member index, or -1 when empty.
  int lowest() const {
    for (int w = 0; w < 4; ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return -1;
  }

  /// Largest member index, or -1 when empty.
  int highest() const {
    for (int w = 3; w >= 0; --w)
      if (words_[w]) return w * 64 + 63 - std::countl_zero(words_[w]);
    return -1;
  }

  template <class F>
  void for_each(F&& f) const {
    for (int w = 0; w < 4; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
  }

  TileMask& operator|=(const TileMask& o) {
    for (int w = 0; w < 4; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  TileMask& operator&=(const TileMask& o) {
    for (int w = 0; w < 4; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  friend TileMask operator|(TileMask a, const TileMask& b) { return a |= b; }
  friend TileMask operator&(TileMask a, const TileMask& b) { return a &= b; }
  friend TileMask operator^(TileMask a, const TileMask& b) {
    for (int w = 0; w < 4; ++w) a.words_[w] ^= b.words_[w];
    return a;
  }
  /// Members of a that are not in b.
  friend TileMask operator-(TileMask a, const TileMask& b) {
    for (int w = 0; w < 4; ++w) a.words_[w] &= ~b.words_[w];
    return a;
  }

  friend bool operator==(const TileMask&, const TileMask&) = default;

  const std::array<std::uint64_t, 4>& words() const { return words_; }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

 private:
  std::array<std::uint64_t, 4> words_{};
};

/// Lexicographic order on ascending member lists ({2,10} < {2,40} < {3}).
bool lex_less(const TileMask& a, const TileMask& b);

struct TileMaskHash {
  std::size_t operator()(const TileMask& m) const { return m.hash(); }
};

/// A basic set of tiles: a subset of the p^4 universe. Iteration is ascending by phi.
class TileSet {
 public:
  explicit TileSet(int p = 3);
  TileSet(int p, const TileMask& members);

  static TileSet from_phis(int p, const std::vector<int>& phis);
  static TileSet universe(int p);
  static TileSet of_group(int p, TileGroup g);

  int p() const { return p_; }
  const TileMask& mask() const { return mask_; }
  int size() const { return mask_.count(); }
  bool empty() const { return mask_.empty(); }

  bool contains(int phi_number) const;
  bool contains(const Tile& t) const { return contains(phi(t)); }
  void insert(int phi_number);
  void insert(const Tile& t) { insert(phi(t)); }
  void erase(int phi_number);

  std::vector<int> phis() const;
  std::vector<Tile> tiles() const;

  bool is_subset_of(const TileSet& o) const { return mask_.is_subset_of(o.mask_); }

  /// `p=3;tiles=2,5,13,36`
  std::string to_text() const;
  /// Parses the text form. Accepts an empty tile list (`p=3;tiles=`).
  static TileSet from_text(std::string_view text);

  /// {"p":3,"tiles":[2,5,13,36]}
  nlohmann::json to_json() const;
  static TileSet from_json(const nlohmann::json& j);

  friend bool operator==(const TileSet&, const TileSet&) = default;

 private:
  int p_;
  TileMask mask_;
};

/// Parses a comma separated phi list ("2,5,13") into a tile set for p colors.
TileSet parse_tile_list(int p, std::string_view list);

/// Checks the edge-digit convention against the published G0/G1/G2 lists, the known
/// two-tile cycle generators, and the periodic-pair structure. Throws std::logic_error
/// on the first mismatch; repeated calls are free after the first success.
void validate_edge_convention();

}  // namespace tessella

template <>
struct std::hash<tessella::TileMask> {
  std::size_t operator()(const tessella::TileMask& m) const noexcept { return m.hash(); }
};
