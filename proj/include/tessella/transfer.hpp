#pragma once

// Transfer operators over edge-color words.
//
// A strip is m tiles placed side by side along the strip direction. In the rows
// orientation a strip is a horizontal row and its states are the bottom and top color
// words, so powers of the operator stack rows upward. In the columns orientation a
// strip is a vertical column and its states are the left and right words, so powers
// advance rightward. A free operator leaves the strip ends unconstrained; a wrapped
// operator also matches the last tile to the first across the strip ends.
//
// Operators are lazy: only the words that appear at either side of some admissible
// strip are materialized, and arcs (one per strip, so with multiplicity) are
// regenerated on demand by walking the tile automaton.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tessella/tiles.hpp"

namespace tessella {

using BigInt = boost::multiprecision::cpp_int;

/// A state: m colors packed base p, position 0 most significant.
using Word = std::uint64_t;

/// Color string of a word, position 0 first.
std::string word_to_string(Word w, int p, int m);
/// Inverse of word_to_string; throws std::invalid_argument on bad digits.
Word word_from_string(std::string_view s, int p);

inline constexpr std::size_t kDefaultStateCap = 5'000'000;
inline constexpr std::uint64_t kDefaultStripCap = 1'000'000'000;

enum class OperatorKind { free_boundary, wrapped };
enum class Orientation { rows, columns };

std::string_view to_string(OperatorKind k);
std::string_view to_string(Orientation o);

/// Largest strip width whose words fit in a Word (40 for p = 3).
int max_width(int p);

struct TransferLimits {
  std::size_t state_cap = kDefaultStateCap;
  /// Upper bound on the number of strips (arcs counted with multiplicity).
  std::uint64_t strip_cap = kDefaultStripCap;
};

/// Reads TESSELLA_STATE_CAP when set, otherwise kDefaultStateCap.
std::size_t default_state_cap();

struct Arc {
  std::uint32_t target;
  std::uint64_t multiplicity;
};

/// Tile orientation used internally: columns are handled as rows of transposed tiles.
struct StripTile {
  std::uint8_t bottom, left, top, right;
  int phi;  // number of the original, untransposed tile
};

class TransferOperator {
 public:
  int p() const { return p_; }
  int width() const { return m_; }
  OperatorKind kind() const { return kind_; }
  Orientation orientation() const { return orientation_; }
  const TileSet& tiles() const { return tiles_; }

  /// Set when a cap was hit; a truncated operator has no states and must not be used
  /// for verdicts.
  bool truncated() const { return truncated_; }
  const std::string& truncation_reason() const { return truncation_reason_; }

  std::size_t state_count() const { return states_.size(); }
  const std::vector<Word>& states() const { return states_; }
  Word state(std::uint32_t i) const { return states_[i]; }
  std::optional<std::uint32_t> index_of(Word w) const;

  /// Total number of strips, i.e. arcs counted with multiplicity.
  std::uint64_t strip_count() const { return strip_count_; }

  /// Appends one target index per strip leaving state i.
  void strips_from(std::uint32_t i, std::vector<std::uint32_t>& targets) const;
  /// Appends one source index per strip entering state i.
  void strips_into(std::uint32_t i, std::vector<std::uint32_t>& sources) const;

  /// Aggregated arcs, ascending by target (or source).
  std::vector<Arc> successors(std::uint32_t i) const;
  std::vector<Arc> predecessors(std::uint32_t i) const;

  std::uint64_t out_strips(std::uint32_t i) const;
  std::uint64_t in_strips(std::uint32_t i) const;

  /// Full aggregated adjacency; only sensible for small operators.
  std::vector<std::vector<Arc>> adjacency() const;

  /// Least strip (by phi sequence) realizing from -> to, in original tile orientation,
  /// listed along the strip direction.
  std::optional<std::vector<Tile>> realize(Word from, Word to) const;

  /// True when `strip` is an admissible strip of this operator from `from` to `to`.
  bool is_strip(Word from, Word to, std::span<const Tile> strip) const;

  std::string word_string(Word w) const;
  std::optional<Word> parse_word(std::string_view s) const;

  /// `state -> state xK` lines, states as color strings.
  std::string dump() const;

 private:
  friend TransferOperator build_transfer(const TileSet&, int, OperatorKind, Orientation,
                                         const TransferLimits&);
  TransferOperator() = default;

  int track(int h0, int h) const { return kind_ == OperatorKind::wrapped ? h0 * p_ + h : h; }
  int digit(Word w, int k) const { return static_cast<int>((w / pow_[k]) % p_); }
  std::uint64_t count_strips_with(Word w, bool by_bottom) const;
  template <class Emit>
  void walk(Word w, bool by_bottom, Emit&& emit) const;

  int p_ = 3;
  int m_ = 1;
  OperatorKind kind_ = OperatorKind::free_boundary;
  Orientation orientation_ = Orientation::rows;
  TileSet tiles_{3};

  // Per (left, bottom) and (left, top) color: matching strip tiles.
  std::vector<std::vector<StripTile>> by_left_bottom_;
  std::vector<std::vector<StripTile>> by_left_top_;
  // reach_[k * tracks + s]: some completion of the strip exists from position k in
  // track state s (s = h for free, s = h0 * p + h for wrapped).
  std::vector<std::uint8_t> reach_;
  int tracks_ = 0;
  std::vector<Word> pow_;  // pow_[k] = p^(m-1-k)

  bool truncated_ = false;
  std::string truncation_reason_;
  std::vector<Word> states_;
  std::vector<std::uint32_t> dense_index_;  // word -> index + 1 (0 = absent), small widths
  std::uint64_t strip_count_ = 0;
};

/// Builds the operator of width m. Hitting a cap marks the result truncated rather
/// than failing. Throws std::invalid_argument for m < 1 or m > max_width(p).
TransferOperator build_transfer(const TileSet& b, int m, OperatorKind kind,
                                Orientation orientation, const TransferLimits& limits = {});

/// Thrown when an exact count is requested from an operator that hit a cap.
class CountUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CountResult {
  BigInt value;
  int m = 0;
  int n = 0;
};

/// Number of B-admissible tilings of the m-wide, n-high torus: tr(T_m^n).
CountResult gamma(const TileSet& b, int m, int n, const TransferLimits& limits = {});

/// Number of B-admissible tilings of the m-wide, n-high rectangle (free boundary).
CountResult sigma_count(const TileSet& b, int m, int n, const TransferLimits& limits = {});

/// Number of closed walks of length n (arc multiplicities included).
BigInt closed_walks(const TransferOperator& op, int n);

/// Dense square matrix of arc multiplicities.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<std::uint64_t> data;

  std::uint64_t at(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
  std::uint64_t& at(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// The block recurrence: the strip of m tiles with end colors (a, b) is the sum over c
/// of (first tile with ends (a, c)) Kronecker (strip of m-1 tiles with ends (c, b)).
/// States are indexed by the word value, first position most significant. Free kind
/// sums all end pairs; wrapped keeps a == b. Throws std::invalid_argument for m > 4.
DenseMatrix build_v_by_recurrence(const TileSet& b, int m,
                                  OperatorKind kind = OperatorKind::free_boundary,
                                  Orientation orientation = Orientation::rows);

/// The lazy operator expanded over all p^m words, for comparison with the recurrence.
DenseMatrix to_dense(const TransferOperator& op);

}  // namespace tessella
