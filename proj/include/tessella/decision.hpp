#pragma once

// Deciding a basic set: periodic (with a torus witness), empty (with a nilpotency
// certificate), or unknown within the width and state budgets.

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tessella/nilpotency.hpp"
#include "tessella/transfer.hpp"

namespace tessella {

/// A coloring of the m-wide, n-high torus. cells[y][x], y = 0 is the bottom row.
struct PeriodicPattern {
  int m = 0;
  int n = 0;
  std::vector<std::vector<Tile>> cells;
};

/// True iff every cell is in b and all 2*m*n torus adjacencies match.
bool validate_witness(const PeriodicPattern& pattern, const TileSet& b);

enum class OrientationChoice { both, rows, columns };
enum class NilpotencyMethod { scc, reduction };

struct Budgets {
  int max_width = 40;
  std::size_t state_cap = default_state_cap();
  std::uint64_t strip_cap = kDefaultStripCap;
  OrientationChoice orientations = OrientationChoice::both;
  NilpotencyMethod method = NilpotencyMethod::scc;
  /// When every orientation of the trace operator is over the cap at some width, look
  /// for a single row that repeats with a horizontal shift. Can only find witnesses.
  bool sheared_fallback = true;
  std::uint64_t sheared_nodes_per_shift = 200'000;
};

struct Periodic {
  PeriodicPattern witness;
  int width = 0;  // strip width of the operator (or sheared row) that produced it
  Orientation orientation = Orientation::rows;
  bool sheared = false;
};

struct Empty {
  int width = 0;
  Orientation orientation = Orientation::rows;
  NilpotencyCertificate certificate;
};

struct Unknown {
  int max_width_tried = 0;
  bool state_cap_hit = false;
  std::vector<int> skipped_widths;  // widths where every orientation hit a cap
};

using Verdict = std::variant<Periodic, Empty, Unknown>;

enum class Outcome { periodic, empty, unknown };
Outcome outcome(const Verdict& v);
std::string_view to_string(Outcome o);

/// Trace operators T_m for m = 1.. in the selected orientations, interleaved
/// (rows m, columns m, rows m+1, ...). The first cycle gives the witness.
std::variant<Periodic, Unknown> is_cycle_generator(const TileSet& b, const Budgets& budgets = {});

/// Free operators V_m in the same order; the first nilpotent one gives the certificate.
std::variant<Empty, Unknown> is_empty(const TileSet& b, const Budgets& budgets = {});

/// Both searches, width by width: T_m rows, T_m columns, V_m rows, V_m columns.
Verdict decide(const TileSet& b, const Budgets& budgets = {});

/// Checks a verdict against b: the witness validates or the certificate replays on a
/// freshly built operator. Unknown verdicts never verify.
bool verify(const TileSet& b, const Verdict& v);

/// The torus witness carried by a cycle of T_m.
PeriodicPattern witness_from_cycle(const TransferOperator& op, const NilpotencyCertificate& cycle);

/// A row of m tiles with row[k].right == row[k+1].left cyclically and
/// row[k].top == row[(k+s) mod m].bottom; the pattern P(x, y) = row[(x + s*y) mod m].
std::optional<PeriodicPattern> sheared_search(const TileSet& b, int m,
                                              std::uint64_t nodes_per_shift);

/// Exhaustive counts over all cell assignments; throws std::invalid_argument when
/// |b|^(m*n) exceeds 1e8.
std::uint64_t brute_force_torus(const TileSet& b, int m, int n);
std::uint64_t brute_force_rect(const TileSet& b, int m, int n);

/// {"outcome":"periodic","p":3,"m":2,"n":2,"cells":[[5,37],[37,5]],...} and friends.
nlohmann::json to_json(const Verdict& v, int p);
/// Throws std::invalid_argument on malformed input.
Verdict verdict_from_json(const nlohmann::json& j);

}  // namespace tessella
