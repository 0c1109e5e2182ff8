#pragma once

// Nilpotency of a transfer operator, with certificates that can be checked without
// trusting the search that produced them.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "tessella/transfer.hpp"

namespace tessella {

struct NilpotencyCertificate {
  bool nilpotent = true;
  /// When nilpotent: states in the order they were erased.
  std::vector<Word> elimination_order;
  /// When not: a closed walk walk[0] -> walk[1] -> ... -> walk[0], and for each arc the
  /// strip realizing it (original tiles, along the strip).
  std::vector<Word> cycle;
  std::vector<std::vector<Tile>> cycle_labels;
};

/// Thrown when a verdict is requested from a truncated operator.
class TruncatedOperator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Repeatedly erases a state whose row or column is zero, smallest state first. The
/// operator is nilpotent iff everything gets erased.
NilpotencyCertificate is_nilpotent_reduction(const TransferOperator& op);

/// Acyclicity by strongly connected components (Tarjan). Stops at the first
/// nontrivial component and extracts a short cycle from it.
NilpotencyCertificate is_nilpotent_scc(const TransferOperator& op);

/// Replays the elimination order or walks the cycle arc by arc against the tiles.
bool validate_certificate(const TransferOperator& op, const NilpotencyCertificate& cert);

/// {"verdict":"nilpotent","order":[...]} or {"verdict":"cycle","walk":[...],"labels":[...]}.
/// Words are written as color strings of length m, labels as phi lists.
nlohmann::json to_json(const NilpotencyCertificate& cert, int p, int m);
/// Throws std::invalid_argument on malformed input.
NilpotencyCertificate certificate_from_json(const nlohmann::json& j, int p);

}  // namespace tessella
