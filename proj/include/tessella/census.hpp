#pragma once

// Minimal cycle generators, maximal non-cycle generators, the reduced search space,
// and the checkpointed classification pipeline.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tessella/decision.hpp"
#include "tessella/symmetry.hpp"

namespace tessella {

/// Decides tile sets, caching the outcome per symmetry class.
class Decider {
 public:
  explicit Decider(Budgets budgets = {}) : budgets_(std::move(budgets)) {}

  Outcome outcome(const TileSet& b);
  const Budgets& budgets() const { return budgets_; }
  std::uint64_t decisions() const { return decisions_; }
  std::uint64_t cache_hits() const { return hits_; }

 private:
  Budgets budgets_;
  std::unordered_map<TileMask, Outcome, TileMaskHash> cache_[kMaxColors + 1];
  std::uint64_t decisions_ = 0;
  std::uint64_t hits_ = 0;
};

struct SizeCount {
  int k = 0;
  std::uint64_t members = 0;
  std::uint64_t classes = 0;
};

struct McgCensus {
  std::vector<CanonicalForm> classes;  // ascending by size, then lexicographically
  std::vector<TileSet> unknown;        // sets whose decision ran out of budget
  std::vector<SizeCount> by_size() const;
  /// Every member of every class.
  std::vector<TileMask> members() const;
};

/// All minimal cycle generators inside `universe` with at most max_size tiles, up to
/// symmetry. Grows non-cycle sets one tile at a time; a candidate containing a known
/// generator is skipped, otherwise it is decided. Undecided sets are reported and
/// treated as non-cycle. Throws std::invalid_argument for a non-invariant universe.
McgCensus mcg_census(const TileSet& universe, int max_size, Decider& decider);

/// Subsets of an invariant universe containing none of the given sets, counted by size
/// (members and classes). Row k = 0 is the empty set.
std::vector<SizeCount> compute_D(const TileSet& universe, const std::vector<TileMask>& forbidden);

/// Lists the class representatives of compute_D, ascending by size then
/// lexicographically, optionally stopping after max_size.
std::vector<CanonicalForm> d_class_reps(const TileSet& universe, const std::vector<TileMask>& forbidden,
                                        int max_size);

struct SearchSpace {
  BigInt i_size;        // |D1| * |[D2]|
  BigInt i_prime_size;  // |[D1]| * |D2|
};

/// With include_empty the empty set counts in each factor.
SearchSpace search_space_size(const std::vector<SizeCount>& d1, const std::vector<SizeCount>& d2,
                              bool include_empty);

/// Six significant figures in the form 1.35075e12.
std::string six_figures(const BigInt& v);

struct Mncg36 {
  std::vector<CanonicalForm> classes;
  std::uint64_t candidates = 0;      // one tile from each periodic pair
  std::uint64_t after_filter = 0;    // containing no known generator of G1 or G2
};

/// Maximal non-cycle generators of G1 u G2 with 36 tiles (three colors): sets picking
/// one tile from each of the 36 two-tile generators, containing no generator of G1 or
/// G2, and decided empty.
Mncg36 initial_mncg36(const std::vector<TileMask>& g1_mcg_members,
                      const std::vector<TileMask>& g2_mcg_members, Decider& decider);

/// Removes sets that properly contain another set of `sets` (minimal = true) or are
/// properly contained in another (minimal = false). With expand_orbits, every set is
/// first replaced by its whole orbit. Output is sorted lexicographically.
std::vector<TileMask> keep_extremal(const std::vector<TileMask>& sets, int p, bool minimal,
                                    bool expand_orbits);

struct PostprocessResult {
  std::vector<TileMask> cycle_generators;  // minimal
  std::vector<TileMask> empties;           // maximal
};

/// Minimal cycle generators and maximal empty sets from raw pipeline output.
PostprocessResult postprocess(const std::vector<TileMask>& raw_c, const std::vector<TileMask>& raw_n,
                              int p, bool expand_orbits);

/// Members and classes per size. Class counts are filled only when `p` is given (the
/// sets are then assumed to be unions of orbits).
std::vector<SizeCount> size_table(const std::vector<TileMask>& sets, std::optional<int> p);

// ---------------------------------------------------------------------------------------
// Pipeline

/// What the pipeline enumerates. Explicit: every subset of `universe`, in increasing
/// binary order over its members. Product: A1 u A2 over A1 in `first` (all members) and
/// A2 in `second` (class representatives), candidate j = i1 * |second| + i2.
struct PipelineUniverse {
  int p = 3;
  bool product = false;
  TileSet universe{3};
  std::vector<TileMask> first;
  std::vector<TileMask> second;

  std::uint64_t size() const;
  TileMask candidate(std::uint64_t j) const;
  /// A short description compared on resume.
  std::string descriptor() const;
};

/// Sets the product universe of the reduced search space: A1 over the subsets of G1
/// containing no generator of G1, A2 over class representatives of the subsets of G2
/// containing no generator of G2. Both exclude the empty set.
PipelineUniverse reduced_search_space(const std::vector<TileMask>& g1_mcg_members,
                                      const std::vector<TileMask>& g2_mcg_members);

struct PipelineCounters {
  std::uint64_t processed = 0;
  std::uint64_t known_generator = 0;  // contained a known cycle generator
  std::uint64_t known_empty = 0;      // inside a known empty set
  std::uint64_t decided_periodic = 0;
  std::uint64_t decided_empty = 0;
  std::uint64_t undecided = 0;
};

struct PipelineState {
  std::string descriptor;
  int shard_index = 0;
  int shard_count = 1;
  std::uint64_t begin = 0;  // candidate range of this shard
  std::uint64_t end = 0;
  std::uint64_t next = 0;   // first unprocessed candidate
  std::vector<TileMask> cycle_generators;  // new generators found (C_I)
  std::vector<TileMask> empties;           // new empty sets found (N*_I)
  std::vector<TileMask> undecided;         // U_I
  PipelineCounters counters;

  bool finished() const { return next >= end; }
};

struct PipelineOptions {
  int shard_index = 0;
  int shard_count = 1;
  /// Known generators and empty sets used by the two fast paths before any decision.
  std::vector<TileMask> seed_generators;
  std::vector<TileMask> seed_empties;
  /// Checkpoint file; written atomically every `checkpoint_every` candidates and at the
  /// end. An existing checkpoint is resumed.
  std::optional<std::filesystem::path> checkpoint;
  std::uint64_t checkpoint_every = 4096;
  /// Stop after this many candidates in this call (simulates an interrupted run).
  std::optional<std::uint64_t> stop_after;
  /// Process only the first `limit` candidates of the universe.
  std::optional<std::uint64_t> limit;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs (or resumes) one shard. Each candidate goes through: contains a known cycle
/// generator; lies inside a known empty set; otherwise it is decided, and recorded as a
/// new generator, a new empty set, or undecided.
PipelineState run_pipeline(const PipelineUniverse& universe, Decider& decider,
                           const PipelineOptions& options = {});

nlohmann::json to_json(const PipelineState& state);
/// Throws CheckpointError when the checksum or structure does not match.
PipelineState pipeline_state_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const PipelineState& state);
PipelineState load_checkpoint(const std::filesystem::path& path);

/// Shard results as JSON lines: {"kind":"C"|"N"|"U","tiles":[...]}, sorted.
std::string shard_results_jsonl(const PipelineState& state);

/// Union of shard results, in any order.
struct MergedResults {
  std::vector<TileMask> cycle_generators;
  std::vector<TileMask> empties;
  std::vector<TileMask> undecided;
};
MergedResults merge_shards(const std::vector<PipelineState>& shards);
MergedResults merge_jsonl(const std::vector<std::string>& documents, int p);

/// CSV with header k,members,classes, one row per nonempty bucket, ascending k.
std::string to_csv(const std::vector<SizeCount>& rows);

}  // namespace tessella
