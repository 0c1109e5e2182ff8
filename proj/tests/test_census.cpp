#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tessella/census.hpp"
#include "tessella/reference_tables.hpp"

using namespace tessella;
namespace ref = tessella::reference_tables;

namespace {

// Shared across test cases: the G1 and G2 censuses take a few seconds.
struct Groups {
  Decider decider;
  McgCensus g1 = mcg_census(TileSet::of_group(3, TileGroup::G1), 3, decider);
  McgCensus g2 = mcg_census(TileSet::of_group(3, TileGroup::G2), 8, decider);
  std::vector<TileMask> m1 = g1.members(), m2 = g2.members();
};

Groups& groups() {
  static Groups g;
  return g;
}

std::set<std::vector<int>> canonical_lists(const std::vector<std::vector<int>>& sets) {
  std::set<std::vector<int>> out;
  for (const auto& s : sets) out.insert(canonical(TileSet::from_phis(3, s)).representative.phis());
  return out;
}

std::set<std::vector<int>> lists(const std::vector<CanonicalForm>& forms) {
  std::set<std::vector<int>> out;
  for (const auto& f : forms) out.insert(f.representative.phis());
  return out;
}

void check_buckets(const std::vector<CanonicalForm>& classes, const std::vector<SizeCount>& rows) {
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> sums;
  for (const auto& c : classes) {
    sums[c.representative.size()].first += c.orbit_size;
    ++sums[c.representative.size()].second;
    CHECK(orbit(c.representative).size() == c.orbit_size);
  }
  for (const auto& r : rows) {
    CHECK(sums[r.k].first == r.members);
    CHECK(sums[r.k].second == r.classes);
  }
}

}  // namespace

TEST_CASE("G1 and G2 generator classes equal the reference lists") {
  auto& g = groups();
  CHECK(lists(g.g1.classes) == canonical_lists(ref::g1_mcg_classes));
  CHECK(lists(g.g2.classes) == canonical_lists(ref::g2_mcg_classes));
  CHECK(g.g1.unknown.empty());
  CHECK(g.g2.unknown.empty());
  check_buckets(g.g1.classes, g.g1.by_size());
  check_buckets(g.g2.classes, g.g2.by_size());
}

TEST_CASE("generators are minimal and periodic") {
  auto& g = groups();
  for (const auto* census : {&g.g1, &g.g2})
    for (const auto& c : census->classes) {
      const TileSet b = c.representative;
      const Verdict v = decide(b);
      REQUIRE(std::holds_alternative<Periodic>(v));
      CHECK(validate_witness(std::get<Periodic>(v).witness, b));
      if (b.size() > 6) continue;
      for (int f : b.phis()) {
        TileSet sub = b;
        sub.erase(f);
        CHECK(outcome(decide(sub)) != Outcome::periodic);
      }
    }
}

TEST_CASE("81-tile census, sizes up to 3") {
  Decider decider;
  const auto census = mcg_census(TileSet::universe(3), 3, decider);
  const auto rows = census.by_size();
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].members == 9);
  CHECK(rows[0].classes == 1);
  CHECK(rows[1].members == 72);
  CHECK(rows[1].classes == 3);
  CHECK(rows[2].members == 528);
  CHECK(rows[2].classes == 8);
  check_buckets(census.classes, rows);
  CHECK_THROWS_AS(mcg_census(TileSet::from_phis(3, {2, 3}), 2, decider), std::invalid_argument);
}

TEST_CASE("two-color generators") {
  Decider decider;
  const auto census = mcg_census(TileSet::universe(2), 16, decider);
  std::uint64_t members = 0;
  for (const auto& r : census.by_size()) members += r.members;
  CHECK(members == ref::two_color_mcg_count);
}

TEST_CASE("avoiding-subset counts") {
  auto& g = groups();
  const auto d1 = compute_D(TileSet::of_group(3, TileGroup::G1), g.m1);
  const auto d2 = compute_D(TileSet::of_group(3, TileGroup::G2), g.m2);
  REQUIRE(d1.size() == 19);
  REQUIRE(d2.size() == 19);
  CHECK(d1[0].members == 1);
  for (const auto& want : ref::d_counts) {
    CHECK(d1[want.k].members == want.g1);
    CHECK(d1[want.k].classes == want.g1_classes);
    CHECK(d2[want.k].members == want.g2);
    CHECK(d2[want.k].classes == want.g2_classes);
  }
  const auto s = search_space_size(d1, d2, false);
  CHECK(s.i_size == BigInt("1350749111040"));
  CHECK(six_figures(s.i_size) == "1.35075e12");
  CHECK(six_figures(s.i_prime_size) == "1.38458e12");
  CHECK(search_space_size({}, {}, false).i_size == 0);
}

TEST_CASE("avoiding-subset counts against brute force on a small universe") {
  // p = 2: all 16 tiles, forbidding the two-color generators; every subset checked.
  Decider decider;
  const auto census = mcg_census(TileSet::universe(2), 16, decider);
  const auto forbidden = census.members();
  const auto rows = compute_D(TileSet::universe(2), forbidden);
  std::vector<std::uint64_t> brute(17, 0);
  for (std::uint32_t s = 0; s < (1u << 16); ++s) {
    TileMask m;
    for (int t = 0; t < 16; ++t)
      if ((s >> t) & 1) m.set(t);
    if (std::none_of(forbidden.begin(), forbidden.end(), [&](const TileMask& f) { return f.is_subset_of(m); }))
      ++brute[std::popcount(s)];
  }
  for (const auto& r : rows) CHECK(r.members == brute[r.k]);
}

TEST_CASE("six figures") {
  CHECK(six_figures(BigInt(1384576225632)) == "1.38458e12");
  CHECK(six_figures(BigInt(999999500)) == "1.00000e9");
  CHECK(six_figures(BigInt(42)) == "4.20000e1");
  CHECK(six_figures(BigInt(0)) == "0");
}

TEST_CASE("36-tile maximal non-cycle classes") {
  auto& g = groups();
  const auto r = initial_mncg36(g.m1, g.m2, g.decider);
  CHECK(r.classes.size() == 8);
  std::uint64_t members = 0;
  for (const auto& c : r.classes) members += c.orbit_size;
  CHECK(members == 1296);
  CHECK(lists(r.classes) == canonical_lists(ref::mncg36_classes));
  const auto first = canonical(TileSet::from_phis(3, ref::mncg36_classes.front())).representative.phis();
  CHECK(lists(r.classes).count(first) == 1);
}

TEST_CASE("post-processing") {
  const auto a = TileSet::from_phis(3, {2, 10}).mask(), b = TileSet::from_phis(3, {2, 10, 40}).mask();
  const auto pp = postprocess({b, a}, {}, 3, false);
  CHECK(pp.cycle_generators == std::vector<TileMask>{a});
  TileSet big = TileSet::from_phis(3, ref::mncg36_classes.front());
  TileSet smaller = big;
  smaller.erase(smaller.phis().back());
  const auto kept = postprocess({}, {smaller.mask(), big.mask()}, 3, false);
  CHECK(kept.empties == std::vector<TileMask>{big.mask()});
  const auto expanded = keep_extremal({a}, 3, true, true);
  CHECK(expanded.size() == orbit(TileSet(3, a)).size());
  CHECK(to_csv({{2, 72, 3}}) == "k,members,classes\n2,72,3\n");
}

TEST_CASE("pipeline over the two-color universe") {
  Decider decider;
  PipelineUniverse u;
  u.p = 2;
  u.universe = TileSet::universe(2);
  const auto state = run_pipeline(u, decider);
  CHECK(state.finished());
  CHECK(state.undecided.empty());
  CHECK(state.counters.processed == 65536);
  const auto pp = postprocess(state.cycle_generators, state.empties, 2, false);
  CHECK(pp.cycle_generators.size() == ref::two_color_mcg_count);
  const auto rows = size_table(pp.empties, 2);
  for (const auto& n : pp.empties) CHECK(outcome(decide(TileSet(2, n))) == Outcome::empty);
  // Every maximal empty set becomes periodic when any tile is added.
  for (const auto& n : pp.empties)
    for (int t = 0; t < 16; ++t)
      if (!n.test(t)) {
        TileMask bigger = n;
        bigger.set(t);
        CHECK(outcome(decide(TileSet(2, bigger))) == Outcome::periodic);
      }
}

TEST_CASE("checkpoints resume, reject corruption and mismatched universes") {
  const auto dir = std::filesystem::temp_directory_path() / "tessella-census-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  PipelineUniverse u;
  u.p = 2;
  u.universe = TileSet::universe(2);
  Decider d1;
  const auto straight = run_pipeline(u, d1);

  PipelineOptions options;
  options.checkpoint = dir / "a.json";
  options.checkpoint_every = 777;
  for (std::uint64_t stop : {1000ull, 20000ull, 40000ull}) {
    options.stop_after = stop;
    Decider d;
    const auto partial = run_pipeline(u, d, options);
    CHECK_FALSE(partial.finished());
    CHECK(load_checkpoint(*options.checkpoint).next == partial.next);
  }
  options.stop_after.reset();
  Decider d2;
  const auto resumed = run_pipeline(u, d2, options);
  CHECK(to_json(resumed) == to_json(straight));
  CHECK(shard_results_jsonl(resumed) == shard_results_jsonl(straight));

  // Flip one character of the payload.
  std::string text;
  {
    std::ifstream in(*options.checkpoint);
    std::getline(in, text);
  }
  const auto pos = text.find("\"next\":");
  REQUIRE(pos != std::string::npos);
  text[pos + 7] = text[pos + 7] == '1' ? '2' : '1';
  {
    std::ofstream out(*options.checkpoint);
    out << text;
  }
  CHECK_THROWS_AS(load_checkpoint(*options.checkpoint), CheckpointError);
  {
    std::ofstream out(dir / "junk.json");
    out << "{not json";
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "junk.json"), CheckpointError);

  PipelineUniverse other = u;
  other.universe = TileSet::from_phis(2, {1, 2, 3});
  PipelineOptions fresh;
  fresh.checkpoint = dir / "b.json";
  Decider d3;
  run_pipeline(u, d3, fresh);
  CHECK_THROWS_AS(run_pipeline(other, d3, fresh), CheckpointError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shards merge to the unsharded result in any order") {
  PipelineUniverse u;
  u.p = 2;
  u.universe = TileSet::universe(2);
  Decider d;
  const auto straight = run_pipeline(u, d);
  std::vector<PipelineState> shards;
  std::vector<std::string> docs;
  for (int i = 0; i < 5; ++i) {
    PipelineOptions o;
    o.shard_index = i;
    o.shard_count = 5;
    Decider di;
    shards.push_back(run_pipeline(u, di, o));
    docs.push_back(shard_results_jsonl(shards.back()));
  }
  std::uint64_t covered = 0;
  for (const auto& s : shards) covered += s.end - s.begin;
  CHECK(covered == 65536);
  const auto a = merge_shards(shards);
  std::reverse(docs.begin(), docs.end());
  const auto b = merge_jsonl(docs, 2);
  CHECK(a.cycle_generators == b.cycle_generators);
  CHECK(a.empties == b.empties);
  const auto pa = postprocess(a.cycle_generators, a.empties, 2, false);
  const auto ps = postprocess(straight.cycle_generators, straight.empties, 2, false);
  CHECK(pa.cycle_generators == ps.cycle_generators);
  CHECK(pa.empties == ps.empties);
  PipelineOptions bad;
  bad.shard_index = 3;
  bad.shard_count = 3;
  CHECK_THROWS_AS(run_pipeline(u, d, bad), std::invalid_argument);
}

TEST_CASE("reduced search space") {
  auto& g = groups();
  const auto u = reduced_search_space(g.m1, g.m2);
  CHECK(u.size() == 1350749111040ull);
  CHECK(u.candidate(0) == (u.first[0] | u.second[0]));
  const auto last = u.size() - 1;
  CHECK(u.candidate(last) == (u.first.back() | u.second.back()));
}
