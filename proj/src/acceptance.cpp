#include "tessella/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

#include "tessella/census.hpp"
#include "tessella/reference_tables.hpp"

namespace tessella {

namespace {

namespace ref = reference_tables;

// Half a unit in the sixth significant figure of the printed search-space sizes.
constexpr double kSixFigureTolerance = 0.5e-5;
// Fixed seed for the randomized oracle checks.
constexpr std::uint64_t kOracleSeed = 20260415;
constexpr int kCountCases = 200;
constexpr int kNilpotencyCases = 500;
constexpr int kOrbitCases = 500;
// Trace operators of the slow periodic set must be checked at least this far.
constexpr int kTraceWidthFloor = 12;

using Check = std::function<bool(std::ostringstream&)>;

std::set<TileMask, decltype(&lex_less)> canonical_classes(int p, const std::vector<std::vector<int>>& sets) {
  std::set<TileMask, decltype(&lex_less)> out(&lex_less);
  for (const auto& s : sets)
    out.insert(canonical_mask(SymmetryGroup::of(p), TileSet::from_phis(p, s).mask(), nullptr));
  return out;
}

std::set<TileMask, decltype(&lex_less)> canonical_classes(const std::vector<CanonicalForm>& forms) {
  std::set<TileMask, decltype(&lex_less)> out(&lex_less);
  for (const auto& f : forms) out.insert(f.representative.mask());
  return out;
}

// Tables shared by several criteria, computed once.
struct Shared {
  Decider decider;
  std::optional<McgCensus> g1, g2;
  std::vector<TileMask> g1_members, g2_members;
  std::vector<SizeCount> d1, d2;

  void need_census() {
    if (g1) return;
    g1 = mcg_census(TileSet::of_group(3, TileGroup::G1), 3, decider);
    g2 = mcg_census(TileSet::of_group(3, TileGroup::G2), 8, decider);
    g1_members = g1->members();
    g2_members = g2->members();
  }
  void need_d() {
    need_census();
    if (!d1.empty()) return;
    d1 = compute_D(TileSet::of_group(3, TileGroup::G1), g1_members);
    d2 = compute_D(TileSet::of_group(3, TileGroup::G2), g2_members);
  }
};

bool criterion_two_color(std::ostringstream& os) {
  Decider decider;
  PipelineUniverse u;
  u.p = 2;
  u.universe = TileSet::universe(2);
  const auto state = run_pipeline(u, decider);
  const auto pp = postprocess(state.cycle_generators, state.empties, 2, false);
  bool empties_decided = true;
  for (const auto& n : pp.empties) {
    const TileSet b(2, n);
    const Verdict v = decide(b);
    empties_decided = empties_decided && std::holds_alternative<Empty>(v) && verify(b, v);
  }
  os << "C(2)=" << pp.cycle_generators.size() << " (expected " << ref::two_color_mcg_count << "), N(2)="
     << pp.empties.size() << " (expected " << ref::two_color_mncg_count << "), N(2) all empty: "
     << (empties_decided ? "yes" : "no") << ", U=" << state.undecided.size();
  return pp.cycle_generators.size() == ref::two_color_mcg_count &&
         pp.empties.size() == ref::two_color_mncg_count && empties_decided && state.undecided.empty();
}

bool criterion_all_tiles(std::ostringstream& os, Shared& shared, int max_size) {
  const auto census = mcg_census(TileSet::universe(3), max_size, shared.decider);
  const auto rows = census.by_size();
  bool ok = census.unknown.empty();
  for (int k = 1; k <= max_size; ++k) {
    const auto want = std::find_if(ref::mcg_by_size.begin(), ref::mcg_by_size.end(),
                                   [&](const ref::SizeRow& r) { return r.k == k; });
    const auto got = std::find_if(rows.begin(), rows.end(), [&](const SizeCount& r) { return r.k == k; });
    const bool match = want != ref::mcg_by_size.end() && got != rows.end() && got->members == want->members &&
                       got->classes == want->classes;
    ok = ok && match;
    os << (k > 1 ? ", " : "") << "k=" << k << " " << (got != rows.end() ? got->members : 0) << "/"
       << (got != rows.end() ? got->classes : 0) << (match ? "" : " MISMATCH");
  }
  os << ", undecided " << census.unknown.size();
  return ok;
}

bool criterion_group_classes(std::ostringstream& os, Shared& shared) {
  shared.need_census();
  const auto got1 = canonical_classes(shared.g1->classes), want1 = canonical_classes(3, ref::g1_mcg_classes);
  const auto got2 = canonical_classes(shared.g2->classes), want2 = canonical_classes(3, ref::g2_mcg_classes);
  os << "G1 " << got1.size() << " classes vs " << want1.size() << " listed, G2 " << got2.size() << " vs "
     << want2.size() << " listed, undecided " << shared.g1->unknown.size() + shared.g2->unknown.size();
  return got1 == want1 && got2 == want2 && shared.g1->unknown.empty() && shared.g2->unknown.empty();
}

bool criterion_d_counts(std::ostringstream& os, Shared& shared) {
  shared.need_d();
  int matched = 0;
  for (const auto& want : ref::d_counts) {
    auto find = [&](const std::vector<SizeCount>& rows) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const SizeCount& r) { return r.k == want.k; });
      return it == rows.end() ? SizeCount{want.k, 0, 0} : *it;
    };
    const auto a = find(shared.d1), b = find(shared.d2);
    if (a.members == want.g1 && a.classes == want.g1_classes && b.members == want.g2 &&
        b.classes == want.g2_classes)
      ++matched;
    else
      os << "k=" << want.k << " got " << a.members << "/" << a.classes << " " << b.members << "/" << b.classes
         << "; ";
  }
  const auto ten = std::find_if(shared.d2.begin(), shared.d2.end(), [](const SizeCount& r) { return r.k == 10; });
  os << matched << "/" << ref::d_counts.size() << " rows match";
  if (ten != shared.d2.end()) os << ", g2(10)=" << ten->members << " classes " << ten->classes;
  return matched == static_cast<int>(ref::d_counts.size());
}

bool criterion_search_space(std::ostringstream& os, Shared& shared) {
  shared.need_d();
  const auto s = search_space_size(shared.d1, shared.d2, false);
  auto close = [](const BigInt& v, double want) {
    const double got = v.convert_to<double>();
    const double unit = std::pow(10.0, std::floor(std::log10(want)));
    return std::abs(got - want) <= kSixFigureTolerance * unit;
  };
  os << "|I|=" << s.i_size << " (" << six_figures(s.i_size) << "), |I'|=" << s.i_prime_size << " ("
     << six_figures(s.i_prime_size) << ")";
  return close(s.i_size, ref::search_space_i) && close(s.i_prime_size, ref::search_space_i_prime);
}

bool criterion_mncg36(std::ostringstream& os, Shared& shared) {
  shared.need_census();
  const auto result = initial_mncg36(shared.g1_members, shared.g2_members, shared.decider);
  std::uint64_t members = 0;
  for (const auto& c : result.classes) members += c.orbit_size;
  const bool same = canonical_classes(result.classes) == canonical_classes(3, ref::mncg36_classes);
  const TileMask universe =
      TileSet::of_group(3, TileGroup::G1).mask() | TileSet::of_group(3, TileGroup::G2).mask();
  int replayed = 0, extensions = 0, periodic_extensions = 0;
  for (const auto& c : result.classes) {
    const Verdict v = decide(c.representative);
    if (std::holds_alternative<Empty>(v) && verify(c.representative, v)) ++replayed;
    (universe - c.representative.mask()).for_each([&](int t) {
      TileSet bigger = c.representative;
      bigger.insert(t + 1);
      ++extensions;
      const Verdict w = decide(bigger);
      if (std::holds_alternative<Periodic>(w) && verify(bigger, w)) ++periodic_extensions;
    });
  }
  os << result.classes.size() << " classes, " << members << " members, listed classes "
     << (same ? "equal" : "DIFFER") << ", certificates replayed " << replayed << "/" << result.classes.size()
     << ", periodic extensions " << periodic_extensions << "/" << extensions;
  return result.classes.size() == 8 && members == 1296 && same &&
         replayed == static_cast<int>(result.classes.size()) && extensions == 36 * 8 &&
         periodic_extensions == extensions;
}

bool criterion_slow_empty(std::ostringstream& os) {
  const TileSet b = TileSet::from_phis(3, ref::slow_empty_set);
  TransferLimits limits;
  limits.state_cap = std::max<std::size_t>(default_state_cap(), 2'000'000);
  int first_nilpotent = 0;
  bool certificates_ok = true;
  for (int k = 1; k <= ref::slow_empty_width; ++k) {
    const auto op = build_transfer(b, k, OperatorKind::free_boundary, Orientation::rows, limits);
    if (op.truncated()) {
      os << "V_" << k << " truncated (" << op.truncation_reason() << "); ";
      return false;
    }
    const auto cert = is_nilpotent_scc(op);
    certificates_ok = certificates_ok && validate_certificate(op, cert);
    if (cert.nilpotent) {
      first_nilpotent = k;
      os << "V_" << k << " nilpotent with " << op.state_count() << " states";
      break;
    }
  }
  if (!first_nilpotent) os << "no nilpotent V_k up to " << ref::slow_empty_width;
  os << ", certificates " << (certificates_ok ? "valid" : "INVALID");
  return first_nilpotent == ref::slow_empty_width && certificates_ok;
}

bool criterion_slow_periodic(std::ostringstream& os) {
  const TileSet b = TileSet::from_phis(3, ref::slow_periodic_set);
  const Verdict v = decide(b);
  const auto* periodic = std::get_if<Periodic>(&v);
  const bool witness_ok = periodic && validate_witness(periodic->witness, b) && verify(b, v);
  if (periodic)
    os << "periodic " << periodic->witness.m << "x" << periodic->witness.n << (periodic->sheared ? " sheared" : "")
       << ", witness " << (witness_ok ? "valid" : "INVALID");
  else
    os << "decide returned " << to_string(outcome(v));
  bool all_nilpotent = true;
  int reached[2] = {0, 0};
  for (const Orientation o : {Orientation::rows, Orientation::columns}) {
    for (int k = 1; k <= max_width(3); ++k) {
      const auto op = build_transfer(b, k, OperatorKind::wrapped, o);
      if (op.truncated()) break;
      const auto cert = is_nilpotent_scc(op);
      if (!cert.nilpotent || !validate_certificate(op, cert)) {
        all_nilpotent = false;
        break;
      }
      reached[o == Orientation::columns] = k;
    }
  }
  os << "; T_k nilpotent for k<=" << reached[0] << " (rows), k<=" << reached[1] << " (columns)";
  return witness_ok && all_nilpotent && reached[0] >= kTraceWidthFloor && reached[1] >= kTraceWidthFloor;
}

TileSet random_set(std::mt19937_64& rng, int p, int max_size) {
  // Half of the draws use only two colors so that tilings are common.
  const bool narrow = rng() & 1;
  const int colors = narrow ? 2 : p;
  const int size = std::uniform_int_distribution<int>(1, max_size)(rng);
  TileSet b(p);
  std::uniform_int_distribution<int> color(0, colors - 1);
  while (b.size() < size) {
    int n = 0;
    for (int e = 0; e < 4; ++e) n = n * p + color(rng);
    b.insert(n + 1);
  }
  return b;
}

bool criterion_oracles(std::ostringstream& os) {
  std::mt19937_64 rng(kOracleSeed);
  std::uniform_int_distribution<int> dim(1, 3);
  int counts_ok = 0, nonzero = 0;
  for (int i = 0; i < kCountCases; ++i) {
    const TileSet b = random_set(rng, 3, 6);
    const int m = dim(rng), n = dim(rng);
    const auto torus = brute_force_torus(b, m, n);
    if (gamma(b, m, n).value == torus && sigma_count(b, m, n).value == brute_force_rect(b, m, n)) ++counts_ok;
    if (torus > 0) ++nonzero;
  }
  int agree = 0, nilpotent = 0;
  std::uniform_int_distribution<int> width(1, 4);
  for (int i = 0; i < kNilpotencyCases; ++i) {
    const TileSet b = random_set(rng, 3, 8);
    const auto kind = rng() & 1 ? OperatorKind::wrapped : OperatorKind::free_boundary;
    const auto orientation = rng() & 1 ? Orientation::rows : Orientation::columns;
    const auto op = build_transfer(b, width(rng), kind, orientation);
    const auto a = is_nilpotent_scc(op), r = is_nilpotent_reduction(op);
    if (a.nilpotent == r.nilpotent && validate_certificate(op, a) && validate_certificate(op, r)) ++agree;
    if (a.nilpotent) ++nilpotent;
  }
  int invariant = 0;
  const auto& group = SymmetryGroup::of(3);
  std::uniform_int_distribution<std::size_t> element(0, group.size() - 1);
  Budgets budgets;
  budgets.max_width = 10;
  for (int i = 0; i < kOrbitCases; ++i) {
    const TileSet b = random_set(rng, 3, 6);
    const TileSet g_b = apply_set(group.element(element(rng)), b);
    if (outcome(decide(b, budgets)) == outcome(decide(g_b, budgets))) ++invariant;
  }
  os << "counts " << counts_ok << "/" << kCountCases << " (" << nonzero << " with torus tilings), nilpotency agreement " << agree << "/"
     << kNilpotencyCases << " (" << nilpotent << " nilpotent), orbit invariance " << invariant << "/" << kOrbitCases;
  return counts_ok == kCountCases && agree == kNilpotencyCases && invariant == kOrbitCases;
}

std::string tables_of(const std::vector<TileMask>& c, const std::vector<TileMask>& n,
                      const std::vector<TileMask>& u) {
  return to_csv(size_table(c, std::nullopt)) + to_csv(size_table(n, std::nullopt)) +
         to_csv(size_table(u, std::nullopt));
}

bool criterion_pipeline(std::ostringstream& os) {
  // Tile 2 with its G1 partners and theirs, then G2 tiles with their partners, up to
  // 16 tiles; rich in short generators and empty sets.
  TileSet universe(3);
  universe.insert(2);
  for (const Tile& a : g1_partners(tile_from_phi(2, 3))) {
    universe.insert(phi(a));
    for (const Tile& b : g1_partners(a)) universe.insert(phi(b));
  }
  for (const Tile& t : TileSet::of_group(3, TileGroup::G2).tiles()) {
    if (universe.size() >= 15) break;
    universe.insert(phi(t));
    universe.insert(phi(g2_partner(t)));
  }
  PipelineUniverse u;
  u.p = 3;
  u.universe = universe;

  // Naive: decide every subset on its own.
  std::vector<TileMask> periodic, empty, unknown;
  for (std::uint64_t j = 0; j < u.size(); ++j) {
    const TileMask m = u.candidate(j);
    switch (outcome(decide(TileSet(3, m)))) {
      case Outcome::periodic: periodic.push_back(m); break;
      case Outcome::empty: empty.push_back(m); break;
      case Outcome::unknown: unknown.push_back(m); break;
    }
  }
  const auto naive = postprocess(periodic, empty, 3, false);

  Decider decider;
  const auto straight = run_pipeline(u, decider);
  const auto pp = postprocess(straight.cycle_generators, straight.empties, 3, false);
  const bool differential = pp.cycle_generators == naive.cycle_generators && pp.empties == naive.empties &&
                            straight.undecided == unknown;

  // Interrupted twice, resumed from the checkpoint.
  const auto dir = std::filesystem::temp_directory_path() /
                   ("tessella-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  PipelineOptions options;
  options.checkpoint = dir / "shard.json";
  options.checkpoint_every = 1000;
  Decider resumed_decider;
  options.stop_after = 10'000;
  run_pipeline(u, resumed_decider, options);
  options.stop_after = 25'000;
  Decider fresh_decider;  // a restarted process has no cache
  run_pipeline(u, fresh_decider, options);
  options.stop_after.reset();
  const auto resumed = run_pipeline(u, fresh_decider, options);
  const bool resume_equal = to_json(resumed).dump() == to_json(straight).dump();

  // Three shards, merged in reverse order.
  std::vector<std::string> docs;
  for (int i = 2; i >= 0; --i) {
    PipelineOptions shard;
    shard.shard_index = i;
    shard.shard_count = 3;
    Decider d;
    docs.push_back(shard_results_jsonl(run_pipeline(u, d, shard)));
  }
  const auto merged = merge_jsonl(docs, 3);
  const auto mp = postprocess(merged.cycle_generators, merged.empties, 3, false);
  const bool shards_equal = tables_of(mp.cycle_generators, mp.empties, merged.undecided) ==
                            tables_of(pp.cycle_generators, pp.empties, straight.undecided) &&
                            mp.cycle_generators == pp.cycle_generators && mp.empties == pp.empties;
  std::filesystem::remove_all(dir);

  os << "universe " << universe.to_text() << ": " << pp.cycle_generators.size() << " minimal generators, "
     << pp.empties.size() << " maximal empty sets, " << straight.undecided.size() << " undecided; naive "
     << (differential ? "equal" : "DIFFERS") << ", resume " << (resume_equal ? "identical" : "DIFFERS")
     << ", 3 shards " << (shards_equal ? "identical" : "DIFFER");
  return differential && resume_equal && shards_equal;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  Shared shared;
  const std::vector<std::pair<std::string, Check>> checks = {
      {"two-color census", criterion_two_color},
      {"81-tile minimal generators, small sizes",
       [&](std::ostringstream& os) { return criterion_all_tiles(os, shared, std::max(4, options.all_tiles_max_size)); }},
      {"G1 and G2 minimal generator classes", [&](std::ostringstream& os) { return criterion_group_classes(os, shared); }},
      {"subsets avoiding G1/G2 generators", [&](std::ostringstream& os) { return criterion_d_counts(os, shared); }},
      {"reduced search space size", [&](std::ostringstream& os) { return criterion_search_space(os, shared); }},
      {"36-tile maximal non-cycle classes", [&](std::ostringstream& os) { return criterion_mncg36(os, shared); }},
      {"slow empty set, free operator widths", criterion_slow_empty},
      {"slow periodic set", criterion_slow_periodic},
      {"oracle equivalence", criterion_oracles},
      {"pipeline differential, resume and shards", criterion_pipeline},
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = id;
    r.name = checks[i].first;
    std::ostringstream os;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.pass = checks[i].second(os);
    } catch (const std::exception& e) {
      os << " error: " << e.what();
      r.pass = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.detail = os.str();
    if (options.on_result) options.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << " ("
     << std::fixed;
  os.precision(1);
  os << r.seconds << " s)";
  return os.str();
}

}  // namespace tessella
