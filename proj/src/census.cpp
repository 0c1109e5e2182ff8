#include "tessella/census.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tessella {

Outcome Decider::outcome(const TileSet& b) {
  const auto& group = SymmetryGroup::of(b.p());
  const TileMask key = canonical_mask(group, b.mask(), nullptr);
  auto& cache = cache_[b.p()];
  if (const auto it = cache.find(key); it != cache.end()) {
    ++hits_;
    return it->second;
  }
  ++decisions_;
  const Outcome o = tessella::outcome(decide(TileSet(b.p(), key), budgets_));
  cache.emplace(key, o);
  return o;
}

namespace {

bool lex_less_forms(const CanonicalForm& a, const CanonicalForm& b) {
  const int sa = a.representative.size(), sb = b.representative.size();
  if (sa != sb) return sa < sb;
  return lex_less(a.representative.mask(), b.representative.mask());
}

std::vector<TileMask> orbit_masks(const SymmetryGroup& group, const TileMask& m) {
  std::vector<TileMask> out;
  out.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) out.push_back(group.image(i, m));
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_invariant(const TileSet& universe) {
  if (!is_group_invariant(universe))
    throw std::invalid_argument("universe is not invariant under the symmetry group");
}

}  // namespace

std::vector<SizeCount> McgCensus::by_size() const {
  std::vector<SizeCount> rows;
  for (const auto& c : classes) {
    const int k = c.representative.size();
    if (rows.empty() || rows.back().k != k) rows.push_back({k, 0, 0});
    rows.back().members += c.orbit_size;
    ++rows.back().classes;
  }
  return rows;
}

std::vector<TileMask> McgCensus::members() const {
  std::vector<TileMask> out;
  for (const auto& c : classes) {
    const auto orbit = orbit_masks(SymmetryGroup::of(c.representative.p()), c.representative.mask());
    out.insert(out.end(), orbit.begin(), orbit.end());
  }
  return out;
}

McgCensus mcg_census(const TileSet& universe, int max_size, Decider& decider) {
  require_invariant(universe);
  const int p = universe.p();
  const auto& group = SymmetryGroup::of(p);
  McgCensus census;
  // Known generators, listed under every tile they contain.
  std::vector<std::vector<TileMask>> by_tile(kMaxTiles);
  std::vector<TileMask> non_cycle{TileMask{}};

  for (int k = 1; k <= std::min(max_size, universe.size()) && !non_cycle.empty(); ++k) {
    std::unordered_set<TileMask, TileMaskHash> seen;
    std::vector<CanonicalForm> candidates;
    for (const TileMask& r : non_cycle) {
      (universe.mask() - r).for_each([&](int t) {
        TileMask m = r;
        m.set(t);
        // r holds no generator, so any generator inside m contains t.
        for (const TileMask& g : by_tile[t])
          if (g.is_subset_of(m)) return;
        std::uint64_t orbit_size = 0;
        const TileMask c = canonical_mask(group, m, &orbit_size);
        if (seen.insert(c).second) candidates.push_back({TileSet(p, c), orbit_size});
      });
    }
    std::sort(candidates.begin(), candidates.end(), lex_less_forms);
    std::vector<TileMask> next;
    for (auto& c : candidates) {
      switch (decider.outcome(c.representative)) {
        case Outcome::periodic:
          for (const TileMask& m : orbit_masks(group, c.representative.mask()))
            m.for_each([&](int t) { by_tile[t].push_back(m); });
          census.classes.push_back(std::move(c));
          break;
        case Outcome::unknown:
          census.unknown.push_back(c.representative);
          next.push_back(c.representative.mask());
          break;
        case Outcome::empty:
          next.push_back(c.representative.mask());
          break;
      }
    }
    non_cycle = std::move(next);
  }
  return census;
}

namespace {

// An invariant universe of at most 64 tiles with the group acting on local bit indices.
class LocalUniverse {
 public:
  explicit LocalUniverse(const TileSet& universe) : p_(universe.p()) {
    require_invariant(universe);
    if (universe.size() > 64) throw std::invalid_argument("universe larger than 64 tiles");
    universe.mask().for_each([&](int t) { global_.push_back(t); });
    std::vector<int> local(kMaxTiles, -1);
    for (std::size_t i = 0; i < global_.size(); ++i) local[global_[i]] = static_cast<int>(i);
    const auto& group = SymmetryGroup::of(p_);
    // Distinct restrictions only.
    std::unordered_set<std::string> seen;
    for (std::size_t g = 0; g < group.size(); ++g) {
      std::string perm(global_.size(), '\0');
      for (std::size_t i = 0; i < global_.size(); ++i)
        perm[i] = static_cast<char>(local[group.image(g, global_[i])]);
      if (seen.insert(perm).second) perms_.insert(perms_.end(), perm.begin(), perm.end());
    }
    elements_ = perms_.size() / global_.size();
    full_order_ = group.size();
  }

  int size() const { return static_cast<int>(global_.size()); }
  std::uint64_t all() const { return size() == 64 ? ~0ull : (1ull << size()) - 1; }

  std::uint64_t to_local(const TileMask& m) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < global_.size(); ++i)
      if (m.test(global_[i])) out |= 1ull << i;
    return out;
  }

  TileMask to_global(std::uint64_t m) const {
    TileMask out;
    for (; m; m &= m - 1) out.set(global_[std::countr_zero(m)]);
    return out;
  }

  static bool lex_less_local(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    if (!diff) return false;
    const int first = std::countr_zero(diff);
    const std::uint64_t above = first == 63 ? 0 : ~0ull << (first + 1);
    if ((a >> first) & 1) return (b & above) != 0;
    return (a & above) == 0;
  }

  std::uint64_t canonical(std::uint64_t m, std::uint64_t* orbit_size) const {
    std::uint64_t best = m, hits = 0;
    const std::size_t n = global_.size();
    for (std::size_t g = 0; g < elements_; ++g) {
      const char* perm = &perms_[g * n];
      std::uint64_t img = 0;
      for (std::uint64_t bits = m; bits; bits &= bits - 1)
        img |= 1ull << perm[std::countr_zero(bits)];
      if (lex_less_local(img, best)) {
        best = img;
        hits = 1;
      } else if (img == best) {
        ++hits;
      }
    }
    if (orbit_size) *orbit_size = elements_ / hits;
    return best;
  }

 private:
  int p_;
  std::vector<int> global_;
  std::string perms_;
  std::size_t elements_ = 0;
  std::size_t full_order_ = 0;
};

struct LocalForm {
  std::uint64_t mask;
  std::uint64_t orbit_size;
};

// Level-wise classes of subsets avoiding every forbidden set. Calls `level` with the
// sorted classes of each size k = 0..max_size.
template <class Level>
void grow_avoiding(const LocalUniverse& u, const std::vector<TileMask>& forbidden, int max_size,
                   Level&& level) {
  std::vector<std::vector<std::uint64_t>> by_tile(u.size());
  for (const TileMask& f : forbidden) {
    const std::uint64_t lf = u.to_local(f);
    if (u.to_global(lf) != f) continue;  // reaches outside the universe
    for (std::uint64_t bits = lf; bits; bits &= bits - 1) by_tile[std::countr_zero(bits)].push_back(lf);
  }
  std::vector<LocalForm> cur{{0, 1}};
  for (int k = 0;; ++k) {
    std::sort(cur.begin(), cur.end(), [](const LocalForm& a, const LocalForm& b) {
      return LocalUniverse::lex_less_local(a.mask, b.mask);
    });
    level(k, cur);
    if (k == max_size || cur.empty()) break;
    std::unordered_map<std::uint64_t, std::uint64_t> next;
    for (const LocalForm& r : cur) {
      for (std::uint64_t free = u.all() & ~r.mask; free; free &= free - 1) {
        const int t = std::countr_zero(free);
        const std::uint64_t m = r.mask | (1ull << t);
        bool blocked = false;
        for (std::uint64_t f : by_tile[t])
          if ((f & ~m) == 0) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        std::uint64_t orbit_size = 0;
        const std::uint64_t c = u.canonical(m, &orbit_size);
        next.emplace(c, orbit_size);
      }
    }
    cur.clear();
    for (const auto& [m, s] : next) cur.push_back({m, s});
  }
}

}  // namespace

std::vector<SizeCount> compute_D(const TileSet& universe, const std::vector<TileMask>& forbidden) {
  const LocalUniverse u(universe);
  std::vector<SizeCount> rows;
  grow_avoiding(u, forbidden, u.size(), [&](int k, const std::vector<LocalForm>& level) {
    SizeCount row{k, 0, level.size()};
    for (const auto& f : level) row.members += f.orbit_size;
    if (row.classes) rows.push_back(row);
  });
  return rows;
}

std::vector<CanonicalForm> d_class_reps(const TileSet& universe, const std::vector<TileMask>& forbidden,
                                        int max_size) {
  const LocalUniverse u(universe);
  std::vector<CanonicalForm> out;
  grow_avoiding(u, forbidden, max_size, [&](int, const std::vector<LocalForm>& level) {
    for (const auto& f : level) out.push_back({TileSet(universe.p(), u.to_global(f.mask)), f.orbit_size});
  });
  return out;
}

SearchSpace search_space_size(const std::vector<SizeCount>& d1, const std::vector<SizeCount>& d2,
                              bool include_empty) {
  auto total = [&](const std::vector<SizeCount>& rows, bool classes) {
    BigInt s = 0;
    for (const auto& r : rows)
      if (r.k > 0 || include_empty) s += classes ? r.classes : r.members;
    return s;
  };
  if (d1.empty() || d2.empty()) return {0, 0};
  return {total(d1, false) * total(d2, true), total(d1, true) * total(d2, false)};
}

std::string six_figures(const BigInt& v) {
  std::string digits = v.str();
  if (digits == "0") return "0";
  const int exponent = static_cast<int>(digits.size()) - 1;
  if (digits.size() > 6) {
    const bool up = digits[6] >= '5';
    BigInt head(digits.substr(0, 6));
    if (up) head += 1;
    std::string h = head.str();
    const int exp2 = exponent + static_cast<int>(h.size()) - 6;
    h = h.substr(0, 6);
    return h.substr(0, 1) + "." + h.substr(1) + "e" + std::to_string(exp2);
  }
  digits.resize(6, '0');
  return digits.substr(0, 1) + "." + digits.substr(1) + "e" + std::to_string(exponent);
}

Mncg36 initial_mncg36(const std::vector<TileMask>& g1_mcg_members,
                      const std::vector<TileMask>& g2_mcg_members, Decider& decider) {
  constexpr int p = 3;
  Mncg36 out;
  // G2 splits into 18 two-tile generators {t, partner}.
  std::vector<std::pair<int, int>> g2_pairs;
  for (const Tile& t : TileSet::of_group(p, TileGroup::G2).tiles()) {
    const int a = phi(t), b = phi(g2_partner(t));
    if (a < b) g2_pairs.push_back({a - 1, b - 1});
  }
  // The G1 generator pairs form disjoint complete bipartite graphs K(3,3); a set with no
  // such pair takes at most one side of each, so 18 tiles means one full side each.
  std::vector<std::pair<TileMask, TileMask>> g1_sides;
  {
    const TileSet g1 = TileSet::of_group(p, TileGroup::G1);
    TileMask done;
    g1.mask().for_each([&](int t) {
      if (done.test(t)) return;
      TileMask side_a, side_b;
      side_a.set(t);
      for (const Tile& e : g1_partners(tile_from_phi(t + 1, p))) side_b.set(phi(e) - 1);
      side_b.for_each([&](int u) {
        for (const Tile& e : g1_partners(tile_from_phi(u + 1, p))) side_a.set(phi(e) - 1);
      });
      done |= side_a | side_b;
      g1_sides.push_back({side_a, side_b});
    });
  }
  if (g2_pairs.size() != 18 || g1_sides.size() != 6)
    throw std::logic_error("unexpected periodic pair structure");

  auto avoids = [](const TileMask& m, const std::vector<TileMask>& forbidden) {
    return std::none_of(forbidden.begin(), forbidden.end(),
                        [&](const TileMask& f) { return f.is_subset_of(m); });
  };
  std::vector<TileMask> g1_choices, g2_choices;
  for (int code = 0; code < 64; ++code) {
    TileMask m;
    for (int i = 0; i < 6; ++i) m |= (code >> i) & 1 ? g1_sides[i].second : g1_sides[i].first;
    if (avoids(m, g1_mcg_members)) g1_choices.push_back(m);
  }
  {
    const LocalUniverse u2(TileSet::of_group(p, TileGroup::G2));
    std::vector<std::uint64_t> forbidden;
    for (const auto& f : g2_mcg_members) forbidden.push_back(u2.to_local(f));
    std::vector<std::uint64_t> pair_bits;
    for (auto [a, b] : g2_pairs) {
      TileMask ma, mb;
      ma.set(a);
      mb.set(b);
      pair_bits.push_back(u2.to_local(ma));
      pair_bits.push_back(u2.to_local(mb));
    }
    for (std::uint32_t code = 0; code < (1u << 18); ++code) {
      std::uint64_t m = 0;
      for (int i = 0; i < 18; ++i) m |= pair_bits[2 * i + ((code >> i) & 1)];
      if (std::none_of(forbidden.begin(), forbidden.end(), [&](std::uint64_t f) { return (f & ~m) == 0; }))
        g2_choices.push_back(u2.to_global(m));
    }
  }
  out.candidates = 64ull << 18;
  out.after_filter = g1_choices.size() * g2_choices.size();

  const auto& group = SymmetryGroup::of(p);
  std::unordered_map<TileMask, std::uint64_t, TileMaskHash> classes;
  for (const auto& a : g1_choices)
    for (const auto& b : g2_choices) {
      std::uint64_t orbit_size = 0;
      const TileMask c = canonical_mask(group, a | b, &orbit_size);
      classes.emplace(c, orbit_size);
    }
  for (const auto& [m, size] : classes)
    if (decider.outcome(TileSet(p, m)) == Outcome::empty) out.classes.push_back({TileSet(p, m), size});
  std::sort(out.classes.begin(), out.classes.end(), lex_less_forms);
  return out;
}

std::vector<TileMask> keep_extremal(const std::vector<TileMask>& sets, int p, bool minimal,
                                    bool expand_orbits) {
  std::vector<TileMask> all;
  if (expand_orbits) {
    const auto& group = SymmetryGroup::of(p);
    for (const auto& s : sets) {
      const auto orbit = orbit_masks(group, s);
      all.insert(all.end(), orbit.begin(), orbit.end());
    }
  } else {
    all = sets;
  }
  std::sort(all.begin(), all.end(), [](const TileMask& a, const TileMask& b) {
    return a.count() != b.count() ? a.count() < b.count() : lex_less(a, b);
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<TileMask> out;
  if (minimal) {
    // Ascending size: a set survives unless a kept smaller set lies inside it.
    for (const auto& s : all)
      if (std::none_of(out.begin(), out.end(), [&](const TileMask& o) { return o.is_subset_of(s); }))
        out.push_back(s);
  } else {
    for (auto it = all.rbegin(); it != all.rend(); ++it)
      if (std::none_of(out.begin(), out.end(), [&](const TileMask& o) { return it->is_subset_of(o); }))
        out.push_back(*it);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

PostprocessResult postprocess(const std::vector<TileMask>& raw_c, const std::vector<TileMask>& raw_n,
                              int p, bool expand_orbits) {
  return {keep_extremal(raw_c, p, true, expand_orbits), keep_extremal(raw_n, p, false, expand_orbits)};
}

std::vector<SizeCount> size_table(const std::vector<TileMask>& sets, std::optional<int> p) {
  std::map<int, SizeCount> rows;
  std::map<int, std::unordered_set<TileMask, TileMaskHash>> reps;
  for (const auto& s : sets) {
    auto& row = rows[s.count()];
    row.k = s.count();
    ++row.members;
    if (p) reps[s.count()].insert(canonical_mask(SymmetryGroup::of(*p), s, nullptr));
  }
  std::vector<SizeCount> out;
  for (auto& [k, row] : rows) {
    if (p) row.classes = reps[k].size();
    out.push_back(row);
  }
  return out;
}

std::string to_csv(const std::vector<SizeCount>& rows) {
  std::ostringstream os;
  os << "k,members,classes\n";
  for (const auto& r : rows) os << r.k << "," << r.members << "," << r.classes << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------------------

std::uint64_t PipelineUniverse::size() const {
  if (product) return static_cast<std::uint64_t>(first.size()) * second.size();
  const int n = universe.size();
  if (n > 62) throw std::invalid_argument("explicit universe too large to enumerate");
  return 1ull << n;
}

TileMask PipelineUniverse::candidate(std::uint64_t j) const {
  if (product) return first[j / second.size()] | second[j % second.size()];
  TileMask out;
  int bit = 0;
  universe.mask().for_each([&](int t) {
    if ((j >> bit) & 1) out.set(t);
    ++bit;
  });
  return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_masks(const std::vector<TileMask>& masks) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& m : masks)
    for (auto w : m.words())
      h = fnv1a(std::string_view(reinterpret_cast<const char*>(&w), sizeof w), h);
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

}  // namespace

std::string PipelineUniverse::descriptor() const {
  if (!product) return "explicit;" + universe.to_text();
  return "product;p=" + std::to_string(p) + ";first=" + std::to_string(first.size()) + ":" +
         hex(hash_masks(first)) + ";second=" + std::to_string(second.size()) + ":" + hex(hash_masks(second));
}

PipelineUniverse reduced_search_space(const std::vector<TileMask>& g1_mcg_members,
                                      const std::vector<TileMask>& g2_mcg_members) {
  constexpr int p = 3;
  PipelineUniverse u;
  u.p = p;
  u.product = true;
  u.universe = TileSet(p, TileSet::of_group(p, TileGroup::G1).mask() | TileSet::of_group(p, TileGroup::G2).mask());
  const auto& group = SymmetryGroup::of(p);
  for (const auto& c : d_class_reps(TileSet::of_group(p, TileGroup::G1), g1_mcg_members, 36)) {
    if (c.representative.empty()) continue;
    const auto orbit = orbit_masks(group, c.representative.mask());
    u.first.insert(u.first.end(), orbit.begin(), orbit.end());
  }
  for (const auto& c : d_class_reps(TileSet::of_group(p, TileGroup::G2), g2_mcg_members, 36))
    if (!c.representative.empty()) u.second.push_back(c.representative.mask());
  return u;
}

namespace {

nlohmann::json masks_json(const std::vector<TileMask>& masks) {
  auto out = nlohmann::json::array();
  for (const auto& m : masks) {
    auto& row = out.emplace_back(nlohmann::json::array());
    m.for_each([&](int t) { row.push_back(t + 1); });
  }
  return out;
}

std::vector<TileMask> masks_from_json(const nlohmann::json& j) {
  std::vector<TileMask> out;
  for (const auto& row : j) {
    TileMask m;
    for (const auto& n : row) {
      const int v = n.get<int>();
      if (v < 1 || v > kMaxTiles) throw CheckpointError("tile number out of range in checkpoint");
      m.set(v - 1);
    }
    out.push_back(m);
  }
  return out;
}

nlohmann::json payload(const PipelineState& s) {
  const auto& c = s.counters;
  return {{"descriptor", s.descriptor},
          {"shard", {s.shard_index, s.shard_count}},
          {"begin", s.begin},
          {"end", s.end},
          {"next", s.next},
          {"C", masks_json(s.cycle_generators)},
          {"N", masks_json(s.empties)},
          {"U", masks_json(s.undecided)},
          {"counters",
           {{"processed", c.processed},
            {"known_generator", c.known_generator},
            {"known_empty", c.known_empty},
            {"decided_periodic", c.decided_periodic},
            {"decided_empty", c.decided_empty},
            {"undecided", c.undecided}}}};
}

}  // namespace

nlohmann::json to_json(const PipelineState& state) {
  nlohmann::json j = payload(state);
  j["checksum"] = hex(fnv1a(j.dump()));
  return j;
}

PipelineState pipeline_state_from_json(const nlohmann::json& j) {
  try {
    nlohmann::json body = j;
    const auto checksum = body.at("checksum").get<std::string>();
    body.erase("checksum");
    if (hex(fnv1a(body.dump())) != checksum) throw CheckpointError("checkpoint checksum mismatch");
    PipelineState s;
    s.descriptor = body.at("descriptor").get<std::string>();
    s.shard_index = body.at("shard").at(0).get<int>();
    s.shard_count = body.at("shard").at(1).get<int>();
    s.begin = body.at("begin").get<std::uint64_t>();
    s.end = body.at("end").get<std::uint64_t>();
    s.next = body.at("next").get<std::uint64_t>();
    s.cycle_generators = masks_from_json(body.at("C"));
    s.empties = masks_from_json(body.at("N"));
    s.undecided = masks_from_json(body.at("U"));
    const auto& c = body.at("counters");
    s.counters = {c.at("processed").get<std::uint64_t>(),        c.at("known_generator").get<std::uint64_t>(),
                  c.at("known_empty").get<std::uint64_t>(),      c.at("decided_periodic").get<std::uint64_t>(),
                  c.at("decided_empty").get<std::uint64_t>(),    c.at("undecided").get<std::uint64_t>()};
    if (s.next < s.begin || s.next > s.end) throw CheckpointError("checkpoint cursor outside its range");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const PipelineState& state) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << to_json(state).dump() << "\n";
    if (!out.flush()) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PipelineState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return pipeline_state_from_json(j);
  } catch (const CheckpointError& e) {
    throw CheckpointError("checkpoint " + path.string() + ": " + e.what());
  }
}

PipelineState run_pipeline(const PipelineUniverse& universe, Decider& decider, const PipelineOptions& options) {
  if (options.shard_count < 1 || options.shard_index < 0 || options.shard_index >= options.shard_count)
    throw std::invalid_argument("shard must be i/N with 0 <= i < N");
  const std::uint64_t total = options.limit ? std::min(*options.limit, universe.size()) : universe.size();
  PipelineState state;
  if (options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
    state = load_checkpoint(*options.checkpoint);
    if (state.descriptor != universe.descriptor() || state.shard_index != options.shard_index ||
        state.shard_count != options.shard_count)
      throw CheckpointError("checkpoint " + options.checkpoint->string() +
                            " belongs to a different universe or shard");
  } else {
    state.descriptor = universe.descriptor();
    state.shard_index = options.shard_index;
    state.shard_count = options.shard_count;
    const auto n = static_cast<unsigned __int128>(total);
    state.begin = static_cast<std::uint64_t>(n * options.shard_index / options.shard_count);
    state.end = static_cast<std::uint64_t>(n * (options.shard_index + 1) / options.shard_count);
    state.next = state.begin;
  }

  std::vector<TileMask> generators = options.seed_generators;
  generators.insert(generators.end(), state.cycle_generators.begin(), state.cycle_generators.end());
  std::vector<TileMask> empties = options.seed_empties;
  empties.insert(empties.end(), state.empties.begin(), state.empties.end());
  auto save = [&] {
    if (options.checkpoint) save_checkpoint(*options.checkpoint, state);
  };

  std::uint64_t done_here = 0;
  while (!state.finished()) {
    if (options.stop_after && done_here == *options.stop_after) {
      save();
      return state;
    }
    const TileMask b = universe.candidate(state.next);
    auto& c = state.counters;
    if (std::any_of(generators.begin(), generators.end(), [&](const TileMask& g) { return g.is_subset_of(b); })) {
      ++c.known_generator;
    } else if (std::any_of(empties.begin(), empties.end(), [&](const TileMask& e) { return b.is_subset_of(e); })) {
      ++c.known_empty;
    } else {
      switch (decider.outcome(TileSet(universe.p, b))) {
        case Outcome::periodic:
          ++c.decided_periodic;
          state.cycle_generators.push_back(b);
          generators.push_back(b);
          break;
        case Outcome::empty:
          ++c.decided_empty;
          state.empties.push_back(b);
          empties.push_back(b);
          break;
        case Outcome::unknown:
          ++c.undecided;
          state.undecided.push_back(b);
          break;
      }
    }
    ++c.processed;
    ++state.next;
    ++done_here;
    if (options.checkpoint_every && done_here % options.checkpoint_every == 0) save();
  }
  save();
  return state;
}

std::string shard_results_jsonl(const PipelineState& state) {
  std::vector<std::string> lines;
  auto add = [&](const char* kind, const std::vector<TileMask>& masks) {
    for (const auto& m : masks) {
      nlohmann::json j{{"kind", kind}, {"tiles", nlohmann::json::array()}};
      m.for_each([&](int t) { j["tiles"].push_back(t + 1); });
      lines.push_back(j.dump());
    }
  };
  add("C", state.cycle_generators);
  add("N", state.empties);
  add("U", state.undecided);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

void sort_unique(std::vector<TileMask>& v) {
  std::sort(v.begin(), v.end(), lex_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

MergedResults merge_shards(const std::vector<PipelineState>& shards) {
  MergedResults r;
  for (const auto& s : shards) {
    r.cycle_generators.insert(r.cycle_generators.end(), s.cycle_generators.begin(), s.cycle_generators.end());
    r.empties.insert(r.empties.end(), s.empties.begin(), s.empties.end());
    r.undecided.insert(r.undecided.end(), s.undecided.begin(), s.undecided.end());
  }
  sort_unique(r.cycle_generators);
  sort_unique(r.empties);
  sort_unique(r.undecided);
  return r;
}

MergedResults merge_jsonl(const std::vector<std::string>& documents, int p) {
  MergedResults r;
  for (const auto& doc : documents) {
    std::istringstream in(doc);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const TileMask m = TileSet::from_phis(p, j.at("tiles").get<std::vector<int>>()).mask();
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "C") r.cycle_generators.push_back(m);
      else if (kind == "N") r.empties.push_back(m);
      else if (kind == "U") r.undecided.push_back(m);
      else throw std::invalid_argument("unknown result kind '" + kind + "'");
    }
  }
  sort_unique(r.cycle_generators);
  sort_unique(r.empties);
  sort_unique(r.undecided);
  return r;
}

}  // namespace tessella
