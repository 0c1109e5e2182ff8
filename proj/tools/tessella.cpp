// Command-line front end. Exit codes: 0 conclusive, 2 unknown within budget, 1 usage or IO.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "tessella/acceptance.hpp"
#include "tessella/census.hpp"
#include "tessella/render.hpp"

using namespace tessella;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;

struct Common {
  int p = 3;
  std::string tiles;
  std::string format = "json";
  std::string out;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TileSet read_tiles(const Common& c) {
  if (c.tiles.find("tiles=") != std::string::npos) return TileSet::from_text(c.tiles);
  return parse_tile_list(c.p, c.tiles);
}

// Default output format per subcommand, applied after parsing when --format is absent.
std::vector<std::tuple<CLI::App*, CLI::Option*, std::string>> format_defaults;

void add_common(CLI::App* app, Common& c, bool tiles, const std::string& default_format,
                std::vector<std::string> formats = {"json", "csv", "text"}) {
  app->add_option("--p", c.p, "number of colors")->check(CLI::Range(2, kMaxColors));
  if (tiles) app->add_option("--tiles", c.tiles, "tile list, e.g. 5,37 or p=3;tiles=5,37")->required();
  auto* opt = app->add_option("--format", c.format, "output format (default " + default_format + ")")
                  ->check(CLI::IsMember(formats));
  format_defaults.emplace_back(app, opt, default_format);
  app->add_option("--out", c.out, "write output to this file");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::trunc);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + c.out);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

nlohmann::json phis(const TileMask& m) {
  auto a = nlohmann::json::array();
  m.for_each([&](int t) { a.push_back(t + 1); });
  return a;
}

std::string classes_jsonl(const std::vector<CanonicalForm>& classes) {
  std::string out;
  for (const auto& c : classes)
    out += nlohmann::json{{"p", c.representative.p()}, {"tiles", phis(c.representative.mask())},
                          {"orbit_size", c.orbit_size}}
               .dump() +
           "\n";
  return out;
}

nlohmann::json rows_json(const std::vector<SizeCount>& rows) {
  auto a = nlohmann::json::array();
  for (const auto& r : rows) a.push_back({{"k", r.k}, {"members", r.members}, {"classes", r.classes}});
  return a;
}

std::string rows_text(const std::vector<SizeCount>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) os << "k=" << r.k << " members=" << r.members << " classes=" << r.classes << "\n";
  return os.str();
}

std::string size_rows(const Common& c, const std::vector<SizeCount>& rows) {
  if (c.format == "csv") return to_csv(rows);
  if (c.format == "text") return rows_text(rows);
  return rows_json(rows).dump() + "\n";
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream os;
  if (const auto* per = std::get_if<Periodic>(&v)) {
    os << "periodic " << per->witness.m << "x" << per->witness.n << " (width " << per->width << ", "
       << to_string(per->orientation) << (per->sheared ? ", sheared" : "") << ")\n";
  } else if (const auto* e = std::get_if<Empty>(&v)) {
    os << "empty (width " << e->width << ", " << to_string(e->orientation) << ", "
       << e->certificate.elimination_order.size() << " states eliminated)\n";
  } else {
    const auto& u = std::get<Unknown>(v);
    os << "unknown (widths up to " << u.max_width_tried << (u.state_cap_hit ? ", state cap hit" : "") << ")\n";
  }
  return os.str();
}

TileSet census_universe(int p, const std::string& name) {
  if (name == "all") return TileSet::universe(p);
  if (p != 3) throw UsageError("--universe G1/G2 needs --p 3");
  if (name == "G1") return TileSet::of_group(3, TileGroup::G1);
  if (name == "G2") return TileSet::of_group(3, TileGroup::G2);
  throw UsageError("unknown universe '" + name + "'");
}

std::pair<int, int> parse_shard(const std::string& s) {
  int i = 0, n = 1;
  char slash = 0;
  std::istringstream in(s);
  if (!(in >> i >> slash >> n) || slash != '/' || !in.eof() || n < 1 || i < 0 || i >= n)
    throw UsageError("--shard must look like i/N with 0 <= i < N");
  return {i, n};
}

struct GroupCensus {
  McgCensus g1, g2;
  std::vector<TileMask> g1_members, g2_members;
};

GroupCensus group_census(Decider& decider) {
  GroupCensus g{mcg_census(TileSet::of_group(3, TileGroup::G1), 3, decider),
                mcg_census(TileSet::of_group(3, TileGroup::G2), 8, decider),
                {},
                {}};
  g.g1_members = g.g1.members();
  g.g2_members = g.g2.members();
  return g;
}

// Class counts make sense only for lists closed under the group.
std::optional<int> classes_if_closed(const std::vector<TileMask>& sets, int p) {
  const std::unordered_set<TileMask, TileMaskHash> all(sets.begin(), sets.end());
  const auto& group = SymmetryGroup::of(p);
  for (const auto& s : sets)
    for (std::size_t g = 0; g < group.size(); ++g)
      if (!all.count(group.image(g, s))) return std::nullopt;
  return p;
}

// The reduced search space, with the generators of G1 and G2 and the 36-tile empty
// sets as seeds for the two fast paths.
PipelineUniverse seeded_reduced(Decider& decider, PipelineOptions& options) {
  const auto g = group_census(decider);
  options.seed_generators = g.g1_members;
  options.seed_generators.insert(options.seed_generators.end(), g.g2_members.begin(), g.g2_members.end());
  for (const auto& f : initial_mncg36(g.g1_members, g.g2_members, decider).classes)
    for (const auto& s : orbit(f.representative)) options.seed_empties.push_back(s.mask());
  return reduced_search_space(g.g1_members, g.g2_members);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wang tiles: periodicity and emptiness decisions, symmetry classes, and censuses"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  int max_width = Budgets{}.max_width;
  std::size_t state_cap = default_state_cap();
  std::string orientation = "both", method = "scc";
  bool no_sheared = false;
  int m = 1, n = 1, max_size = 4, cell = 40;
  std::string universe_name = "all", table, shard = "0/1", checkpoint, verdict_file, scale = "desk", which = "c";
  std::uint64_t checkpoint_every = 4096, stop_after = 0, limit = 0;
  std::vector<std::string> merge_files;
  bool reduced = false, expand = false;

  auto budget_options = [&](CLI::App* s) {
    s->add_option("--max-width", max_width, "largest strip width")->check(CLI::Range(1, 64));
    s->add_option("--state-cap", state_cap, "largest operator (states); env TESSELLA_STATE_CAP");
    s->add_option("--orientation", orientation)->check(CLI::IsMember({"both", "rows", "columns"}));
    s->add_option("--method", method, "nilpotency test")->check(CLI::IsMember({"scc", "reduction"}));
    s->add_flag("--no-sheared", no_sheared, "skip the sheared row search");
  };
  auto budgets = [&] {
    Budgets b;
    b.max_width = max_width;
    b.state_cap = state_cap;
    b.orientations = orientation == "rows"      ? OrientationChoice::rows
                     : orientation == "columns" ? OrientationChoice::columns
                                                : OrientationChoice::both;
    b.method = method == "reduction" ? NilpotencyMethod::reduction : NilpotencyMethod::scc;
    b.sheared_fallback = !no_sheared;
    return b;
  };

  auto* decide_cmd = app.add_subcommand("decide", "periodic, empty or unknown, with witness or certificate");
  add_common(decide_cmd, c, true, "json", {"json", "text"});
  budget_options(decide_cmd);

  auto* canon_cmd = app.add_subcommand("canon", "canonical representative and orbit size");
  add_common(canon_cmd, c, true, "json", {"json", "text"});
  auto* orbit_cmd = app.add_subcommand("orbit", "every image of a tile set under the symmetry group");
  add_common(orbit_cmd, c, true, "json", {"json", "text"});
  auto* classify_cmd = app.add_subcommand("classify", "edge colors and group of each tile");
  add_common(classify_cmd, c, true, "json", {"json", "text"});

  auto* gamma_cmd = app.add_subcommand("gamma", "number of tilings of the m x n torus");
  auto* sigma_cmd = app.add_subcommand("sigma", "number of tilings of the m x n rectangle");
  for (auto* s : {gamma_cmd, sigma_cmd}) {
    add_common(s, c, true, "text", {"json", "text"});
    s->add_option("-m,--width", m)->required()->check(CLI::PositiveNumber);
    s->add_option("-n,--height", n)->required()->check(CLI::PositiveNumber);
    s->add_option("--state-cap", state_cap);
  }

  auto* mcg_cmd = app.add_subcommand("enumerate-mcg", "minimal cycle generators up to symmetry");
  add_common(mcg_cmd, c, false, "json");
  mcg_cmd->add_option("--universe", universe_name, "all, G1 or G2");
  mcg_cmd->add_option("--max-size", max_size)->required()->check(CLI::Range(1, 81));
  budget_options(mcg_cmd);

  auto* mncg_cmd = app.add_subcommand("enumerate-mncg36", "36-tile maximal non-cycle classes of G1 u G2");
  add_common(mncg_cmd, c, false, "json");

  auto* tables_cmd = app.add_subcommand("tables", "reference tables recomputed");
  add_common(tables_cmd, c, false, "csv");
  tables_cmd->add_option("name", table, "a1 | a2a | a2b | a3 | a4a | search-space")
      ->required()
      ->check(CLI::IsMember({"a1", "a2a", "a2b", "a3", "a4a", "search-space"}));
  tables_cmd->add_option("--max-size", max_size, "largest size for a4a");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "checkpointed classification of a candidate range");
  add_common(pipeline_cmd, c, false, "json");
  pipeline_cmd->add_option("--tiles", c.tiles, "explicit universe: every subset of these tiles");
  pipeline_cmd->add_flag("--reduced", reduced, "the reduced G1 u G2 search space (p = 3)");
  pipeline_cmd->add_option("--shard", shard, "i/N");
  pipeline_cmd->add_option("--checkpoint", checkpoint, "checkpoint file, resumed when present");
  pipeline_cmd->add_option("--checkpoint-every", checkpoint_every);
  pipeline_cmd->add_option("--stop-after", stop_after, "stop after this many candidates");
  pipeline_cmd->add_option("--limit", limit, "only the first candidates of the universe");
  pipeline_cmd->add_option("--merge", merge_files, "merge shard result files instead of running");
  pipeline_cmd->add_flag("--expand-orbits", expand, "merged sets stand for whole orbits");
  pipeline_cmd->add_option("--table", which, "for csv output: c (minimal generators) or n (maximal empty)")
      ->check(CLI::IsMember({"c", "n"}));
  budget_options(pipeline_cmd);

  auto* render_cmd = app.add_subcommand("render", "SVG of a periodic witness");
  add_common(render_cmd, c, false, "svg", {"svg"});
  render_cmd->add_option("--tiles", c.tiles, "decide this set and draw its witness");
  render_cmd->add_option("--verdict", verdict_file, "draw the witness in this verdict JSON");
  render_cmd->add_option("--cell", cell, "pixels per tile")->check(CLI::Range(4, 400));
  budget_options(render_cmd);

  auto* verify_cmd = app.add_subcommand("verify-paper", "run the acceptance checks");
  add_common(verify_cmd, c, false, "text", {"json", "text"});
  verify_cmd->add_option("--scale", scale)->check(CLI::IsMember({"desk", "full"}));
  verify_cmd->add_option("--checkpoint", checkpoint, "checkpoint for the full run");
  verify_cmd->add_option("--shard", shard, "i/N for the full run");
  verify_cmd->add_option("--max-size", max_size, "largest size for the 81-tile census");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  for (const auto& [sub, opt, fallback] : format_defaults)
    if (sub->parsed() && opt->count() == 0) c.format = fallback;

  try {
    if (decide_cmd->parsed()) {
      const TileSet b = read_tiles(c);
      const Verdict v = decide(b, budgets());
      emit(c, c.format == "text" ? verdict_text(v) : to_json(v, b.p()).dump() + "\n");
      return outcome(v) == Outcome::unknown ? kExitUnknown : kExitOk;
    }
    if (canon_cmd->parsed()) {
      const auto form = canonical(read_tiles(c));
      if (c.format == "text")
        emit(c, form.representative.to_text() + " orbit " + std::to_string(form.orbit_size) + "\n");
      else
        emit(c, nlohmann::json{{"p", form.representative.p()},
                               {"tiles", phis(form.representative.mask())},
                               {"orbit_size", form.orbit_size}}
                        .dump() +
                    "\n");
      return kExitOk;
    }
    if (orbit_cmd->parsed()) {
      std::string out;
      auto all = nlohmann::json::array();
      for (const auto& s : orbit(read_tiles(c))) {
        out += s.to_text() + "\n";
        all.push_back(phis(s.mask()));
      }
      emit(c, c.format == "text" ? out : all.dump() + "\n");
      return kExitOk;
    }
    if (classify_cmd->parsed()) {
      const TileSet b = read_tiles(c);
      std::string out;
      auto all = nlohmann::json::array();
      for (const Tile& t : b.tiles()) {
        const auto g = std::string(to_string(classify(t)));
        out += std::to_string(phi(t)) + " b=" + std::to_string(t.bottom) + " l=" + std::to_string(t.left) +
               " t=" + std::to_string(t.top) + " r=" + std::to_string(t.right) + " " + g + "\n";
        all.push_back({{"phi", phi(t)}, {"edges", {t.bottom, t.left, t.top, t.right}}, {"group", g}});
      }
      emit(c, c.format == "text" ? out : all.dump() + "\n");
      return kExitOk;
    }
    if (gamma_cmd->parsed() || sigma_cmd->parsed()) {
      const TileSet b = read_tiles(c);
      TransferLimits limits;
      limits.state_cap = state_cap;
      const auto r = gamma_cmd->parsed() ? gamma(b, m, n, limits) : sigma_count(b, m, n, limits);
      emit(c, c.format == "text"
                  ? r.value.str() + "\n"
                  : nlohmann::json{{"m", m}, {"n", n}, {"value", r.value.str()}}.dump() + "\n");
      return kExitOk;
    }
    if (mcg_cmd->parsed()) {
      Decider decider(budgets());
      const auto census = mcg_census(census_universe(c.p, universe_name), max_size, decider);
      emit(c, c.format == "json" ? classes_jsonl(census.classes) : size_rows(c, census.by_size()));
      if (!census.unknown.empty())
        std::cerr << census.unknown.size() << " candidate classes stayed undecided\n";
      return census.unknown.empty() ? kExitOk : kExitUnknown;
    }
    if (mncg_cmd->parsed()) {
      Decider decider;
      const auto g = group_census(decider);
      const auto r = initial_mncg36(g.g1_members, g.g2_members, decider);
      if (c.format == "json") {
        emit(c, classes_jsonl(r.classes));
      } else {
        SizeCount row{36, 0, r.classes.size()};
        for (const auto& f : r.classes) row.members += f.orbit_size;
        emit(c, size_rows(c, {row}));
      }
      return kExitOk;
    }
    if (tables_cmd->parsed()) {
      Decider decider;
      if (table == "a4a") {
        const auto census = mcg_census(TileSet::universe(3), max_size, decider);
        emit(c, size_rows(c, census.by_size()));
        return census.unknown.empty() ? kExitOk : kExitUnknown;
      }
      const auto g = group_census(decider);
      if (table == "a2a" || table == "a2b") {
        const auto& census = table == "a2a" ? g.g1 : g.g2;
        emit(c, c.format == "json" ? classes_jsonl(census.classes) : size_rows(c, census.by_size()));
        return kExitOk;
      }
      if (table == "a3") {
        const auto r = initial_mncg36(g.g1_members, g.g2_members, decider);
        emit(c, classes_jsonl(r.classes));
        return kExitOk;
      }
      const auto d1 = compute_D(TileSet::of_group(3, TileGroup::G1), g.g1_members);
      const auto d2 = compute_D(TileSet::of_group(3, TileGroup::G2), g.g2_members);
      if (table == "search-space") {
        const auto s = search_space_size(d1, d2, false);
        const auto with_empty = search_space_size(d1, d2, true);
        if (c.format == "csv")
          emit(c, "quantity,value,six_figures\nI," + s.i_size.str() + "," + six_figures(s.i_size) + "\nI_prime," +
                      s.i_prime_size.str() + "," + six_figures(s.i_prime_size) + "\n");
        else
          emit(c, nlohmann::json{{"I", s.i_size.str()},
                                 {"I_prime", s.i_prime_size.str()},
                                 {"I_with_empty", with_empty.i_size.str()},
                                 {"I_prime_with_empty", with_empty.i_prime_size.str()}}
                          .dump() +
                      "\n");
        return kExitOk;
      }
      // a1: one row per size, both groups side by side.
      std::ostringstream os;
      auto row = [](const std::vector<SizeCount>& rows, int k) {
        for (const auto& r : rows)
          if (r.k == k) return r;
        return SizeCount{k, 0, 0};
      };
      if (c.format == "csv") os << "k,g1,g1_classes,g2,g2_classes\n";
      auto all = nlohmann::json::array();
      for (int k = 1; k <= 18; ++k) {
        const auto a = row(d1, k), b = row(d2, k);
        if (c.format == "csv")
          os << k << "," << a.members << "," << a.classes << "," << b.members << "," << b.classes << "\n";
        else if (c.format == "text")
          os << "k=" << k << " g1=" << a.members << " (" << a.classes << ") g2=" << b.members << " ("
             << b.classes << ")\n";
        else
          all.push_back({{"k", k}, {"g1", a.members}, {"g1_classes", a.classes}, {"g2", b.members},
                         {"g2_classes", b.classes}});
      }
      emit(c, c.format == "json" ? all.dump() + "\n" : os.str());
      return kExitOk;
    }
    if (pipeline_cmd->parsed()) {
      if (!merge_files.empty()) {
        std::vector<std::string> docs;
        for (const auto& f : merge_files) docs.push_back(read_file(f));
        const auto merged = merge_jsonl(docs, c.p);
        const auto pp = postprocess(merged.cycle_generators, merged.empties, c.p, expand);
        const auto ct = size_table(pp.cycle_generators, classes_if_closed(pp.cycle_generators, c.p));
        const auto nt = size_table(pp.empties, classes_if_closed(pp.empties, c.p));
        if (c.format == "csv") {
          emit(c, to_csv(which == "c" ? ct : nt));
        } else if (c.format == "text") {
          emit(c, "minimal cycle generators\n" + rows_text(ct) + "maximal empty sets\n" + rows_text(nt) +
                      "undecided " + std::to_string(merged.undecided.size()) + "\n");
        } else {
          emit(c, nlohmann::json{{"cycle_generators", rows_json(ct)},
                                 {"empties", rows_json(nt)},
                                 {"undecided", merged.undecided.size()}}
                          .dump() +
                      "\n");
        }
        return merged.undecided.empty() ? kExitOk : kExitUnknown;
      }
      if (reduced == !c.tiles.empty()) throw UsageError("pipeline needs exactly one of --tiles or --reduced");
      const auto [index, count] = parse_shard(shard);
      Decider decider(budgets());
      PipelineOptions options;
      options.shard_index = index;
      options.shard_count = count;
      options.checkpoint_every = checkpoint_every;
      if (!checkpoint.empty()) options.checkpoint = checkpoint;
      if (stop_after) options.stop_after = stop_after;
      if (limit) options.limit = limit;
      PipelineUniverse u;
      if (reduced) {
        u = seeded_reduced(decider, options);
      } else {
        u.universe = read_tiles(c);
        u.p = u.universe.p();
      }
      const auto state = run_pipeline(u, decider, options);
      const auto& k = state.counters;
      std::cerr << "processed " << k.processed << " of [" << state.begin << ", " << state.end << "): known generator "
                << k.known_generator << ", known empty " << k.known_empty << ", periodic " << k.decided_periodic
                << ", empty " << k.decided_empty << ", undecided " << k.undecided
                << (state.finished() ? "" : " (stopped early)") << "\n";
      if (c.format == "csv") {
        const auto pp = postprocess(state.cycle_generators, state.empties, u.p, false);
        const auto& sets = which == "c" ? pp.cycle_generators : pp.empties;
        emit(c, to_csv(size_table(sets, classes_if_closed(sets, u.p))));
      } else {
        emit(c, shard_results_jsonl(state));
      }
      return state.undecided.empty() ? kExitOk : kExitUnknown;
    }
    if (render_cmd->parsed()) {
      if (c.tiles.empty() == verdict_file.empty()) throw UsageError("render needs exactly one of --tiles or --verdict");
      const Verdict v = verdict_file.empty() ? decide(read_tiles(c), budgets())
                                             : verdict_from_json(nlohmann::json::parse(read_file(verdict_file)));
      const auto* per = std::get_if<Periodic>(&v);
      if (!per) {
        std::cerr << "no periodic witness to draw: " << verdict_text(v);
        return outcome(v) == Outcome::unknown ? kExitUnknown : kExitError;
      }
      RenderOptions options;
      options.cell = cell;
      emit(c, render_svg(per->witness, options));
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      if (scale == "full") {
        if (checkpoint.empty())
          throw UsageError(
              "--scale full classifies about 1.35e12 candidates and takes days; pass --checkpoint FILE "
              "(and --shard i/N to split the work) so the run can be resumed");
        const auto [index, count] = parse_shard(shard);
        Decider decider;
        PipelineOptions options;
        options.shard_index = index;
        options.shard_count = count;
        options.checkpoint = checkpoint;
        const auto u = seeded_reduced(decider, options);
        const auto state = run_pipeline(u, decider, options);
        emit(c, shard_results_jsonl(state));
        return state.undecided.empty() ? kExitOk : kExitUnknown;
      }
      AcceptanceOptions options;
      options.all_tiles_max_size = max_size;
      auto report = nlohmann::json::array();
      options.on_result = [&](const CriterionResult& r) {
        if (c.format == "text" && c.out.empty()) std::cout << format_result(r) << std::endl;
        report.push_back(
            {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      };
      const auto results = run_acceptance(options);
      if (c.format == "json") {
        emit(c, report.dump(2) + "\n");
      } else if (!c.out.empty()) {
        std::string text;
        for (const auto& r : results) text += format_result(r) + "\n";
        emit(c, text);
      }
      return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; })
                 ? kExitOk
                 : kExitError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
