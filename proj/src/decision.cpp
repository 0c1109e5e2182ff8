#include "tessella/decision.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tessella {

bool validate_witness(const PeriodicPattern& pattern, const TileSet& b) {
  const int m = pattern.m, n = pattern.n;
  if (m < 1 || n < 1 || static_cast<int>(pattern.cells.size()) != n) return false;
  for (const auto& row : pattern.cells) {
    if (static_cast<int>(row.size()) != m) return false;
    for (const Tile& t : row)
      if (t.p != b.p() || !b.contains(t)) return false;
  }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < m; ++x) {
      const Tile& here = pattern.cells[y][x];
      if (here.right != pattern.cells[y][(x + 1) % m].left) return false;
      if (here.top != pattern.cells[(y + 1) % n][x].bottom) return false;
    }
  return true;
}

Outcome outcome(const Verdict& v) {
  if (std::holds_alternative<Periodic>(v)) return Outcome::periodic;
  if (std::holds_alternative<Empty>(v)) return Outcome::empty;
  return Outcome::unknown;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::periodic: return "periodic";
    case Outcome::empty: return "empty";
    case Outcome::unknown: return "unknown";
  }
  return "?";
}

PeriodicPattern witness_from_cycle(const TransferOperator& op, const NilpotencyCertificate& cycle) {
  const int len = static_cast<int>(cycle.cycle_labels.size());
  const int w = op.width();
  PeriodicPattern p;
  if (op.orientation() == Orientation::rows) {
    // Each label is a row; the walk stacks them upward.
    p.m = w;
    p.n = len;
    p.cells = cycle.cycle_labels;
  } else {
    // Each label is a column listed bottom to top; the walk advances rightward.
    p.m = len;
    p.n = w;
    p.cells.assign(w, std::vector<Tile>(len));
    for (int x = 0; x < len; ++x)
      for (int y = 0; y < w; ++y) p.cells[y][x] = cycle.cycle_labels[x][y];
  }
  return p;
}

namespace {

std::vector<Orientation> selected(OrientationChoice c) {
  switch (c) {
    case OrientationChoice::rows: return {Orientation::rows};
    case OrientationChoice::columns: return {Orientation::columns};
    case OrientationChoice::both: break;
  }
  return {Orientation::rows, Orientation::columns};
}

NilpotencyCertificate run(const TransferOperator& op, NilpotencyMethod method) {
  return method == NilpotencyMethod::scc ? is_nilpotent_scc(op) : is_nilpotent_reduction(op);
}

TransferLimits limits_of(const Budgets& budgets) {
  return {budgets.state_cap, budgets.strip_cap};
}

int width_limit(const TileSet& b, const Budgets& budgets) {
  return std::min(budgets.max_width, max_width(b.p()));
}

// One width of the trace search. Sets `capped` when no orientation could be built.
std::optional<Periodic> trace_step(const TileSet& b, int m, const Budgets& budgets, bool& capped) {
  capped = true;
  for (Orientation o : selected(budgets.orientations)) {
    const auto op = build_transfer(b, m, OperatorKind::wrapped, o, limits_of(budgets));
    if (op.truncated()) continue;
    capped = false;
    const auto cert = run(op, budgets.method);
    if (cert.nilpotent) continue;
    Periodic out{witness_from_cycle(op, cert), m, o, false};
    if (!validate_witness(out.witness, b))
      throw std::logic_error("cycle of the trace operator produced an invalid witness");
    return out;
  }
  if (capped && budgets.sheared_fallback)
    if (auto w = sheared_search(b, m, budgets.sheared_nodes_per_shift))
      return Periodic{std::move(*w), m, Orientation::rows, true};
  return std::nullopt;
}

std::optional<Empty> free_step(const TileSet& b, int m, const Budgets& budgets, bool& capped) {
  capped = true;
  for (Orientation o : selected(budgets.orientations)) {
    const auto op = build_transfer(b, m, OperatorKind::free_boundary, o, limits_of(budgets));
    if (op.truncated()) continue;
    capped = false;
    auto cert = run(op, budgets.method);
    if (cert.nilpotent) return Empty{m, o, std::move(cert)};
  }
  return std::nullopt;
}

}  // namespace

std::variant<Periodic, Unknown> is_cycle_generator(const TileSet& b, const Budgets& budgets) {
  Unknown unknown;
  for (int m = 1; m <= width_limit(b, budgets); ++m) {
    bool capped = false;
    if (auto found = trace_step(b, m, budgets, capped)) return std::move(*found);
    if (capped) {
      unknown.state_cap_hit = true;
      unknown.skipped_widths.push_back(m);
    }
    unknown.max_width_tried = m;
  }
  return unknown;
}

std::variant<Empty, Unknown> is_empty(const TileSet& b, const Budgets& budgets) {
  Unknown unknown;
  for (int m = 1; m <= width_limit(b, budgets); ++m) {
    bool capped = false;
    if (auto found = free_step(b, m, budgets, capped)) return std::move(*found);
    if (capped) {
      unknown.state_cap_hit = true;
      unknown.skipped_widths.push_back(m);
    }
    unknown.max_width_tried = m;
  }
  return unknown;
}

Verdict decide(const TileSet& b, const Budgets& budgets) {
  Unknown unknown;
  for (int m = 1; m <= width_limit(b, budgets); ++m) {
    bool trace_capped = false, free_capped = false;
    if (auto found = trace_step(b, m, budgets, trace_capped)) return std::move(*found);
    if (auto found = free_step(b, m, budgets, free_capped)) return std::move(*found);
    if (trace_capped || free_capped) unknown.state_cap_hit = true;
    if (trace_capped && free_capped) unknown.skipped_widths.push_back(m);
    unknown.max_width_tried = m;
  }
  return unknown;
}

bool verify(const TileSet& b, const Verdict& v) {
  if (const auto* p = std::get_if<Periodic>(&v)) return validate_witness(p->witness, b);
  const auto* e = std::get_if<Empty>(&v);
  if (!e || !e->certificate.nilpotent || e->width < 1 || e->width > max_width(b.p())) return false;
  TransferLimits limits;
  limits.state_cap = std::max<std::size_t>(e->certificate.elimination_order.size(), 1);
  limits.strip_cap = UINT64_MAX;
  const auto op = build_transfer(b, e->width, OperatorKind::free_boundary, e->orientation, limits);
  return validate_certificate(op, e->certificate);
}

std::optional<PeriodicPattern> sheared_search(const TileSet& b, int m, std::uint64_t nodes_per_shift) {
  const auto tiles = b.tiles();
  if (tiles.empty() || m < 1) return std::nullopt;
  std::vector<int> shifts(m);
  std::iota(shifts.begin(), shifts.end(), 0);
  std::stable_sort(shifts.begin(), shifts.end(),
                   [m](int a, int c) { return std::min(a, m - a) < std::min(c, m - c); });

  std::vector<const Tile*> row(m);
  for (int s : shifts) {
    std::uint64_t nodes = 0;
    auto rec = [&](auto&& self, int k) -> bool {
      if (k == m) return true;
      if (++nodes > nodes_per_shift) return false;
      const int above = (k + s) % m;      // row[k].top meets row[above].bottom
      const int below = (k - s + m) % m;  // row[below].top meets row[k].bottom
      for (const Tile& t : tiles) {
        if (k > 0 && row[k - 1]->right != t.left) continue;
        if (k == m - 1 && t.right != (k == 0 ? t : *row[0]).left) continue;
        if (above < k && t.top != row[above]->bottom) continue;
        if (below < k && row[below]->top != t.bottom) continue;
        if (above == k && t.top != t.bottom) continue;
        row[k] = &t;
        if (self(self, k + 1)) return true;
        if (nodes > nodes_per_shift) return false;
      }
      return false;
    };
    if (!rec(rec, 0)) continue;
    PeriodicPattern p;
    p.m = m;
    p.n = m / std::gcd(m, s);
    p.cells.assign(p.n, std::vector<Tile>(m));
    for (int y = 0; y < p.n; ++y)
      for (int x = 0; x < m; ++x) p.cells[y][x] = *row[(x + static_cast<std::int64_t>(s) * y) % m];
    if (!validate_witness(p, b)) throw std::logic_error("sheared row produced an invalid witness");
    return p;
  }
  return std::nullopt;
}

namespace {

constexpr double kBruteForceGuard = 1e8;

void guard(const TileSet& b, int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("dimensions must be positive");
  double total = 1;
  for (int i = 0; i < m * n && total <= kBruteForceGuard; ++i) total *= b.size();
  if (total > kBruteForceGuard)
    throw std::invalid_argument("brute force guard exceeded: |B|^(m*n) > 1e8");
}

std::uint64_t brute_force(const TileSet& b, int m, int n, bool torus) {
  guard(b, m, n);
  const auto tiles = b.tiles();
  std::vector<const Tile*> grid(m * n);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int cell) -> void {
    if (cell == m * n) {
      ++count;
      return;
    }
    const int x = cell % m, y = cell / m;
    for (const Tile& t : tiles) {
      if (x > 0 && grid[cell - 1]->right != t.left) continue;
      if (y > 0 && grid[cell - m]->top != t.bottom) continue;
      // With m or n equal to 1 the wrap partner is this very cell.
      if (torus && x == m - 1 && t.right != (x == 0 ? t : *grid[cell - x]).left) continue;
      if (torus && y == n - 1 && t.top != (y == 0 ? t : *grid[x]).bottom) continue;
      grid[cell] = &t;
      self(self, cell + 1);
    }
  };
  rec(rec, 0);
  return count;
}

}  // namespace

std::uint64_t brute_force_torus(const TileSet& b, int m, int n) { return brute_force(b, m, n, true); }
std::uint64_t brute_force_rect(const TileSet& b, int m, int n) { return brute_force(b, m, n, false); }

nlohmann::json to_json(const Verdict& v, int p) {
  nlohmann::json j;
  if (const auto* per = std::get_if<Periodic>(&v)) {
    j["outcome"] = "periodic";
    j["p"] = p;
    j["m"] = per->witness.m;
    j["n"] = per->witness.n;
    auto& cells = j["cells"] = nlohmann::json::array();
    for (const auto& row : per->witness.cells) {
      auto& r = cells.emplace_back(nlohmann::json::array());
      for (const Tile& t : row) r.push_back(phi(t));
    }
    j["width"] = per->width;
    j["orientation"] = to_string(per->orientation);
    j["sheared"] = per->sheared;
  } else if (const auto* e = std::get_if<Empty>(&v)) {
    j["outcome"] = "empty";
    j["p"] = p;
    j["width"] = e->width;
    j["orientation"] = to_string(e->orientation);
    j["certificate"] = to_json(e->certificate, p, e->width);
  } else {
    const auto& u = std::get<Unknown>(v);
    j["outcome"] = "unknown";
    j["max_width"] = u.max_width_tried;
    j["state_cap_hit"] = u.state_cap_hit;
    j["skipped_widths"] = u.skipped_widths;
  }
  return j;
}

namespace {

Orientation orientation_from(const std::string& s) {
  if (s == "rows") return Orientation::rows;
  if (s == "columns") return Orientation::columns;
  throw std::invalid_argument("unknown orientation '" + s + "'");
}

}  // namespace

Verdict verdict_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("outcome").get<std::string>();
    if (kind == "periodic") {
      const int p = j.at("p").get<int>();
      Periodic out;
      out.witness.m = j.at("m").get<int>();
      out.witness.n = j.at("n").get<int>();
      for (const auto& row : j.at("cells")) {
        auto& r = out.witness.cells.emplace_back();
        for (const auto& n : row) r.push_back(tile_from_phi(n.get<int>(), p));
      }
      out.width = j.value("width", out.witness.m);
      out.orientation = orientation_from(j.value("orientation", std::string("rows")));
      out.sheared = j.value("sheared", false);
      return out;
    }
    if (kind == "empty") {
      const int p = j.at("p").get<int>();
      Empty out;
      out.width = j.at("width").get<int>();
      out.orientation = orientation_from(j.value("orientation", std::string("rows")));
      out.certificate = certificate_from_json(j.at("certificate"), p);
      return out;
    }
    if (kind == "unknown") {
      Unknown out;
      out.max_width_tried = j.at("max_width").get<int>();
      out.state_cap_hit = j.value("state_cap_hit", false);
      out.skipped_widths = j.value("skipped_widths", std::vector<int>{});
      return out;
    }
    throw std::invalid_argument("unknown outcome '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed verdict: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("malformed verdict: ") + e.what());
  }
}

}  // namespace tessella
