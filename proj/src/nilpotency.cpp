#include "tessella/nilpotency.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

namespace tessella {

namespace {

constexpr std::size_t kCycleStarts = 64;
constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

void require_complete(const TransferOperator& op) {
  if (op.truncated())
    throw TruncatedOperator("operator truncated: " + op.truncation_reason());
}

std::vector<std::uint32_t> unique_successors(const TransferOperator& op, std::uint32_t v,
                                             std::vector<std::uint32_t>& buf) {
  buf.clear();
  op.strips_from(v, buf);
  std::sort(buf.begin(), buf.end());
  buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
  return buf;
}

// Shortest closed walk through one of the first few core states, then the least such
// walk in state order. Every core state must lie in the same region where cycles exist;
// states off every cycle are skipped.
std::vector<std::uint32_t> short_cycle(const TransferOperator& op,
                                       const std::vector<std::uint8_t>& in_core) {
  const std::size_t n = op.state_count();
  std::vector<std::uint32_t> dist(n, kUnseen), touched, buf;
  auto reset = [&] {
    for (auto v : touched) dist[v] = kUnseen;
    touched.clear();
  };

  std::uint32_t best_len = kUnseen, best_start = 0;
  std::size_t tried = 0;
  for (std::uint32_t s = 0; s < n && tried < kCycleStarts; ++s) {
    if (!in_core[s]) continue;
    ++tried;
    std::deque<std::uint32_t> queue{s};
    dist[s] = 0;
    touched.push_back(s);
    std::uint32_t found = kUnseen;
    while (!queue.empty() && found == kUnseen) {
      const auto u = queue.front();
      queue.pop_front();
      if (dist[u] + 1 >= best_len) break;
      for (auto v : unique_successors(op, u, buf)) {
        if (!in_core[v]) continue;
        if (v == s) {
          found = dist[u] + 1;
          break;
        }
        if (dist[v] != kUnseen) continue;
        dist[v] = dist[u] + 1;
        touched.push_back(v);
        queue.push_back(v);
      }
    }
    reset();
    if (found < best_len) {
      best_len = found;
      best_start = s;
      if (best_len == 1) break;
    }
  }
  if (best_len == kUnseen) return {};

  // Distance to the start, backwards, then greedy least forward walk.
  const std::uint32_t s = best_start;
  {
    std::deque<std::uint32_t> queue{s};
    dist[s] = 0;
    touched.push_back(s);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      if (dist[u] + 1 >= best_len) continue;
      buf.clear();
      op.strips_into(u, buf);
      for (auto v : buf) {
        if (!in_core[v] || dist[v] != kUnseen) continue;
        dist[v] = dist[u] + 1;
        touched.push_back(v);
        queue.push_back(v);
      }
    }
  }
  std::vector<std::uint32_t> walk{s};
  std::uint32_t cur = s;
  for (std::uint32_t j = 1; j < best_len; ++j) {
    std::uint32_t next = kUnseen;
    for (auto v : unique_successors(op, cur, buf))
      if (in_core[v] && v != s && dist[v] == best_len - j) {
        next = v;
        break;
      }
    walk.push_back(next);
    cur = next;
  }
  reset();
  return walk;
}

NilpotencyCertificate cycle_certificate(const TransferOperator& op,
                                        const std::vector<std::uint32_t>& walk) {
  NilpotencyCertificate cert;
  cert.nilpotent = false;
  for (std::size_t j = 0; j < walk.size(); ++j) {
    const Word from = op.state(walk[j]);
    const Word to = op.state(walk[(j + 1) % walk.size()]);
    cert.cycle.push_back(from);
    cert.cycle_labels.push_back(*op.realize(from, to));
  }
  return cert;
}

}  // namespace

NilpotencyCertificate is_nilpotent_reduction(const TransferOperator& op) {
  require_complete(op);
  const auto n = static_cast<std::uint32_t>(op.state_count());
  std::vector<std::uint64_t> out_deg(n), in_deg(n);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t i = 0; i < n; ++i) {
    out_deg[i] = op.out_strips(i);
    in_deg[i] = op.in_strips(i);
    if (out_deg[i] == 0 || in_deg[i] == 0) ready.push(i);
  }
  std::vector<std::uint8_t> alive(n, 1);
  NilpotencyCertificate cert;
  std::vector<std::uint32_t> buf;
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    if (!alive[i]) continue;
    alive[i] = 0;
    cert.elimination_order.push_back(op.state(i));
    buf.clear();
    op.strips_from(i, buf);
    for (auto t : buf)
      if (alive[t] && --in_deg[t] == 0) ready.push(t);
    buf.clear();
    op.strips_into(i, buf);
    for (auto s : buf)
      if (alive[s] && --out_deg[s] == 0) ready.push(s);
  }
  if (cert.elimination_order.size() == n) return cert;
  // What survives is a nonempty set in which every state has both an incoming and an
  // outgoing arc, so it contains a cycle.
  return cycle_certificate(op, short_cycle(op, alive));
}

NilpotencyCertificate is_nilpotent_scc(const TransferOperator& op) {
  require_complete(op);
  const auto n = static_cast<std::uint32_t>(op.state_count());
  std::vector<std::uint32_t> index(n, kUnseen), low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t v;
    std::vector<std::uint32_t> succ;
    std::size_t pos = 0;
  };
  std::vector<Frame> frames;
  std::vector<std::uint32_t> buf;
  std::uint32_t counter = 0;
  NilpotencyCertificate cert;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnseen) continue;
    auto open = [&](std::uint32_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = 1;
      frames.push_back({v, unique_successors(op, v, buf), 0});
    };
    open(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.pos < f.succ.size()) {
        const auto w = f.succ[f.pos++];
        if (index[w] == kUnseen) {
          open(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const auto v = f.v;
      const bool self_loop = std::binary_search(f.succ.begin(), f.succ.end(), v);
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] != index[v]) continue;
      if (stack.back() != v || self_loop) {
        // A component with a cycle: restrict the cycle search to it.
        std::vector<std::uint8_t> in_core(n, 0);
        while (true) {
          const auto w = stack.back();
          stack.pop_back();
          in_core[w] = 1;
          if (w == v) break;
        }
        return cycle_certificate(op, short_cycle(op, in_core));
      }
      stack.pop_back();
      on_stack[v] = 0;
      // All successors are already erased, so v has a zero row now.
      cert.elimination_order.push_back(op.state(v));
    }
  }
  return cert;
}

bool validate_certificate(const TransferOperator& op, const NilpotencyCertificate& cert) {
  if (op.truncated()) return false;
  const auto n = op.state_count();
  std::vector<std::uint32_t> buf;
  if (cert.nilpotent) {
    if (cert.elimination_order.size() != n) return false;
    std::vector<std::uint8_t> alive(n, 1);
    for (Word w : cert.elimination_order) {
      const auto i = op.index_of(w);
      if (!i || !alive[*i]) return false;
      buf.clear();
      op.strips_from(*i, buf);
      const bool zero_row =
          std::none_of(buf.begin(), buf.end(), [&](std::uint32_t t) { return alive[t]; });
      buf.clear();
      op.strips_into(*i, buf);
      const bool zero_col =
          std::none_of(buf.begin(), buf.end(), [&](std::uint32_t s) { return alive[s]; });
      if (!zero_row && !zero_col) return false;
      alive[*i] = 0;
    }
    return true;
  }
  const auto len = cert.cycle.size();
  if (len == 0 || cert.cycle_labels.size() != len) return false;
  for (std::size_t j = 0; j < len; ++j)
    if (!op.is_strip(cert.cycle[j], cert.cycle[(j + 1) % len], cert.cycle_labels[j]))
      return false;
  return true;
}

nlohmann::json to_json(const NilpotencyCertificate& cert, int p, int m) {
  nlohmann::json j;
  if (cert.nilpotent) {
    j["verdict"] = "nilpotent";
    auto& order = j["order"] = nlohmann::json::array();
    for (Word w : cert.elimination_order) order.push_back(word_to_string(w, p, m));
    return j;
  }
  j["verdict"] = "cycle";
  auto& walk = j["walk"] = nlohmann::json::array();
  for (Word w : cert.cycle) walk.push_back(word_to_string(w, p, m));
  auto& labels = j["labels"] = nlohmann::json::array();
  for (const auto& strip : cert.cycle_labels) {
    auto& row = labels.emplace_back(nlohmann::json::array());
    for (const Tile& t : strip) row.push_back(phi(t));
  }
  return j;
}

NilpotencyCertificate certificate_from_json(const nlohmann::json& j, int p) {
  try {
    NilpotencyCertificate cert;
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict == "nilpotent") {
      for (const auto& w : j.at("order")) cert.elimination_order.push_back(
          word_from_string(w.get<std::string>(), p));
      return cert;
    }
    if (verdict != "cycle") throw std::invalid_argument("unknown verdict '" + verdict + "'");
    cert.nilpotent = false;
    for (const auto& w : j.at("walk")) cert.cycle.push_back(word_from_string(w.get<std::string>(), p));
    for (const auto& row : j.at("labels")) {
      auto& strip = cert.cycle_labels.emplace_back();
      for (const auto& n : row) strip.push_back(tile_from_phi(n.get<int>(), p));
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace tessella
