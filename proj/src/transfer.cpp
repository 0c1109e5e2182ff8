#include "tessella/transfer.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace tessella {

namespace {

using u128 = unsigned __int128;
constexpr u128 kSaturate = ~u128{0} >> 1;

u128 sat_add(u128 a, u128 b) { return a > kSaturate - b ? kSaturate : a + b; }
std::uint64_t clamp64(u128 v) { return v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v); }

// Dense word lookup below this many words, binary search above.
constexpr Word kDenseIndexLimit = Word{1} << 22;

StripTile to_strip_tile(const Tile& t, Orientation o) {
  if (o == Orientation::rows) return {t.bottom, t.left, t.top, t.right, phi(t)};
  // A column climbs upward: the tile above continues the strip, so bottom/top play the
  // role of left/right and the column's left/right words are the states.
  return {t.left, t.bottom, t.right, t.top, phi(t)};
}

}  // namespace

std::string word_to_string(Word w, int p, int m) {
  std::string s(m, '0');
  for (int k = m - 1; k >= 0; --k) {
    s[k] = static_cast<char>('0' + w % p);
    w /= p;
  }
  return s;
}

Word word_from_string(std::string_view s, int p) {
  if (s.empty() || static_cast<int>(s.size()) > max_width(p))
    throw std::invalid_argument("bad word length: '" + std::string(s) + "'");
  Word w = 0;
  for (char c : s) {
    if (c < '0' || c >= '0' + p) throw std::invalid_argument("bad word: '" + std::string(s) + "'");
    w = w * p + static_cast<Word>(c - '0');
  }
  return w;
}

std::string_view to_string(OperatorKind k) {
  return k == OperatorKind::free_boundary ? "free" : "wrapped";
}

std::string_view to_string(Orientation o) { return o == Orientation::rows ? "rows" : "columns"; }

int max_width(int p) {
  universe_size(p);
  u128 v = 1;
  int m = 0;
  while (v * static_cast<unsigned>(p) <= u128{UINT64_MAX} + 1) {
    v *= static_cast<unsigned>(p);
    ++m;
  }
  return m;
}

std::size_t default_state_cap() {
  if (const char* env = std::getenv("TESSELLA_STATE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultStateCap;
}

std::optional<std::uint32_t> TransferOperator::index_of(Word w) const {
  if (!dense_index_.empty()) {
    if (w >= dense_index_.size() || dense_index_[w] == 0) return std::nullopt;
    return dense_index_[w] - 1;
  }
  const auto it = std::lower_bound(states_.begin(), states_.end(), w);
  if (it == states_.end() || *it != w) return std::nullopt;
  return static_cast<std::uint32_t>(it - states_.begin());
}

template <class Emit>
void TransferOperator::walk(Word w, bool by_bottom, Emit&& emit) const {
  int d[64];
  for (int k = 0; k < m_; ++k) d[k] = digit(w, k);
  const auto& table = by_bottom ? by_left_bottom_ : by_left_top_;
  auto rec = [&](auto&& self, int k, int h0, int h, Word other) -> void {
    if (k == m_) {
      emit(other);
      return;
    }
    for (const StripTile& s : table[h * p_ + d[k]]) {
      if (!reach_[(k + 1) * tracks_ + track(h0, s.right)]) continue;
      self(self, k + 1, h0, s.right, other * p_ + (by_bottom ? s.top : s.bottom));
    }
  };
  for (int h = 0; h < p_; ++h)
    if (reach_[track(h, h)]) rec(rec, 0, h, h, 0);
}

void TransferOperator::strips_from(std::uint32_t i, std::vector<std::uint32_t>& targets) const {
  walk(states_[i], true, [&](Word top) { targets.push_back(*index_of(top)); });
}

void TransferOperator::strips_into(std::uint32_t i, std::vector<std::uint32_t>& sources) const {
  walk(states_[i], false, [&](Word bottom) { sources.push_back(*index_of(bottom)); });
}

namespace {

std::vector<Arc> aggregate(std::vector<std::uint32_t>& ids) {
  std::sort(ids.begin(), ids.end());
  std::vector<Arc> out;
  for (std::uint32_t id : ids) {
    if (!out.empty() && out.back().target == id)
      ++out.back().multiplicity;
    else
      out.push_back({id, 1});
  }
  return out;
}

}  // namespace

std::vector<Arc> TransferOperator::successors(std::uint32_t i) const {
  std::vector<std::uint32_t> ids;
  strips_from(i, ids);
  return aggregate(ids);
}

std::vector<Arc> TransferOperator::predecessors(std::uint32_t i) const {
  std::vector<std::uint32_t> ids;
  strips_into(i, ids);
  return aggregate(ids);
}

std::uint64_t TransferOperator::count_strips_with(Word w, bool by_bottom) const {
  const auto& table = by_bottom ? by_left_bottom_ : by_left_top_;
  std::vector<u128> cur(tracks_, 0), next(tracks_, 0);
  for (int h = 0; h < p_; ++h)
    if (reach_[track(h, h)]) cur[track(h, h)] = 1;
  for (int k = 0; k < m_; ++k) {
    std::fill(next.begin(), next.end(), 0);
    const int c = digit(w, k);
    for (int s = 0; s < tracks_; ++s) {
      if (cur[s] == 0) continue;
      const int h0 = s / p_, h = s % p_;
      for (const StripTile& t : table[h * p_ + c]) {
        const int ns = track(h0, t.right);
        if (reach_[(k + 1) * tracks_ + ns]) next[ns] = sat_add(next[ns], cur[s]);
      }
    }
    std::swap(cur, next);
  }
  u128 total = 0;
  for (u128 v : cur) total = sat_add(total, v);
  return clamp64(total);
}

std::uint64_t TransferOperator::out_strips(std::uint32_t i) const {
  return count_strips_with(states_[i], true);
}

std::uint64_t TransferOperator::in_strips(std::uint32_t i) const {
  return count_strips_with(states_[i], false);
}

std::vector<std::vector<Arc>> TransferOperator::adjacency() const {
  std::vector<std::vector<Arc>> out(states_.size());
  for (std::uint32_t i = 0; i < states_.size(); ++i) out[i] = successors(i);
  return out;
}

std::optional<std::vector<Tile>> TransferOperator::realize(Word from, Word to) const {
  std::vector<const StripTile*> chosen(m_);
  auto rec = [&](auto&& self, int k, int h0, int h) -> bool {
    if (k == m_) return true;
    const int b = digit(from, k), t = digit(to, k);
    for (const StripTile& s : by_left_bottom_[h * p_ + b]) {
      if (s.top != t || !reach_[(k + 1) * tracks_ + track(h0, s.right)]) continue;
      chosen[k] = &s;
      if (self(self, k + 1, h0, s.right)) return true;
    }
    return false;
  };
  for (int h = 0; h < p_; ++h) {
    if (!reach_[track(h, h)] || !rec(rec, 0, h, h)) continue;
    std::vector<Tile> out;
    out.reserve(m_);
    for (const StripTile* s : chosen) out.push_back(tile_from_phi(s->phi, p_));
    return out;
  }
  return std::nullopt;
}

bool TransferOperator::is_strip(Word from, Word to, std::span<const Tile> strip) const {
  if (static_cast<int>(strip.size()) != m_) return false;
  std::vector<StripTile> s;
  for (const Tile& t : strip) {
    if (t.p != p_ || !tiles_.contains(t)) return false;
    s.push_back(to_strip_tile(t, orientation_));
  }
  for (int k = 0; k < m_; ++k) {
    if (s[k].bottom != digit(from, k) || s[k].top != digit(to, k)) return false;
    if (k + 1 < m_ && s[k].right != s[k + 1].left) return false;
  }
  return kind_ == OperatorKind::free_boundary || s[m_ - 1].right == s[0].left;
}

std::string TransferOperator::word_string(Word w) const {
  std::string s(m_, '0');
  for (int k = 0; k < m_; ++k) s[k] = static_cast<char>('0' + digit(w, k));
  return s;
}

std::optional<Word> TransferOperator::parse_word(std::string_view s) const {
  if (static_cast<int>(s.size()) != m_) return std::nullopt;
  Word w = 0;
  for (char c : s) {
    if (c < '0' || c >= '0' + p_) return std::nullopt;
    w = w * p_ + static_cast<Word>(c - '0');
  }
  return w;
}

std::string TransferOperator::dump() const {
  std::ostringstream os;
  for (std::uint32_t i = 0; i < states_.size(); ++i)
    for (const Arc& a : successors(i))
      os << word_string(states_[i]) << " -> " << word_string(states_[a.target]) << " x"
         << a.multiplicity << "\n";
  return os.str();
}

namespace {

// Words read along one side of the strip, as a subset walk over the automaton states.
struct SideAutomaton {
  int m = 0, p = 0, tracks = 0;
  std::vector<std::uint32_t> trans;  // [track * p + color] -> mask of next tracks
  std::vector<std::uint32_t> alive;  // [k] -> tracks from which position k can complete
  std::uint32_t start = 0;

  std::uint32_t step(std::uint32_t subset, int c, int k) const {
    std::uint32_t next = 0;
    for (std::uint32_t bits = subset; bits; bits &= bits - 1)
      next |= trans[std::countr_zero(bits) * p + c];
    return next & alive[k + 1];
  }

  u128 count() const {
    std::unordered_map<std::uint32_t, u128> cur{{start, 1}}, next;
    for (int k = 0; k < m; ++k) {
      next.clear();
      for (const auto& [subset, n] : cur)
        for (int c = 0; c < p; ++c)
          if (const auto s = step(subset, c, k)) next[s] = sat_add(next[s], n);
      std::swap(cur, next);
    }
    u128 total = 0;
    for (const auto& [subset, n] : cur) total = sat_add(total, n);
    return total;
  }

  void enumerate(std::vector<Word>& out) const {
    auto rec = [&](auto&& self, int k, std::uint32_t subset, Word w) -> void {
      if (k == m) {
        out.push_back(w);
        return;
      }
      for (int c = 0; c < p; ++c)
        if (const auto s = step(subset, c, k)) self(self, k + 1, s, w * p + c);
    };
    if (start) rec(rec, 0, start, 0);
  }
};

}  // namespace

TransferOperator build_transfer(const TileSet& b, int m, OperatorKind kind,
                                Orientation orientation, const TransferLimits& limits) {
  const int p = b.p();
  if (m < 1 || m > max_width(p))
    throw std::invalid_argument("strip width must be in 1.." + std::to_string(max_width(p)) +
                                ", got " + std::to_string(m));
  TransferOperator op;
  op.p_ = p;
  op.m_ = m;
  op.kind_ = kind;
  op.orientation_ = orientation;
  op.tiles_ = b;
  op.tracks_ = kind == OperatorKind::wrapped ? p * p : p;
  op.pow_.assign(m, 1);
  for (int k = m - 2; k >= 0; --k) op.pow_[k] = op.pow_[k + 1] * p;

  op.by_left_bottom_.assign(p * p, {});
  op.by_left_top_.assign(p * p, {});
  for (const Tile& t : b.tiles()) {
    const StripTile s = to_strip_tile(t, orientation);
    op.by_left_bottom_[s.left * p + s.bottom].push_back(s);
    op.by_left_top_[s.left * p + s.top].push_back(s);
  }
  auto by_phi = [](const StripTile& x, const StripTile& y) { return x.phi < y.phi; };
  for (auto& v : op.by_left_bottom_) std::sort(v.begin(), v.end(), by_phi);
  for (auto& v : op.by_left_top_) std::sort(v.begin(), v.end(), by_phi);

  // Backward reachability of the end condition.
  const int tracks = op.tracks_;
  op.reach_.assign((m + 1) * tracks, 0);
  for (int s = 0; s < tracks; ++s)
    op.reach_[m * tracks + s] = kind == OperatorKind::free_boundary || s / p == s % p;
  for (int k = m - 1; k >= 0; --k)
    for (int s = 0; s < tracks; ++s) {
      const int h0 = s / p, h = s % p;
      bool ok = false;
      for (int c = 0; c < p && !ok; ++c)
        for (const StripTile& t : op.by_left_bottom_[h * p + c])
          if (op.reach_[(k + 1) * tracks + op.track(h0, t.right)]) {
            ok = true;
            break;
          }
      op.reach_[k * tracks + s] = ok;
    }

  // Total strips, counted along the automaton.
  {
    std::vector<u128> cur(tracks, 0), next(tracks, 0);
    for (int h = 0; h < p; ++h)
      if (op.reach_[op.track(h, h)]) cur[op.track(h, h)] = 1;
    for (int k = 0; k < m; ++k) {
      std::fill(next.begin(), next.end(), 0);
      for (int s = 0; s < tracks; ++s) {
        if (cur[s] == 0) continue;
        const int h0 = s / p, h = s % p;
        for (int c = 0; c < p; ++c)
          for (const StripTile& t : op.by_left_bottom_[h * p + c]) {
            const int ns = op.track(h0, t.right);
            if (op.reach_[(k + 1) * tracks + ns]) next[ns] = sat_add(next[ns], cur[s]);
          }
      }
      std::swap(cur, next);
    }
    u128 total = 0;
    for (u128 v : cur) total = sat_add(total, v);
    op.strip_count_ = clamp64(total);
    if (total > limits.strip_cap) {
      op.truncated_ = true;
      op.truncation_reason_ = "strip count exceeds cap of " + std::to_string(limits.strip_cap);
      return op;
    }
  }

  auto side = [&](bool bottom) {
    SideAutomaton a;
    a.m = m;
    a.p = p;
    a.tracks = tracks;
    a.trans.assign(tracks * p, 0);
    for (int s = 0; s < tracks; ++s) {
      const int h0 = s / p, h = s % p;
      for (int c = 0; c < p; ++c) {
        const auto& cell = bottom ? op.by_left_bottom_[h * p + c] : op.by_left_top_[h * p + c];
        for (const StripTile& t : cell) a.trans[s * p + c] |= 1u << op.track(h0, t.right);
      }
    }
    a.alive.assign(m + 1, 0);
    for (int k = 0; k <= m; ++k)
      for (int s = 0; s < tracks; ++s)
        if (op.reach_[k * tracks + s]) a.alive[k] |= 1u << s;
    for (int h = 0; h < p; ++h)
      if (op.reach_[op.track(h, h)]) a.start |= 1u << op.track(h, h);
    return a;
  };
  const SideAutomaton bottoms = side(true), tops = side(false);
  const u128 nb = bottoms.count(), nt = tops.count();
  if (nb > limits.state_cap || nt > limits.state_cap) {
    op.truncated_ = true;
    op.truncation_reason_ = "state count exceeds cap of " + std::to_string(limits.state_cap);
    return op;
  }
  std::vector<Word> wb, wt;
  wb.reserve(static_cast<std::size_t>(nb));
  wt.reserve(static_cast<std::size_t>(nt));
  bottoms.enumerate(wb);
  tops.enumerate(wt);
  op.states_.reserve(wb.size() + wt.size());
  std::set_union(wb.begin(), wb.end(), wt.begin(), wt.end(), std::back_inserter(op.states_));
  if (op.states_.size() > limits.state_cap) {
    op.truncated_ = true;
    op.truncation_reason_ = "state count exceeds cap of " + std::to_string(limits.state_cap);
    op.states_.clear();
    op.states_.shrink_to_fit();
    return op;
  }
  if (m < 64 && op.pow_[0] <= kDenseIndexLimit / p) {
    op.dense_index_.assign(op.pow_[0] * p, 0);
    for (std::uint32_t i = 0; i < op.states_.size(); ++i) op.dense_index_[op.states_[i]] = i + 1;
  }
  return op;
}

BigInt closed_walks(const TransferOperator& op, int n) {
  if (op.truncated()) throw CountUnavailable("operator truncated: " + op.truncation_reason());
  if (n < 1) throw std::invalid_argument("walk length must be positive");
  const auto adj = op.adjacency();
  const std::size_t s = adj.size();
  BigInt total = 0;
  std::vector<BigInt> cur(s), next(s);
  for (std::size_t start = 0; start < s; ++start) {
    std::fill(cur.begin(), cur.end(), BigInt(0));
    cur[start] = 1;
    for (int step = 0; step < n; ++step) {
      std::fill(next.begin(), next.end(), BigInt(0));
      for (std::size_t i = 0; i < s; ++i) {
        if (cur[i] == 0) continue;
        for (const Arc& a : adj[i]) next[a.target] += cur[i] * a.multiplicity;
      }
      std::swap(cur, next);
    }
    total += cur[start];
  }
  return total;
}

CountResult gamma(const TileSet& b, int m, int n, const TransferLimits& limits) {
  if (n < 1) throw std::invalid_argument("torus height must be positive");
  const auto op = build_transfer(b, m, OperatorKind::wrapped, Orientation::rows, limits);
  if (op.truncated()) throw CountUnavailable("operator truncated: " + op.truncation_reason());
  return {closed_walks(op, n), m, n};
}

CountResult sigma_count(const TileSet& b, int m, int n, const TransferLimits& limits) {
  if (n < 1) throw std::invalid_argument("rectangle height must be positive");
  const auto op = build_transfer(b, m, OperatorKind::free_boundary, Orientation::rows, limits);
  if (op.truncated()) throw CountUnavailable("operator truncated: " + op.truncation_reason());
  const auto adj = op.adjacency();
  std::vector<BigInt> cur(adj.size(), BigInt(1)), next(adj.size());
  for (int step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), BigInt(0));
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (const Arc& a : adj[i]) next[a.target] += cur[i] * a.multiplicity;
    std::swap(cur, next);
  }
  // After n steps cur[t] counts walks of n strips ending at t.
  BigInt total = 0;
  for (const auto& v : cur) total += v;
  return {total, m, n};
}

DenseMatrix build_v_by_recurrence(const TileSet& b, int m, OperatorKind kind,
                                  Orientation orientation) {
  if (m < 1 || m > 4) throw std::invalid_argument("recurrence builder supports widths 1..4");
  const int p = b.p();
  // blocks[a * p + c]: strips with left end a and right end c.
  std::vector<DenseMatrix> first(p * p, DenseMatrix{static_cast<std::size_t>(p),
                                                    std::vector<std::uint64_t>(p * p, 0)});
  for (const Tile& t : b.tiles()) {
    const StripTile s = to_strip_tile(t, orientation);
    ++first[s.left * p + s.right].at(s.bottom, s.top);
  }
  std::vector<DenseMatrix> blocks = first;
  for (int w = 2; w <= m; ++w) {
    const std::size_t dim = blocks[0].dim * p;
    std::vector<DenseMatrix> next(p * p, DenseMatrix{dim, std::vector<std::uint64_t>(dim * dim, 0)});
    for (int a = 0; a < p; ++a)
      for (int e = 0; e < p; ++e) {
        DenseMatrix& out = next[a * p + e];
        for (int c = 0; c < p; ++c) {
          const DenseMatrix& x = first[a * p + c];
          const DenseMatrix& y = blocks[c * p + e];
          for (std::size_t i1 = 0; i1 < x.dim; ++i1)
            for (std::size_t j1 = 0; j1 < x.dim; ++j1) {
              const auto xv = x.at(i1, j1);
              if (!xv) continue;
              for (std::size_t i2 = 0; i2 < y.dim; ++i2)
                for (std::size_t j2 = 0; j2 < y.dim; ++j2)
                  out.at(i1 * y.dim + i2, j1 * y.dim + j2) += xv * y.at(i2, j2);
            }
        }
      }
    blocks = std::move(next);
  }
  DenseMatrix v{blocks[0].dim, std::vector<std::uint64_t>(blocks[0].dim * blocks[0].dim, 0)};
  for (int a = 0; a < p; ++a)
    for (int e = 0; e < p; ++e) {
      if (kind == OperatorKind::wrapped && a != e) continue;
      const auto& blk = blocks[a * p + e];
      for (std::size_t i = 0; i < v.data.size(); ++i) v.data[i] += blk.data[i];
    }
  return v;
}

DenseMatrix to_dense(const TransferOperator& op) {
  if (op.truncated()) throw CountUnavailable("operator truncated: " + op.truncation_reason());
  Word dim = 1;
  for (int k = 0; k < op.width(); ++k) dim *= op.p();
  DenseMatrix d{dim, std::vector<std::uint64_t>(dim * dim, 0)};
  const auto adj = op.adjacency();
  for (std::uint32_t i = 0; i < adj.size(); ++i)
    for (const Arc& a : adj[i]) d.at(op.state(i), op.state(a.target)) = a.multiplicity;
  return d;
}

}  // namespace tessella
