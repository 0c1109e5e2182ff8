#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tessella/symmetry.hpp"
#include "tessella/transfer.hpp"

using namespace tessella;

namespace {

TileSet random_set(std::mt19937_64& rng, int max_size) {
  const int colors = rng() & 1 ? 2 : 3;
  return TileSet::from_phis(3, oracle::random_phis(rng, 3, colors, 1 + static_cast<int>(rng() % max_size)));
}

}  // namespace

TEST_CASE("small operators") {
  const auto one = build_transfer(TileSet::from_phis(3, {1}), 1, OperatorKind::wrapped, Orientation::rows);
  CHECK(one.state_count() == 1);
  CHECK(one.strip_count() == 1);
  CHECK(one.dump() == "0 -> 0 x1\n");
  const auto empty = build_transfer(TileSet(3), 3, OperatorKind::free_boundary, Orientation::rows);
  CHECK(empty.state_count() == 0);
  CHECK_FALSE(empty.truncated());
  const auto checker = build_transfer(TileSet::from_phis(3, {5, 37}), 2, OperatorKind::wrapped, Orientation::rows);
  CHECK(closed_walks(checker, 2) > 0);
  CHECK_THROWS_AS(build_transfer(TileSet(3), 0, OperatorKind::wrapped, Orientation::rows), std::invalid_argument);
}

TEST_CASE("word strings") {
  CHECK(word_to_string(word_from_string("0121", 3), 3, 4) == "0121");
  CHECK_THROWS_AS(word_from_string("03", 3), std::invalid_argument);
}

TEST_CASE("known small counts") {
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      CHECK(gamma(TileSet::from_phis(3, {1}), m, n).value == 1);
      CHECK(sigma_count(TileSet::from_phis(3, {1}), m, n).value == 1);
    }
  CHECK(gamma(TileSet::of_group(3, TileGroup::G0), 1, 1).value == 9);
  CHECK(gamma(TileSet::from_phis(3, {5, 37}), 2, 2).value == 2);
  CHECK(sigma_count(TileSet::universe(3), 2, 2).value == 531441);
  CHECK(sigma_count(TileSet(3), 1, 1).value == 0);
}

TEST_CASE("counts equal brute force, 200 random cases") {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 200; ++i) {
    const TileSet b = random_set(rng, 6);
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    const auto tiles = oracle::decode_all(b.phis(), 3);
    INFO(b.to_text() << " m=" << m << " n=" << n);
    CHECK(gamma(b, m, n).value == oracle::count_grid(tiles, m, n, true));
    CHECK(sigma_count(b, m, n).value == oracle::count_grid(tiles, m, n, false));
  }
}

TEST_CASE("columns orientation counts the transposed torus") {
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 60; ++i) {
    const TileSet b = random_set(rng, 6);
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    // Columns of height m, advanced n times: an n-wide, m-high torus.
    const auto op = build_transfer(b, m, OperatorKind::wrapped, Orientation::columns);
    CHECK(closed_walks(op, n) == oracle::count_grid(oracle::decode_all(b.phis(), 3), n, m, true));
  }
}

TEST_CASE("rotation duality and trace consistency") {
  std::mt19937_64 rng(1003);
  GroupElement rho;
  rho.tau = {1, false};
  for (int i = 0; i < 60; ++i) {
    const TileSet b = random_set(rng, 6);
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    CHECK(gamma(b, m, n).value == gamma(apply_set(rho, b), n, m).value);
    CHECK(gamma(b, m, n).value ==
          closed_walks(build_transfer(b, m, OperatorKind::wrapped, Orientation::rows), n));
  }
}

TEST_CASE("monotonicity") {
  std::mt19937_64 rng(1004);
  for (int i = 0; i < 60; ++i) {
    const TileSet b = random_set(rng, 5);
    TileSet bigger = b;
    bigger.insert(1 + static_cast<int>(rng() % 81));
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    CHECK(gamma(b, m, n).value <= gamma(bigger, m, n).value);
    CHECK(sigma_count(b, m, n).value <= sigma_count(bigger, m, n).value);
  }
}

TEST_CASE("block recurrence agrees with the lazy builder, 100 random sets at m = 3") {
  std::mt19937_64 rng(1005);
  for (int i = 0; i < 100; ++i) {
    const TileSet b = TileSet::from_phis(3, oracle::random_phis(rng, 3, 3, 6));
    const auto kind = i % 2 ? OperatorKind::wrapped : OperatorKind::free_boundary;
    CHECK(build_v_by_recurrence(b, 3, kind) == to_dense(build_transfer(b, 3, kind, Orientation::rows)));
  }
  const auto full = build_v_by_recurrence(TileSet::universe(3), 2);
  CHECK(std::all_of(full.data.begin(), full.data.end(), [](std::uint64_t v) { return v > 0; }));
  const auto zero = build_v_by_recurrence(TileSet(3), 2);
  CHECK(std::all_of(zero.data.begin(), zero.data.end(), [](std::uint64_t v) { return v == 0; }));
  CHECK_THROWS_AS(build_v_by_recurrence(TileSet(3), 5), std::invalid_argument);
}

TEST_CASE("arc labels are admissible strips") {
  std::mt19937_64 rng(1006);
  for (int i = 0; i < 40; ++i) {
    const TileSet b = random_set(rng, 8);
    const auto op = build_transfer(b, 1 + static_cast<int>(rng() % 4), rng() & 1 ? OperatorKind::wrapped : OperatorKind::free_boundary,
                                   rng() & 1 ? Orientation::rows : Orientation::columns);
    for (std::uint32_t s = 0; s < op.state_count(); ++s)
      for (const Arc& a : op.successors(s)) {
        const auto strip = op.realize(op.state(s), op.state(a.target));
        REQUIRE(strip);
        CHECK(op.is_strip(op.state(s), op.state(a.target), *strip));
        for (const Tile& t : *strip) CHECK(b.contains(phi(t)));
      }
  }
}

TEST_CASE("state cap truncates and counts refuse") {
  TransferLimits tight;
  tight.state_cap = 3;
  const auto op = build_transfer(TileSet::universe(3), 3, OperatorKind::free_boundary, Orientation::rows, tight);
  CHECK(op.truncated());
  CHECK(op.state_count() == 0);
  CHECK_THROWS_AS(gamma(TileSet::universe(3), 3, 2, tight), CountUnavailable);
}
