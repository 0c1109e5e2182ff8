#include <doctest.h>

#include "oracles.hpp"
#include "tessella/decision.hpp"
#include "tessella/tiles.hpp"

using namespace tessella;

TEST_CASE("phi numbering") {
  CHECK(phi(Tile{0, 0, 0, 0, 3}) == 1);
  CHECK(phi(Tile{2, 2, 2, 2, 3}) == 81);
  CHECK(phi(Tile{1, 0, 0, 0, 3}) == 2);
  CHECK(tile_from_phi(1, 3) == Tile{0, 0, 0, 0, 3});
  CHECK(tile_from_phi(41, 3) == Tile{1, 1, 1, 1, 3});
  CHECK_THROWS_AS(tile_from_phi(82, 3), std::out_of_range);
  CHECK_THROWS_AS(tile_from_phi(0, 3), std::out_of_range);
  for (int p = kMinColors; p <= kMaxColors; ++p)
    for (int n = 1; n <= universe_size(p); ++n) {
      const Tile t = tile_from_phi(n, p);
      REQUIRE(phi(t) == n);
      const auto e = oracle::decode(n, p);
      REQUIRE(oracle::Edges{t.bottom, t.left, t.top, t.right} == e);
    }
}

TEST_CASE("group lists and partition") {
  const std::vector<int> g0 = {1, 11, 21, 31, 41, 51, 61, 71, 81};
  CHECK(TileSet::of_group(3, TileGroup::G0).phis() == g0);
  const auto g1 = TileSet::of_group(3, TileGroup::G1), g2 = TileSet::of_group(3, TileGroup::G2);
  CHECK(g1.size() == 36);
  CHECK(g2.size() == 36);
  CHECK((g1.mask() & g2.mask()).empty());
  CHECK((TileSet::of_group(3, TileGroup::G0).mask() | g1.mask() | g2.mask()) == TileSet::universe(3).mask());
  CHECK(classify(tile_from_phi(11, 3)) == TileGroup::G0);
  CHECK(classify(tile_from_phi(2, 3)) == TileGroup::G1);
  CHECK(classify(tile_from_phi(5, 3)) == TileGroup::G2);
  CHECK_NOTHROW(validate_edge_convention());
}

TEST_CASE("periodic pairs") {
  CHECK(phi(g2_partner(tile_from_phi(5, 3))) == 37);
  CHECK(phi(g2_partner(tile_from_phi(37, 3))) == 5);
  CHECK(phi(g2_partner(tile_from_phi(13, 3))) == 29);
  CHECK_THROWS_AS(g2_partner(tile_from_phi(2, 3)), std::invalid_argument);
  std::vector<int> partners;
  for (const Tile& t : g1_partners(tile_from_phi(2, 3))) partners.push_back(phi(t));
  CHECK(partners == std::vector<int>{10, 40, 70});
  bool has_two = false;
  for (const Tile& t : g1_partners(tile_from_phi(10, 3))) has_two = has_two || phi(t) == 2;
  CHECK(has_two);
  CHECK_THROWS_AS(g1_partners(tile_from_phi(5, 3)), std::invalid_argument);
}

TEST_CASE("pair structure against the torus oracle") {
  for (const Tile& t : TileSet::of_group(3, TileGroup::G0).tiles())
    CHECK(oracle::count_grid(oracle::decode_all({phi(t)}, 3), 1, 1, true) == 1);
  for (const Tile& t : TileSet::of_group(3, TileGroup::G2).tiles()) {
    const Tile e = g2_partner(t);
    CHECK(phi(g2_partner(e)) == phi(t));
    CHECK(oracle::count_grid(oracle::decode_all({phi(t), phi(e)}, 3), 2, 2, true) > 0);
    CHECK_FALSE(oracle::has_small_torus(oracle::decode_all({phi(t)}, 3), 4));
    // The partner is the only G2 tile that closes a 2x2 torus with t.
    int closing = 0;
    for (const Tile& u : TileSet::of_group(3, TileGroup::G2).tiles())
      if (phi(u) != phi(t) && oracle::count_grid(oracle::decode_all({phi(t), phi(u)}, 3), 2, 2, true) > 0) ++closing;
    CHECK(closing == 1);
  }
  for (const Tile& t : TileSet::of_group(3, TileGroup::G1).tiles()) {
    const auto ps = g1_partners(t);
    REQUIRE(ps.size() == 3);
    for (const Tile& e : ps) {
      CHECK(oracle::count_grid(oracle::decode_all({phi(t), phi(e)}, 3), 2, 2, true) > 0);
      const TileSet pair = TileSet::from_phis(3, {phi(t), phi(e)});
      CHECK(outcome(decide(pair)) == Outcome::periodic);
    }
    CHECK(outcome(decide(TileSet::from_phis(3, {phi(t)}))) == Outcome::empty);
  }
}

TEST_CASE("tile set forms") {
  const TileSet b = TileSet::from_phis(3, {36, 2, 13, 5});
  CHECK(b.phis() == std::vector<int>{2, 5, 13, 36});
  CHECK(b.to_text() == "p=3;tiles=2,5,13,36");
  CHECK(TileSet::from_text("p=3;tiles=2,5,13,36") == b);
  CHECK(TileSet::from_text("p=3;tiles=").empty());
  CHECK(b.to_json().dump() == R"({"p":3,"tiles":[2,5,13,36]})");
  CHECK(TileSet::from_json(b.to_json()) == b);
  CHECK(parse_tile_list(3, "5,37").phis() == std::vector<int>{5, 37});
  CHECK_THROWS(parse_tile_list(3, "5,x"));
  CHECK_THROWS(parse_tile_list(3, "82"));
  CHECK_THROWS(TileSet::from_text("p=9;tiles=1"));
}
