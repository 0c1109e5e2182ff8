#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tessella/symmetry.hpp"

using namespace tessella;

namespace {

GroupElement element(int rotation, bool reflect) {
  GroupElement g;
  g.tau = {static_cast<std::uint8_t>(rotation), reflect};
  return g;
}

GroupElement random_element(std::mt19937_64& rng, int p) {
  const auto& group = SymmetryGroup::of(p);
  return group.element(rng() % group.size());
}

oracle::Edges edges(const Tile& t) { return {t.bottom, t.left, t.top, t.right}; }

}  // namespace

TEST_CASE("generators on tiles") {
  const Tile two = tile_from_phi(2, 3);
  CHECK(phi(apply(GroupElement{}, two)) == 2);
  CHECK(phi(apply(element(1, false), two)) == 28);
  CHECK(phi(apply(element(0, true), tile_from_phi(4, 3))) == 28);
  for (int n = 1; n <= 81; ++n) {
    const Tile t = tile_from_phi(n, 3);
    CHECK(edges(apply(element(1, false), t)) == oracle::rotate(oracle::decode(n, 3)));
    CHECK(edges(apply(element(0, true), t)) == oracle::reflect(oracle::decode(n, 3)));
  }
}

TEST_CASE("dihedral relations as actions") {
  const auto rho = element(1, false), m = element(0, true);
  for (int n = 1; n <= 81; ++n) {
    const Tile t = tile_from_phi(n, 3);
    CHECK(apply(rho, apply(rho, apply(rho, apply(rho, t)))) == t);
    CHECK(apply(m, apply(m, t)) == t);
    const auto mr = compose(m, rho);
    CHECK(apply(mr, apply(mr, t)) == t);
  }
}

TEST_CASE("composition matches sequential application, 1000 triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const int p = 2 + static_cast<int>(rng() % 3);
    const auto a = random_element(rng, p), b = random_element(rng, p);
    const Tile t = tile_from_phi(1 + static_cast<int>(rng() % universe_size(p)), p);
    REQUIRE(apply(compose(a, b), t) == apply(a, apply(b, t)));
  }
}

TEST_CASE("group size and orbit sizes") {
  CHECK(SymmetryGroup::of(3).size() == 288);
  CHECK(SymmetryGroup::of(2).size() == 32);
  auto ones = orbit(TileSet::from_phis(3, {1}));
  CHECK(ones.size() == 9);
  for (const auto& s : ones) CHECK(classify(s.tiles().front()) == TileGroup::G0);
  CHECK(orbit(TileSet(3)).size() == 1);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const TileSet b = TileSet::from_phis(3, oracle::random_phis(rng, 3, 3, 1 + static_cast<int>(rng() % 8)));
    const auto o = orbit(b);
    CHECK(288 % o.size() == 0);
    CHECK(canonical(b).orbit_size == o.size());
    CHECK(canonical(b).representative == o.front());
  }
}

TEST_CASE("canonical form") {
  CHECK(canonical(TileSet::from_phis(3, {2, 70})).representative ==
        canonical(TileSet::from_phis(3, {2, 40})).representative);
  CHECK_FALSE(canonical(TileSet::from_phis(3, {2, 10})).representative ==
              canonical(TileSet::from_phis(3, {2, 40})).representative);
  CHECK(canonical(TileSet(3)).representative.empty());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const TileSet b = TileSet::from_phis(3, oracle::random_phis(rng, 3, 3, 1 + static_cast<int>(rng() % 10)));
    const auto c = canonical(b);
    CHECK(canonical(c.representative).representative == c.representative);
    const TileSet image = apply_set(random_element(rng, 3), b);
    CHECK(canonical(image).representative == c.representative);
  }
}

TEST_CASE("images against the independent symmetry oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto s = oracle::random_symmetry(rng, 3);
    const auto phis = oracle::random_phis(rng, 3, 3, 1 + static_cast<int>(rng() % 6));
    std::vector<int> image;
    for (int f : phis) image.push_back(oracle::encode(s(oracle::decode(f, 3)), 3));
    // The oracle's element lies in the same orbit, so canonical forms agree.
    CHECK(canonical(TileSet::from_phis(3, image)).representative ==
          canonical(TileSet::from_phis(3, phis)).representative);
  }
}

TEST_CASE("classes of groups are unions of orbits") {
  const auto& group = SymmetryGroup::of(3);
  for (std::size_t g = 0; g < group.size(); ++g)
    for (int n = 1; n <= 81; ++n)
      REQUIRE(classify(apply(group.element(g), tile_from_phi(n, 3))) == classify(tile_from_phi(n, 3)));
  CHECK(is_group_invariant(TileSet::of_group(3, TileGroup::G1)));
  CHECK_FALSE(is_group_invariant(TileSet::from_phis(3, {2})));
}

TEST_CASE("stabilizer of the checkerboard pair") {
  const TileSet b = TileSet::from_phis(3, {5, 37});
  int fixing = 0;
  const auto& group = SymmetryGroup::of(3);
  for (std::size_t g = 0; g < group.size(); ++g)
    if (apply_set(group.element(g), b) == b) ++fixing;
  CHECK(fixing * orbit(b).size() == 288);
  CHECK(apply_set(GroupElement{}, TileSet(3)).empty());
}

TEST_CASE("orbit representatives") {
  std::uint64_t total = 0;
  for (const auto& c : orbit_reps(TileSet::universe(3), 1)) total += c.orbit_size;
  CHECK(total == 81);
  for (int k = 1; k <= 4; ++k) {
    for (const auto& u : {TileSet::of_group(3, TileGroup::G1), TileSet::of_group(3, TileGroup::G2)}) {
      std::uint64_t sum = 0;
      const auto reps = orbit_reps(u, k);
      for (const auto& c : reps) sum += c.orbit_size;
      CHECK(sum == binomial(36, k));
      // The growing strategy gives the same list.
      OrbitRepOptions grow;
      grow.filtering_threshold = 0;
      const auto grown = orbit_reps(u, k, grow);
      REQUIRE(grown.size() == reps.size());
      for (std::size_t i = 0; i < reps.size(); ++i) CHECK(grown[i].representative == reps[i].representative);
    }
  }
  const auto g2pairs = orbit_reps(TileSet::of_group(3, TileGroup::G2), 2);
  const auto target = canonical(TileSet::from_phis(3, {5, 37})).representative;
  CHECK(std::any_of(g2pairs.begin(), g2pairs.end(), [&](const CanonicalForm& c) { return c.representative == target; }));
  CHECK_THROWS_AS(orbit_reps(TileSet::from_phis(3, {2, 3}), 1), std::invalid_argument);
}
