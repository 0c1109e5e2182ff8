#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tessella/nilpotency.hpp"
#include "tessella/reference_tables.hpp"

using namespace tessella;

TEST_CASE("trivial operators") {
  const auto empty = build_transfer(TileSet(3), 2, OperatorKind::free_boundary, Orientation::rows);
  const auto a = is_nilpotent_reduction(empty);
  CHECK(a.nilpotent);
  CHECK(a.elimination_order.empty());
  const auto loop = build_transfer(TileSet::from_phis(3, {1}), 1, OperatorKind::wrapped, Orientation::rows);
  const auto b = is_nilpotent_reduction(loop), c = is_nilpotent_scc(loop);
  CHECK_FALSE(b.nilpotent);
  CHECK(b.cycle.size() == 1);
  CHECK(c.cycle.size() == 1);
  // A single G1 tile: a few states, no arcs back.
  const auto isolated = build_transfer(TileSet::from_phis(3, {2}), 1, OperatorKind::free_boundary, Orientation::rows);
  CHECK(is_nilpotent_scc(isolated).nilpotent);
}

TEST_CASE("checkerboard has a two-cycle") {
  const auto op = build_transfer(TileSet::from_phis(3, {5, 37}), 2, OperatorKind::wrapped, Orientation::rows);
  const auto cert = is_nilpotent_scc(op);
  CHECK_FALSE(cert.nilpotent);
  CHECK(cert.cycle.size() == 2);
  CHECK(validate_certificate(op, cert));
}

TEST_CASE("slow empty set below its transition width") {
  const TileSet b = TileSet::from_phis(3, reference_tables::slow_empty_set);
  for (int k : {1, 6, 12}) {
    const auto op = build_transfer(b, k, OperatorKind::free_boundary, Orientation::rows);
    const auto cert = is_nilpotent_scc(op);
    CHECK_FALSE(cert.nilpotent);
    CHECK(validate_certificate(op, cert));
  }
}

TEST_CASE("both algorithms agree with each other and the matrix power oracle, 500 operators") {
  std::mt19937_64 rng(2001);
  int nilpotent = 0;
  for (int i = 0; i < 500; ++i) {
    const int colors = rng() & 1 ? 2 : 3;
    const auto phis = oracle::random_phis(rng, 3, colors, 1 + static_cast<int>(rng() % 8));
    const TileSet b = TileSet::from_phis(3, phis);
    const int m = 1 + static_cast<int>(rng() % 3);
    const bool wrapped = rng() & 1;
    const auto op = build_transfer(b, m, wrapped ? OperatorKind::wrapped : OperatorKind::free_boundary, Orientation::rows);
    const auto a = is_nilpotent_scc(op), r = is_nilpotent_reduction(op);
    INFO(b.to_text() << " m=" << m << " wrapped=" << wrapped);
    REQUIRE(a.nilpotent == r.nilpotent);
    CHECK(a.nilpotent == oracle::nilpotent(oracle::row_matrix(oracle::decode_all(phis, 3), 3, m, wrapped)));
    CHECK(validate_certificate(op, a));
    CHECK(validate_certificate(op, r));
    nilpotent += a.nilpotent;
  }
  CHECK(nilpotent > 50);
  CHECK(nilpotent < 450);
}

TEST_CASE("forged certificates are rejected") {
  const auto op = build_transfer(TileSet::from_phis(3, {5, 37}), 2, OperatorKind::wrapped, Orientation::rows);
  auto cert = is_nilpotent_scc(op);
  auto broken = cert;
  broken.cycle_labels[0].front() = tile_from_phi(1, 3);
  CHECK_FALSE(validate_certificate(op, broken));
  NilpotencyCertificate claim;
  for (Word w : op.states()) claim.elimination_order.push_back(w);
  CHECK_FALSE(validate_certificate(op, claim));
  const auto free_op = build_transfer(TileSet::from_phis(3, {2, 3}), 2, OperatorKind::free_boundary, Orientation::rows);
  auto good = is_nilpotent_reduction(free_op);
  REQUIRE(good.nilpotent);
  auto reversed = good;
  std::reverse(reversed.elimination_order.begin(), reversed.elimination_order.end());
  reversed.elimination_order.pop_back();
  CHECK_FALSE(validate_certificate(free_op, reversed));
}

TEST_CASE("certificate json round trip") {
  const auto op = build_transfer(TileSet::from_phis(3, {5, 37}), 2, OperatorKind::wrapped, Orientation::rows);
  const auto cycle = is_nilpotent_scc(op);
  const auto j = to_json(cycle, 3, 2);
  CHECK(j["verdict"] == "cycle");
  CHECK(validate_certificate(op, certificate_from_json(j, 3)));
  const auto free_op = build_transfer(TileSet::from_phis(3, {2, 3}), 2, OperatorKind::free_boundary, Orientation::rows);
  const auto nil = is_nilpotent_reduction(free_op);
  const auto k = to_json(nil, 3, 2);
  CHECK(k["verdict"] == "nilpotent");
  CHECK(validate_certificate(free_op, certificate_from_json(k, 3)));
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json{{"verdict", "maybe"}}, 3), std::invalid_argument);
}

TEST_CASE("truncated operators are refused") {
  TransferLimits tight;
  tight.state_cap = 2;
  const auto op = build_transfer(TileSet::universe(3), 2, OperatorKind::free_boundary, Orientation::rows, tight);
  CHECK_THROWS_AS(is_nilpotent_scc(op), TruncatedOperator);
  CHECK_THROWS_AS(is_nilpotent_reduction(op), TruncatedOperator);
}
