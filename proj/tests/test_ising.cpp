#include <doctest.h>

#include <set>

#include "qal/error.hpp"
#include "qal/ising.hpp"
#include "qal/rng.hpp"

using namespace qal;

namespace {

ProblemInstance ferro2() { return ProblemInstance(HardwareGraph(2, {{0, 1}}), {1.0, 1.0}, {1.0}); }

}  // namespace

TEST_CASE("spin state index convention") {
  CHECK(SpinState::all_up(4).index() == 0);
  const SpinState s({1, -1, 1, -1});
  CHECK(s.index() == 0b1010);
  CHECK(SpinState::from_index(4, 0b1010) == s);
  CHECK(s.to_string() == "+-+-");
  CHECK(s.flipped(0) == SpinState({-1, -1, 1, -1}));
  for (std::uint64_t x = 0; x < 32; ++x) CHECK(SpinState::from_index(5, x).index() == x);
  CHECK_THROWS_AS(SpinState({1, 0}), DomainError);
}

TEST_CASE("energy examples") {
  const auto p = ferro2();
  CHECK(energy(SpinState({1, 1}), p) == -3.0);
  CHECK(energy(SpinState({1, -1}), p) == 1.0);
  CHECK(energy(SpinState({-1, -1}), p) == 1.0);
  const ProblemInstance zero(HardwareGraph::ring(4), {0, 0, 0, 0}, {0, 0, 0, 0});
  for (std::uint64_t x = 0; x < 16; ++x) CHECK(energy(SpinState::from_index(4, x), zero) == 0.0);
  CHECK_THROWS_AS(energy(SpinState({1, 1, 1}), p), DimensionError);
}

TEST_CASE("energy_of_index agrees with energy") {
  const auto p = random_instance(HardwareGraph::king_subgraph(7), CoefficientDistribution::uniform_range, 5);
  for (std::uint64_t x = 0; x < 128; ++x) CHECK(energy_of_index(x, p) == energy(SpinState::from_index(7, x), p));
}

TEST_CASE("hamming distance") {
  CHECK(hamming_distance(SpinState({1, 1}), SpinState({1, 1})) == 0);
  CHECK(hamming_distance(SpinState({1, 1}), SpinState({1, -1})) == 1);
  CHECK(hamming_distance(SpinState({1, 1, 1}), SpinState({-1, -1, -1})) == 3);
  CHECK_THROWS_AS(hamming_distance(SpinState({1}), SpinState({1, 1})), DimensionError);

  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto a = SpinState::from_index(8, rng.below(256));
    const auto b = SpinState::from_index(8, rng.below(256));
    const auto c = SpinState::from_index(8, rng.below(256));
    CHECK(hamming_distance(a, b) == hamming_distance(b, a));
    CHECK((hamming_distance(a, b) == 0) == (a == b));
    CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
  }
}

TEST_CASE("graph constructors") {
  CHECK(HardwareGraph::path(5).edges().size() == 4);
  CHECK(HardwareGraph::ring(6).edges().size() == 6);
  CHECK(HardwareGraph::complete(5).edges().size() == 10);
  CHECK(HardwareGraph::king(3, 3).edges().size() == 20);
  // counted by hand on 3x4 and 2x3 grids
  CHECK(HardwareGraph::king_subgraph(10).edges().size() == 22);
  CHECK(HardwareGraph::king_subgraph(6).edges().size() == 11);
  CHECK(HardwareGraph::king_subgraph(10).connected());
  CHECK_FALSE(HardwareGraph(3, {{0, 1}}).connected());

  const auto g = HardwareGraph::ring(4);
  CHECK(g.find_edge(0, 3) >= 0);
  CHECK(g.find_edge(3, 0) == g.find_edge(0, 3));
  CHECK(g.find_edge(0, 2) == -1);

  CHECK_THROWS_AS(HardwareGraph(2, {{0, 0}}), DomainError);
  CHECK_THROWS_AS(HardwareGraph(2, {{0, 2}}), DimensionError);
  CHECK_THROWS(HardwareGraph(3, {{0, 1}, {1, 0}}));
  CHECK_THROWS(ProblemInstance(HardwareGraph(2, {{0, 1}}), {1.0}, {1.0}));
  CHECK_THROWS(ProblemInstance(HardwareGraph(2, {{0, 1}}), {1.0, 1.0}, {}));
}

TEST_CASE("init_hamiltonian") {
  const HardwareGraph g(2, {{0, 1}});
  auto p = init_hamiltonian(SpinState({1, 1}), g);
  CHECK(p.h() == std::vector<double>{1, 1});
  CHECK(p.J() == std::vector<double>{1});
  p = init_hamiltonian(SpinState({1, -1}), g);
  CHECK(p.h() == std::vector<double>{1, -1});
  CHECK(p.J() == std::vector<double>{-1});

  const auto king = HardwareGraph::king_subgraph(6);
  for (std::uint64_t yi : {0u, 5u, 33u, 63u}) {
    const auto y = SpinState::from_index(6, yi);
    const auto q = init_hamiltonian(y, king);
    const double ground = -(6.0 + static_cast<double>(king.edges().size()));
    CHECK(energy(y, q) == ground);
    for (std::uint64_t x = 0; x < 64; ++x)
      if (x != yi) CHECK(energy(SpinState::from_index(6, x), q) >= ground + 2.0);
  }
}

TEST_CASE("gauge transform") {
  const auto p = random_instance(HardwareGraph::ring(5), CoefficientDistribution::uniform_range, 11);
  CHECK(gauge_transform(p, SpinState::all_up(5)) == p);
  const SpinState y({1, -1, -1, 1, -1});
  const auto q = gauge_transform(p, y);
  CHECK(gauge_transform(q, y) == p);
  for (std::uint64_t x = 0; x < 32; ++x) {
    const auto s = SpinState::from_index(5, x);
    CHECK(energy(compose(y, s), q) == doctest::Approx(energy(s, p)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gauge_transform(p, SpinState({1, 1})), DimensionError);
}

TEST_CASE("random instances") {
  const auto g = HardwareGraph::king_subgraph(9);
  const auto a = random_instance(g, CoefficientDistribution::pm_one, 42);
  CHECK(a == random_instance(g, CoefficientDistribution::pm_one, 42));
  for (double v : a.h()) CHECK(std::abs(v) == 1.0);
  for (double v : a.J()) CHECK(std::abs(v) == 1.0);
  CHECK_FALSE(a == random_instance(g, CoefficientDistribution::pm_one, 43));
  const auto u = random_instance(g, CoefficientDistribution::uniform_range, 42);
  for (double v : u.J()) CHECK((v >= -1.0 && v <= 1.0));
  CHECK(parse_distribution("uniform_range") == CoefficientDistribution::uniform_range);
  CHECK_THROWS_AS(parse_distribution("gaussian"), ConfigError);
}

TEST_CASE("apply_delta") {
  const auto p = ferro2();
  CoefficientDelta d{{0.5, 0.0}, {{{0, 1}, -1.0}}};
  auto q = apply_delta(p, d);
  CHECK(q.h() == std::vector<double>{1.5, 1.0});
  CHECK(q.J() == std::vector<double>{0.0});

  const ProblemInstance path3(HardwareGraph::path(3), {0, 0, 0}, {1, 1});
  q = apply_delta(path3, {{0, 0, 0}, {{{0, 2}, 0.25}}});
  CHECK(q.graph().edges().size() == 3);
  CHECK(q.J()[static_cast<std::size_t>(q.graph().find_edge(0, 2))] == 0.25);
  CHECK_THROWS(apply_delta(p, {{1.0}, {}}));
}
