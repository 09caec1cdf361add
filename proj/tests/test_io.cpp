#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qal/error.hpp"
#include "qal/io.hpp"

using namespace qal;
using io::Json;

TEST_CASE("problem round trip") {
  const auto p = random_instance(HardwareGraph::king_subgraph(7), CoefficientDistribution::uniform_range, 3);
  const auto text = io::problem_text(p);
  CHECK(io::problem_from_json(Json::parse(text)) == p);
  CHECK(io::problem_text(io::problem_from_json(Json::parse(text))) == text);
}

TEST_CASE("problem validation") {
  auto bad = [](const char* text) { return io::problem_from_json(Json::parse(text)); };
  CHECK_NOTHROW(bad(R"({"n": 2, "h": [1, 1], "J": [[0, 1, 1]]})"));
  CHECK_THROWS_AS(bad(R"({"n": 2, "h": [1], "J": []})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"n": 2, "h": [1, 1], "J": [[1, 0, 1]]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"n": 2, "h": [1, 1], "J": [[0, 2, 1]]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"n": 2, "h": [1, 1], "J": [[0, 1, 1], [0, 1, 2]]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"n": 2, "h": [1, 1], "J": [], "extra": 1})"), ConfigError);
  try {
    bad(R"({"n": 2, "h": [1, "x"], "J": []})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("problem.h") != std::string::npos);
  }
}

TEST_CASE("blocks round trip") {
  const auto sched = Schedule::quadratic(2.0, 0.5);
  CHECK(io::schedule_from_json(io::Fields(io::schedule_to_json(sched), "schedule")) == sched);
  const BathParams bath{0.3, 0.02, 7.0};
  CHECK(io::bath_from_json(io::Fields(io::bath_to_json(bath), "bath")) == bath);

  LocalSearchParams p;
  p.s_prime = 0.55;
  p.tau = 3.0;
  p.ramp = 4.0;
  p.bath = bath;
  p.samples = 77;
  p.sampling = SamplingMode::apportion;
  const auto q = io::local_search_from_json(io::Fields(io::local_search_to_json(p), "ls"));
  CHECK(q.s_prime == p.s_prime);
  CHECK(q.tau == p.tau);
  CHECK(q.ramp == p.ramp);
  CHECK(q.bath == p.bath);
  CHECK(q.samples == p.samples);
  CHECK(q.sampling == p.sampling);

  CHECK_THROWS_AS(io::bath_from_json(io::Fields(Json::parse(R"({"temperature": -1})"), "bath")), ConfigError);
  CHECK_THROWS_AS(io::local_search_from_json(io::Fields(Json::parse(R"({"s_prime": 2})"), "ls")), ConfigError);

  const CoefficientDelta d{{0.1, 0.0, -0.2}, {{{0, 2}, 0.5}}};
  const auto e = io::delta_from_json(io::Fields(io::delta_to_json(d), "perturb"), 3);
  CHECK(e.dh == d.dh);
  CHECK(e.dJ == d.dJ);
  CHECK(io::delta_from_json(io::Fields(Json::object(), "perturb"), 3).dh == std::vector<double>(3, 0.0));
}

TEST_CASE("fields") {
  const auto j = Json::parse(R"({"a": 1.5, "b": "inf", "c": [1, -1], "d": 3, "e": -2})");
  const io::Fields f(j, "top");
  CHECK(f.real("a") == 1.5);
  CHECK(std::isinf(f.real("b")));
  CHECK(f.spins("c") == SpinState({1, -1}));
  CHECK(f.integer("d") == 3);
  CHECK_THROWS_AS(f.integer("a"), ConfigError);
  CHECK_THROWS_AS(f.seed("e", 0), ConfigError);
  CHECK(f.seed("missing", 9) == 9);
  CHECK_THROWS_AS(f.text("missing"), ConfigError);
  CHECK_THROWS_AS(f.only({"a"}), ConfigError);
}

TEST_CASE("sample set json") {
  const ProblemInstance p(HardwareGraph(2, {{0, 1}}), {1.0, 1.0}, {1.0});
  const auto set = sample_outcomes({0.75, 0.25, 0.0, 0.0}, SpinState({-1, 1}), p, 4, 5, SamplingMode::apportion);
  LocalSearchParams params;
  params.samples = 4;
  const auto j = io::sample_set_to_json(set, params);
  CHECK(j["records"].size() == 2);
  CHECK(j["records"][0]["bitstring"] == Json::array({1, 1}));
  CHECK(j["records"][0]["count"] == 3);
  CHECK(j["records"][0]["hamming"] == 1);
  CHECK(j["summary"]["p_start"] == 0.25);
  CHECK(j["summary"]["best_energy"] == -3.0);
  CHECK(j["summary"]["p_best_found"] == 0.75);
  CHECK(j["header"]["seed"] == 5);
}

TEST_CASE("text files") {
  const auto path = (std::filesystem::temp_directory_path() / "qal_io_test.txt").string();
  io::write_text(path, "abc\n");
  CHECK(io::read_text(path) == "abc\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::read_text(path), IoError);
  CHECK_THROWS_AS(io::write_text("/nonexistent-dir/x/y.txt", "z"), IoError);
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
