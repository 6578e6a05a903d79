// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <stdexcept>

#include "qbb/pool.hpp"

using namespace qbb;

TEST_CASE("entries sort by value then bits") {
  SolutionPool pool;
  CHECK(pool.insert({1, 0, 0}, -1.0));
  CHECK(pool.insert({0, 1, 0}, -1.0));
  CHECK(pool.insert({1, 1, 0}, 0.0));
  CHECK(pool.insert({0, 0, 1}, -2.0));
  REQUIRE(pool.size() == 4);
  CHECK(pool.entries()[0].bits == Assignment{0, 0, 1});
  CHECK(pool.entries()[1].bits == Assignment{0, 1, 0});  // ties order by bits
  CHECK(pool.entries()[2].bits == Assignment{1, 0, 0});
  CHECK(pool.entries()[3].bits == Assignment{1, 1, 0});
  CHECK(pool.best().value == -2.0);
}

TEST_CASE("duplicate entries are dropped") {
  SolutionPool pool;
  CHECK(pool.insert({1, 0}, -3.0));
  CHECK_FALSE(pool.insert({1, 0}, -3.0));
  CHECK(pool.size() == 1);
}

TEST_CASE("content is insertion-order independent") {
  SolutionPool a, b;
  const std::vector<std::pair<Assignment, double>> entries{
      {{1, 0, 0}, -1.0}, {{0, 1, 0}, -1.0}, {{0, 0, 0}, 0.0}, {{1, 1, 1}, 3.0}};
  for (const auto& [bits, value] : entries) a.insert(bits, value);
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    b.insert(it->first, it->second);
  }
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].bits == b.entries()[i].bits);
    CHECK(a.entries()[i].value == b.entries()[i].value);
  }
}

TEST_CASE("top k takes a prefix") {
  SolutionPool pool;
  pool.insert({0, 0}, 4.0);
  pool.insert({0, 1}, 1.0);
  pool.insert({1, 0}, 3.0);
  pool.insert({1, 1}, 2.0);

  const SolutionPool top = top_k(pool, 2);
  REQUIRE(top.size() == 2);
  CHECK(top.entries()[0].value == 1.0);
  CHECK(top.entries()[1].value == 2.0);

  CHECK(top_k(pool, 99).size() == 4);
  CHECK(top_k(pool, 1).best().value == 1.0);
}

TEST_CASE("compatibility filter matches fixed positions") {
  SolutionPool pool;
  pool.insert({1, 0, 0}, -1.0);
  pool.insert({0, 1, 0}, -1.0);

  PartialAssignment pa(3, VarState::Free);
  SUBCASE("all free keeps everything") {
    const SolutionPool kept = filter_compatible(pool, pa);
    CHECK(kept.size() == 2);
  }
  SUBCASE("a fixed one selects agreeing entries") {
    pa[0] = VarState::One;
    const SolutionPool kept = filter_compatible(pool, pa);
    REQUIRE(kept.size() == 1);
    CHECK(kept.entries()[0].bits == Assignment{1, 0, 0});
  }
  SUBCASE("a fixed zero selects the complement") {
    pa[0] = VarState::Zero;
    const SolutionPool kept = filter_compatible(pool, pa);
    REQUIRE(kept.size() == 1);
    CHECK(kept.entries()[0].bits == Assignment{0, 1, 0});
  }
  SUBCASE("contradiction empties the pool") {
    pa[0] = VarState::One;
    pa[1] = VarState::One;
    CHECK(filter_compatible(pool, pa).empty());
  }
  SUBCASE("filtering is idempotent") {
    pa[2] = VarState::Zero;
    const SolutionPool once = filter_compatible(pool, pa);
    const SolutionPool twice = filter_compatible(once, pa);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once.entries()[i].bits == twice.entries()[i].bits);
    }
  }
}

TEST_CASE("filter rejects length mismatches") {
  SolutionPool pool;
  pool.insert({1, 0, 0}, -1.0);
  PartialAssignment pa(2, VarState::Free);
  CHECK_THROWS_AS(filter_compatible(pool, pa), std::invalid_argument);
}
