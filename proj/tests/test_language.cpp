#include <catch2/catch_amalgamated.hpp>

#include "support/build.hpp"

using namespace des;
using namespace des::test;

namespace {

Generator ab_star() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial marked
trans s0 a s0
trans s0 b s0
)");
}

Generator a_star() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial marked
trans s0 a s0
)");
}

}  // namespace

TEST_CASE("language_relation recognizes equality") {
  auto g = ab_star();
  auto rel = language_relation(g, g);
  REQUIRE(rel.closed == Relation::Equal);
  REQUIRE(rel.marked == Relation::Equal);
  REQUIRE(rel.overall() == Relation::Equal);
  REQUIRE_FALSE(rel.closed_in_a_only.has_value());
}

TEST_CASE("language_relation detects strict inclusion with a shortest witness") {
  auto big = ab_star();
  auto small = a_star();
  auto rel = language_relation(small, big);
  REQUIRE(rel.overall() == Relation::AStrictlyInB);
  REQUIRE(rel.closed_in_b_only.has_value());
  REQUIRE(dotted(big, *rel.closed_in_b_only) == "b");
  auto rev = language_relation(big, small);
  REQUIRE(rev.overall() == Relation::BStrictlyInA);
}

TEST_CASE("closed and marked relations are independent") {
  // Same closed language a*, but only one marks the odd positions.
  auto all = a_star();
  auto odd = parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial
state s1 marked
trans s0 a s1
trans s1 a s0
)");
  auto rel = language_relation(odd, all);
  REQUIRE(rel.closed == Relation::Equal);
  REQUIRE(rel.marked == Relation::AStrictlyInB);
  REQUIRE(rel.marked_in_b_only.has_value());
  REQUIRE(dotted(all, *rel.marked_in_b_only) == "<empty>");
  REQUIRE(rel.overall() == Relation::AStrictlyInB);
}

TEST_CASE("incomparable languages yield witnesses both ways") {
  auto only_a = parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial
state s1 marked
trans s0 a s1
)");
  auto only_b = parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial
state s1 marked
trans s0 b s1
)");
  auto rel = language_relation(only_a, only_b);
  REQUIRE(rel.closed == Relation::Incomparable);
  REQUIRE(rel.marked == Relation::Incomparable);
  REQUIRE(dotted(only_a, *rel.marked_in_a_only) == "a");
  REQUIRE(dotted(only_a, *rel.marked_in_b_only) == "b");
}

TEST_CASE("EMPTY is strictly below anything nonempty and equal to itself") {
  auto g = a_star();
  auto none = Generator::make_empty(g.events);
  auto rel = language_relation(none, g);
  REQUIRE(rel.overall() == Relation::AStrictlyInB);
  // Even the empty string separates them.
  REQUIRE(dotted(g, *rel.closed_in_b_only) == "<empty>");
  REQUIRE(language_relation(none, none).overall() == Relation::Equal);
  REQUIRE(same_languages(none, none));
}

TEST_CASE("minimize merges language-equivalent states") {
  // Two interleaved paths to the same marked loop; 5 states collapse to 3.
  auto g = parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial
state left
state right
state lend marked
state rend marked
trans s0 a left
trans s0 b right
trans left a lend
trans right a rend
trans lend a lend
trans rend a rend
)");
  auto m = minimize(g);
  REQUIRE(m.num_states() == 3);
  REQUIRE(same_languages(m, g));
  // Merged classes take the name of their first member.
  REQUIRE(state_name_set(m) == std::set<std::string>{"s0", "left", "lend"});
}

TEST_CASE("minimize distinguishes states by defined events") {
  auto g = parse_generator_text(R"(desgen 1
event a c o
event b c o
state s0 initial marked
state s1 marked
trans s0 a s1
trans s1 a s1
trans s1 b s1
)");
  auto m = minimize(g);
  REQUIRE(m.num_states() == 2);  // s0 lacks b, so the two cannot merge
  REQUIRE(same_languages(m, g));
}

TEST_CASE("minimize drops unreachable states and handles EMPTY") {
  auto g = parse_generator_text(R"(desgen 1
event a c o
state s0 initial marked
state nowhere marked
trans s0 a s0
trans nowhere a s0
)");
  REQUIRE(minimize(g).num_states() == 1);
  auto none = Generator::make_empty(g.events);
  REQUIRE(minimize(none).empty());
  REQUIRE(minimize(none).num_states() == 0);
}

TEST_CASE("minimize of an already minimal generator is isomorphic to it") {
  auto g = trim(parse_generator_text(R"(desgen 1
event a c o
event b u o
state s0 initial
state s1
state s2 marked
trans s0 a s1
trans s1 b s2
trans s2 a s0
)"));
  auto m = minimize(g);
  REQUIRE(isomorphic(m, g));
}

TEST_CASE("format_word renders dot-separated names") {
  auto g = ab_star();
  REQUIRE(format_word(*g.events, word(g, "a.b.a")) == "a.b.a");
  REQUIRE(format_word(*g.events, {}) == "<empty>");
}
