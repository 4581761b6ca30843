#include <catch2/catch_amalgamated.hpp>

#include "support/build.hpp"

using namespace des;
using namespace des::test;

namespace {

// After `a` the plant can fire the uncontrollable `u`; a branch `c` is
// safe. The candidate decides which parts to keep.
Generator escape_plant() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
event c c o
event u u o
state s0 initial
state s1
state s2 marked
state s3 marked
state s4 marked
trans s0 a s1
trans s1 u s2
trans s1 b s3
trans s0 c s4
)");
}

// Observation fixture: `a` leads straight to a marked state, `b` opens a
// silent fork whose branches the candidate cannot tell apart.
Generator fork_plant() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
event u c x
event v c x
state g0 initial
state g1 marked
state g2
state g3 marked
state g4 marked
trans g0 a g1
trans g0 b g2
trans g2 u g3
trans g2 v g4
)");
}

Generator fork_candidate() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
event u c x
event v c x
state y0 initial
state y1 marked
state y2
state y3 marked
trans y0 a y1
trans y0 b y2
trans y2 u y3
)");
}

Generator a_only(const Generator& like) {
  auto k = Generator::make_empty(like.events);
  auto s0 = k.add_state("y0", false);
  auto s1 = k.add_state("y1", true);
  k.initial = s0;
  k.add_transition(s0, like.events->require("a"), s1);
  return k;
}

}  // namespace

TEST_CASE("disabling an uncontrollable event is flagged with a witness") {
  auto g = escape_plant();
  auto k = parse_generator_text(R"(desgen 1
event a c o
event b c o
event c c o
event u u o
state y0 initial
state y1
state y2 marked
trans y0 a y1
trans y1 b y2
)");
  auto rep = is_controllable(g, k);
  REQUIRE_FALSE(rep.holds);
  REQUIRE(dotted(g, rep.witness) == "a");
  REQUIRE(g.events->name(rep.event) == "u");
  REQUIRE(is_controllable(g, g).holds);
  REQUIRE(is_controllable(g, Generator::make_empty(g.events)).holds);
}

TEST_CASE("the supremal controllable sublanguage drops the exposed branch") {
  auto g = escape_plant();
  // Wanting a.b and c but not the uncontrollable escape a.u.
  auto k = parse_generator_text(R"(desgen 1
event a c o
event b c o
event c c o
event u u o
state y0 initial
state y1
state y2 marked
state y3 marked
trans y0 a y1
trans y1 b y2
trans y0 c y3
)");
  auto sup = supcon(g, k);
  // The whole `a` subtree goes: once in s1 the plant may fire u.
  auto expect = parse_generator_text(R"(desgen 1
event a c o
event b c o
event c c o
event u u o
state y0 initial
state y3 marked
trans y0 c y3
)");
  REQUIRE(same_languages(sup, expect));
  REQUIRE(is_nonblocking(sup));
  REQUIRE(is_controllable(g, sup).holds);
}

TEST_CASE("a controllable candidate passes through supcon unchanged") {
  auto g = escape_plant();
  auto sup = supcon(g, g);
  REQUIRE(same_languages(sup, g));
  REQUIRE(supcon(g, Generator::make_empty(g.events)).empty());
}

TEST_CASE("a fully observed candidate is normal") {
  auto g = escape_plant();
  auto k = parse_generator_text(R"(desgen 1
event a c o
event b c o
event c c o
event u u o
state y0 initial
state y1
state y2 marked
trans y0 a y1
trans y1 b y2
)");
  auto rep = is_normal(g, k);
  REQUIRE(rep.marked_normal);
  REQUIRE(rep.closed_normal);
}

TEST_CASE("a silent fork breaks normality with a shortest witness") {
  auto g = fork_plant();
  auto k = fork_candidate();
  auto rep = is_normal(g, k);
  REQUIRE_FALSE(rep.marked_normal);
  REQUIRE_FALSE(rep.closed_normal);
  REQUIRE(dotted(g, *rep.marked_witness) == "b.v");
  REQUIRE(dotted(g, *rep.closed_witness) == "b.v");
}

TEST_CASE("the supremal normal sublanguage retreats to the observed branch") {
  auto g = fork_plant();
  auto k = fork_candidate();
  auto sup = supnorm(g, k);
  REQUIRE(same_languages(sup, a_only(g)));
  REQUIRE(is_normal(g, sup).marked_normal);
  REQUIRE(is_normal(g, sup).closed_normal);
}

TEST_CASE("a normal candidate passes through supnorm unchanged") {
  auto g = fork_plant();
  auto k = a_only(g);
  REQUIRE(same_languages(supnorm(g, k), k));
}

TEST_CASE("when every string is silent only the whole language would be normal") {
  // The chain from the consistency tests: all events unobservable, the
  // plant has an extra branch. No nonempty sublanguage survives.
  auto g = parse_generator_text(R"(desgen 1
event b1 c x
event b2 c x
event b3 c x
state g0 initial
state g1 marked
state g2 marked
state g3 marked
trans g0 b1 g1
trans g1 b2 g2
trans g1 b3 g3
)");
  auto k = parse_generator_text(R"(desgen 1
event b1 c x
event b2 c x
event b3 c x
state k0 initial
state k1 marked
state k2 marked
trans k0 b1 k1
trans k1 b2 k2
)");
  REQUIRE(supnorm(g, k).empty());
  // With everything controllable the combined closure agrees.
  REQUIRE(supnorm_con(g, k).empty());
}

TEST_CASE("supnorm rejects bad candidates") {
  auto g = fork_plant();
  auto blocking = parse_generator_text(R"(desgen 1
event a c o
event b c o
event u c x
event v c x
state y0 initial
state y1
trans y0 b y1
)");
  try {
    supnorm(g, blocking);
    FAIL("expected an error");
  } catch (const DesError& e) {
    REQUIRE(e.kind() == ErrorKind::Blocking);
  }
  auto outside = parse_generator_text(R"(desgen 1
event a c o
event b c o
event u c x
event v c x
state y0 initial
state y1 marked
trans y0 u y1
)");
  try {
    supnorm(g, outside);
    FAIL("expected an error");
  } catch (const DesError& e) {
    REQUIRE(e.kind() == ErrorKind::PreconditionViolated);
  }
}

TEST_CASE("supnorm_con settles on a language both normal and controllable") {
  // Make the observed-branch event uncontrollable upstream: the plant can
  // then be steered only before the fork. Here `u` is uncontrollable, so
  // keeping b.u while cutting b.v is doubly impossible.
  auto g = parse_generator_text(R"(desgen 1
event a c o
event b c o
event u u x
event v c x
state g0 initial
state g1 marked
state g2
state g3 marked
state g4 marked
trans g0 a g1
trans g0 b g2
trans g2 u g3
trans g2 v g4
)");
  auto k = parse_generator_text(R"(desgen 1
event a c o
event b c o
event u u x
event v c x
state y0 initial
state y1 marked
state y2
state y3 marked
trans y0 a y1
trans y0 b y2
trans y2 u y3
)");
  auto sup = supnorm_con(g, k);
  REQUIRE(same_languages(sup, a_only(g)));
  REQUIRE(is_controllable(g, sup).holds);
  auto norm = is_normal(g, sup);
  REQUIRE(norm.marked_normal);
  REQUIRE(norm.closed_normal);
}
