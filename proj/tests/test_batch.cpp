#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/build.hpp"

using namespace des;
using namespace des::test;

namespace {

Generator ab_machine() {
  return parse_generator_text(R"(desgen 1
event a c o
event b c o
state m0 initial marked
state m1
trans m0 a m1
trans m1 b m0
)");
}

Generator cc_machine() {
  return parse_generator_text(R"(desgen 1
event c c o
state n0 initial marked
state n1
trans n0 c n1
trans n1 c n0
)");
}

/// Writes the corpus for the run_batch cases and returns its directory.
std::filesystem::path write_corpus() {
  auto dir = std::filesystem::temp_directory_path() / "des-batch-corpus";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "ab.gen") << serialize_generator(ab_machine());
  std::ofstream(dir / "cc.gen") << serialize_generator(cc_machine());
  // Alternation spec over the shared pair {a, c}: a first, then c, repeat.
  std::ofstream(dir / "alternate.gen") << R"(desgen 1
event a c o
event c c o
state t0 initial marked
state t1
trans t0 a t1
trans t1 c t0
)";
  return dir;
}

}  // namespace

TEST_CASE("composition interleaves private events and joins shared ones") {
  auto ab = ab_machine();
  auto cc = cc_machine();
  auto shuffle = compose(ab, cc);
  // Disjoint alphabets: a full interleaving, 2 x 2 states.
  REQUIRE(shuffle.num_states() == 4);
  REQUIRE(shuffle.events->size() == 3);
  REQUIRE(in_closed(shuffle, "a.c.b.c"));
  REQUIRE(in_marked(shuffle, "c.a.b.c"));
  REQUIRE_FALSE(in_marked(shuffle, "a.c.c"));
  REQUIRE_FALSE(in_closed(shuffle, "b"));

  // A shared event runs only when both sides offer it.
  auto once = parse_generator_text(R"(desgen 1
event a c o
state u0 initial
state u1 marked
trans u0 a u1
)");
  auto twice = parse_generator_text(R"(desgen 1
event a c o
state v0 initial
state v1
state v2 marked
trans v0 a v1
trans v1 a v2
)");
  auto met = compose(once, twice);
  REQUIRE(in_closed(met, "a"));
  REQUIRE_FALSE(in_closed(met, "a.a"));
  REQUIRE_FALSE(in_marked(met, "a"));  // u1 marked, v1 not

  auto assoc = compose_all({ab, cc, once});
  REQUIRE(same_languages(assoc, compose(compose(ab, cc), once)));
}

TEST_CASE("the union alphabet rejects conflicting event attributes") {
  auto controllable = parse_generator_text(R"(desgen 1
event a c o
state s initial marked
)");
  auto uncontrollable = parse_generator_text(R"(desgen 1
event a u o
state s initial marked
)");
  REQUIRE_THROWS_AS(compose(controllable, uncontrollable), DesError);
  try {
    union_alphabet({controllable, uncontrollable});
  } catch (const DesError& e) {
    REQUIRE(e.kind() == ErrorKind::SyntaxError);
  }
}

TEST_CASE("remapping to a foreign alphabet requires every event") {
  auto ab = ab_machine();
  auto other = cc_machine();
  try {
    remap_events(ab, other.events);
    FAIL("expected the remap to fail");
  } catch (const DesError& e) {
    REQUIRE(e.kind() == ErrorKind::UnknownEvent);
  }
  // Remapping onto a superset table preserves the language.
  auto table = union_alphabet({ab, other});
  auto lifted = remap_events(ab, table);
  REQUIRE(lifted.events->size() == 3);
  REQUIRE(in_marked(lifted, "a.b"));
  REQUIRE_FALSE(in_closed(lifted, "c"));
}

TEST_CASE("batch plans parse cases, expectations and relative paths") {
  std::istringstream in(R"(desbatch 1
# corpus
plant ab.gen
plant sub/cc.gen
spec /abs/alternate.gen

case name=full uo= relobs=6
case uo=b,c uc=a expect relobs=4 normal=2 rounds=1
)");
  auto plan = parse_batch(in, "/base");
  REQUIRE(plan.plant_files ==
          std::vector<std::string>{"/base/ab.gen", "/base/sub/cc.gen"});
  REQUIRE(plan.spec_files == std::vector<std::string>{"/abs/alternate.gen"});
  REQUIRE(plan.cases.size() == 2);

  const auto& full = plan.cases[0];
  REQUIRE(full.name == "full");
  REQUIRE(full.unobservable.empty());
  REQUIRE_FALSE(full.uncontrollable.has_value());
  REQUIRE(full.expect_relobs == 6);
  REQUIRE_FALSE(full.expect_normal.has_value());

  const auto& second = plan.cases[1];
  REQUIRE(second.name == "case2");  // unnamed cases are numbered
  REQUIRE(second.unobservable == std::vector<std::string>{"b", "c"});
  REQUIRE(second.uncontrollable == std::vector<std::string>{"a"});
  REQUIRE(second.expect_relobs == 4);
  REQUIRE(second.expect_normal == 2);
  REQUIRE(second.expect_rounds == 1);
}

TEST_CASE("batch plans reject malformed input") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_batch(in, "");
    } catch (const DesError& e) {
      REQUIRE(e.kind() == ErrorKind::SyntaxError);
      REQUIRE(std::string(e.what()).find(needle) != std::string::npos);
      return;
    }
    FAIL("expected the parse to fail: " + text);
  };
  fails_with("", "empty batch file");
  fails_with("desbatch 2\n", "desbatch 1");
  fails_with("desbatch 1\nplant p.gen\ncase uo=a keyless\n", "key=value");
  fails_with("desbatch 1\nplant p.gen\ncase uo=a bogus=1\n", "unknown case key");
  fails_with("desbatch 1\nplant p.gen\ncase uo=a relobs=many\n", "integer");
  fails_with("desbatch 1\nplant p.gen\ncase name=x relobs=1\n", "uo=");
  fails_with("desbatch 1\ncase uo=\n", "no plant files");
}

TEST_CASE("run_batch computes what the library computes, case by case") {
  auto dir = write_corpus();
  std::ofstream(dir / "plan.batch") << R"(desbatch 1
plant ab.gen
plant cc.gen
spec alternate.gen

case name=open uo=
case name=blind uo=b,c
case name=wrong uo= relobs=999
)";
  auto plan = load_batch((dir / "plan.batch").string());
  auto outcomes = run_batch(plan, 2);
  REQUIRE(outcomes.size() == 3);

  // Reference computation through the public pieces run_batch plugs
  // together: compose, override attributes, run both pipelines, minimize.
  auto reference = [&](const std::vector<std::string>& uo) {
    Generator plant = compose(ab_machine(), cc_machine());
    Generator candidate =
        compose(load_generator((dir / "alternate.gen").string()), plant);
    auto table = union_alphabet({plant, candidate})->with_attributes(&uo, nullptr);
    plant = remap_events(plant, table);
    candidate = remap_events(candidate, table);
    auto pipeline = suprelobs_con(plant, candidate);
    Generator normal = supnorm_con(plant, candidate);
    return std::tuple(minimize(pipeline.result).num_states(),
                      minimize(normal).num_states(), pipeline.rounds);
  };

  auto [open_relobs, open_normal, open_rounds] = reference({});
  REQUIRE(outcomes[0].name == "open");
  REQUIRE(outcomes[0].ok);
  REQUIRE(outcomes[0].mismatch.empty());
  REQUIRE(outcomes[0].relobs_states == open_relobs);
  REQUIRE(outcomes[0].normal_states == open_normal);
  REQUIRE(outcomes[0].rounds == open_rounds);
  // With everything observable the two supervisors coincide.
  REQUIRE(open_relobs == open_normal);
  REQUIRE(open_relobs > 0);

  auto [blind_relobs, blind_normal, blind_rounds] = reference({"b", "c"});
  REQUIRE(outcomes[1].ok);
  REQUIRE(outcomes[1].relobs_states == blind_relobs);
  REQUIRE(outcomes[1].normal_states == blind_normal);
  REQUIRE(outcomes[1].rounds == blind_rounds);
  // Hiding events can only cost behaviour, and normality costs at least
  // as much as relative observability.
  REQUIRE(blind_relobs <= open_relobs);
  REQUIRE(blind_normal <= blind_relobs);

  REQUIRE_FALSE(outcomes[2].ok);
  REQUIRE(outcomes[2].mismatch.find("relobs expected 999") != std::string::npos);
  REQUIRE(outcomes[2].relobs_states == open_relobs);

  std::filesystem::remove_all(dir);
}

TEST_CASE("run_batch reports per-case failures without aborting the batch") {
  auto dir = std::filesystem::temp_directory_path() / "des-batch-broken";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "ab.gen") << serialize_generator(ab_machine());
  std::ofstream(dir / "plan.batch") << R"(desbatch 1
plant ab.gen
case name=ghost uo=phantom
case name=fine uo=
)";
  auto outcomes = run_batch(load_batch((dir / "plan.batch").string()), 1);
  REQUIRE(outcomes.size() == 2);
  REQUIRE_FALSE(outcomes[0].ok);
  REQUIRE(outcomes[0].mismatch.find("phantom") != std::string::npos);
  REQUIRE(outcomes[1].ok);
  REQUIRE(outcomes[1].relobs_states > 0);
  std::filesystem::remove_all(dir);
}
