#include <doctest.h>

#include "../support/corpus.hpp"

using namespace iostd;

TEST_CASE("manifest fields and header") {
  RunManifest m = testing::manifest("two_transfers.manifest");
  CHECK(m.name == "two_transfers");
  REQUIRE(m.specs.size() == 1);
  CHECK(m.specs[0].digest == fnv1a_hex(read_file(testing::corpus("bank.iostd"))));
  CHECK(m.objects.size() == 2);
  CHECK(m.script.injections.size() == 2);
  CHECK(m.script.injections[1].msg.tt == Tag{"env", 1});
  CHECK(m.scheduler == SchedulerKind::Exhaustive);
  CHECK(m.invariants.size() == 2);
  Configuration c = m.configuration();
  CHECK(c.objects.at(ObjectId{"a"}).state.at.at("bal") == Value(3));
  CHECK(c.objects.at(ObjectId{"a"}).state.pool.size() == 4);
  TraceHeader h = m.header();
  REQUIRE(h.size() == 5);
  CHECK(h[1].second == "bank.iostd " + m.specs[0].digest);
}

TEST_CASE("fnv1a matches the reference vectors") {
  CHECK(fnv1a_hex("") == "fnv1a:cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "fnv1a:af63dc4c8601ec8c");
}

TEST_CASE("manifest errors") {
  auto bad = [](const std::string& body) {
    return testing::manifest_text("manifest m { spec \"bank.iostd\";\n" + body + "\n}");
  };
  CHECK_THROWS_AS(bad("object a : Nope { }"), Error);
  CHECK_THROWS_AS(bad("object a : Bank { color = 1; }"), Error);
  CHECK_THROWS_AS(bad("inject a.deposit(amt = 1) seq;"), Error);
  CHECK_THROWS_AS(bad("object a : Bank { } inject a.deposit(sum = 1) seq;"), Error);
  CHECK_THROWS_AS(bad("object a : Bank { } inject a.nothing() seq;"), Error);
  CHECK_THROWS_AS(bad("invariant i always: bal = 1;"), Error);
  CHECK_THROWS_AS(bad("policy wild;"), Error);
  CHECK_THROWS_AS(testing::manifest_text("manifest m { spec \"missing.iostd\"; }"), Error);
  // Selector matching several initial states.
  RunManifest loose = bad("object a : Bank { open = true; }");
  try {
    loose.configuration();
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Usage);
  }
}
