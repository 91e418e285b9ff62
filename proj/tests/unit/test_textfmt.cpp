#include <gtest/gtest.h>

#include "cuba/textfmt.hpp"
#include "oracles.hpp"

using namespace cuba;

namespace {

/// Structural equality up to nothing: parse re-interns names in order, so
/// an isomorphic copy is an identical copy here.
void expect_same(const Cpds &a, const Cpds &b) {
  EXPECT_EQ(a.shared, b.shared);
  EXPECT_EQ(a.initial_shared, b.initial_shared);
  EXPECT_EQ(a.initial_stacks, b.initial_stacks);
  ASSERT_EQ(a.threads.size(), b.threads.size());
  for (std::size_t i = 0; i < a.threads.size(); ++i) {
    EXPECT_EQ(a.threads[i].name, b.threads[i].name);
    EXPECT_EQ(a.threads[i].symbols, b.threads[i].symbols);
    std::set<Action> x(a.threads[i].actions.begin(), a.threads[i].actions.end());
    std::set<Action> y(b.threads[i].actions.begin(), b.threads[i].actions.end());
    EXPECT_EQ(x, y);
  }
}

}  // namespace

TEST(Textfmt, FoobarShape) {
  auto in = oracle::load_fixture("foobar.cpds");
  const auto &c = in.cpds;
  EXPECT_EQ(c.shared, (std::vector<std::string>{"⊥", "0", "1"}));
  EXPECT_EQ(c.threads[0].symbols, (std::vector<std::string>{"2", "3", "4", "5"}));
  EXPECT_EQ(c.threads[1].symbols, (std::vector<std::string>{"6", "7", "8", "9"}));
  // Every schematic rule mentioning x appears once per value of x.
  EXPECT_EQ(c.threads[0].actions.size(), 12u);
  EXPECT_EQ(c.threads[1].actions.size(), 12u);
  EXPECT_TRUE(in.property.empty());
}

TEST(Textfmt, WildcardBindsAndExpands) {
  auto in = parse_cpds(R"(
    shared: a b c;
    init: a | s5;
    thread t { alphabet: s5 s6;
      (*, s5) -> (b, eps);
      (*, s6) -> (*, s5);
    }
  )");
  const auto &acts = in.cpds.threads[0].actions;
  ASSERT_EQ(acts.size(), 6u);
  std::set<std::pair<SharedId, SharedId>> pops, over;
  for (const auto &a : acts) (a.rhs.empty() ? pops : over).insert({a.src, a.dst});
  EXPECT_EQ(pops, (std::set<std::pair<SharedId, SharedId>>{{0, 1}, {1, 1}, {2, 1}}));
  EXPECT_EQ(over, (std::set<std::pair<SharedId, SharedId>>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Textfmt, DuplicatesAreDropped) {
  auto in = parse_cpds(R"(
    shared: a b;
    init: a | x;
    thread t { alphabet: x;
      (*, x) -> (a, eps);
      (a, x) -> (a, eps);
    }
  )");
  EXPECT_EQ(in.cpds.threads[0].actions.size(), 2u);
}

TEST(Textfmt, EmptyThreadBodyIsRejected) {
  EXPECT_THROW(parse_cpds("shared: a; init: a | eps; thread t { }"),
               ValidationError);
}

TEST(Textfmt, SyntaxErrorsCarryPositions) {
  try {
    parse_cpds("shared: a;\ninit: a | x;\nthread t { alphabet: x;\n  (a, x) => (a, x);\n}");
    FAIL();
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.diagnostic().line, 4u);
    EXPECT_GT(e.diagnostic().column, 1u);
  }
  EXPECT_THROW(parse_cpds("shared: a b; init: a | x; thread t { alphabet: x; (a, x) -> (*, x); }"),
               SyntaxError);
}

TEST(Textfmt, UndeclaredNamesAreRejected) {
  EXPECT_THROW(parse_cpds("shared: a; init: a | x; thread t { alphabet: x; (b, x) -> (a, x); }"),
               ValidationError);
  EXPECT_THROW(parse_cpds("shared: a; init: a | y; thread t { alphabet: x; }"),
               ValidationError);
  EXPECT_THROW(parse_cpds("shared: a; init: a | x; thread t { alphabet: x; (a, eps) -> (a, x x); }"),
               ValidationError);
}

TEST(Textfmt, PropertyMatching) {
  auto in = oracle::load_fixture("foobar_bad.cpds");
  const auto &c = in.cpds;
  ASSERT_EQ(in.property.patterns.size(), 1u);
  VisibleState v{2, {2, 3}};  // <1|4,9>
  EXPECT_EQ(format_visible(c, v), "<1|4,9>");
  EXPECT_TRUE(matches(in.property, v));
  v.q = 1;
  EXPECT_FALSE(matches(in.property, v));
  EXPECT_FALSE(matches(PropertySpec{}, v));

  auto w = parse_cpds("shared: a b; init: a | x, y; thread t { alphabet: x; } "
                      "thread u { alphabet: y; } bad: (* | x, *); bad: (b | eps, y);");
  EXPECT_TRUE(matches(w.property, VisibleState{1, {0, kEmptyTop}}));
  EXPECT_TRUE(matches(w.property, VisibleState{1, {kEmptyTop, 0}}));
  EXPECT_FALSE(matches(w.property, VisibleState{0, {kEmptyTop, 0}}));
}

TEST(Textfmt, RoundTripFixtures) {
  for (const char *f : {"fig1.cpds", "foobar.cpds", "foobar_bad.cpds", "empty.cpds",
                        "fig1_dead_generator.cpds", "bluetooth_toy.cpds",
                        "bluetooth_toy_racy.cpds"}) {
    SCOPED_TRACE(f);
    auto a = oracle::load_fixture(f);
    auto b = parse_cpds(serialize_cpds(a.cpds, a.property));
    expect_same(a.cpds, b.cpds);
    EXPECT_EQ(a.property, b.property);
  }
}

TEST(Textfmt, SerializeWithoutProperty) {
  auto a = oracle::load_fixture("fig1.cpds");
  EXPECT_EQ(serialize_cpds(a.cpds, {}).find("bad:"), std::string::npos);
}

TEST(Textfmt, SingleThreadSingleAction) {
  Cpds c;
  c.shared = {"p"};
  c.threads.push_back({"only", {"z"}, {{0, 0, 0, {}}}});
  c.initial_stacks = {{0}};
  auto text = serialize_cpds(c, {});
  auto back = parse_cpds(text);
  expect_same(c, back.cpds);
  EXPECT_NE(text.find("thread only"), std::string::npos);
}

TEST(Textfmt, RandomRoundTrip) {
  std::mt19937 rng(11);
  for (int n = 0; n < 100; ++n) {
    Cpds c = oracle::random_cpds(rng, {});
    bool bad_rule = false;
    for (const auto &t : c.threads)
      for (const auto &a : t.actions) bad_rule |= a.from_empty() && a.rhs.size() == 2;
    if (bad_rule) continue;
    auto back = parse_cpds(serialize_cpds(c, {}));
    expect_same(c, back.cpds);
  }
}
