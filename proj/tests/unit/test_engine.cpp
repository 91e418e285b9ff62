#include <gtest/gtest.h>

#include "cuba/engine.hpp"
#include "oracles.hpp"

using namespace cuba;

namespace {

std::set<std::string> names(const Cpds &c, const std::vector<VisibleState> &vs) {
  std::set<std::string> out;
  for (const auto &v : vs) out.insert(format_visible(c, v));
  return out;
}

PropertySpec random_property(std::mt19937 &rng, const Cpds &c) {
  PropertySpec p;
  VisiblePattern pat;
  pat.q = static_cast<SharedId>(rng() % c.shared_count());
  for (const auto &t : c.threads) {
    const auto r = rng() % (t.alphabet_size() + 2);
    if (r == t.alphabet_size())
      pat.tops.push_back(std::nullopt);
    else if (r == t.alphabet_size() + 1)
      pat.tops.push_back(kEmptyTop);
    else
      pat.tops.push_back(static_cast<SymbolId>(r));
  }
  p.patterns.push_back(pat);
  return p;
}

bool any_bad(const PropertySpec &p, const std::set<GlobalState> &states) {
  for (const auto &s : states)
    if (matches(p, visible(s))) return true;
  return false;
}

}  // namespace

TEST(Engine, FcrCheck) {
  auto fig1 = oracle::load_fixture("fig1.cpds");
  auto r = fcr_check(fig1.cpds);
  EXPECT_TRUE(r.holds);
  for (const auto &t : r.threads) EXPECT_TRUE(t.loop_free);

  auto foobar = oracle::load_fixture("foobar.cpds");
  auto f = fcr_check(foobar.cpds, true);
  EXPECT_FALSE(f.holds);
  ASSERT_EQ(f.threads.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_TRUE(f.threads[i].cycle);
    const auto &cyc = *f.threads[i].cycle;
    EXPECT_EQ(cyc.size(), 1u);  // a self-loop
    EXPECT_EQ(cyc.front().from, cyc.front().to);
    EXPECT_FALSE(describe_cycle(foobar.cpds, i, *f.threads[i].saturated, cyc).empty());
  }

  auto empty = oracle::load_fixture("empty.cpds");
  EXPECT_TRUE(fcr_check(empty.cpds).holds);
}

TEST(Engine, Alg3OnFig1) {
  auto in = oracle::load_fixture("fig1.cpds");
  for (auto backend : {Backend::explicit_states, Backend::symbolic}) {
    auto v = alg3(in.cpds, {}, backend, Budgets{});
    EXPECT_EQ(v.outcome, Outcome::safe);
    EXPECT_EQ(v.k, 5u);
    EXPECT_EQ(v.round, 6u);
    EXPECT_EQ(v.rejected_plateaus, std::vector<std::size_t>{2});
    ASSERT_GE(v.visible_deltas.size(), 5u);
    EXPECT_EQ(names(in.cpds, v.visible_deltas[4]), std::set<std::string>{"<0|1,6>"});
  }
}

TEST(Engine, Alg3FindsFoobarError) {
  auto in = oracle::load_fixture("foobar_bad.cpds");
  auto v = alg3(in.cpds, in.property, Backend::symbolic, Budgets{});
  EXPECT_EQ(v.outcome, Outcome::unsafe);
  EXPECT_EQ(v.k, 2u);
  EXPECT_EQ(format_visible(in.cpds, *v.witness), "<1|4,9>");
}

TEST(Engine, UnreachableGeneratorKeepsAlg3Running) {
  auto in = oracle::load_fixture("fig1_dead_generator.cpds");
  const auto &c = in.cpds;
  EXPECT_TRUE(fcr_check(c).holds);
  Budgets b;
  b.max_k = 10;
  auto v = alg3(c, {}, Backend::explicit_states, b);
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  EXPECT_EQ(v.reason, StopReason::max_k);
  const VisibleState dead{0, {1, 0}};
  ASSERT_EQ(format_visible(c, dead), "<0|2,4>");
  EXPECT_TRUE(reachable_generators_upper(c).count(dead));
  auto r = oracle::reach_sets(c, 10);
  ASSERT_TRUE(r);
  EXPECT_FALSE(oracle::project(r->back()).count(dead));
}

TEST(Engine, CubaRoutes) {
  auto fig1 = oracle::load_fixture("fig1.cpds");
  auto r = cuba::cuba(fig1.cpds, {}, Budgets{});
  EXPECT_TRUE(r.fcr);
  EXPECT_EQ(r.verdict.outcome, Outcome::safe);
  EXPECT_EQ(r.verdict.k, 5u);
  EXPECT_EQ(r.verdict.method, Method::alg3_explicit);
  ASSERT_EQ(r.workers.size(), 2u);
  EXPECT_EQ(r.workers[1].outcome, Outcome::inconclusive);

  auto bad = oracle::load_fixture("foobar_bad.cpds");
  auto u = cuba::cuba(bad.cpds, bad.property, Budgets{});
  EXPECT_FALSE(u.fcr);
  EXPECT_EQ(u.verdict.method, Method::alg3_symbolic);
  EXPECT_EQ(u.verdict.outcome, Outcome::unsafe);
  EXPECT_EQ(u.verdict.k, 2u);
}

TEST(Engine, ViolationAtInitialState) {
  auto in = parse_cpds("shared: a; init: a | x; thread t { alphabet: x; (a, x) -> (a, eps); } "
                       "bad: (a | x);");
  auto r = cuba::cuba(in.cpds, in.property, Budgets{});
  EXPECT_EQ(r.verdict.outcome, Outcome::unsafe);
  EXPECT_EQ(r.verdict.k, 0u);
  EXPECT_EQ(alg3(in.cpds, in.property, Backend::symbolic, Budgets{}).k, 0u);
  EXPECT_EQ(scheme1(in.cpds, in.property, Backend::symbolic, Budgets{}).k, 0u);
}

TEST(Engine, Arbitration) {
  Verdict a, s;
  a.method = Method::alg3_explicit;
  s.method = Method::scheme1_explicit;
  EXPECT_EQ(arbitrate(a, s).method, Method::alg3_explicit);  // both open
  s.outcome = Outcome::safe;
  s.round = 9;
  EXPECT_EQ(arbitrate(a, s).method, Method::scheme1_explicit);
  a.outcome = Outcome::safe;
  a.round = 9;
  EXPECT_EQ(arbitrate(a, s).method, Method::alg3_explicit);  // tie
  s.round = 4;
  EXPECT_EQ(arbitrate(a, s).method, Method::scheme1_explicit);
  a.outcome = Outcome::unsafe;
  a.k = 7;
  EXPECT_EQ(arbitrate(a, s).method, Method::alg3_explicit);
  s.outcome = Outcome::unsafe;
  s.k = 3;
  EXPECT_EQ(arbitrate(a, s).method, Method::scheme1_explicit);
}

TEST(Engine, RacingIsDeterministic) {
  for (const char *f : {"fig1.cpds", "bluetooth_toy.cpds", "bluetooth_toy_racy.cpds",
                        "empty.cpds"}) {
    auto in = oracle::load_fixture(f);
    auto first = cuba::cuba(in.cpds, in.property, Budgets{});
    for (int n = 0; n < 5; ++n) {
      auto again = cuba::cuba(in.cpds, in.property, Budgets{});
      EXPECT_EQ(again.verdict.outcome, first.verdict.outcome) << f;
      EXPECT_EQ(again.verdict.method, first.verdict.method) << f;
      EXPECT_EQ(again.verdict.k, first.verdict.k) << f;
      EXPECT_EQ(again.verdict.witness, first.verdict.witness) << f;
    }
  }
}

TEST(Engine, VerdictsAgreeWithReferenceReachability) {
  std::mt19937 rng(31);
  int safe = 0, unsafe = 0;
  for (int n = 0; n < 400; ++n) {
    Cpds c = oracle::random_cpds(rng, {});
    PropertySpec p = random_property(rng, c);
    Budgets b;
    b.max_k = 8;
    b.closure_states = 5000;
    b.layer_states = 2000;
    auto r = cuba::cuba(c, p, b);
    const auto &v = r.verdict;
    if (v.outcome == Outcome::inconclusive) continue;
    auto ref = oracle::reach_sets(c, v.k + 3, 50000);
    if (!ref) continue;
    if (v.outcome == Outcome::unsafe) {
      ++unsafe;
      EXPECT_TRUE(any_bad(p, (*ref)[v.k]));
      if (v.k) EXPECT_FALSE(any_bad(p, (*ref)[v.k - 1]));
    } else {
      ++safe;
      EXPECT_FALSE(any_bad(p, ref->back()));
      if (v.method == Method::alg3_explicit || v.method == Method::alg3_symbolic) {
        // The visible sequence does not grow after the reported bound.
        EXPECT_EQ(oracle::project((*ref)[v.k]), oracle::project(ref->back()));
      } else {
        EXPECT_EQ((*ref)[v.k], ref->back());
      }
    }
  }
  EXPECT_GT(safe, 50);
  EXPECT_GT(unsafe, 50);
}

TEST(Engine, BudgetsNeverFlipVerdicts) {
  for (const char *f : {"bluetooth_toy.cpds", "bluetooth_toy_racy.cpds", "foobar_bad.cpds"}) {
    auto in = oracle::load_fixture(f);
    std::optional<Outcome> seen;
    for (std::size_t budget : {5u, 50u, 500u, 100000u})
      for (std::size_t max_k : {1u, 2u, 4u, 20u}) {
        Budgets b;
        b.closure_states = budget;
        b.layer_states = budget;
        b.max_k = max_k;
        auto v = cuba::cuba(in.cpds, in.property, b).verdict;
        if (v.outcome == Outcome::inconclusive) continue;
        if (seen) EXPECT_EQ(*seen, v.outcome) << f;
        seen = v.outcome;
      }
    EXPECT_TRUE(seen.has_value()) << f;
  }
}

TEST(Engine, FullVisibleDomainStopsGrowth) {
  std::mt19937 rng(37);
  int hits = 0;
  for (int n = 0; n < 400; ++n) {
    Cpds c = oracle::random_cpds(rng, {2, 2, 1, 6, 1, true});
    auto ref = oracle::reach_sets(c, 6, 20000);
    if (!ref) continue;
    std::size_t domain = c.shared_count();
    for (const auto &t : c.threads) domain *= t.alphabet_size() + 1;
    for (std::size_t k = 0; k + 1 <= 6; ++k)
      if (oracle::project((*ref)[k]).size() == domain) {
        ++hits;
        EXPECT_EQ(oracle::project((*ref)[k + 1]).size(), domain);
      }
  }
  EXPECT_GT(hits, 0);
}
