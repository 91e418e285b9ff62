#include <gtest/gtest.h>

#include "cuba/explicit_reach.hpp"
#include "cuba/symbolic.hpp"
#include "oracles.hpp"

using namespace cuba;

namespace {

bool accepts(const CanonicalDfa &d, const Word &w) {
  return d.to_nfa().accepts(std::vector<Label>(w.begin(), w.end()));
}

CanonicalDfa lang_of(std::vector<Word> words) {
  Nfa n = nfa_empty_language();
  for (const auto &w : words)
    n = nfa_union(n, nfa_from_word(std::vector<Label>(w.begin(), w.end())));
  return minimize_canonical(n);
}

}  // namespace

TEST(Symbolic, FoobarFirstContextOfFoo) {
  auto in = oracle::load_fixture("foobar.cpds");
  const auto &c = in.cpds;
  const auto tau = initial_symbolic_state(c);
  const auto succ = symbolic_context_post(c, tau, 0);
  std::map<SharedId, const SymbolicState *> by_q;
  for (const auto &s : succ) {
    EXPECT_EQ(s.langs[1], tau.langs[1]);
    if (!(s == tau)) by_q[s.q] = &s;
  }
  EXPECT_EQ(succ.front(), tau);
  ASSERT_TRUE(by_q.count(1) && by_q.count(2));

  // Bounded search from <⊥|2> agrees on all stacks up to height 5.
  auto bfs = oracle::bounded_pds_reach(c.threads[0], 0, Word{0}, 9);
  for (const auto &[q, w] : bfs.configs) {
    if (q == 0) continue;
    EXPECT_TRUE(accepts(by_q.at(q)->langs[0], w));
  }
  for (SharedId q : {1u, 2u})
    for (const auto &w : oracle::all_words(4, 5))
      if (accepts(by_q.at(q)->langs[0], w)) EXPECT_TRUE(bfs.configs.count({q, w}));
  // <1 | 2 4^m> for every m.
  for (std::size_t m = 0; m < 5; ++m) {
    Word w{0};
    w.insert(w.end(), m, 2);
    EXPECT_TRUE(accepts(by_q.at(2)->langs[0], w));
  }
}

TEST(Symbolic, IdleThread) {
  auto in = oracle::load_fixture("empty.cpds");
  const auto tau = initial_symbolic_state(in.cpds);
  EXPECT_EQ(symbolic_context_post(in.cpds, tau, 0), std::vector<SymbolicState>{tau});
}

TEST(Symbolic, PopOnly) {
  Cpds c;
  c.shared = {"q", "r"};
  c.threads.push_back({"t", {"a"}, {{0, 0, 1, {}}}});
  c.initial_stacks = {{0}};
  const auto tau = initial_symbolic_state(c);
  auto succ = symbolic_context_post(c, tau, 0);
  ASSERT_EQ(succ.size(), 2u);
  EXPECT_EQ(succ[1].q, 1u);
  EXPECT_EQ(succ[1].langs[0], lang_of({{}}));
}

TEST(Symbolic, TopsOf) {
  SymbolicState s;
  s.q = 3;
  s.langs = {lang_of({{}}), lang_of({{6}})};
  EXPECT_EQ(tops_of(s), (std::set<VisibleState>{{3, {kEmptyTop, 6}}}));
  s.langs = {lang_of({{0}, {1, 0}}), lang_of({{2}})};
  EXPECT_EQ(tops_of(s), (std::set<VisibleState>{{3, {0, 2}}, {3, {1, 2}}}));
  s.langs[1] = CanonicalDfa{};
  EXPECT_TRUE(tops_of(s).empty());
}

TEST(Symbolic, FoobarLayers) {
  auto in = oracle::load_fixture("foobar.cpds");
  const auto &c = in.cpds;
  SymbolicExplorer ex(c, 10000);
  const VisibleState bad{2, {2, 3}};
  ASSERT_EQ(format_visible(c, bad), "<1|4,9>");
  EXPECT_EQ(ex.visible_states(), tops_of(initial_symbolic_state(c)));
  ex.advance();
  EXPECT_FALSE(ex.visible_states().count(bad));
  ex.advance();
  EXPECT_TRUE(ex.visible_states().count(bad));
  EXPECT_TRUE(ex.find_with_top(bad).has_value());
}

TEST(Symbolic, AgreesWithExplicitOnFig1) {
  auto in = oracle::load_fixture("fig1.cpds");
  ExplicitExplorer e(in.cpds, 1000);
  SymbolicExplorer s(in.cpds, 10000);
  for (std::size_t k = 0; k <= 6; ++k) {
    if (k) {
      e.advance();
      s.advance();
    }
    EXPECT_EQ(e.visible_states(), s.visible_states()) << "k=" << k;
  }
}

TEST(Symbolic, ContextPostAgainstBoundedSearch) {
  std::mt19937 rng(23);
  int checked = 0;
  for (int n = 0; n < 300; ++n) {
    Cpds c = oracle::random_cpds(rng, {});
    const auto tau = initial_symbolic_state(c);
    for (std::size_t i = 0; i < 2; ++i) {
      auto succ = symbolic_context_post(c, tau, i);
      auto in_gamma = [&](SharedId q, const Word &w) {
        for (const auto &s : succ)
          if (s.q == q && accepts(s.langs[i], w)) return true;
        return false;
      };
      auto bfs = oracle::bounded_pds_reach(c.threads[i], c.initial_shared,
                                           c.initial_stacks[i], 10);
      for (const auto &[q, w] : bfs.configs) ASSERT_TRUE(in_gamma(q, w));
      if (bfs.capped) continue;
      ++checked;
      for (SharedId q = 0; q < c.shared_count(); ++q)
        for (const auto &w : oracle::all_words(c.threads[i].alphabet_size(), 5))
          EXPECT_EQ(in_gamma(q, w), bfs.configs.count({q, w}) != 0);
      for (const auto &s : succ)
        for (std::size_t j = 0; j < 2; ++j)
          if (j != i) EXPECT_EQ(s.langs[j], tau.langs[j]);
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Symbolic, ConvergenceTestIsSemantic) {
  auto foobar = oracle::load_fixture("foobar.cpds");
  SymbolicExplorer ex(foobar.cpds, 10000);
  std::vector<bool> seen;
  for (int k = 1; k <= 4; ++k) {
    ex.advance();
    seen.push_back(ex.last_layer_adds_nothing());
  }
  // New symbolic states keep appearing at bound 3, but they add no
  // configurations.
  EXPECT_FALSE(ex.layer(3).delta.empty());
  EXPECT_EQ(seen, (std::vector<bool>{false, false, true, true}));

  auto fig1 = oracle::load_fixture("fig1.cpds");
  SymbolicExplorer f(fig1.cpds, 10000);
  for (int k = 1; k <= 6; ++k) {
    f.advance();
    EXPECT_FALSE(f.last_layer_adds_nothing());
  }
}

TEST(Symbolic, Scheme1) {
  auto foobar = oracle::load_fixture("foobar.cpds");
  auto v = scheme1_symbolic(foobar.cpds, {}, Budgets{});
  EXPECT_EQ(v.outcome, Outcome::safe);
  EXPECT_EQ(v.k, 3u);
  EXPECT_EQ(v.method, Method::scheme1_symbolic);

  auto bad = oracle::load_fixture("foobar_bad.cpds");
  auto u = scheme1_symbolic(bad.cpds, bad.property, Budgets{});
  EXPECT_EQ(u.outcome, Outcome::unsafe);
  EXPECT_EQ(u.k, 2u);
  EXPECT_EQ(format_visible(bad.cpds, *u.witness), "<1|4,9>");

  auto empty = oracle::load_fixture("empty.cpds");
  auto e = scheme1_symbolic(empty.cpds, {}, Budgets{});
  EXPECT_EQ(e.outcome, Outcome::safe);
  EXPECT_EQ(e.k, 1u);
}

TEST(Symbolic, LayerBudget) {
  auto in = oracle::load_fixture("foobar.cpds");
  Budgets b;
  b.layer_states = 3;
  auto v = scheme1_symbolic(in.cpds, {}, b);
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  EXPECT_EQ(v.reason, StopReason::budget);
}
