#include <gtest/gtest.h>

#include "tact/explore.hpp"
#include "tact/parser.hpp"
#include "testutil.hpp"

using namespace tact;

// On-the-fly merging folds the unbounded run as soon as a 16-shifted twin
// appears: the round-trip is three handlings long, so the fold lands on the
// third state of the loop (one step before the narrated t7/t4 pair, which is
// equivalent with the same delta — see ShiftEquivalence.FixtureT7VsT4).
TEST(Explore, FixtureShiftModeFoldsIntoCycle) {
  LinkedModel lm = test::link_fixture();
  ExploreOptions opts;
  opts.log_merges = true;
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift, {}, opts);
  EXPECT_TRUE(ts.complete);
  EXPECT_EQ(ts.retained(), 5);
  EXPECT_EQ(ts.stats.states_explored, 6u);
  EXPECT_EQ(ts.stats.states_merged, 1u);
  EXPECT_TRUE(ts.has_cycle());
  // the merge redirects t5's successor back to t3 (index 2)
  bool found_back_edge = false;
  for (const auto& tr : ts.transitions) {
    if (tr.from == 4 && tr.to == 2) found_back_edge = true;
  }
  EXPECT_TRUE(found_back_edge);
  // and the folded pair is 16 time units apart
  ASSERT_EQ(ts.merge_log.size(), 1u);
  auto d = shift_equivalent(lm, ts.merge_log[0].discarded,
                            ts.states[static_cast<std::size_t>(ts.merge_log[0].representative)]
                                .state);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, 16);
}

TEST(Explore, RawModeIsDepthBounded) {
  LinkedModel lm = test::link_fixture();
  TransitionSystem ts = explore(lm, ExploreMode::FttsRawBoundedByDepth, {100000, 9});
  EXPECT_FALSE(ts.complete);  // the run never terminates; the bound cut it
  EXPECT_EQ(ts.retained(), 10);  // a pure chain, one state per depth level
  EXPECT_FALSE(ts.has_cycle());
}

TEST(Explore, TerminatingModelWithoutCycle) {
  LinkedModel lm(parse_model(R"(
    reactiveclass A(4) {
      msgsrv A() { self.go(); self.go2() after(3); }
      msgsrv go() { }
      msgsrv go2() { }
    }
    main { A a():(); }
  )"));
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift);
  EXPECT_TRUE(ts.complete);
  EXPECT_EQ(ts.retained(), 3);  // exactly the constructor-message handlings
  EXPECT_FALSE(ts.has_cycle());
  EXPECT_EQ(ts.transitions.size(), 2u);
}

TEST(Explore, EmptyModelHasOneState) {
  LinkedModel lm(parse_model("reactiveclass A(2) { msgsrv A() { } } main { }"));
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift);
  EXPECT_EQ(ts.retained(), 1);
  EXPECT_TRUE(ts.transitions.empty());
  EXPECT_TRUE(ts.complete);
}

TEST(Explore, MaxStatesTruncatesAndFlags) {
  LinkedModel lm = test::link_fixture();
  TransitionSystem ts = explore(lm, ExploreMode::FttsRawBoundedByDepth, {4, 1000});
  EXPECT_FALSE(ts.complete);
  EXPECT_EQ(ts.retained(), 4);
}

TEST(Explore, MergeLogRecordsDiscardedStates) {
  LinkedModel lm = test::link_fixture();
  ExploreOptions opts;
  opts.log_merges = true;
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift, {}, opts);
  ASSERT_EQ(ts.merge_log.size(), 1u);
  EXPECT_EQ(ts.merge_log[0].representative, 2);
  // the representative kept the smaller clocks (BFS first-seen rule)
  const GlobalState& kept = ts.states[2].state;
  for (std::size_t a = 0; a < kept.actors.size(); ++a) {
    EXPECT_LE(kept.actors[a].local_time,
              ts.merge_log[0].discarded.actors[a].local_time);
  }
}

// One-step transfer: every merged pair must enable the same labels with
// equivalent successors (the operational content of the preservation
// theorem, checked by re-expanding the discarded state).
TEST(Explore, MergedPairsTransferOneStep) {
  LinkedModel lm = test::link_fixture();
  EquivalenceConfig cfg = EquivalenceConfig::derive(lm.ast());
  ExploreOptions opts;
  opts.cfg = cfg;
  opts.log_merges = true;
  TransitionSystem ts = explore(lm, ExploreMode::BfttsRelaxed, {}, opts);
  for (const auto& rec : ts.merge_log) {
    const GlobalState& kept = ts.states[static_cast<std::size_t>(rec.representative)].state;
    auto a = ftts_successors(lm, rec.discarded);
    auto b = ftts_successors(lm, kept);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].label, b[i].label);
      auto d = relaxed_shift_equivalent(lm, a[i].state, b[i].state, cfg);
      EXPECT_TRUE(d.has_value());
    }
  }
}

TEST(Explore, PoisonedStatesAreTerminalAndCounted) {
  LinkedModel lm(parse_model(R"(
    reactiveclass A(2) {
      knownrebecs { B b; }
      msgsrv A() { self.flood(); }
      msgsrv flood() { b.cram(); b.cram(); b.cram(); }
    }
    reactiveclass B(2) {
      msgsrv B() { }
      msgsrv cram() { }
    }
    main { A a(b):(); B b():(); }
  )"));
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift);
  EXPECT_EQ(ts.stats.poisoned, 1u);
  // the poisoned state has no outgoing transitions
  for (const auto& tr : ts.transitions) {
    EXPECT_TRUE(ts.states[static_cast<std::size_t>(tr.from)].poison.empty());
  }
}

TEST(Explore, ParallelRunMatchesSequential) {
  LinkedModel lm = test::link_fixture();
  ExploreOptions seq;
  ExploreOptions par;
  par.jobs = 4;
  TransitionSystem a = explore(lm, ExploreMode::FttsRawBoundedByDepth, {100000, 8}, seq);
  TransitionSystem b = explore(lm, ExploreMode::FttsRawBoundedByDepth, {100000, 8}, par);
  EXPECT_EQ(a.retained(), b.retained());
  EXPECT_EQ(a.stats.states_explored, b.stats.states_explored);
  ASSERT_EQ(a.transitions.size(), b.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    EXPECT_EQ(a.transitions[i].from, b.transitions[i].from);
    EXPECT_EQ(a.transitions[i].to, b.transitions[i].to);
    EXPECT_EQ(a.labels[static_cast<std::size_t>(a.transitions[i].label)],
              b.labels[static_cast<std::size_t>(b.transitions[i].label)]);
  }
}

TEST(Explore, LabelMonitorShortCircuits) {
  LinkedModel lm = test::link_fixture();
  ExploreOptions opts;
  opts.label_monitor = [](const std::string& l) { return l == "res.request"; };
  TransitionSystem ts = explore(lm, ExploreMode::BfttsShift, {}, opts);
  EXPECT_TRUE(ts.violation_halt);
  EXPECT_LE(ts.retained(), 3);
}

TEST(Explore, ModeMonotonicity) {
  LinkedModel lm = test::link_fixture();
  EquivalenceConfig cfg = EquivalenceConfig::derive(lm.ast());
  ExploreOptions opts;
  opts.cfg = cfg;
  TransitionSystem relaxed = explore(lm, ExploreMode::BfttsRelaxed, {}, opts);
  TransitionSystem shift = explore(lm, ExploreMode::BfttsShift);
  EXPECT_LE(relaxed.retained(), shift.retained());
  EXPECT_LE(static_cast<std::uint64_t>(shift.retained()), shift.stats.states_explored);
}
