#include <gtest/gtest.h>

#include <optional>

#include "tact/equivalence.hpp"
#include "tact/explore.hpp"
#include "tact/ftts.hpp"
#include "tact/parser.hpp"
#include "testutil.hpp"

using namespace tact;

namespace {

const char* kNodeModel = R"(
reactiveclass Node(6) {
  knownrebecs { Node peer; }
  statevars { interval time last; int n; bool b; }
  msgsrv Node() { }
  msgsrv ping(int a) { n = a; }
  @abstract(life, life < 5)
  msgsrv rcv(int life, int lm) { if (life < 5) { n = lm; } }
  msgsrv kick() { last = now; peer.ping(n) after(2); }
}
main {
  Node n0(n1):();
  Node n1(n0):();
}
)";

struct Gen {
  LinkedModel lm;
  EquivalenceConfig cfg;
  test::Xoroshiro rng;

  Gen() : lm(parse_model(kNodeModel)), cfg(EquivalenceConfig::derive(lm.ast())),
          rng(test::test_seed()) {}

  Message message() {
    Message m;
    m.sender = static_cast<std::int32_t>(rng.range(0, 1));
    int which = static_cast<int>(rng.range(0, 2));
    m.msg_id = lm.message_id(which == 0 ? "ping" : which == 1 ? "rcv" : "kick");
    if (which == 0) m.args = {Value::of_int(rng.range(-3, 9))};
    if (which == 1) m.args = {Value::of_int(rng.range(0, 9)), Value::of_int(rng.range(0, 4))};
    m.arrival = TimeValue(rng.range(0, 25));
    m.deadline = rng.chance(0.3) ? m.arrival + rng.range(0, 10) : TimeValue::infinity();
    return m;
  }

  GlobalState state() {
    GlobalState g;
    g.actors.resize(2);
    for (auto& a : g.actors) {
      a.local_time = TimeValue(rng.range(0, 20));
      a.vars = {Value::of_time(TimeValue(rng.range(0, 20))), Value::of_int(rng.range(-2, 5)),
                Value::of_bool(rng.chance(0.5))};
      std::int64_t count = rng.range(0, 3);
      for (std::int64_t i = 0; i < count; ++i) {
        Message m = message();
        m.seq = static_cast<std::uint64_t>(i) + 1;
        a.bag.push_back(std::move(m));
      }
    }
    return g;
  }

  /// Uniform shift of every clock, arrival, deadline, and interval variable.
  GlobalState shifted(const GlobalState& s, std::int64_t delta) {
    GlobalState g = s;
    for (std::size_t ai = 0; ai < g.actors.size(); ++ai) {
      auto& a = g.actors[ai];
      a.local_time = a.local_time.shifted(delta);
      a.vars[0] = Value::of_time(a.vars[0].as_time().shifted(delta));  // interval var
      for (auto& m : a.bag) {
        m.arrival = m.arrival.shifted(delta);
        m.deadline = m.deadline.shifted(delta);
      }
    }
    return g;
  }

  std::int64_t safe_negative_shift(const GlobalState& s) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    for (const auto& a : s.actors) {
      lo = std::min(lo, a.local_time.ticks());
      lo = std::min(lo, a.vars[0].raw);
      for (const auto& m : a.bag) {
        lo = std::min(lo, m.arrival.ticks());
        if (!m.deadline.is_infinite()) lo = std::min(lo, m.deadline.ticks());
      }
    }
    return lo == std::numeric_limits<std::int64_t>::max() ? 0 : lo;
  }

  /// Replaces abstractable parameters with other values on the same side of
  /// their guard (life < 5 here).
  void jitter_abstract_args(GlobalState& g) {
    int rcv = lm.message_id("rcv");
    for (auto& a : g.actors) {
      for (auto& m : a.bag) {
        if (m.msg_id != rcv) continue;
        bool small = m.args[0].raw < 5;
        m.args[0] = Value::of_int(small ? rng.range(0, 4) : rng.range(5, 9));
      }
    }
  }
};

}  // namespace

TEST(ShiftEquivalence, Reflexive) {
  Gen gen;
  for (int i = 0; i < 50; ++i) {
    GlobalState s = gen.state();
    auto d = shift_equivalent(gen.lm, s, s);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(*d, 0);
  }
}

TEST(ShiftEquivalence, FixtureT7VsT4HasDelta16) {
  LinkedModel lm = test::link_fixture();
  // walk t1 → t7 along the single-successor chain
  std::vector<GlobalState> chain{initial_state(lm)};
  for (int i = 0; i < 6; ++i) {
    auto sucs = ftts_successors(lm, chain.back());
    ASSERT_EQ(sucs.size(), 1u);
    chain.push_back(sucs[0].state);
  }
  const GlobalState& t4 = chain[3];
  const GlobalState& t7 = chain[6];
  auto d = shift_equivalent(lm, t7, t4);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, 16);
  auto back = shift_equivalent(lm, t4, t7);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, -16);
}

TEST(ShiftEquivalence, BooleanVarMismatchBlocks) {
  Gen gen;
  GlobalState s = gen.state();
  GlobalState t = s;
  t.actors[1].vars[2] = Value::of_bool(!t.actors[1].vars[2].as_bool());
  EXPECT_FALSE(shift_equivalent(gen.lm, s, t).has_value());
}

TEST(RelaxedShift, PureShiftWithIntervalVarsMatches) {
  Gen gen;
  for (int i = 0; i < 50; ++i) {
    GlobalState s = gen.state();
    std::int64_t delta = gen.rng.range(-gen.safe_negative_shift(s), 12);
    GlobalState t = gen.shifted(s, delta);
    auto d = relaxed_shift_equivalent(gen.lm, s, t, gen.cfg);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(*d, -delta);
    // plain shift equivalence additionally demands equal interval variables
    if (delta != 0) {
      EXPECT_FALSE(shift_equivalent(gen.lm, s, t).has_value());
    }
  }
}

// The publisher-subscriber figure pair: everything shifted one unit, the
// pending RcvPublish carries different life values on the same guard side.
TEST(RelaxedShift, ShiftedPairWithGuardAgreeingLife) {
  Gen gen;
  GlobalState s = gen.state();
  s.actors[1].bag.clear();
  Message m;
  m.sender = 0;
  m.msg_id = gen.lm.message_id("rcv");
  m.args = {Value::of_int(6), Value::of_int(2)};  // life ≥ 5
  m.arrival = TimeValue(9);
  m.seq = 1;
  s.actors[1].bag.push_back(m);

  GlobalState t = gen.shifted(s, 1);
  t.actors[1].bag[0].args[0] = Value::of_int(8);  // still ≥ 5
  auto d = relaxed_shift_equivalent(gen.lm, s, t, gen.cfg);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, -1);
  EXPECT_EQ(canonical_key(gen.lm, s, gen.cfg), canonical_key(gen.lm, t, gen.cfg));
}

TEST(RelaxedShift, GuardDisagreementBlocks) {
  Gen gen;
  GlobalState s = gen.state();
  s.actors[0].bag.clear();
  s.actors[1].bag.clear();
  Message m;
  m.sender = 0;
  m.msg_id = gen.lm.message_id("rcv");
  m.args = {Value::of_int(4), Value::of_int(2)};  // life < 5
  m.arrival = TimeValue(3);
  m.seq = 1;
  s.actors[1].bag.push_back(m);
  GlobalState t = s;
  t.actors[1].bag[0].args[0] = Value::of_int(6);  // life ≥ 5: different branch
  EXPECT_FALSE(relaxed_shift_equivalent(gen.lm, s, t, gen.cfg).has_value());
  EXPECT_NE(canonical_key(gen.lm, s, gen.cfg), canonical_key(gen.lm, t, gen.cfg));
}

TEST(RelaxedShift, EmptyConfigCoincidesWithShiftOnFixtureStates) {
  LinkedModel lm = test::link_fixture();
  TransitionSystem ts = explore(lm, ExploreMode::FttsRawBoundedByDepth, {10000, 10});
  EquivalenceConfig empty;
  for (int i = 0; i < ts.retained(); ++i) {
    for (int j = 0; j < ts.retained(); ++j) {
      auto a = shift_equivalent(lm, ts.states[static_cast<std::size_t>(i)].state,
                                ts.states[static_cast<std::size_t>(j)].state);
      auto b = relaxed_shift_equivalent(lm, ts.states[static_cast<std::size_t>(i)].state,
                                        ts.states[static_cast<std::size_t>(j)].state, empty);
      EXPECT_EQ(a.has_value(), b.has_value());
      if (a && b) EXPECT_EQ(*a, *b);
    }
  }
}

TEST(CanonicalKey, InvariantUnderPureTimeShift) {
  Gen gen;
  for (int i = 0; i < 50; ++i) {
    GlobalState s = gen.state();
    EXPECT_EQ(canonical_key(gen.lm, s, gen.cfg),
              canonical_key(gen.lm, gen.shifted(s, 7), gen.cfg));
  }
}

// key equality ⇔ relaxed-shift equivalence, on a mixed bag of constructed
// and random pairs (the randomized cross-check of the two routes).
TEST(CanonicalKey, AgreesWithRelationOn1000Pairs) {
  Gen gen;
  int equal_pairs = 0;
  for (int i = 0; i < 1000; ++i) {
    GlobalState s = gen.state();
    GlobalState t;
    double roll = static_cast<double>(gen.rng.range(0, 99)) / 100.0;
    if (roll < 0.30) {
      t = gen.shifted(s, gen.rng.range(-gen.safe_negative_shift(s), 10));
    } else if (roll < 0.45) {
      t = gen.shifted(s, gen.rng.range(-gen.safe_negative_shift(s), 10));
      gen.jitter_abstract_args(t);
    } else if (roll < 0.70) {
      t = s;
      // small mutation: flip a var or bump a time
      if (gen.rng.chance(0.5)) {
        t.actors[0].vars[1] = Value::of_int(t.actors[0].vars[1].raw + 1);
      } else {
        t.actors[1].local_time = t.actors[1].local_time + 1;
      }
    } else {
      t = gen.state();
    }
    bool keys_equal = canonical_key(gen.lm, s, gen.cfg) == canonical_key(gen.lm, t, gen.cfg);
    auto rel = relaxed_shift_equivalent(gen.lm, s, t, gen.cfg);
    ASSERT_EQ(keys_equal, rel.has_value()) << "pair " << i;
    if (keys_equal) ++equal_pairs;
  }
  // the generator must exercise both sides of the biconditional
  EXPECT_GT(equal_pairs, 100);
  EXPECT_LT(equal_pairs, 900);
}

TEST(EquivalenceRelation, SymmetryAndTransitivity) {
  Gen gen;
  for (int i = 0; i < 200; ++i) {
    GlobalState s = gen.state();
    std::int64_t lo = gen.safe_negative_shift(s);
    std::int64_t d1 = gen.rng.range(-lo, 8);
    GlobalState t = gen.shifted(s, d1);
    gen.jitter_abstract_args(t);
    std::int64_t d2 = gen.rng.range(0, 8);
    GlobalState u = gen.shifted(t, d2);

    auto st = relaxed_shift_equivalent(gen.lm, s, t, gen.cfg);
    auto ts = relaxed_shift_equivalent(gen.lm, t, s, gen.cfg);
    auto tu = relaxed_shift_equivalent(gen.lm, t, u, gen.cfg);
    auto su = relaxed_shift_equivalent(gen.lm, s, u, gen.cfg);
    ASSERT_TRUE(st && ts && tu && su);
    EXPECT_EQ(*st, -*ts);            // symmetry flips the sign
    EXPECT_EQ(*su, *st + *tu);       // transitivity adds offsets
  }
}

TEST(EquivalenceConfigValidation, RejectsEntriesWithoutAnnotations) {
  Gen gen;
  EquivalenceConfig bad;
  bad.interval_vars.emplace_back("Node", "n");  // not an interval variable
  EXPECT_FALSE(validate_equivalence_config(gen.lm.ast(), bad).empty());

  EquivalenceConfig bad2;
  bad2.abstract_msgs.push_back({"ping", "a", dsl::lt(dsl::var("a"), dsl::lit(std::int64_t{5}))});
  EXPECT_FALSE(validate_equivalence_config(gen.lm.ast(), bad2).empty());

  EXPECT_TRUE(validate_equivalence_config(gen.lm.ast(), gen.cfg).empty());
}
