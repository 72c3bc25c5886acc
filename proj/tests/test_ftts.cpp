#include <gtest/gtest.h>

#include "tact/ftts.hpp"
#include "tact/parser.hpp"
#include "testutil.hpp"

using namespace tact;

TEST(InitialState, FixtureBagsAndClocks) {
  LinkedModel lm = test::link_fixture();
  GlobalState g = initial_state(lm);
  ASSERT_EQ(g.actors.size(), 2u);
  // only req holds its self-sent "request"
  ASSERT_EQ(g.actors[0].bag.size(), 1u);
  EXPECT_EQ(lm.message_name(g.actors[0].bag[0].msg_id), "request");
  EXPECT_EQ(g.actors[0].bag[0].arrival, TimeValue(0));
  EXPECT_TRUE(g.actors[1].bag.empty());
  EXPECT_EQ(g.actors[0].local_time, TimeValue(0));
  EXPECT_EQ(g.actors[1].local_time, TimeValue(0));
}

TEST(InitialState, ZeroInstancesIsEmptyAndTerminal) {
  LinkedModel lm(parse_model("reactiveclass A(2) { msgsrv A() { } } main { }"));
  GlobalState g = initial_state(lm);
  EXPECT_TRUE(g.actors.empty());
  EXPECT_TRUE(ftts_successors(lm, g).empty());
}

TEST(FttsSuccessors, FixtureFirstStepMatchesNarrative) {
  LinkedModel lm = test::link_fixture();
  GlobalState t1 = initial_state(lm);
  auto sucs = ftts_successors(lm, t1);
  ASSERT_EQ(sucs.size(), 1u);
  EXPECT_EQ(sucs[0].label, "req.request");
  const GlobalState& t2 = sucs[0].state;
  EXPECT_EQ(t2.actors[0].local_time, TimeValue(3));
  ASSERT_EQ(t2.actors[1].bag.size(), 1u);
  EXPECT_EQ(t2.actors[1].bag[0].arrival, TimeValue(11));
}

TEST(FttsSuccessors, AllBagsEmptyIsTerminal) {
  LinkedModel lm(parse_model(R"(
    reactiveclass A(2) { msgsrv A() { } }
    main { A a():(); }
  )"));
  GlobalState g = initial_state(lm);
  EXPECT_TRUE(ftts_successors(lm, g).empty());
}

TEST(FttsSuccessors, PriorityBreaksEqualArrivalTies) {
  // Two messages arrive at time 2; prio's server carries @priority(1) beating
  // the default 0 of other? No: lower value wins, so give "fast" priority -1.
  LinkedModel lm(parse_model(R"(
    reactiveclass A(4) {
      statevars { int got; }
      msgsrv A() {
        self.slow() after(2);
        self.fast() after(2);
      }
      msgsrv slow() { got = 1; }
      @priority(-1)
      msgsrv fast() { got = 2; }
    }
    main { A a():(); }
  )"));
  GlobalState g = initial_state(lm);
  auto sucs = ftts_successors(lm, g);
  ASSERT_EQ(sucs.size(), 1u);
  EXPECT_EQ(sucs[0].label, "a.fast");
  EXPECT_EQ(sucs[0].state.actors[0].vars[0].raw, 2);
}

TEST(FttsSuccessors, SenderIdBreaksRemainingTies) {
  LinkedModel lm(parse_model(R"(
    reactiveclass S(4) {
      knownrebecs { T t; }
      msgsrv S() { t.hit() after(5); }
    }
    reactiveclass T(4) {
      statevars { int n; }
      msgsrv T() { }
      msgsrv hit() { n = n + 1; }
    }
    main {
      S s1(t):();
      S s2(t):();
      T t():();
    }
  )"));
  GlobalState g = initial_state(lm);
  auto sucs = ftts_successors(lm, g);
  ASSERT_EQ(sucs.size(), 1u);
  // both hits arrive at 5; the lower sender id (s1 = actor 0) goes first
  const auto& bag = sucs[0].state.actors[2].bag;
  ASSERT_EQ(bag.size(), 1u);
  EXPECT_EQ(bag[0].sender, 1);
}

TEST(FttsSuccessors, ExpiredMessageDroppedWithEvent) {
  // The worker is busy past the deadline of the second message.
  LinkedModel lm(parse_model(R"(
    reactiveclass A(4) {
      msgsrv A() {
        self.work();
        self.urgent() after(1) deadline(3);
      }
      msgsrv work() { delay(10); }
      msgsrv urgent() { }
    }
    main { A a():(); }
  )"));
  GlobalState g = initial_state(lm);
  auto s1 = ftts_successors(lm, g);
  ASSERT_EQ(s1.size(), 1u);  // work (arrival 0) beats urgent (arrival 1)
  EXPECT_EQ(s1[0].label, "a.work");
  EXPECT_EQ(s1[0].state.actors[0].local_time, TimeValue(10));
  auto s2 = ftts_successors(lm, s1[0].state);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0].label, "expired:a.urgent");
  EXPECT_TRUE(s2[0].expired);
  EXPECT_TRUE(s2[0].state.actors[0].bag.empty());
  // the drop is an event, not an error: exploration continues from there
  EXPECT_TRUE(s2[0].poison.empty());
}

TEST(FttsSuccessors, DeadlineExactlyAtHandlingTimeIsNotExpired) {
  LinkedModel lm(parse_model(R"(
    reactiveclass A(4) {
      msgsrv A() { self.go() after(2) deadline(2); }
      msgsrv go() { }
    }
    main { A a():(); }
  )"));
  GlobalState g = initial_state(lm);
  auto sucs = ftts_successors(lm, g);
  ASSERT_EQ(sucs.size(), 1u);
  EXPECT_EQ(sucs[0].label, "a.go");
}

TEST(FttsSuccessors, MailboxOverflowPoisonsBranch) {
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
  GlobalState g = initial_state(lm);
  auto sucs = ftts_successors(lm, g);
  ASSERT_EQ(sucs.size(), 1u);
  EXPECT_FALSE(sucs[0].poison.empty());
  EXPECT_NE(sucs[0].poison.find("overflow"), std::string::npos);
}

TEST(FttsSuccessors, EachNonEmptyActorContributes) {
  LinkedModel lm(parse_model(R"(
    reactiveclass A(4) {
      msgsrv A() { self.go() after(3); }
      msgsrv go() { }
    }
    reactiveclass B(4) {
      msgsrv B() { self.go() after(9); }
      msgsrv go() { }
    }
    main { A a():(); B b():(); }
  )"));
  GlobalState g = initial_state(lm);
  auto sucs = ftts_successors(lm, g);
  ASSERT_EQ(sucs.size(), 2u);
  EXPECT_EQ(sucs[0].label, "a.go");
  EXPECT_EQ(sucs[1].label, "b.go");
}
