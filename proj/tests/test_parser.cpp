#include <gtest/gtest.h>

#include "tact/parser.hpp"
#include "tact/printer.hpp"
#include "testutil.hpp"

using namespace tact;

TEST(Parser, RequestResponseFixture) {
  Model m = parse_model(test::kRequestResponseSource);
  ASSERT_EQ(m.classes.size(), 2u);
  EXPECT_EQ(m.classes[0].name, "Requester");
  EXPECT_EQ(m.classes[0].capacity, 5);
  EXPECT_EQ(m.classes[1].name, "Responder");
  ASSERT_EQ(m.instances.size(), 2u);
  EXPECT_EQ(m.instances[0].name, "req");
  EXPECT_EQ(m.instances[1].name, "res");
  ASSERT_EQ(m.instances[0].bindings.size(), 1u);
  EXPECT_EQ(m.instances[0].bindings[0], "res");
}

TEST(Parser, EmptyMainIsVacuouslyExplorable) {
  Model m = parse_model(R"(
    reactiveclass A(3) { msgsrv A() { } }
    main { }
  )");
  EXPECT_EQ(m.classes.size(), 1u);
  EXPECT_TRUE(m.instances.empty());
}

TEST(Parser, AnnotationsAndStatements) {
  Model m = parse_model(R"(
    reactiveclass W(4) {
      statevars {
        interval time last;
        int count;
        bool flag;
      }
      msgsrv W() { self.tick() after(2) deadline(9); }
      @priority(2)
      @abstract(life, life < 5)
      msgsrv tick(int life) {
        count = count + 1;
        flag = ?(true, false);
        if (now - last < 3) { skip; } else { last = now; }
        delay(1);
      }
    }
    main { W w():(); }
  )");
  const ActorClass& w = m.classes[0];
  ASSERT_EQ(w.state_vars.size(), 3u);
  EXPECT_TRUE(w.state_vars[0].interval);
  EXPECT_EQ(w.state_vars[0].type, Type::Time);
  const MessageServer* tick = w.find_server("tick");
  ASSERT_NE(tick, nullptr);
  EXPECT_EQ(tick->priority, 2);
  ASSERT_EQ(tick->params.size(), 1u);
  ASSERT_TRUE(tick->params[0].abstract_guard != nullptr);
  const MessageServer* ctor = w.find_server("W");
  ASSERT_NE(ctor, nullptr);
  ASSERT_EQ(ctor->body.size(), 1u);
  EXPECT_TRUE(ctor->body[0].after != nullptr);
  EXPECT_TRUE(ctor->body[0].deadline != nullptr);
}

TEST(Parser, SyntaxErrorCarriesLineAndColumn) {
  try {
    parse_model("reactiveclass A(2) {\n  msgsrv A() { delay(; }\n}\nmain { }");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.loc.line, 2);
    EXPECT_GT(e.loc.column, 0);
  }
}

TEST(Parser, UnknownClassInMainRejected) {
  EXPECT_THROW(parse_model("reactiveclass A(2) { msgsrv A() { } } main { B b():(); }"),
               ParseError);
}

TEST(Parser, KnownRebecArityMismatchRejected) {
  EXPECT_THROW(parse_model(R"(
    reactiveclass A(2) {
      knownrebecs { A other; }
      msgsrv A() { }
    }
    main { A a():(); }
  )"),
               ParseError);
}

TEST(Parser, ConstructorRequired) {
  EXPECT_THROW(parse_model("reactiveclass A(2) { msgsrv go() { } } main { }"), ParseError);
}

TEST(Parser, MutualKnownRebecsAllowed) {
  EXPECT_NO_THROW(parse_model(test::kRequestResponseSource));
}

// Round trip: parse → print → parse → print is a fixed point.
TEST(Parser, PrintRoundTrip) {
  const char* sources[] = {
      test::kRequestResponseSource,
      R"(
      reactiveclass P(7) {
        knownrebecs { Q q; }
        statevars { interval time t0; int n; }
        msgsrv P(int seed) { n = seed; q.poke(n + 1, true) after(3); }
        @priority(1)
        msgsrv hit(int x, bool b) {
          if (x > 2 && b) { n = x - 1; } else { n = -(x); }
          self.hit(n, !(b));
        }
      }
      reactiveclass Q(2) {
        msgsrv Q() { }
        @abstract(v, v >= 10 || v < 2)
        msgsrv poke(int v, bool go) { if (v >= 10 || v < 2) { delay(2); } }
      }
      main {
        P p(q):(4);
        Q q():();
      }
      )",
  };
  for (const char* src : sources) {
    Model once = parse_model(src);
    std::string printed = print_model(once);
    Model twice = parse_model(printed);
    EXPECT_EQ(printed, print_model(twice));
  }
}

TEST(Parser, FixtureFileMatchesEmbeddedSource) {
  std::string file = test::read_file(test::repo_path("models/request_response.tam"));
  Model from_file = parse_model(file);
  Model embedded = parse_model(test::kRequestResponseSource);
  EXPECT_EQ(print_model(from_file), print_model(embedded));
}
