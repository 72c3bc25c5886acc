#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tact/diagnostics.hpp"

namespace tact {

enum class Type { Int, Bool, Time };

inline const char* type_name(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    case Type::Time: return "time";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { Add, Sub, And, Or, Eq, Ne, Lt, Le, Gt, Ge };
enum class UnOp { Neg, Not };

struct Expr {
  enum class Kind { IntLit, BoolLit, Var, Now, Unary, Binary };

  Kind kind;
  std::int64_t int_value = 0;  // IntLit
  bool bool_value = false;     // BoolLit
  std::string name;            // Var
  BinOp bin_op = BinOp::Add;
  UnOp un_op = UnOp::Neg;
  ExprPtr lhs, rhs;  // Binary uses both, Unary uses lhs
  SourceLoc loc;

  static ExprPtr int_lit(std::int64_t v, SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::IntLit;
    e->int_value = v;
    e->loc = loc;
    return e;
  }
  static ExprPtr bool_lit(bool v, SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::BoolLit;
    e->bool_value = v;
    e->loc = loc;
    return e;
  }
  static ExprPtr var(std::string n, SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->name = std::move(n);
    e->loc = loc;
    return e;
  }
  static ExprPtr now(SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Now;
    e->loc = loc;
    return e;
  }
  static ExprPtr unary(UnOp op, ExprPtr a, SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->un_op = op;
    e->lhs = std::move(a);
    e->loc = loc;
    return e;
  }
  static ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b, SourceLoc loc = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->bin_op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    e->loc = loc;
    return e;
  }
};

// Convenience builders for generated models.
namespace dsl {
inline ExprPtr lit(std::int64_t v) { return Expr::int_lit(v); }
inline ExprPtr lit(bool v) { return Expr::bool_lit(v); }
inline ExprPtr var(const std::string& n) { return Expr::var(n); }
inline ExprPtr now() { return Expr::now(); }
inline ExprPtr add(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Add, a, b); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Sub, a, b); }
inline ExprPtr lt(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Lt, a, b); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Le, a, b); }
inline ExprPtr gt(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Gt, a, b); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Ge, a, b); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Eq, a, b); }
inline ExprPtr ne(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Ne, a, b); }
inline ExprPtr land(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::And, a, b); }
inline ExprPtr lor(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Or, a, b); }
inline ExprPtr lnot(ExprPtr a) { return Expr::unary(UnOp::Not, a); }
}  // namespace dsl

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Statement;
using Block = std::vector<Statement>;

enum class SendTarget { Slot, Self, Lookup };

struct Statement {
  enum class Kind { Assign, NondetAssign, If, Delay, Send, Skip };

  Kind kind = Kind::Skip;

  // Assign / NondetAssign
  std::string target;
  ExprPtr value;                 // Assign
  std::vector<ExprPtr> choices;  // NondetAssign

  // If
  ExprPtr cond;
  Block then_block;
  Block else_block;

  // Delay
  ExprPtr delay_amount;

  // Send
  SendTarget send_target = SendTarget::Slot;
  std::string slot;       // Slot target
  ExprPtr lookup_id;      // Lookup target: find(e)
  std::string message;    // message name
  std::vector<ExprPtr> args;
  ExprPtr after;          // optional
  ExprPtr deadline;       // optional

  SourceLoc loc;
};

namespace dsl {
inline Statement assign(std::string var, ExprPtr v) {
  Statement s;
  s.kind = Statement::Kind::Assign;
  s.target = std::move(var);
  s.value = std::move(v);
  return s;
}
inline Statement nondet(std::string var, std::vector<ExprPtr> choices) {
  Statement s;
  s.kind = Statement::Kind::NondetAssign;
  s.target = std::move(var);
  s.choices = std::move(choices);
  return s;
}
inline Statement if_else(ExprPtr c, Block t, Block e = {}) {
  Statement s;
  s.kind = Statement::Kind::If;
  s.cond = std::move(c);
  s.then_block = std::move(t);
  s.else_block = std::move(e);
  return s;
}
inline Statement delay(ExprPtr e) {
  Statement s;
  s.kind = Statement::Kind::Delay;
  s.delay_amount = std::move(e);
  return s;
}
inline Statement send(std::string slot, std::string msg, std::vector<ExprPtr> args = {},
                      ExprPtr after = nullptr, ExprPtr deadline = nullptr) {
  Statement s;
  s.kind = Statement::Kind::Send;
  s.send_target = SendTarget::Slot;
  s.slot = std::move(slot);
  s.message = std::move(msg);
  s.args = std::move(args);
  s.after = std::move(after);
  s.deadline = std::move(deadline);
  return s;
}
inline Statement send_self(std::string msg, std::vector<ExprPtr> args = {},
                           ExprPtr after = nullptr, ExprPtr deadline = nullptr) {
  Statement s = send("", std::move(msg), std::move(args), std::move(after), std::move(deadline));
  s.send_target = SendTarget::Self;
  return s;
}
inline Statement send_find(ExprPtr id, std::string msg, std::vector<ExprPtr> args = {},
                           ExprPtr after = nullptr, ExprPtr deadline = nullptr) {
  Statement s = send("", std::move(msg), std::move(args), std::move(after), std::move(deadline));
  s.send_target = SendTarget::Lookup;
  s.lookup_id = std::move(id);
  return s;
}
inline Statement skip() { return Statement{}; }
}  // namespace dsl

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Param {
  std::string name;
  Type type = Type::Int;
  ExprPtr abstract_guard;  // set by @abstract(name, guard); null otherwise
};

struct MessageServer {
  std::string name;
  std::vector<Param> params;
  Block body;
  int priority = 0;  // lower value handled first on arrival ties
  SourceLoc loc;
};

struct StateVar {
  std::string name;
  Type type = Type::Int;
  bool interval = false;  // member of the interval-variable set
};

struct KnownSlot {
  std::string name;
  std::string class_name;
};

inline constexpr int kDefaultMailboxCapacity = 10;

struct ActorClass {
  std::string name;
  int capacity = kDefaultMailboxCapacity;
  std::vector<KnownSlot> known;
  std::vector<StateVar> state_vars;
  std::vector<MessageServer> servers;
  SourceLoc loc;

  const MessageServer* find_server(const std::string& msg) const {
    for (const auto& s : servers) {
      if (s.name == msg) return &s;
    }
    return nullptr;
  }
  int var_index(const std::string& name) const {
    for (std::size_t i = 0; i < state_vars.size(); ++i) {
      if (state_vars[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }
};

/// Constructor arguments in `main` are literal constants.
struct CtorArg {
  Type type = Type::Int;
  std::int64_t int_value = 0;
  bool bool_value = false;
};

struct Instance {
  std::string name;
  std::string class_name;
  std::vector<std::string> bindings;  // known-rebec names, in slot order
  std::vector<CtorArg> ctor_args;
  SourceLoc loc;
};

/// A parsed actor model. Instances double as the integer-id lookup
/// directory: the id of an instance is its declaration index.
struct Model {
  std::vector<ActorClass> classes;
  std::vector<Instance> instances;

  const ActorClass* find_class(const std::string& name) const {
    for (const auto& c : classes) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  int instance_index(const std::string& name) const {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }
};

}  // namespace tact
