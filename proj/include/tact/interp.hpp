#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tact/ast.hpp"
#include "tact/state.hpp"
#include "tact/time.hpp"

namespace tact {

struct EvalException : std::runtime_error {
  explicit EvalException(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Expression evaluation over an actor's state variables, the active server's
// parameters, and the local clock.
class Env {
 public:
  Env(const ActorClass& cls, std::vector<Value>& vars, const MessageServer* srv,
      std::vector<Value>* params, TimeValue now)
      : cls_(cls), vars_(vars), srv_(srv), params_(params), now_(now) {}

  Value* lookup(const std::string& name) {
    if (srv_ && params_) {
      for (std::size_t i = 0; i < srv_->params.size(); ++i) {
        if (srv_->params[i].name == name) return &(*params_)[i];
      }
    }
    int idx = cls_.var_index(name);
    if (idx >= 0) return &vars_[static_cast<std::size_t>(idx)];
    return nullptr;
  }

  TimeValue now() const { return now_; }

 private:
  const ActorClass& cls_;
  std::vector<Value>& vars_;
  const MessageServer* srv_;
  std::vector<Value>* params_;
  TimeValue now_;
};

inline Value eval(const ExprPtr& e, Env& env) {
  switch (e->kind) {
    case Expr::Kind::IntLit: return Value::of_int(e->int_value);
    case Expr::Kind::BoolLit: return Value::of_bool(e->bool_value);
    case Expr::Kind::Now: return Value::of_time(env.now());
    case Expr::Kind::Var: {
      Value* v = env.lookup(e->name);
      if (!v) throw EvalException("unbound variable '" + e->name + "'");
      return *v;
    }
    case Expr::Kind::Unary: {
      Value a = eval(e->lhs, env);
      if (e->un_op == UnOp::Not) {
        if (a.type != Type::Bool) throw EvalException("'!' applied to non-bool");
        return Value::of_bool(!a.as_bool());
      }
      if (a.type != Type::Int) throw EvalException("unary '-' applied to non-int");
      return Value::of_int(-a.raw);
    }
    case Expr::Kind::Binary: {
      if (e->bin_op == BinOp::And || e->bin_op == BinOp::Or) {
        Value a = eval(e->lhs, env);
        if (a.type != Type::Bool) throw EvalException("logical operand is not bool");
        if (e->bin_op == BinOp::And && !a.as_bool()) return Value::of_bool(false);
        if (e->bin_op == BinOp::Or && a.as_bool()) return Value::of_bool(true);
        Value b = eval(e->rhs, env);
        if (b.type != Type::Bool) throw EvalException("logical operand is not bool");
        return b;
      }
      Value a = eval(e->lhs, env);
      Value b = eval(e->rhs, env);
      switch (e->bin_op) {
        case BinOp::Add:
          if (a.type != Type::Int || b.type != Type::Int)
            throw EvalException("'+' needs int operands");
          return Value::of_int(a.raw + b.raw);
        case BinOp::Sub:
          if (a.type == Type::Time && b.type == Type::Time)
            return Value::of_int(a.raw - b.raw);  // interval
          if (a.type != Type::Int || b.type != Type::Int)
            throw EvalException("'-' needs int or time operands");
          return Value::of_int(a.raw - b.raw);
        case BinOp::Eq:
        case BinOp::Ne: {
          if (a.type != b.type) throw EvalException("'==' compares mixed types");
          bool eq = a.raw == b.raw;
          return Value::of_bool(e->bin_op == BinOp::Eq ? eq : !eq);
        }
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: {
          if (a.type != b.type || a.type == Type::Bool)
            throw EvalException("ordered comparison needs matching int/time operands");
          bool r = false;
          switch (e->bin_op) {
            case BinOp::Lt: r = a.raw < b.raw; break;
            case BinOp::Le: r = a.raw <= b.raw; break;
            case BinOp::Gt: r = a.raw > b.raw; break;
            case BinOp::Ge: r = a.raw >= b.raw; break;
            default: break;
          }
          return Value::of_bool(r);
        }
        default:
          break;
      }
      throw EvalException("bad binary operator");
    }
  }
  throw EvalException("bad expression");
}

/// Evaluates an abstraction guard against a single parameter value.
inline bool eval_guard(const ExprPtr& guard, const std::string& param_name, Value v) {
  switch (guard->kind) {
    case Expr::Kind::Unary:
      return !eval_guard(guard->lhs, param_name, v);
    case Expr::Kind::Binary: {
      if (guard->bin_op == BinOp::And)
        return eval_guard(guard->lhs, param_name, v) && eval_guard(guard->rhs, param_name, v);
      if (guard->bin_op == BinOp::Or)
        return eval_guard(guard->lhs, param_name, v) || eval_guard(guard->rhs, param_name, v);
      auto side = [&](const ExprPtr& e) -> std::int64_t {
        if (e->kind == Expr::Kind::IntLit) return e->int_value;
        return v.raw;  // the parameter
      };
      std::int64_t l = side(guard->lhs), r = side(guard->rhs);
      switch (guard->bin_op) {
        case BinOp::Eq: return l == r;
        case BinOp::Ne: return l != r;
        case BinOp::Lt: return l < r;
        case BinOp::Le: return l <= r;
        case BinOp::Gt: return l > r;
        case BinOp::Ge: return l >= r;
        default: throw EvalException("malformed abstraction guard");
      }
    }
    default:
      throw EvalException("malformed abstraction guard");
  }
}

inline void append_i64(std::string& out, std::int64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (i * 8)) & 0xff));
}

/// Serialized argument vector of a message, with abstractable parameters
/// replaced by their guard outcome. This is a fixed function of the model's
/// annotations (not of the exploration mode), so victim selection below is
/// identical across equivalent states and across modes.
inline std::string abstract_arg_key(const LinkedModel& lm, int target_actor, const Message& m) {
  std::string key;
  const MessageServer* srv = lm.server_for(target_actor, m.msg_id);
  for (std::size_t i = 0; i < m.args.size(); ++i) {
    const ExprPtr* guard = nullptr;
    if (srv && i < srv->params.size() && srv->params[i].abstract_guard) {
      guard = &srv->params[i].abstract_guard;
    }
    if (guard) {
      key.push_back('g');
      key.push_back(eval_guard(*guard, srv->params[i].name, m.args[i]) ? 1 : 0);
    } else {
      key.push_back(static_cast<char>(m.args[i].type));
      append_i64(key, m.args[i].raw);
    }
  }
  return key;
}

/// Total order deciding which bag message an actor handles next:
/// earliest arrival first, then server priority, sender id, message name,
/// abstraction-aware argument key, and finally FIFO sequence.
inline bool victim_less(const LinkedModel& lm, int actor, const Message& a, const Message& b) {
  if (a.arrival != b.arrival) return a.arrival < b.arrival;
  int pa = lm.server_priority(actor, a.msg_id);
  int pb = lm.server_priority(actor, b.msg_id);
  if (pa != pb) return pa < pb;
  if (a.sender != b.sender) return a.sender < b.sender;
  if (a.msg_id != b.msg_id) return lm.message_name(a.msg_id) < lm.message_name(b.msg_id);
  std::string ka = abstract_arg_key(lm, actor, a);
  std::string kb = abstract_arg_key(lm, actor, b);
  if (ka != kb) return ka < kb;
  return a.seq < b.seq;
}

inline int victim_index(const LinkedModel& lm, int actor, const std::vector<Message>& bag) {
  int best = -1;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (best < 0 || victim_less(lm, actor, bag[i], bag[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

inline std::uint64_t next_seq(const std::vector<Message>& bag) {
  std::uint64_t mx = 0;
  for (const auto& m : bag) mx = std::max(mx, m.seq);
  return mx + 1;
}

}  // namespace detail

struct EmittedMessage {
  int target = -1;
  Message msg;  // seq unset; assigned when applied to the target bag
};

/// One result of running a message server to completion: the actor's new
/// local state plus the messages it sent. A nonempty error poisons the
/// outcome (the explorer records and does not expand it).
struct Outcome {
  LocalState local;
  std::vector<EmittedMessage> emitted;
  std::string error;
};

namespace detail {

struct ExecCtx {
  LocalState st;
  std::vector<Value> params;
  std::vector<EmittedMessage> emitted;
  std::string error;
};

class ServerRunner {
 public:
  ServerRunner(const LinkedModel& lm, int actor, const MessageServer& srv)
      : lm_(lm), actor_(actor), srv_(srv) {}

  std::vector<ExecCtx> run(ExecCtx initial) {
    std::vector<ExecCtx> ctxs;
    ctxs.push_back(std::move(initial));
    run_block(srv_.body, ctxs);
    return ctxs;
  }

 private:
  const LinkedModel& lm_;
  int actor_;
  const MessageServer& srv_;

  void run_block(const Block& block, std::vector<ExecCtx>& ctxs) {
    for (const auto& st : block) {
      std::vector<ExecCtx> next;
      next.reserve(ctxs.size());
      for (auto& ctx : ctxs) {
        if (!ctx.error.empty()) {
          next.push_back(std::move(ctx));
          continue;
        }
        step(st, std::move(ctx), next);
      }
      ctxs = std::move(next);
    }
  }

  void step(const Statement& st, ExecCtx ctx, std::vector<ExecCtx>& out) {
    const ActorClass& cls = lm_.actor_class(actor_);
    try {
      switch (st.kind) {
        case Statement::Kind::Skip:
          out.push_back(std::move(ctx));
          return;
        case Statement::Kind::Assign: {
          Env env(cls, ctx.st.vars, &srv_, &ctx.params, ctx.st.local_time);
          Value v = eval(st.value, env);
          assign_to(ctx, st.target, v);
          out.push_back(std::move(ctx));
          return;
        }
        case Statement::Kind::NondetAssign: {
          // One successor context per listed value, in source order.
          for (const auto& choice : st.choices) {
            ExecCtx forked = ctx;
            Env env(cls, forked.st.vars, &srv_, &forked.params, forked.st.local_time);
            Value v = eval(choice, env);
            assign_to(forked, st.target, v);
            out.push_back(std::move(forked));
          }
          return;
        }
        case Statement::Kind::If: {
          Env env(cls, ctx.st.vars, &srv_, &ctx.params, ctx.st.local_time);
          Value c = eval(st.cond, env);
          if (c.type != Type::Bool) throw EvalException("if-condition is not bool");
          std::vector<ExecCtx> branch;
          branch.push_back(std::move(ctx));
          run_block(c.as_bool() ? st.then_block : st.else_block, branch);
          for (auto& b : branch) out.push_back(std::move(b));
          return;
        }
        case Statement::Kind::Delay: {
          Env env(cls, ctx.st.vars, &srv_, &ctx.params, ctx.st.local_time);
          Value d = eval(st.delay_amount, env);
          if (d.type != Type::Int || d.raw < 0) throw EvalException("delay needs int >= 0");
          ctx.st.local_time = ctx.st.local_time + d.raw;
          out.push_back(std::move(ctx));
          return;
        }
        case Statement::Kind::Send: {
          Env env(cls, ctx.st.vars, &srv_, &ctx.params, ctx.st.local_time);
          EmittedMessage em;
          em.target = resolve_target(st, env);
          em.msg.sender = actor_;
          em.msg.msg_id = lm_.message_id(st.message);
          const MessageServer* target_srv =
              em.msg.msg_id >= 0 ? lm_.server_for(em.target, em.msg.msg_id) : nullptr;
          if (!target_srv) {
            throw EvalException("actor " + lm_.actor_name(em.target) +
                                " has no message server '" + st.message + "'");
          }
          if (target_srv->params.size() != st.args.size()) {
            throw EvalException("send of '" + st.message + "' passes " +
                                std::to_string(st.args.size()) + " args, server takes " +
                                std::to_string(target_srv->params.size()));
          }
          for (std::size_t i = 0; i < st.args.size(); ++i) {
            Value v = eval(st.args[i], env);
            Type want = target_srv->params[i].type;
            if (v.type == Type::Int && want == Type::Time) {
              if (v.raw < 0) throw EvalException("negative value passed to time parameter");
              v = Value::of_time(TimeValue(v.raw));
            }
            if (v.type != want) {
              throw EvalException("argument " + std::to_string(i + 1) + " of '" + st.message +
                                  "' has type " + type_name(v.type) + ", expected " +
                                  type_name(want));
            }
            em.msg.args.push_back(v);
          }
          std::int64_t after = 0;
          if (st.after) {
            Value a = eval(st.after, env);
            if (a.type != Type::Int || a.raw < 0) throw EvalException("after needs int >= 0");
            after = a.raw;
          }
          em.msg.arrival = ctx.st.local_time + after;
          if (st.deadline) {
            Value dl = eval(st.deadline, env);
            if (dl.type != Type::Int || dl.raw < 0) throw EvalException("deadline needs int >= 0");
            em.msg.deadline = ctx.st.local_time + dl.raw;
            if (em.msg.deadline < em.msg.arrival)
              throw EvalException("message deadline precedes its arrival");
          } else {
            em.msg.deadline = TimeValue::infinity();
          }
          ctx.emitted.push_back(std::move(em));
          out.push_back(std::move(ctx));
          return;
        }
      }
    } catch (const EvalException& ex) {
      ctx.error = std::string(ex.what()) + " in " + lm_.actor_class(actor_).name + "." +
                  srv_.name;
      out.push_back(std::move(ctx));
    }
  }

  void assign_to(ExecCtx& ctx, const std::string& name, Value v) {
    const ActorClass& cls = lm_.actor_class(actor_);
    for (std::size_t i = 0; i < srv_.params.size(); ++i) {
      if (srv_.params[i].name == name) {
        coerce(v, srv_.params[i].type);
        ctx.params[i] = v;
        return;
      }
    }
    int idx = cls.var_index(name);
    if (idx < 0) throw EvalException("assignment to unbound variable '" + name + "'");
    coerce(v, cls.state_vars[static_cast<std::size_t>(idx)].type);
    ctx.st.vars[static_cast<std::size_t>(idx)] = v;
  }

  static void coerce(Value& v, Type want) {
    if (v.type == Type::Int && want == Type::Time) {
      if (v.raw < 0) throw EvalException("negative value assigned to time variable");
      v.type = Type::Time;
      return;
    }
    if (v.type != want) {
      throw EvalException(std::string("cannot assign ") + type_name(v.type) + " to " +
                          type_name(want));
    }
  }

  int resolve_target(const Statement& st, Env& env) {
    switch (st.send_target) {
      case SendTarget::Self:
        return actor_;
      case SendTarget::Slot: {
        const ActorClass& cls = lm_.actor_class(actor_);
        for (std::size_t i = 0; i < cls.known.size(); ++i) {
          if (cls.known[i].name == st.slot) {
            return lm_.instance(actor_).bindings[i];
          }
        }
        throw EvalException("unknown known-rebec slot '" + st.slot + "'");
      }
      case SendTarget::Lookup: {
        Value v = eval(st.lookup_id, env);
        if (v.type != Type::Int) throw EvalException("find() index is not int");
        if (v.raw < 0 || v.raw >= lm_.actor_count()) {
          throw EvalException("find(" + std::to_string(v.raw) + ") out of range");
        }
        return static_cast<int>(v.raw);
      }
    }
    throw EvalException("bad send target");
  }
};

}  // namespace detail

/// Runs the whole message server atomically (the coarse-grained FTTS step):
/// the actor's clock first advances to max(localTime, msg.arrival), the
/// message is removed, and each nondeterministic assignment forks one
/// outcome per listed value along the executed path.
inline std::vector<Outcome> execute_server(const LinkedModel& lm, int actor,
                                           const LocalState& state, const Message& msg) {
  detail::ExecCtx ctx;
  ctx.st = state;
  ctx.st.local_time = max(ctx.st.local_time, msg.arrival);
  // remove the consumed message (matched by seq)
  auto& bag = ctx.st.bag;
  for (std::size_t i = 0; i < bag.size(); ++i) {
    if (bag[i].seq == msg.seq && bag[i].msg_id == msg.msg_id && bag[i].arrival == msg.arrival &&
        bag[i].sender == msg.sender) {
      bag.erase(bag.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }

  const MessageServer* srv = lm.server_for(actor, msg.msg_id);
  std::vector<Outcome> outcomes;
  if (!srv) {
    Outcome o;
    o.local = ctx.st;
    o.error = "actor " + lm.actor_name(actor) + " has no message server '" +
              (msg.msg_id >= 0 ? lm.message_name(msg.msg_id) : "?") + "'";
    outcomes.push_back(std::move(o));
    return outcomes;
  }
  if (srv->params.size() != msg.args.size()) {
    Outcome o;
    o.local = ctx.st;
    o.error = "message '" + srv->name + "' carries " + std::to_string(msg.args.size()) +
              " args, server takes " + std::to_string(srv->params.size());
    outcomes.push_back(std::move(o));
    return outcomes;
  }
  ctx.params = msg.args;

  detail::ServerRunner runner(lm, actor, *srv);
  std::vector<detail::ExecCtx> finals = runner.run(std::move(ctx));
  outcomes.reserve(finals.size());
  for (auto& f : finals) {
    Outcome o;
    o.local = std::move(f.st);
    o.emitted = std::move(f.emitted);
    o.error = std::move(f.error);
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace tact
