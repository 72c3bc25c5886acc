#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tact/ftts.hpp"
#include "tact/interp.hpp"
#include "tact/state.hpp"
#include "tact/transition_system.hpp"

namespace tact {

// ---------------------------------------------------------------------------
// Fine-grained (standard) semantics: per-statement tau steps, taking-message
// events, and a time-progress transition enabled only when nothing else is.
// Built as a desk-scale oracle for the coarse-grained semantics.
// ---------------------------------------------------------------------------

struct TtsRunning {
  int msg_id = -1;
  std::vector<Value> params;
  // Continuation stack: (block, next statement index), innermost last.
  std::vector<std::pair<const Block*, std::size_t>> frames;
  TimeValue resume;
};

struct TtsActor {
  std::vector<Value> vars;
  std::vector<Message> bag;
  std::optional<TtsRunning> running;
};

struct TtsState {
  std::vector<TtsActor> actors;
  TimeValue now;
};

struct TtsSystem {
  TransitionSystem lts;              // states carry empty payloads
  std::vector<TtsState> tts_states;  // aligned with lts.states
};

namespace detail {

class TtsExplorer {
 public:
  TtsExplorer(const LinkedModel& lm, std::uint64_t max_states, int max_depth)
      : lm_(lm), max_states_(max_states), max_depth_(max_depth) {
    for (const auto& cls : lm.ast().classes) {
      for (const auto& srv : cls.servers) index_blocks(srv.body);
    }
  }

  TtsSystem run() {
    TtsSystem sys;
    sys.lts.intern_label("tau", true);
    sys.lts.intern_label("time", true);
    TtsState init = initial();
    sys.tts_states.push_back(init);
    sys.lts.states.push_back({});
    sys.lts.parent_state.push_back(-1);
    sys.lts.parent_label.push_back(-1);
    sys.lts.stats.states_explored = 1;
    seen_.emplace(key(init), 0);

    std::deque<std::pair<int, int>> frontier;  // (state, depth)
    frontier.push_back({0, 0});
    while (!frontier.empty()) {
      auto [idx, depth] = frontier.front();
      frontier.pop_front();
      if (depth >= max_depth_) {
        sys.lts.complete = false;
        continue;
      }
      TtsState cur = sys.tts_states[static_cast<std::size_t>(idx)];  // copy; vector may grow
      for (auto& [label, internal, next] : successors(cur)) {
        sys.lts.stats.states_explored += 1;
        int lid = sys.lts.intern_label(label, internal);
        std::string k = key(next);
        auto it = seen_.find(k);
        if (it != seen_.end()) {
          sys.lts.stats.states_merged += 1;
          sys.lts.add_transition(idx, it->second, lid);
          continue;
        }
        if (static_cast<std::uint64_t>(sys.lts.retained()) >= max_states_) {
          sys.lts.complete = false;
          return sys;
        }
        int nid = sys.lts.retained();
        seen_.emplace(std::move(k), nid);
        sys.tts_states.push_back(next);
        sys.lts.states.push_back({});
        sys.lts.states.back().depth = depth + 1;
        sys.lts.parent_state.push_back(idx);
        sys.lts.parent_label.push_back(lid);
        sys.lts.stats.max_depth = std::max(sys.lts.stats.max_depth, depth + 1);
        sys.lts.add_transition(idx, nid, lid);
        frontier.push_back({nid, depth + 1});
      }
    }
    return sys;
  }

 private:
  struct Next {
    std::string label;
    bool internal;
    TtsState state;
  };

  TtsState initial() {
    GlobalState g = initial_state(lm_);
    TtsState t;
    t.now = TimeValue::zero();
    t.actors.resize(g.actors.size());
    for (std::size_t i = 0; i < g.actors.size(); ++i) {
      t.actors[i].vars = std::move(g.actors[i].vars);
      t.actors[i].bag = std::move(g.actors[i].bag);
    }
    // Constructors in the coarse initial state may have advanced local
    // clocks via delay; the standard semantics runs them at time zero, so
    // constructor delays are not supported in the oracle.
    for (const auto& a : g.actors) {
      if (a.local_time != TimeValue::zero()) {
        throw std::runtime_error("TTS oracle requires delay-free constructors");
      }
    }
    return t;
  }

  std::vector<Next> successors(const TtsState& s) {
    std::vector<Next> out;
    for (std::size_t a = 0; a < s.actors.size(); ++a) {
      const TtsActor& act = s.actors[a];
      if (act.running) {
        if (act.running->resume != s.now) continue;  // suspended in a delay
        if (act.running->frames.empty()) {
          // end-method: drop the server frame and the parameter valuation
          Next n;
          n.label = "tau";
          n.internal = true;
          n.state = s;
          n.state.actors[a].running.reset();
          out.push_back(std::move(n));
        } else {
          step_statement(s, static_cast<int>(a), out);
        }
        continue;
      }
      if (act.bag.empty()) continue;
      int vi = victim_index(lm_, static_cast<int>(a), act.bag);
      const Message& victim = act.bag[static_cast<std::size_t>(vi)];
      if (victim.arrival > s.now) continue;
      if (victim.deadline < s.now) {
        Next n;
        n.label = "expired:" + event_label(lm_, static_cast<int>(a), victim.msg_id);
        n.internal = false;
        n.state = s;
        auto& bag = n.state.actors[a].bag;
        bag.erase(bag.begin() + vi);
        out.push_back(std::move(n));
        continue;
      }
      // taking-message
      Next n;
      n.label = event_label(lm_, static_cast<int>(a), victim.msg_id);
      n.internal = false;
      n.state = s;
      auto& bag = n.state.actors[a].bag;
      Message msg = victim;
      bag.erase(bag.begin() + vi);
      TtsRunning run;
      run.msg_id = msg.msg_id;
      run.params = msg.args;
      const MessageServer* srv = lm_.server_for(static_cast<int>(a), msg.msg_id);
      if (!srv || srv->params.size() != msg.args.size()) {
        out.push_back(std::move(n));  // dropped; coarse semantics poisons here
        continue;
      }
      run.resume = s.now;
      run.frames.push_back({&srv->body, 0});
      n.state.actors[a].running = std::move(run);
      normalize(n.state.actors[a]);
      out.push_back(std::move(n));
    }
    if (out.empty()) {
      // time progress: minimum enabling amount
      bool have = false;
      TimeValue tp = TimeValue::infinity();
      for (std::size_t a = 0; a < s.actors.size(); ++a) {
        const TtsActor& act = s.actors[a];
        if (act.running) {
          tp = min(tp, act.running->resume);
          have = true;
        } else if (!act.bag.empty()) {
          int vi = victim_index(lm_, static_cast<int>(a), act.bag);
          tp = min(tp, act.bag[static_cast<std::size_t>(vi)].arrival);
          have = true;
        }
      }
      if (have && !tp.is_infinite() && tp > s.now) {
        Next n;
        n.label = "time";
        n.internal = true;
        n.state = s;
        n.state.now = tp;
        out.push_back(std::move(n));
      }
    }
    return out;
  }

  void step_statement(const TtsState& s, int actor, std::vector<Next>& out) {
    const TtsActor& act = s.actors[static_cast<std::size_t>(actor)];
    const auto& [block, idx] = act.running->frames.back();
    const Statement& st = (*block)[idx];
    const ActorClass& cls = lm_.actor_class(actor);
    const MessageServer* srv = lm_.server_for(actor, act.running->msg_id);

    auto fork = [&](auto&& mutate) {
      Next n;
      n.label = "tau";
      n.internal = true;
      n.state = s;
      TtsActor& me = n.state.actors[static_cast<std::size_t>(actor)];
      me.running->frames.back().second += 1;
      Env env(cls, me.vars, srv, &me.running->params, n.state.now);
      try {
        mutate(n.state, me, env);
        normalize(me);
        out.push_back(std::move(n));
      } catch (const EvalException&) {
        // runtime error: the actor wedges; coarse semantics reports poison.
        // Drop the continuation so the oracle state is terminal for it.
        me.running.reset();
        out.push_back(std::move(n));
      }
    };

    switch (st.kind) {
      case Statement::Kind::Skip:
        fork([&](TtsState&, TtsActor&, Env&) {});
        return;
      case Statement::Kind::Assign:
        fork([&](TtsState&, TtsActor& me, Env& env) {
          Value v = eval(st.value, env);
          assign_value(actor, me, srv, st.target, v);
        });
        return;
      case Statement::Kind::NondetAssign:
        for (const auto& choice : st.choices) {
          fork([&](TtsState&, TtsActor& me, Env& env) {
            Value v = eval(choice, env);
            assign_value(actor, me, srv, st.target, v);
          });
        }
        return;
      case Statement::Kind::If:
        fork([&](TtsState&, TtsActor& me, Env& env) {
          Value c = eval(st.cond, env);
          if (c.type != Type::Bool) throw EvalException("if-condition is not bool");
          const Block& taken = c.as_bool() ? st.then_block : st.else_block;
          if (!taken.empty()) me.running->frames.push_back({&taken, 0});
        });
        return;
      case Statement::Kind::Delay:
        fork([&](TtsState& ns, TtsActor& me, Env& env) {
          Value d = eval(st.delay_amount, env);
          if (d.type != Type::Int || d.raw < 0) throw EvalException("delay needs int >= 0");
          me.running->resume = ns.now + d.raw;
        });
        return;
      case Statement::Kind::Send:
        fork([&](TtsState& ns, TtsActor& me, Env& env) {
          // Reuse the coarse-grained emission logic through a one-statement run.
          EmittedMessage em = emit(st, actor, env, ns.now);
          auto& bag = ns.actors[static_cast<std::size_t>(em.target)].bag;
          const ActorClass& tcls = lm_.actor_class(em.target);
          if (static_cast<int>(bag.size()) >= tcls.capacity) {
            throw EvalException("mailbox overflow");
          }
          em.msg.seq = next_seq(bag);
          bag.push_back(std::move(em.msg));
          (void)me;
        });
        return;
    }
  }

  EmittedMessage emit(const Statement& st, int actor, Env& env, TimeValue now) {
    EmittedMessage em;
    em.msg.sender = actor;
    em.msg.msg_id = lm_.message_id(st.message);
    switch (st.send_target) {
      case SendTarget::Self: em.target = actor; break;
      case SendTarget::Slot: {
        const ActorClass& cls = lm_.actor_class(actor);
        em.target = -1;
        for (std::size_t i = 0; i < cls.known.size(); ++i) {
          if (cls.known[i].name == st.slot) em.target = lm_.instance(actor).bindings[i];
        }
        if (em.target < 0) throw EvalException("unknown slot");
        break;
      }
      case SendTarget::Lookup: {
        Value v = eval(st.lookup_id, env);
        if (v.type != Type::Int || v.raw < 0 || v.raw >= lm_.actor_count()) {
          throw EvalException("find() out of range");
        }
        em.target = static_cast<int>(v.raw);
        break;
      }
    }
    const MessageServer* tsrv = em.msg.msg_id >= 0 ? lm_.server_for(em.target, em.msg.msg_id)
                                                   : nullptr;
    if (!tsrv || tsrv->params.size() != st.args.size()) {
      throw EvalException("unresolvable send");
    }
    for (std::size_t i = 0; i < st.args.size(); ++i) {
      Value v = eval(st.args[i], env);
      if (v.type == Type::Int && tsrv->params[i].type == Type::Time) {
        if (v.raw < 0) throw EvalException("negative time argument");
        v = Value::of_time(TimeValue(v.raw));
      }
      if (v.type != tsrv->params[i].type) throw EvalException("argument type mismatch");
      em.msg.args.push_back(v);
    }
    std::int64_t after = 0;
    if (st.after) {
      Value a = eval(st.after, env);
      if (a.type != Type::Int || a.raw < 0) throw EvalException("after needs int >= 0");
      after = a.raw;
    }
    em.msg.arrival = now + after;
    if (st.deadline) {
      Value dl = eval(st.deadline, env);
      if (dl.type != Type::Int || dl.raw < 0) throw EvalException("deadline needs int >= 0");
      em.msg.deadline = now + dl.raw;
      if (em.msg.deadline < em.msg.arrival) throw EvalException("deadline precedes arrival");
    }
    return em;
  }

  void assign_value(int actor, TtsActor& me, const MessageServer* srv, const std::string& name,
                    Value v) {
    if (srv) {
      for (std::size_t i = 0; i < srv->params.size(); ++i) {
        if (srv->params[i].name == name) {
          coerce_assign(v, srv->params[i].type);
          me.running->params[i] = v;
          return;
        }
      }
    }
    const ActorClass& cls = lm_.actor_class(actor);
    int idx = cls.var_index(name);
    if (idx < 0) throw EvalException("assignment to unbound variable");
    coerce_assign(v, cls.state_vars[static_cast<std::size_t>(idx)].type);
    me.vars[static_cast<std::size_t>(idx)] = v;
  }

  static void coerce_assign(Value& v, Type want) {
    if (v.type == Type::Int && want == Type::Time) {
      if (v.raw < 0) throw EvalException("negative time value");
      v.type = Type::Time;
      return;
    }
    if (v.type != want) throw EvalException("assignment type mismatch");
  }

  // Pops exhausted inner frames (block flattening); an all-exhausted
  // continuation stays alive so method end is its own tau step, as in the
  // end-method rule.
  static void normalize(TtsActor& act) {
    if (!act.running) return;
    auto& frames = act.running->frames;
    while (!frames.empty() && frames.back().second >= frames.back().first->size()) {
      frames.pop_back();
    }
  }

  void index_blocks(const Block& b) {
    if (!block_ids_.count(&b)) {
      block_ids_[&b] = static_cast<int>(block_ids_.size());
    }
    for (const auto& st : b) {
      if (st.kind == Statement::Kind::If) {
        index_blocks(st.then_block);
        index_blocks(st.else_block);
      }
    }
  }

  std::string key(const TtsState& s) {
    std::string k;
    append_i64(k, s.now.ticks());
    for (const auto& a : s.actors) {
      k.push_back('A');
      for (const auto& v : a.vars) {
        k.push_back(static_cast<char>(v.type));
        append_i64(k, v.raw);
      }
      auto recs = bag_records_plain(a.bag);
      k.push_back('B');
      append_i64(k, static_cast<std::int64_t>(recs.size()));
      for (const auto& r : recs) k += r;
      if (a.running) {
        k.push_back('R');
        append_i64(k, a.running->msg_id);
        append_i64(k, a.running->resume.ticks());
        for (const auto& v : a.running->params) {
          k.push_back(static_cast<char>(v.type));
          append_i64(k, v.raw);
        }
        for (const auto& [block, idx] : a.running->frames) {
          append_i64(k, block_ids_.at(block));
          append_i64(k, static_cast<std::int64_t>(idx));
        }
      } else {
        k.push_back('I');
      }
    }
    return k;
  }

  std::vector<std::string> bag_records_plain(const std::vector<Message>& bag) {
    std::vector<std::string> recs;
    recs.reserve(bag.size());
    for (const auto& m : bag) {
      std::string r;
      append_i64(r, m.arrival.ticks());
      r.push_back(m.deadline.is_infinite() ? 'I' : 'D');
      if (!m.deadline.is_infinite()) append_i64(r, m.deadline.ticks());
      append_i64(r, m.sender);
      append_i64(r, m.msg_id);
      for (const auto& v : m.args) {
        r.push_back(static_cast<char>(v.type));
        append_i64(r, v.raw);
      }
      recs.push_back(std::move(r));
    }
    std::sort(recs.begin(), recs.end());
    return recs;
  }

  const LinkedModel& lm_;
  std::uint64_t max_states_;
  int max_depth_;
  std::unordered_map<std::string, int> seen_;
  std::unordered_map<const Block*, int> block_ids_;
};

}  // namespace detail

/// Explores the standard fine-grained semantics up to the given limits.
inline TtsSystem build_tts(const LinkedModel& lm, std::uint64_t max_states = 20000,
                           int max_depth = 100000) {
  detail::TtsExplorer ex(lm, max_states, max_depth);
  return ex.run();
}

}  // namespace tact
