#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tact/interp.hpp"
#include "tact/state.hpp"

namespace tact {

/// Initial FTTS state: all clocks zero, constructors executed atomically in
/// instance-declaration order, their sends populating the bags.
inline GlobalState initial_state(const LinkedModel& lm) {
  GlobalState g;
  g.actors.resize(static_cast<std::size_t>(lm.actor_count()));
  for (int a = 0; a < lm.actor_count(); ++a) {
    const ActorClass& cls = lm.actor_class(a);
    auto& st = g.actors[static_cast<std::size_t>(a)];
    st.local_time = TimeValue::zero();
    st.vars.reserve(cls.state_vars.size());
    for (const auto& v : cls.state_vars) st.vars.push_back(default_value(v.type));
  }
  for (int a = 0; a < lm.actor_count(); ++a) {
    const ActorClass& cls = lm.actor_class(a);
    const MessageServer* ctor = cls.find_server(cls.name);
    if (!ctor) continue;
    const Instance& decl = lm.instance_decl(a);
    Message msg;
    msg.sender = a;
    msg.msg_id = lm.message_id(ctor->name);
    msg.arrival = TimeValue::zero();
    for (std::size_t i = 0; i < decl.ctor_args.size(); ++i) {
      const CtorArg& arg = decl.ctor_args[i];
      Type want = i < ctor->params.size() ? ctor->params[i].type : Type::Int;
      if (arg.type == Type::Bool) {
        if (want != Type::Bool)
          throw std::runtime_error("constructor argument type mismatch in " + decl.name);
        msg.args.push_back(Value::of_bool(arg.bool_value));
      } else if (want == Type::Time) {
        if (arg.int_value < 0)
          throw std::runtime_error("negative time constructor argument in " + decl.name);
        msg.args.push_back(Value::of_time(TimeValue(arg.int_value)));
      } else if (want == Type::Int) {
        msg.args.push_back(Value::of_int(arg.int_value));
      } else {
        throw std::runtime_error("constructor argument type mismatch in " + decl.name);
      }
    }
    auto outcomes = execute_server(lm, a, g.actors[static_cast<std::size_t>(a)], msg);
    if (outcomes.size() != 1) {
      throw std::runtime_error("constructor of " + decl.name +
                               " is nondeterministic; constructors must yield one state");
    }
    if (!outcomes[0].error.empty()) {
      throw std::runtime_error("constructor of " + decl.name + " failed: " + outcomes[0].error);
    }
    g.actors[static_cast<std::size_t>(a)] = std::move(outcomes[0].local);
    for (const auto& em : outcomes[0].emitted) {
      auto& bag = g.actors[static_cast<std::size_t>(em.target)].bag;
      const ActorClass& tcls = lm.actor_class(em.target);
      if (static_cast<int>(bag.size()) >= tcls.capacity) {
        throw std::runtime_error("mailbox overflow at " + lm.actor_name(em.target) +
                                 " during construction");
      }
      Message m = em.msg;
      m.seq = detail::next_seq(bag);
      bag.push_back(std::move(m));
    }
  }
  return g;
}

/// One FTTS successor: a complete message handling (or a deadline drop).
struct Successor {
  std::string label;
  GlobalState state;
  std::string poison;   // nonempty: runtime error; state is terminal
  bool expired = false; // deadline drop
};

namespace detail {

inline std::string event_label(const LinkedModel& lm, int actor, int msg_id) {
  return lm.actor_name(actor) + "." + lm.message_name(msg_id);
}

/// Appends emitted messages to their targets' bags; returns a nonempty
/// error on mailbox overflow.
inline std::string apply_emissions(const LinkedModel& lm, GlobalState& g,
                                   const std::vector<EmittedMessage>& emitted) {
  for (const auto& em : emitted) {
    auto& target = g.actors[static_cast<std::size_t>(em.target)];
    const ActorClass& tcls = lm.actor_class(em.target);
    if (static_cast<int>(target.bag.size()) >= tcls.capacity) {
      return "mailbox overflow at " + lm.actor_name(em.target) + " (capacity " +
             std::to_string(tcls.capacity) + ")";
    }
    Message m = em.msg;
    m.seq = next_seq(target.bag);
    target.bag.push_back(std::move(m));
  }
  return {};
}

}  // namespace detail

/// Floating-time successors: every actor with a pending message contributes
/// its next handling (earliest arrival, ties by server priority then sender),
/// one successor per execute_server outcome. A message whose deadline lies
/// before its would-be handling time is dropped with an `expired:` label.
inline std::vector<Successor> ftts_successors(const LinkedModel& lm, const GlobalState& s) {
  std::vector<Successor> result;
  for (int a = 0; a < lm.actor_count(); ++a) {
    const LocalState& st = s.actors[static_cast<std::size_t>(a)];
    if (st.bag.empty()) continue;
    int vi = detail::victim_index(lm, a, st.bag);
    const Message victim = st.bag[static_cast<std::size_t>(vi)];
    TimeValue handle_time = max(st.local_time, victim.arrival);
    if (victim.deadline < handle_time) {
      Successor suc;
      suc.label = "expired:" + detail::event_label(lm, a, victim.msg_id);
      suc.expired = true;
      suc.state = s;
      auto& bag = suc.state.actors[static_cast<std::size_t>(a)].bag;
      bag.erase(bag.begin() + vi);
      result.push_back(std::move(suc));
      continue;
    }
    auto outcomes = execute_server(lm, a, st, victim);
    for (auto& o : outcomes) {
      Successor suc;
      suc.label = detail::event_label(lm, a, victim.msg_id);
      suc.state = s;
      suc.state.actors[static_cast<std::size_t>(a)] = std::move(o.local);
      suc.poison = o.error;
      if (suc.poison.empty()) {
        suc.poison = detail::apply_emissions(lm, suc.state, o.emitted);
      }
      result.push_back(std::move(suc));
    }
  }
  return result;
}

}  // namespace tact
