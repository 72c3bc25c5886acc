#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tact/equivalence.hpp"
#include "tact/state.hpp"
#include "tact/transition_system.hpp"

namespace tact {

namespace detail {

inline nlohmann::json value_json(const Value& v) {
  switch (v.type) {
    case Type::Bool: return v.as_bool();
    case Type::Time:
    case Type::Int: return v.raw;
  }
  return v.raw;
}

inline nlohmann::json state_json(const LinkedModel& lm, const TransitionSystem& ts, int idx) {
  const auto& stored = ts.states[static_cast<std::size_t>(idx)];
  nlohmann::json actors = nlohmann::json::array();
  for (int a = 0; a < lm.actor_count(); ++a) {
    const LocalState& st = stored.state.actors[static_cast<std::size_t>(a)];
    const ActorClass& cls = lm.actor_class(a);
    nlohmann::json vars = nlohmann::json::object();
    for (std::size_t v = 0; v < st.vars.size(); ++v) {
      vars[cls.state_vars[v].name] = value_json(st.vars[v]);
    }
    nlohmann::json bag = nlohmann::json::array();
    // canonical order: (arrival, name, sender, args)
    std::vector<const Message*> ordered;
    ordered.reserve(st.bag.size());
    for (const auto& m : st.bag) ordered.push_back(&m);
    std::sort(ordered.begin(), ordered.end(), [&](const Message* x, const Message* y) {
      if (x->arrival != y->arrival) return x->arrival < y->arrival;
      const std::string& nx = lm.message_name(x->msg_id);
      const std::string& ny = lm.message_name(y->msg_id);
      if (nx != ny) return nx < ny;
      if (x->sender != y->sender) return x->sender < y->sender;
      std::string ax = config_arg_key(lm, nullptr, a, *x);
      std::string ay = config_arg_key(lm, nullptr, a, *y);
      if (ax != ay) return ax < ay;
      return x->seq < y->seq;
    });
    for (const Message* m : ordered) {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& arg : m->args) args.push_back(value_json(arg));
      nlohmann::json msg{{"msg", lm.message_name(m->msg_id)},
                         {"sender", lm.actor_name(m->sender)},
                         {"arrival", m->arrival.ticks()},
                         {"args", args}};
      if (m->deadline.is_infinite()) {
        msg["deadline"] = nullptr;
      } else {
        msg["deadline"] = m->deadline.ticks();
      }
      bag.push_back(std::move(msg));
    }
    actors.push_back(nlohmann::json{{"name", lm.actor_name(a)},
                                    {"time", st.local_time.ticks()},
                                    {"vars", vars},
                                    {"bag", bag}});
  }
  nlohmann::json j{{"type", "state"}, {"id", idx}, {"depth", stored.depth}, {"actors", actors}};
  if (!stored.poison.empty()) j["poison"] = stored.poison;
  return j;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// JSON-lines export: a meta line, one line per state (canonical
/// serialization), then one line per transition. Byte-deterministic for
/// diffable golden tests.
inline void export_jsonl(const LinkedModel& lm, const TransitionSystem& ts, std::ostream& os) {
  nlohmann::json meta{{"type", "meta"},
                      {"states", ts.retained()},
                      {"transitions", ts.transitions.size()},
                      {"initial", ts.initial},
                      {"complete", ts.complete},
                      {"explored", ts.stats.states_explored},
                      {"merged", ts.stats.states_merged}};
  os << meta.dump() << "\n";
  for (int i = 0; i < ts.retained(); ++i) {
    os << detail::state_json(lm, ts, i).dump() << "\n";
  }
  for (const auto& tr : ts.transitions) {
    nlohmann::json j{{"type", "transition"},
                     {"from", tr.from},
                     {"to", tr.to},
                     {"label", ts.labels[static_cast<std::size_t>(tr.label)]}};
    os << j.dump() << "\n";
  }
}

/// DOT export; `full_dump` writes each actor's clock/vars/bag into the node
/// label instead of just the state index.
inline void export_dot(const LinkedModel& lm, const TransitionSystem& ts, std::ostream& os,
                       bool full_dump = false) {
  os << "digraph ts {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (int i = 0; i < ts.retained(); ++i) {
    const auto& stored = ts.states[static_cast<std::size_t>(i)];
    std::string label = "s" + std::to_string(i);
    if (full_dump) {
      label += "\n";
      for (int a = 0; a < lm.actor_count(); ++a) {
        const LocalState& st = stored.state.actors[static_cast<std::size_t>(a)];
        label += lm.actor_name(a) + "@" + st.local_time.str();
        label += " |bag|=" + std::to_string(st.bag.size()) + "\n";
      }
    }
    os << "  s" << i << " [label=\"" << detail::dot_escape(label) << "\"";
    if (i == ts.initial) os << ", shape=doublecircle";
    if (!stored.poison.empty()) os << ", shape=octagon, color=red";
    os << "];\n";
  }
  for (const auto& tr : ts.transitions) {
    os << "  s" << tr.from << " -> s" << tr.to << " [label=\""
       << detail::dot_escape(ts.labels[static_cast<std::size_t>(tr.label)]) << "\"];\n";
  }
  os << "}\n";
}

}  // namespace tact
