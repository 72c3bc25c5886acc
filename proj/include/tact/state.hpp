#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tact/ast.hpp"
#include "tact/time.hpp"

namespace tact {

struct Value {
  Type type = Type::Int;
  std::int64_t raw = 0;  // int value, bool as 0/1, time as tick count

  static Value of_int(std::int64_t v) { return {Type::Int, v}; }
  static Value of_bool(bool v) { return {Type::Bool, v ? 1 : 0}; }
  static Value of_time(TimeValue t) { return {Type::Time, t.ticks()}; }

  bool as_bool() const { return raw != 0; }
  TimeValue as_time() const { return TimeValue(raw); }

  friend bool operator==(const Value& a, const Value& b) {
    return a.type == b.type && a.raw == b.raw;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

inline Value default_value(Type t) {
  switch (t) {
    case Type::Int: return Value::of_int(0);
    case Type::Bool: return Value::of_bool(false);
    case Type::Time: return Value::of_time(TimeValue::zero());
  }
  return Value::of_int(0);
}

struct Message {
  std::int32_t sender = -1;
  std::int32_t msg_id = -1;
  std::vector<Value> args;
  TimeValue arrival;
  TimeValue deadline = TimeValue::infinity();
  // Bag-local sequence number: orders otherwise-identical messages FIFO.
  // Excluded from canonical keys.
  std::uint64_t seq = 0;
};

struct LocalState {
  std::vector<Value> vars;
  std::vector<Message> bag;
  TimeValue local_time;
};

/// FTTS-form global state: every actor idle, local clocks float.
struct GlobalState {
  std::vector<LocalState> actors;
};

// ---------------------------------------------------------------------------
// Linked model: name-resolved, message names interned, exploration-ready.
// ---------------------------------------------------------------------------

class LinkedModel {
 public:
  struct LinkedInstance {
    int class_idx = -1;
    std::vector<int> bindings;  // slot order → actor id
  };

  explicit LinkedModel(Model model) : model_(std::move(model)) {
    for (std::size_t ci = 0; ci < model_.classes.size(); ++ci) {
      for (const auto& srv : model_.classes[ci].servers) intern(srv.name);
    }
    server_of_msg_.assign(model_.classes.size(),
                          std::vector<int>(message_names_.size(), -1));
    for (std::size_t ci = 0; ci < model_.classes.size(); ++ci) {
      const auto& cls = model_.classes[ci];
      for (std::size_t si = 0; si < cls.servers.size(); ++si) {
        server_of_msg_[ci][static_cast<std::size_t>(message_id(cls.servers[si].name))] =
            static_cast<int>(si);
      }
    }
    instances_.reserve(model_.instances.size());
    for (const auto& inst : model_.instances) {
      LinkedInstance li;
      for (std::size_t ci = 0; ci < model_.classes.size(); ++ci) {
        if (model_.classes[ci].name == inst.class_name) li.class_idx = static_cast<int>(ci);
      }
      for (const auto& b : inst.bindings) li.bindings.push_back(model_.instance_index(b));
      instances_.push_back(std::move(li));
    }
  }

  const Model& ast() const { return model_; }
  int actor_count() const { return static_cast<int>(instances_.size()); }
  int message_count() const { return static_cast<int>(message_names_.size()); }

  const LinkedInstance& instance(int actor) const {
    return instances_[static_cast<std::size_t>(actor)];
  }
  const Instance& instance_decl(int actor) const {
    return model_.instances[static_cast<std::size_t>(actor)];
  }
  const ActorClass& actor_class(int actor) const {
    return model_.classes[static_cast<std::size_t>(instance(actor).class_idx)];
  }
  const std::string& actor_name(int actor) const { return instance_decl(actor).name; }

  int message_id(const std::string& name) const {
    auto it = message_ids_.find(name);
    return it == message_ids_.end() ? -1 : it->second;
  }
  const std::string& message_name(int msg_id) const {
    return message_names_[static_cast<std::size_t>(msg_id)];
  }

  /// Server handling msg_id on the given actor, or null.
  const MessageServer* server_for(int actor, int msg_id) const {
    if (msg_id < 0 || msg_id >= message_count()) return nullptr;
    int ci = instance(actor).class_idx;
    int si = server_of_msg_[static_cast<std::size_t>(ci)][static_cast<std::size_t>(msg_id)];
    if (si < 0) return nullptr;
    return &model_.classes[static_cast<std::size_t>(ci)]
                .servers[static_cast<std::size_t>(si)];
  }

  int server_priority(int actor, int msg_id) const {
    const MessageServer* s = server_for(actor, msg_id);
    return s ? s->priority : 0;
  }

  /// Abstraction guard declared on param `arg` of the server that handles
  /// msg_id at `actor`; null when the parameter is concrete.
  ExprPtr abstract_guard(int actor, int msg_id, std::size_t arg) const {
    const MessageServer* s = server_for(actor, msg_id);
    if (!s || arg >= s->params.size()) return nullptr;
    return s->params[arg].abstract_guard;
  }

 private:
  void intern(const std::string& name) {
    if (message_ids_.count(name)) return;
    message_ids_[name] = static_cast<int>(message_names_.size());
    message_names_.push_back(name);
  }

  Model model_;
  std::vector<std::string> message_names_;
  std::unordered_map<std::string, int> message_ids_;
  std::vector<std::vector<int>> server_of_msg_;  // [class][msg] → server idx
  std::vector<LinkedInstance> instances_;
};

}  // namespace tact
