#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tact/pattern_params.hpp"
#include "tact/state.hpp"
#include "tact/transition_system.hpp"

namespace tact {

/// Deliberately tiny assertion language: a bound on one designated state
/// variable, or absence of an event (a failure message being handled).
struct Assertion {
  enum class Kind { VarLe, VarGe, EventAbsent };
  std::string name;
  Kind kind = Kind::VarLe;
  std::string var;
  std::int64_t bound = 0;
  std::string event;

  static Assertion var_le(std::string name, std::string var, std::int64_t bound) {
    Assertion a;
    a.name = std::move(name);
    a.kind = Kind::VarLe;
    a.var = std::move(var);
    a.bound = bound;
    return a;
  }
  static Assertion var_ge(std::string name, std::string var, std::int64_t bound) {
    Assertion a = var_le(std::move(name), std::move(var), bound);
    a.kind = Kind::VarGe;
    return a;
  }
  static Assertion event_absent(std::string name, std::string event) {
    Assertion a;
    a.name = std::move(name);
    a.kind = Kind::EventAbsent;
    a.event = std::move(event);
    return a;
  }
};

struct Verdict {
  bool pass = true;
  std::vector<std::pair<std::string, int>> counterexample;  // (label, state index)
  std::uint64_t states_checked = 0;
  std::string error;  // unknown/ambiguous variable
};

namespace detail {

/// Resolves an assertion variable to its unique owning class; the spec
/// requires the variable to exist in exactly one actor class.
inline std::optional<std::pair<int, int>> resolve_assert_var(const LinkedModel& lm,
                                                             const std::string& var,
                                                             std::string& error) {
  int class_idx = -1, var_idx = -1;
  const Model& m = lm.ast();
  for (std::size_t ci = 0; ci < m.classes.size(); ++ci) {
    int vi = m.classes[ci].var_index(var);
    if (vi >= 0) {
      if (class_idx >= 0) {
        error = "assertion variable '" + var + "' exists in more than one class";
        return std::nullopt;
      }
      class_idx = static_cast<int>(ci);
      var_idx = vi;
    }
  }
  if (class_idx < 0) {
    error = "assertion variable '" + var + "' does not exist";
    return std::nullopt;
  }
  return std::make_pair(class_idx, var_idx);
}

inline bool label_is_event(const std::string& label, const std::string& event) {
  // Labels are "<actor>.<msg>" or "expired:<actor>.<msg>".
  auto dot = label.rfind('.');
  if (dot == std::string::npos) return false;
  return label.compare(dot + 1, std::string::npos, event) == 0;
}

inline bool state_violates(const LinkedModel& lm, const GlobalState& g, const Assertion& a,
                           int class_idx, int var_idx) {
  for (int actor = 0; actor < lm.actor_count(); ++actor) {
    if (lm.instance(actor).class_idx != class_idx) continue;
    std::int64_t v =
        g.actors[static_cast<std::size_t>(actor)].vars[static_cast<std::size_t>(var_idx)].raw;
    if (a.kind == Assertion::Kind::VarLe && !(v <= a.bound)) return true;
    if (a.kind == Assertion::Kind::VarGe && !(v >= a.bound)) return true;
  }
  return false;
}

}  // namespace detail

/// Evaluates the assertion in every state (or over every transition label
/// for event absence). Scanning follows BFS discovery order, so the first
/// hit yields the BFS-shortest counterexample; `full_scan` disables the
/// short-circuit and checks everything (the independent-oracle mode).
inline Verdict check_assertion(const LinkedModel& lm, const TransitionSystem& ts,
                               const Assertion& a, bool full_scan = false) {
  Verdict v;
  if (a.kind == Assertion::Kind::EventAbsent) {
    v.states_checked = static_cast<std::uint64_t>(ts.retained());
    int offending = -1;
    for (std::size_t i = 0; i < ts.transitions.size(); ++i) {
      const auto& tr = ts.transitions[i];
      if (detail::label_is_event(ts.labels[static_cast<std::size_t>(tr.label)], a.event)) {
        if (offending < 0) offending = static_cast<int>(i);
        if (!full_scan) break;
      }
    }
    if (offending >= 0) {
      v.pass = false;
      const auto& tr = ts.transitions[static_cast<std::size_t>(offending)];
      v.counterexample = ts.path_to(tr.from);
      v.counterexample.emplace_back(ts.labels[static_cast<std::size_t>(tr.label)], tr.to);
    }
    return v;
  }

  std::string err;
  auto resolved = detail::resolve_assert_var(lm, a.var, err);
  if (!resolved) {
    v.error = err;
    v.pass = false;
    return v;
  }
  auto [class_idx, var_idx] = *resolved;
  int violating = -1;
  for (int i = 0; i < ts.retained(); ++i) {
    v.states_checked += 1;
    if (detail::state_violates(lm, ts.states[static_cast<std::size_t>(i)].state, a, class_idx,
                               var_idx)) {
      if (violating < 0) violating = i;
      if (!full_scan) break;
    }
  }
  if (violating >= 0) {
    v.pass = false;
    v.counterexample = ts.path_to(violating);
  }
  return v;
}

/// Builds explore() monitor hooks that trip on the first violation of any
/// given assertion (the on-the-fly short-circuit path).
inline std::function<bool(const GlobalState&)> make_state_monitor(
    const LinkedModel& lm, const std::vector<Assertion>& assertions) {
  struct Resolved {
    Assertion a;
    int class_idx;
    int var_idx;
  };
  auto resolved = std::make_shared<std::vector<Resolved>>();
  for (const auto& a : assertions) {
    if (a.kind == Assertion::Kind::EventAbsent) continue;
    std::string err;
    auto r = detail::resolve_assert_var(lm, a.var, err);
    if (r) resolved->push_back({a, r->first, r->second});
  }
  if (resolved->empty()) return {};
  const LinkedModel* lmp = &lm;
  return [lmp, resolved](const GlobalState& g) {
    for (const auto& r : *resolved) {
      if (detail::state_violates(*lmp, g, r.a, r.class_idx, r.var_idx)) return true;
    }
    return false;
  };
}

inline std::function<bool(const std::string&)> make_label_monitor(
    const std::vector<Assertion>& assertions) {
  auto events = std::make_shared<std::vector<std::string>>();
  for (const auto& a : assertions) {
    if (a.kind == Assertion::Kind::EventAbsent) events->push_back(a.event);
  }
  if (events->empty()) return {};
  return [events](const std::string& label) {
    for (const auto& e : *events) {
      if (detail::label_is_event(label, e)) return true;
    }
    return false;
  };
}

// ---------------------------------------------------------------------------
// Point-to-point timing budgets (the right-hand sides of the four
// pattern inequalities).
// ---------------------------------------------------------------------------

struct RequirementBound {
  std::int64_t budget = 0;
  std::string diagnostic;  // set when the configuration is unsatisfiable
};

inline RequirementBound requirement_bound(const PubSubParams& p) {
  RequirementBound b;
  b.budget = p.r_pub - p.r_sub - p.l_pub;
  if (b.budget < 0) b.diagnostic = "unsatisfiable configuration: R_pub - R_sub - L_pub < 0";
  return b;
}
inline RequirementBound requirement_bound(const ReqResParams& p) {
  RequirementBound b;
  b.budget = p.l_req + p.r_req - p.l_res - p.r_res;
  if (b.budget < 0)
    b.diagnostic = "unsatisfiable configuration: L_req + R_req - L_res - R_res < 0";
  return b;
}
inline RequirementBound requirement_bound(const IniExeParams& p) {
  RequirementBound b;
  b.budget = p.l_ini - p.l_exe;
  if (b.budget < 0) b.diagnostic = "unsatisfiable configuration: L_ini - L_exe < 0";
  return b;
}
inline RequirementBound requirement_bound(const SenRecParams& p) {
  RequirementBound b;
  b.budget = p.l_sen - p.l_rec;
  if (b.budget < 0) b.diagnostic = "unsatisfiable configuration: L_sen - L_rec < 0";
  return b;
}

}  // namespace tact
