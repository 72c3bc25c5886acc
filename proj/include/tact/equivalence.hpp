#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tact/diagnostics.hpp"
#include "tact/interp.hpp"
#include "tact/state.hpp"
#include "tact/static_check.hpp"

namespace tact {

// ---------------------------------------------------------------------------
// Equivalence configuration (the Var_Delta / Msg_ex sets of Def. 2)
// ---------------------------------------------------------------------------

struct AbstractMsgEntry {
  std::string msg_name;
  std::string param_name;
  ExprPtr guard;
};

struct EquivalenceConfig {
  std::vector<std::pair<std::string, std::string>> interval_vars;  // (class, var)
  std::vector<AbstractMsgEntry> abstract_msgs;

  bool empty() const { return interval_vars.empty() && abstract_msgs.empty(); }

  /// The full configuration implied by the model's `interval` and
  /// `@abstract` annotations.
  static EquivalenceConfig derive(const Model& m) {
    EquivalenceConfig cfg;
    for (const auto& cls : m.classes) {
      for (const auto& v : cls.state_vars) {
        if (v.interval) cfg.interval_vars.emplace_back(cls.name, v.name);
      }
      for (const auto& srv : cls.servers) {
        for (const auto& p : srv.params) {
          if (!p.abstract_guard) continue;
          bool dup = false;
          for (const auto& e : cfg.abstract_msgs) {
            if (e.msg_name == srv.name && e.param_name == p.name &&
                detail::expr_equal(e.guard, p.abstract_guard)) {
              dup = true;
            }
          }
          if (!dup) cfg.abstract_msgs.push_back({srv.name, p.name, p.abstract_guard});
        }
      }
    }
    return cfg;
  }
};

/// Every configuration entry must be backed by the model's annotations (an
/// `interval` flag, resp. a structurally identical `@abstract` guard) — the
/// static checks on those annotations are what make the relaxation sound.
inline std::vector<Diagnostic> validate_equivalence_config(const Model& m,
                                                           const EquivalenceConfig& cfg) {
  std::vector<Diagnostic> diags;
  for (const auto& [cls_name, var_name] : cfg.interval_vars) {
    const ActorClass* cls = m.find_class(cls_name);
    int idx = cls ? cls->var_index(var_name) : -1;
    if (!cls || idx < 0 || !cls->state_vars[static_cast<std::size_t>(idx)].interval) {
      diags.push_back({Severity::Error,
                       "config names interval variable " + cls_name + "." + var_name +
                           " that the model does not declare as interval",
                       {}});
    }
  }
  for (const auto& e : cfg.abstract_msgs) {
    bool found = false;
    for (const auto& cls : m.classes) {
      const MessageServer* srv = cls.find_server(e.msg_name);
      if (!srv) continue;
      for (const auto& p : srv->params) {
        if (p.name == e.param_name && p.abstract_guard &&
            detail::expr_equal(p.abstract_guard, e.guard)) {
          found = true;
        }
      }
    }
    if (!found) {
      diags.push_back({Severity::Error,
                       "config abstracts " + e.msg_name + "(" + e.param_name +
                           ") without a matching @abstract annotation",
                       {}});
    }
  }
  return diags;
}

namespace detail {

/// Index-resolved view of an EquivalenceConfig against one linked model.
class CompiledEquivalence {
 public:
  CompiledEquivalence(const LinkedModel& lm, const EquivalenceConfig& cfg) : lm_(&lm) {
    const Model& m = lm.ast();
    interval_mask_.resize(m.classes.size());
    for (std::size_t ci = 0; ci < m.classes.size(); ++ci) {
      interval_mask_[ci].assign(m.classes[ci].state_vars.size(), false);
    }
    for (const auto& [cls_name, var_name] : cfg.interval_vars) {
      for (std::size_t ci = 0; ci < m.classes.size(); ++ci) {
        if (m.classes[ci].name != cls_name) continue;
        int vi = m.classes[ci].var_index(var_name);
        if (vi >= 0) interval_mask_[ci][static_cast<std::size_t>(vi)] = true;
      }
    }
    for (const auto& e : cfg.abstract_msgs) {
      int mid = lm.message_id(e.msg_name);
      if (mid < 0) continue;
      for (std::size_t ci = 0; ci < m.classes.size(); ++ci) {
        const MessageServer* srv = m.classes[ci].find_server(e.msg_name);
        if (!srv) continue;
        for (std::size_t pi = 0; pi < srv->params.size(); ++pi) {
          if (srv->params[pi].name == e.param_name) {
            guards_[guard_key(static_cast<int>(ci), mid, static_cast<int>(pi))] = {e.param_name,
                                                                                   e.guard};
          }
        }
      }
    }
  }

  bool is_interval(int class_idx, int var_idx) const {
    return interval_mask_[static_cast<std::size_t>(class_idx)][static_cast<std::size_t>(var_idx)];
  }

  /// Guard abstracting argument `arg` of msg_id when received by `actor`.
  const std::pair<std::string, ExprPtr>* guard_for(int actor, int msg_id, int arg) const {
    int ci = lm_->instance(actor).class_idx;
    auto it = guards_.find(guard_key(ci, msg_id, arg));
    return it == guards_.end() ? nullptr : &it->second;
  }

 private:
  static std::uint64_t guard_key(int c, int m, int p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) << 40) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(m)) << 16) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(p));
  }

  const LinkedModel* lm_;
  std::vector<std::vector<bool>> interval_mask_;
  std::unordered_map<std::uint64_t, std::pair<std::string, ExprPtr>> guards_;
};

inline std::int64_t min_local_time(const GlobalState& s) {
  bool first = true;
  std::int64_t m = 0;
  for (const auto& a : s.actors) {
    if (first || a.local_time.ticks() < m) {
      m = a.local_time.ticks();
      first = false;
    }
  }
  return m;
}

/// Per-message argument bytes under a configuration: abstractable arguments
/// collapse to their guard outcome, everything else serializes concretely.
inline std::string config_arg_key(const LinkedModel& lm, const CompiledEquivalence* cfg,
                                  int target_actor, const Message& msg) {
  std::string out;
  for (std::size_t i = 0; i < msg.args.size(); ++i) {
    const std::pair<std::string, ExprPtr>* g =
        cfg ? cfg->guard_for(target_actor, msg.msg_id, static_cast<int>(i)) : nullptr;
    if (g) {
      out.push_back('g');
      out.push_back(eval_guard(g->second, g->first, msg.args[i]) ? 1 : 0);
    } else {
      out.push_back(static_cast<char>(msg.args[i].type));
      append_i64(out, msg.args[i].raw);
    }
  }
  return out;
}

struct MsgRecord {
  std::int64_t arrival;
  const std::string* name;
  std::int32_t sender;
  bool deadline_inf;
  std::int64_t deadline;
  std::string args;

  bool operator<(const MsgRecord& o) const {
    if (arrival != o.arrival) return arrival < o.arrival;
    if (*name != *o.name) return *name < *o.name;
    if (sender != o.sender) return sender < o.sender;
    if (args != o.args) return args < o.args;
    if (deadline_inf != o.deadline_inf) return o.deadline_inf;
    return deadline < o.deadline;
  }
};

inline std::vector<MsgRecord> bag_records(const LinkedModel& lm, const CompiledEquivalence* cfg,
                                          int actor, const std::vector<Message>& bag,
                                          std::int64_t shift) {
  std::vector<MsgRecord> recs;
  recs.reserve(bag.size());
  for (const auto& m : bag) {
    MsgRecord r;
    r.arrival = m.arrival.ticks() - shift;
    r.name = &lm.message_name(m.msg_id);
    r.sender = m.sender;
    r.deadline_inf = m.deadline.is_infinite();
    r.deadline = r.deadline_inf ? 0 : m.deadline.ticks() - shift;
    r.args = config_arg_key(lm, cfg, actor, m);
    recs.push_back(std::move(r));
  }
  std::sort(recs.begin(), recs.end());
  return recs;
}

}  // namespace detail

enum class KeyMode { Raw, Shift, Relaxed };

/// Deterministic byte serialization of an idle state.
///  Raw     — identity (no normalization)
///  Shift   — clocks/arrivals/deadlines normalized by the minimum local time
///  Relaxed — Shift plus interval variables normalized and abstractable
///            message parameters replaced by their guard outcome
inline std::string state_key(const LinkedModel& lm, const GlobalState& s, KeyMode mode,
                             const detail::CompiledEquivalence* cfg = nullptr) {
  std::int64_t shift = mode == KeyMode::Raw ? 0 : detail::min_local_time(s);
  const detail::CompiledEquivalence* arg_cfg = mode == KeyMode::Relaxed ? cfg : nullptr;
  std::string key;
  detail::append_i64(key, static_cast<std::int64_t>(s.actors.size()));
  for (std::size_t a = 0; a < s.actors.size(); ++a) {
    const LocalState& st = s.actors[a];
    int class_idx = lm.instance(static_cast<int>(a)).class_idx;
    key.push_back('A');
    detail::append_i64(key, st.local_time.ticks() - shift);
    for (std::size_t v = 0; v < st.vars.size(); ++v) {
      bool normalize = mode == KeyMode::Relaxed && cfg &&
                       cfg->is_interval(class_idx, static_cast<int>(v));
      key.push_back(static_cast<char>(st.vars[v].type));
      detail::append_i64(key, normalize ? st.vars[v].raw - shift : st.vars[v].raw);
    }
    auto recs = detail::bag_records(lm, arg_cfg, static_cast<int>(a), st.bag,
                                    mode == KeyMode::Raw ? 0 : shift);
    key.push_back('B');
    detail::append_i64(key, static_cast<std::int64_t>(recs.size()));
    for (const auto& r : recs) {
      detail::append_i64(key, r.arrival);
      key.push_back(r.deadline_inf ? 'I' : 'D');
      if (!r.deadline_inf) detail::append_i64(key, r.deadline);
      detail::append_i64(key, static_cast<std::int64_t>(r.sender));
      detail::append_i64(key, static_cast<std::int64_t>(r.name->size()));
      key += *r.name;
      key += r.args;
    }
  }
  return key;
}

/// Canonical key realizing the relaxed-shift merge: two states have equal
/// keys iff relaxed_shift_equivalent yields some delta.
inline std::string canonical_key(const LinkedModel& lm, const GlobalState& s,
                                 const EquivalenceConfig& cfg) {
  detail::CompiledEquivalence compiled(lm, cfg);
  return state_key(lm, s, KeyMode::Relaxed, &compiled);
}

// ---------------------------------------------------------------------------
// Direct implementations of Def. 1 and Def. 2 (the test oracles check these
// against the canonical keys; keep both routes independent).
// ---------------------------------------------------------------------------

/// Shift equivalence: state variables equal, all clocks offset by one delta,
/// bags equal after shifting arrivals and deadlines by that delta.
inline std::optional<std::int64_t> shift_equivalent(const LinkedModel& lm, const GlobalState& s,
                                                    const GlobalState& t) {
  if (s.actors.size() != t.actors.size()) return std::nullopt;
  if (s.actors.empty()) return 0;
  std::int64_t delta = s.actors[0].local_time.ticks() - t.actors[0].local_time.ticks();
  for (std::size_t a = 0; a < s.actors.size(); ++a) {
    const LocalState& x = s.actors[a];
    const LocalState& y = t.actors[a];
    if (x.local_time.ticks() - y.local_time.ticks() != delta) return std::nullopt;
    if (x.vars.size() != y.vars.size()) return std::nullopt;
    for (std::size_t v = 0; v < x.vars.size(); ++v) {
      if (x.vars[v] != y.vars[v]) return std::nullopt;
    }
    if (x.bag.size() != y.bag.size()) return std::nullopt;
    auto rx = detail::bag_records(lm, nullptr, static_cast<int>(a), x.bag, 0);
    auto ry = detail::bag_records(lm, nullptr, static_cast<int>(a), y.bag, 0);
    for (std::size_t i = 0; i < rx.size(); ++i) {
      if (*rx[i].name != *ry[i].name || rx[i].sender != ry[i].sender ||
          rx[i].args != ry[i].args)
        return std::nullopt;
      if (rx[i].arrival - ry[i].arrival != delta) return std::nullopt;
      if (rx[i].deadline_inf != ry[i].deadline_inf) return std::nullopt;
      if (!rx[i].deadline_inf && rx[i].deadline - ry[i].deadline != delta) return std::nullopt;
    }
  }
  return delta;
}

/// Relaxed-shift equivalence (Def. 2): like shift equivalence, but interval
/// variables are offset with the clocks and abstractable message parameters
/// are compared through their guard outcome. Bag matching is realized by
/// canonical sorting (message identity after abstraction is a total order).
inline std::optional<std::int64_t> relaxed_shift_equivalent(const LinkedModel& lm,
                                                            const GlobalState& s,
                                                            const GlobalState& t,
                                                            const EquivalenceConfig& cfg) {
  if (s.actors.size() != t.actors.size()) return std::nullopt;
  if (s.actors.empty()) return 0;
  detail::CompiledEquivalence compiled(lm, cfg);
  std::int64_t delta = s.actors[0].local_time.ticks() - t.actors[0].local_time.ticks();
  for (std::size_t a = 0; a < s.actors.size(); ++a) {
    const LocalState& x = s.actors[a];
    const LocalState& y = t.actors[a];
    int class_idx = lm.instance(static_cast<int>(a)).class_idx;
    if (x.local_time.ticks() - y.local_time.ticks() != delta) return std::nullopt;
    if (x.vars.size() != y.vars.size()) return std::nullopt;
    for (std::size_t v = 0; v < x.vars.size(); ++v) {
      if (compiled.is_interval(class_idx, static_cast<int>(v))) {
        if (x.vars[v].type != y.vars[v].type) return std::nullopt;
        if (x.vars[v].raw - y.vars[v].raw != delta) return std::nullopt;
      } else if (x.vars[v] != y.vars[v]) {
        return std::nullopt;
      }
    }
    if (x.bag.size() != y.bag.size()) return std::nullopt;
    // Sorting with abstracted argument keys keeps the pairing stable across
    // concrete values that agree on their guards.
    auto rx = detail::bag_records(lm, &compiled, static_cast<int>(a), x.bag, 0);
    auto ry = detail::bag_records(lm, &compiled, static_cast<int>(a), y.bag, 0);
    for (std::size_t i = 0; i < rx.size(); ++i) {
      if (*rx[i].name != *ry[i].name || rx[i].sender != ry[i].sender ||
          rx[i].args != ry[i].args)
        return std::nullopt;
      if (rx[i].arrival - ry[i].arrival != delta) return std::nullopt;
      if (rx[i].deadline_inf != ry[i].deadline_inf) return std::nullopt;
      if (!rx[i].deadline_inf && rx[i].deadline - ry[i].deadline != delta) return std::nullopt;
    }
  }
  return delta;
}

}  // namespace tact
