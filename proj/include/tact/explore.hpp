#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tact/equivalence.hpp"
#include "tact/ftts.hpp"
#include "tact/state.hpp"
#include "tact/transition_system.hpp"

namespace tact {

enum class ExploreMode { FttsRawBoundedByDepth, BfttsShift, BfttsRelaxed };

inline const char* mode_name(ExploreMode m) {
  switch (m) {
    case ExploreMode::FttsRawBoundedByDepth: return "ftts";
    case ExploreMode::BfttsShift: return "bftts-shift";
    case ExploreMode::BfttsRelaxed: return "bftts-relaxed";
  }
  return "?";
}

struct ExploreLimits {
  std::uint64_t max_states = 1'000'000;
  int max_depth = 1'000'000;
};

struct ExploreOptions {
  EquivalenceConfig cfg;  // consulted in BfttsRelaxed mode
  bool log_merges = false;
  int jobs = 1;
  // Assertion monitor hooks; returning true records a violation. With
  // short_circuit set, exploration halts after recording the violating
  // state (its successors are not emitted).
  std::function<bool(const GlobalState&)> state_monitor;
  std::function<bool(const std::string&)> label_monitor;
  bool short_circuit = true;
};

/// Breadth-first frontier exploration with on-the-fly merging. A successor
/// is added unless its mode-dependent canonical key is already present;
/// transitions to merged states are redirected to the first-seen
/// representative (which, under BFS, carries the smallest times).
inline TransitionSystem explore(const LinkedModel& lm, ExploreMode mode,
                                ExploreLimits limits = {}, ExploreOptions options = {}) {
  TransitionSystem ts;
  detail::CompiledEquivalence compiled(lm, options.cfg);
  const detail::CompiledEquivalence* cfg =
      mode == ExploreMode::BfttsRelaxed ? &compiled : nullptr;
  KeyMode key_mode = mode == ExploreMode::FttsRawBoundedByDepth ? KeyMode::Raw
                     : mode == ExploreMode::BfttsShift          ? KeyMode::Shift
                                                                : KeyMode::Relaxed;

  std::unordered_map<std::string, int> seen;
  // Shift-only keys of every state seen under relaxed mode; attributes each
  // merge to plain shift equivalence or to the relaxation proper.
  std::unordered_set<std::string> shift_seen;

  auto key_of = [&](const TransitionSystem::StoredState& st) {
    std::string k = state_key(lm, st.state, key_mode, cfg);
    if (!st.poison.empty()) k = "!" + st.poison + k;
    return k;
  };

  TransitionSystem::StoredState init;
  init.state = initial_state(lm);
  init.depth = 0;
  ts.stats.states_explored = 1;
  seen.emplace(key_of(init), 0);
  if (mode == ExploreMode::BfttsRelaxed) {
    shift_seen.insert(state_key(lm, init.state, KeyMode::Shift));
  }
  ts.states.push_back(std::move(init));
  ts.parent_state.push_back(-1);
  ts.parent_label.push_back(-1);

  bool halted = false;
  if (options.state_monitor && options.state_monitor(ts.states[0].state)) {
    ts.violation_halt = true;
    if (options.short_circuit) halted = true;
  }

  std::vector<int> frontier{0};
  while (!frontier.empty() && !halted) {
    // Expand a whole BFS level. Successor computation is pure per state, so
    // it can fan out across workers; integration stays sequential and in
    // frontier order, which keeps runs bitwise reproducible for any --jobs.
    std::vector<std::vector<Successor>> batches(frontier.size());
    auto expand = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& st = ts.states[static_cast<std::size_t>(frontier[i])];
        if (!st.poison.empty()) continue;  // poisoned states are terminal
        if (st.depth >= limits.max_depth) continue;
        batches[i] = ftts_successors(lm, st.state);
      }
    };
    int jobs = options.jobs > 1 ? options.jobs : 1;
    if (jobs > 1 && frontier.size() > 1) {
      std::vector<std::thread> workers;
      std::size_t chunk = (frontier.size() + static_cast<std::size_t>(jobs) - 1) /
                          static_cast<std::size_t>(jobs);
      for (int w = 0; w < jobs; ++w) {
        std::size_t b = static_cast<std::size_t>(w) * chunk;
        std::size_t e = std::min(frontier.size(), b + chunk);
        if (b >= e) break;
        workers.emplace_back(expand, b, e);
      }
      for (auto& t : workers) t.join();
    } else {
      expand(0, frontier.size());
    }

    std::vector<int> next_frontier;
    for (std::size_t i = 0; i < frontier.size() && !halted; ++i) {
      int from = frontier[i];
      int depth = ts.states[static_cast<std::size_t>(from)].depth;
      if (depth >= limits.max_depth) {
        // Not expanded; the cut is real only if the state had pending work.
        for (const auto& a : ts.states[static_cast<std::size_t>(from)].state.actors) {
          if (!a.bag.empty()) {
            ts.complete = false;
            break;
          }
        }
        continue;
      }
      for (auto& suc : batches[i]) {
        if (halted) break;
        ts.stats.states_explored += 1;
        TransitionSystem::StoredState cand;
        cand.state = std::move(suc.state);
        cand.poison = suc.poison;
        cand.depth = depth + 1;
        std::string key = key_of(cand);
        int label = ts.intern_label(suc.label);

        bool violated = false;
        if (options.label_monitor && options.label_monitor(suc.label)) violated = true;

        auto it = seen.find(key);
        if (it != seen.end()) {
          ts.stats.states_merged += 1;
          if (mode == ExploreMode::BfttsRelaxed) {
            std::string sk = state_key(lm, cand.state, KeyMode::Shift);
            if (shift_seen.count(sk)) {
              ts.stats.merges_by_shift += 1;
            } else {
              ts.stats.merges_by_relaxation += 1;
              shift_seen.insert(sk);
            }
            if (options.log_merges) {
              ts.merge_log.push_back({std::move(cand.state), it->second});
            }
          } else {
            ts.stats.merges_by_shift += 1;
            if (options.log_merges && mode != ExploreMode::FttsRawBoundedByDepth) {
              ts.merge_log.push_back({std::move(cand.state), it->second});
            }
          }
          int tidx = ts.add_transition(from, it->second, label);
          if (violated) {
            ts.violation_halt = true;
            if (options.short_circuit) {
              halted = true;
              (void)tidx;
            }
          }
          continue;
        }

        if (static_cast<std::uint64_t>(ts.retained()) >= limits.max_states) {
          ts.complete = false;
          ts.stats.states_explored -= 1;  // not materialized
          halted = true;
          break;
        }

        int idx = ts.retained();
        seen.emplace(std::move(key), idx);
        if (mode == ExploreMode::BfttsRelaxed) {
          shift_seen.insert(state_key(lm, cand.state, KeyMode::Shift));
        }
        if (!cand.poison.empty()) ts.stats.poisoned += 1;
        ts.stats.max_depth = std::max(ts.stats.max_depth, cand.depth);
        bool poisoned = !cand.poison.empty();
        const GlobalState* added_state = nullptr;
        ts.states.push_back(std::move(cand));
        added_state = &ts.states.back().state;
        ts.parent_state.push_back(from);
        ts.parent_label.push_back(label);
        ts.add_transition(from, idx, label);

        if (!violated && options.state_monitor && options.state_monitor(*added_state)) {
          violated = true;
        }
        if (violated) {
          ts.violation_halt = true;
          if (options.short_circuit) {
            halted = true;
            break;
          }
        }
        if (!poisoned) next_frontier.push_back(idx);
      }
    }
    frontier = std::move(next_frontier);
  }
  return ts;
}

}  // namespace tact
