#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tact/state.hpp"

namespace tact {

/// Event-labeled transition system produced by exploration. States keep
/// their full content so assertions, re-expansion checks, and exports can
/// read them back.
struct TransitionSystem {
  struct StoredState {
    GlobalState state;
    std::string poison;  // nonempty: runtime error recorded, state not expanded
    int depth = 0;
  };
  struct Transition {
    int from = 0;
    int to = 0;
    int label = 0;
  };
  struct Stats {
    std::uint64_t states_explored = 0;  // generated, duplicates included
    std::uint64_t states_merged = 0;    // explored - retained
    std::uint64_t merges_by_shift = 0;
    std::uint64_t merges_by_relaxation = 0;
    std::uint64_t poisoned = 0;
    int max_depth = 0;
  };
  /// Discarded duplicate paired with its retained representative (kept only
  /// when merge logging is on; feeds the one-step transfer check).
  struct MergeRecord {
    GlobalState discarded;
    int representative = 0;
  };

  std::vector<StoredState> states;
  std::vector<Transition> transitions;
  std::vector<std::string> labels;
  std::vector<char> label_internal;  // TTS: statement/time-progress steps
  int initial = 0;
  std::vector<int> parent_state;  // discovery predecessor (-1 at initial)
  std::vector<int> parent_label;
  Stats stats;
  bool complete = true;         // false when a limit truncated exploration
  bool violation_halt = false;  // stopped early on an assertion violation
  std::vector<MergeRecord> merge_log;

  std::unordered_map<std::string, int> label_ids;
  std::unordered_set<std::uint64_t> edge_set;

  int retained() const { return static_cast<int>(states.size()); }

  int intern_label(const std::string& label, bool internal = false) {
    auto it = label_ids.find(label);
    if (it != label_ids.end()) return it->second;
    int id = static_cast<int>(labels.size());
    label_ids.emplace(label, id);
    labels.push_back(label);
    label_internal.push_back(internal ? 1 : 0);
    return id;
  }

  /// Adds the edge unless an identical one exists; returns its index.
  int add_transition(int from, int to, int label) {
    std::uint64_t packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 40) |
                           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(to)) << 12) |
                           static_cast<std::uint64_t>(static_cast<std::uint32_t>(label));
    if (!edge_set.insert(packed).second) {
      for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (transitions[i].from == from && transitions[i].to == to &&
            transitions[i].label == label)
          return static_cast<int>(i);
      }
    }
    transitions.push_back({from, to, label});
    return static_cast<int>(transitions.size() - 1);
  }

  std::vector<std::vector<int>> outgoing() const {
    std::vector<std::vector<int>> out(states.size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      out[static_cast<std::size_t>(transitions[i].from)].push_back(static_cast<int>(i));
    }
    return out;
  }

  bool has_cycle() const {
    auto out = outgoing();
    std::vector<int> color(states.size(), 0);  // 0 new, 1 active, 2 done
    std::vector<std::pair<int, std::size_t>> stack;
    for (int root = 0; root < retained(); ++root) {
      if (color[static_cast<std::size_t>(root)] != 0) continue;
      stack.push_back({root, 0});
      color[static_cast<std::size_t>(root)] = 1;
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < out[static_cast<std::size_t>(node)].size()) {
          int t = transitions[static_cast<std::size_t>(
                                  out[static_cast<std::size_t>(node)][next])]
                      .to;
          ++next;
          if (color[static_cast<std::size_t>(t)] == 1) return true;
          if (color[static_cast<std::size_t>(t)] == 0) {
            color[static_cast<std::size_t>(t)] = 1;
            stack.push_back({t, 0});
          }
        } else {
          color[static_cast<std::size_t>(node)] = 2;
          stack.pop_back();
        }
      }
    }
    return false;
  }

  /// Discovery path from the initial state to `target` as (label, state) steps.
  std::vector<std::pair<std::string, int>> path_to(int target) const {
    std::vector<std::pair<std::string, int>> rev;
    int cur = target;
    while (cur != initial && cur >= 0) {
      rev.emplace_back(labels[static_cast<std::size_t>(parent_label[static_cast<std::size_t>(cur)])],
                       cur);
      cur = parent_state[static_cast<std::size_t>(cur)];
    }
    std::vector<std::pair<std::string, int>> path(rev.rbegin(), rev.rend());
    return path;
  }
};

}  // namespace tact
