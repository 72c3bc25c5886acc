#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tact/transition_system.hpp"

namespace tact {

namespace detail {

/// Label-unified view over two transition systems placed side by side.
struct CombinedLts {
  int n = 0;
  int init1 = 0;
  int init2 = 0;
  std::vector<std::string> labels;
  std::vector<char> internal;
  std::vector<std::vector<std::pair<int, int>>> edges;  // per state: (label, target)

  CombinedLts(const TransitionSystem& a, const TransitionSystem& b) {
    n = a.retained() + b.retained();
    init1 = a.initial;
    init2 = a.retained() + b.initial;
    edges.resize(static_cast<std::size_t>(n));
    std::unordered_map<std::string, int> ids;
    auto add = [&](const TransitionSystem& ts, int offset) {
      for (const auto& tr : ts.transitions) {
        const std::string& text = ts.labels[static_cast<std::size_t>(tr.label)];
        auto it = ids.find(text);
        int lid;
        if (it == ids.end()) {
          lid = static_cast<int>(labels.size());
          ids.emplace(text, lid);
          labels.push_back(text);
          internal.push_back(ts.label_internal[static_cast<std::size_t>(tr.label)]);
        } else {
          lid = it->second;
        }
        edges[static_cast<std::size_t>(tr.from + offset)].emplace_back(lid, tr.to + offset);
      }
    };
    add(a, 0);
    add(b, a.retained());
  }
};

inline bool refine_to_fixpoint(int n, const std::vector<std::vector<std::pair<int, int>>>& sig_src,
                               std::vector<int>& block) {
  // Signature-based partition refinement: states whose (label, block) edge
  // sets differ end up in different blocks; iterate until stable.
  int blocks = 1;
  for (;;) {
    std::map<std::vector<std::pair<int, int>>, int> sig_ids;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      std::vector<std::pair<int, int>> sig;
      sig.reserve(sig_src[static_cast<std::size_t>(s)].size() + 1);
      sig.emplace_back(-1, block[static_cast<std::size_t>(s)]);
      for (auto [l, t] : sig_src[static_cast<std::size_t>(s)]) {
        sig.emplace_back(l, block[static_cast<std::size_t>(t)]);
      }
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, inserted] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next[static_cast<std::size_t>(s)] = it->second;
    }
    int new_blocks = static_cast<int>(sig_ids.size());
    block.swap(next);
    if (new_blocks == blocks) return true;
    blocks = new_blocks;
  }
}

}  // namespace detail

/// Strong bisimilarity of the initial states, by partition refinement over
/// event labels. Throws when the combined instance exceeds `max_states`.
inline bool strong_bisimilar(const TransitionSystem& a, const TransitionSystem& b,
                             int max_states = 5000) {
  if (a.retained() > max_states || b.retained() > max_states) {
    throw std::runtime_error("strong_bisimilar: instance exceeds oracle size limit (" +
                             std::to_string(max_states) + " states)");
  }
  detail::CombinedLts c(a, b);
  std::vector<int> block(static_cast<std::size_t>(c.n), 0);
  detail::refine_to_fixpoint(c.n, c.edges, block);
  return block[static_cast<std::size_t>(c.init1)] == block[static_cast<std::size_t>(c.init2)];
}

/// Weak bisimilarity over visible event labels: internal moves (statement
/// steps and time progress) are saturated away, then the saturated system is
/// refined like a strong one. Visible labels are taking-message and expired
/// events, which both semantics share.
inline bool weak_bisimilar_events(const TransitionSystem& a, const TransitionSystem& b,
                                  int max_states = 5000) {
  if (a.retained() > max_states || b.retained() > max_states) {
    throw std::runtime_error("weak_bisimilar_events: instance exceeds oracle size limit (" +
                             std::to_string(max_states) + " states)");
  }
  detail::CombinedLts c(a, b);
  std::size_t n = static_cast<std::size_t>(c.n);

  // epsilon closures (reflexive-transitive closure over internal edges)
  std::vector<std::vector<int>> closure(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<char> mark(n, 0);
    std::vector<int> stack{static_cast<int>(s)};
    mark[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      closure[s].push_back(u);
      for (auto [l, t] : c.edges[static_cast<std::size_t>(u)]) {
        if (c.internal[static_cast<std::size_t>(l)] && !mark[static_cast<std::size_t>(t)]) {
          mark[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
    std::sort(closure[s].begin(), closure[s].end());
  }

  // saturated arrows: visible a => closure(s) -a-> closure(t); internal
  // reachability becomes an explicit epsilon label (id -2 reserved below).
  constexpr int kEps = -2;
  std::vector<std::vector<std::pair<int, int>>> weak(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (int u : closure[s]) {
      for (auto [l, t] : c.edges[static_cast<std::size_t>(u)]) {
        if (c.internal[static_cast<std::size_t>(l)]) continue;
        for (int w : closure[static_cast<std::size_t>(t)]) {
          weak[s].emplace_back(l, w);
        }
      }
    }
    for (int u : closure[s]) weak[s].emplace_back(kEps, u);
    std::sort(weak[s].begin(), weak[s].end());
    weak[s].erase(std::unique(weak[s].begin(), weak[s].end()), weak[s].end());
  }

  std::vector<int> block(n, 0);
  detail::refine_to_fixpoint(c.n, weak, block);
  return block[static_cast<std::size_t>(c.init1)] == block[static_cast<std::size_t>(c.init2)];
}

}  // namespace tact
