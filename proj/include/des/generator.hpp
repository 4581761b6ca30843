#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "des/events.hpp"

namespace des {

/// Deterministic generator G = (Q, Sigma, delta, q0, Qm) with a dense state
/// numbering, a stable name table, and (for products) optional provenance.
/// The EMPTY generator — zero states, no initial — is a first-class value:
/// L(EMPTY) = Lm(EMPTY) = {} (note that even the empty string is absent).
struct Generator {
  struct Transition {
    int32_t event;
    int32_t target;
    bool operator==(const Transition&) const = default;
  };

  EventTablePtr events;
  int32_t initial = -1;
  std::vector<std::string> state_names;
  std::vector<bool> marked;
  std::vector<std::vector<Transition>> out;  // per state, sorted by event
  // For states born from a product or subset construction: the origin tuple
  // (pair of operand states, or the observer subset). Empty when untracked.
  std::vector<std::vector<int32_t>> provenance;

  int num_states() const { return (int)state_names.size(); }
  bool empty() const { return initial < 0; }

  static Generator make_empty(EventTablePtr table) {
    Generator g;
    g.events = std::move(table);
    return g;
  }

  int add_state(std::string name, bool is_marked) {
    state_names.push_back(std::move(name));
    marked.push_back(is_marked);
    out.emplace_back();
    return num_states() - 1;
  }

  /// delta(state, event), or nullopt when undefined.
  std::optional<int32_t> step(int32_t state, int32_t event) const {
    const auto& row = out[state];
    auto it = std::lower_bound(row.begin(), row.end(), event,
                               [](const Transition& t, int32_t e) { return t.event < e; });
    if (it != row.end() && it->event == event) return it->target;
    return std::nullopt;
  }

  bool defined(int32_t state, int32_t event) const {
    return step(state, event).has_value();
  }

  void add_transition(int32_t src, int32_t event, int32_t dst) {
    auto& row = out[src];
    auto it = std::lower_bound(row.begin(), row.end(), event,
                               [](const Transition& t, int32_t e) { return t.event < e; });
    if (it != row.end() && it->event == event)
      throw DesError(ErrorKind::DuplicateTransition,
                     "duplicate transition at state " + state_names[src] +
                         " on event " + events->name(event));
    row.insert(it, Transition{event, dst});
  }

  /// Run a string (sequence of event ids) from the initial state.
  std::optional<int32_t> run(const std::vector<int32_t>& word) const {
    if (empty()) return std::nullopt;
    int32_t q = initial;
    for (int32_t e : word) {
      auto n = step(q, e);
      if (!n) return std::nullopt;
      q = *n;
    }
    return q;
  }

  bool accepts(const std::vector<int32_t>& word) const {
    auto q = run(word);
    return q && marked[*q];
  }

  int num_transitions() const {
    int n = 0;
    for (const auto& row : out) n += (int)row.size();
    return n;
  }

  int num_marked() const {
    int n = 0;
    for (bool m : marked) n += m ? 1 : 0;
    return n;
  }

  /// Structural sanity: dense ids, sorted rows, targets in range.
  void check_wellformed() const {
    if (!events) throw DesError(ErrorKind::Internal, "generator without event table");
    const int n = num_states();
    if ((int)marked.size() != n || (int)out.size() != n)
      throw DesError(ErrorKind::Internal, "state arrays out of sync");
    if (!provenance.empty() && (int)provenance.size() != n)
      throw DesError(ErrorKind::Internal, "provenance array out of sync");
    if (initial >= n)
      throw DesError(ErrorKind::Internal, "initial state out of range");
    for (int q = 0; q < n; ++q) {
      int32_t prev = -1;
      for (const auto& t : out[q]) {
        if (t.event <= prev)
          throw DesError(ErrorKind::Internal, "unsorted or duplicate transition row");
        prev = t.event;
        if (t.event < 0 || t.event >= events->size() || t.target < 0 || t.target >= n)
          throw DesError(ErrorKind::Internal, "transition out of range");
      }
    }
  }
};

/// BFS order over reachable states, expanding transitions in event order.
/// Unreachable states are absent from the result.
inline std::vector<int32_t> bfs_order(const Generator& g) {
  std::vector<int32_t> order;
  if (g.empty()) return order;
  std::vector<char> seen(g.num_states(), 0);
  std::deque<int32_t> queue{g.initial};
  seen[g.initial] = 1;
  while (!queue.empty()) {
    int32_t q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (const auto& t : g.out[q]) {
      if (!seen[t.target]) {
        seen[t.target] = 1;
        queue.push_back(t.target);
      }
    }
  }
  return order;
}

/// Renumber states into BFS order (dropping unreachable states). Names,
/// markings and provenance follow their states.
inline Generator canonicalize(const Generator& g) {
  if (g.empty()) return Generator::make_empty(g.events);
  auto order = bfs_order(g);
  std::vector<int32_t> remap(g.num_states(), -1);
  for (int i = 0; i < (int)order.size(); ++i) remap[order[i]] = i;
  Generator r;
  r.events = g.events;
  r.initial = 0;
  r.state_names.reserve(order.size());
  for (int32_t q : order) {
    r.state_names.push_back(g.state_names[q]);
    r.marked.push_back(g.marked[q]);
  }
  r.out.resize(order.size());
  for (int i = 0; i < (int)order.size(); ++i) {
    for (const auto& t : g.out[order[i]])
      r.out[i].push_back({t.event, remap[t.target]});
  }
  if (!g.provenance.empty()) {
    r.provenance.reserve(order.size());
    for (int32_t q : order) r.provenance.push_back(g.provenance[q]);
  }
  return r;
}

/// Structural equality up to state names (both sides canonicalized first).
/// Deterministic generators are isomorphic iff their canonical forms match.
inline bool isomorphic(const Generator& a, const Generator& b) {
  if (!a.events->same_as(*b.events)) return false;
  Generator ca = canonicalize(a);
  Generator cb = canonicalize(b);
  if (ca.num_states() != cb.num_states()) return false;
  if (ca.empty() != cb.empty()) return false;
  for (int q = 0; q < ca.num_states(); ++q) {
    if (ca.marked[q] != cb.marked[q]) return false;
    if (ca.out[q] != cb.out[q]) return false;
  }
  return true;
}

}  // namespace des
