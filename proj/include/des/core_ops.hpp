#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "des/events.hpp"
#include "des/generator.hpp"

namespace des {

inline std::vector<char> reachable_mask(const Generator& g) {
  std::vector<char> seen(g.num_states(), 0);
  if (g.empty()) return seen;
  std::deque<int32_t> queue{g.initial};
  seen[g.initial] = 1;
  while (!queue.empty()) {
    int32_t q = queue.front();
    queue.pop_front();
    for (const auto& t : g.out[q])
      if (!seen[t.target]) {
        seen[t.target] = 1;
        queue.push_back(t.target);
      }
  }
  return seen;
}

/// States from which some marked state is reachable (backwards search).
inline std::vector<char> coreachable_mask(const Generator& g) {
  const int n = g.num_states();
  std::vector<std::vector<int32_t>> rev(n);
  for (int q = 0; q < n; ++q)
    for (const auto& t : g.out[q]) rev[t.target].push_back(q);
  std::vector<char> seen(n, 0);
  std::deque<int32_t> queue;
  for (int q = 0; q < n; ++q)
    if (g.marked[q]) {
      seen[q] = 1;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    int32_t q = queue.front();
    queue.pop_front();
    for (int32_t p : rev[q])
      if (!seen[p]) {
        seen[p] = 1;
        queue.push_back(p);
      }
  }
  return seen;
}

/// Keep exactly the states with keep[q] != 0 (plus incident transitions),
/// preserving state order, names and provenance. If the initial state is
/// dropped the result is EMPTY.
inline Generator restrict_states(const Generator& g, const std::vector<char>& keep) {
  if (g.empty() || !keep[g.initial]) return Generator::make_empty(g.events);
  const int n = g.num_states();
  std::vector<int32_t> remap(n, -1);
  Generator r;
  r.events = g.events;
  for (int q = 0; q < n; ++q) {
    if (!keep[q]) continue;
    remap[q] = r.add_state(g.state_names[q], g.marked[q]);
    if (!g.provenance.empty()) r.provenance.push_back(g.provenance[q]);
  }
  r.initial = remap[g.initial];
  for (int q = 0; q < n; ++q) {
    if (!keep[q]) continue;
    for (const auto& t : g.out[q])
      if (remap[t.target] >= 0) r.out[remap[q]].push_back({t.event, remap[t.target]});
  }
  return r;
}

/// Reachable and coreachable part. Trim of a generator whose initial state
/// cannot reach a marked state is EMPTY.
inline Generator trim(const Generator& g) {
  if (g.empty()) return Generator::make_empty(g.events);
  auto reach = reachable_mask(g);
  auto coreach = coreachable_mask(g);
  std::vector<char> keep(g.num_states(), 0);
  for (int q = 0; q < g.num_states(); ++q) keep[q] = reach[q] && coreach[q];
  return restrict_states(g, keep);
}

/// Every reachable state can reach a marked state. EMPTY is vacuously
/// nonblocking.
inline bool is_nonblocking(const Generator& g) {
  if (g.empty()) return true;
  auto reach = reachable_mask(g);
  auto coreach = coreachable_mask(g);
  for (int q = 0; q < g.num_states(); ++q)
    if (reach[q] && !coreach[q]) return false;
  return true;
}

/// Synchronous product over a common alphabet: transitions occur iff both
/// operands take them. Reachable part only; provenance records the operand
/// state pair. EMPTY absorbs.
inline Generator sync_product(const Generator& a, const Generator& b) {
  require_same_alphabet(a.events, b.events);
  if (a.empty() || b.empty()) return Generator::make_empty(a.events);
  Generator r;
  r.events = a.events;
  std::map<std::pair<int32_t, int32_t>, int32_t> index;
  std::deque<std::pair<int32_t, int32_t>> queue;
  auto intern = [&](int32_t p, int32_t q) {
    auto [it, fresh] = index.try_emplace({p, q}, r.num_states());
    if (fresh) {
      r.add_state(a.state_names[p] + "|" + b.state_names[q], a.marked[p] && b.marked[q]);
      r.provenance.push_back({p, q});
      queue.push_back({p, q});
    }
    return it->second;
  };
  r.initial = intern(a.initial, b.initial);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    int32_t src = index.at({p, q});
    for (const auto& t : a.out[p]) {
      auto u = b.step(q, t.event);
      if (!u) continue;
      int32_t dst = intern(t.target, *u);
      r.out[src].push_back({t.event, dst});
    }
  }
  return r;
}

/// Total completion: undefined transitions are redirected to a fresh,
/// unmarked dump state that self-loops on every event. Strings outside the
/// original closed language all run into the dump. For EMPTY the result is
/// a lone dump initial state (no string, not even the empty one, belonged
/// to the language).
struct DumpCompletion {
  Generator automaton;
  int32_t dump;
};

inline DumpCompletion complete_with_dump(const Generator& g) {
  Generator r;
  r.events = g.events;
  if (g.empty()) {
    int32_t d = r.add_state("dump", false);
    r.initial = d;
    for (int e = 0; e < g.events->size(); ++e) r.out[d].push_back({e, d});
    return {std::move(r), d};
  }
  r.initial = g.initial;
  r.state_names = g.state_names;
  r.marked = g.marked;
  r.out = g.out;
  int32_t d = r.add_state("dump", false);
  const int ne = g.events->size();
  for (int q = 0; q < r.num_states(); ++q) {
    auto& row = r.out[q];
    std::vector<Generator::Transition> full;
    full.reserve(ne);
    auto it = row.begin();
    for (int e = 0; e < ne; ++e) {
      if (it != row.end() && it->event == e)
        full.push_back(*it++);
      else
        full.push_back({e, d});
    }
    row = std::move(full);
  }
  return {std::move(r), d};
}

/// Add self-loops on the listed events at every state. Used to lift a
/// generator to a larger behavioural context (shuffle-style composition,
/// inverse-projection lifts).
inline Generator add_self_loops(const Generator& g, const std::vector<int32_t>& loop_events) {
  Generator r = g;
  for (int q = 0; q < r.num_states(); ++q)
    for (int32_t e : loop_events)
      if (!r.defined(q, e)) r.add_transition(q, e, q);
  return r;
}

}  // namespace des
