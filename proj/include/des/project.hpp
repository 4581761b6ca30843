#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/generator.hpp"
#include "des/language.hpp"

namespace des {

/// Natural projection of a string: erase unobservable events.
inline std::vector<int32_t> project_string(const EventTable& events,
                                           const std::vector<int32_t>& word) {
  std::vector<int32_t> p;
  for (int32_t e : word)
    if (events.observable(e)) p.push_back(e);
  return p;
}

namespace detail {

inline std::vector<int32_t> uo_closure(const Generator& g, std::vector<int32_t> seed) {
  std::set<int32_t> seen(seed.begin(), seed.end());
  std::deque<int32_t> queue(seed.begin(), seed.end());
  while (!queue.empty()) {
    int32_t q = queue.front();
    queue.pop_front();
    for (const auto& t : g.out[q])
      if (!g.events->observable(t.event) && seen.insert(t.target).second)
        queue.push_back(t.target);
  }
  return std::vector<int32_t>(seen.begin(), seen.end());
}

inline std::string subset_name(const Generator& g, const std::vector<int32_t>& subset) {
  std::string name = "{";
  for (size_t i = 0; i < subset.size(); ++i) {
    if (i) name += ',';
    name += g.state_names[subset[i]];
  }
  name += '}';
  return name;
}

}  // namespace detail

/// Deterministic recognizer of the projected languages: L(observer(G)) =
/// P(L(G)) and Lm(observer(G)) = P(Lm(G)). Standard subset construction
/// over the observable events with unobservable closure; each state's
/// provenance lists the member states of the subset.
inline Generator observer(const Generator& g) {
  if (g.empty()) return Generator::make_empty(g.events);
  Generator r;
  r.events = g.events;
  std::map<std::vector<int32_t>, int32_t> index;
  std::deque<int32_t> queue;
  auto intern = [&](std::vector<int32_t> subset) {
    auto [it, fresh] = index.try_emplace(std::move(subset), r.num_states());
    if (fresh) {
      const auto& members = it->first;
      bool any_marked = false;
      for (int32_t q : members) any_marked = any_marked || g.marked[q];
      r.add_state(detail::subset_name(g, members), any_marked);
      r.provenance.push_back(members);
      queue.push_back(it->second);
    }
    return it->second;
  };
  r.initial = intern(detail::uo_closure(g, {g.initial}));
  auto observable = g.events->observable_events();
  while (!queue.empty()) {
    int32_t src = queue.front();
    queue.pop_front();
    for (int32_t e : observable) {
      std::vector<int32_t> moved;
      for (int32_t q : r.provenance[src]) {
        auto n = g.step(q, e);
        if (n) moved.push_back(*n);
      }
      if (moved.empty()) continue;
      int32_t dst = intern(detail::uo_closure(g, std::move(moved)));
      r.out[src].push_back({e, dst});
    }
  }
  return r;
}

namespace detail {

/// Rename product-born states after their first operand: a state keeps the
/// operand name when the operand was not split, and gains ~1, ~2, ...
/// suffixes (in state order) when it was.
inline void rename_after_first_operand(Generator& g, const std::vector<std::string>& names) {
  std::map<int32_t, int> copies;
  for (const auto& prov : g.provenance) copies[prov[0]]++;
  std::map<int32_t, int> counter;
  for (int q = 0; q < g.num_states(); ++q) {
    int32_t orig = g.provenance[q][0];
    if (copies[orig] == 1)
      g.state_names[q] = names[orig];
    else
      g.state_names[q] = names[orig] + "~" + std::to_string(++counter[orig]);
  }
}

}  // namespace detail

/// Refine k so that each state corresponds to a unique plant state: the
/// reachable part of the pair construction with g. States that were not
/// split keep their names. Requires k's languages to lie inside g's.
inline Generator normalize_assumption1(const Generator& k, const Generator& g) {
  require_same_alphabet(k.events, g.events);
  if (k.empty()) return Generator::make_empty(k.events);
  auto rel = language_relation(k, g);
  if (rel.closed == Relation::BStrictlyInA || rel.closed == Relation::Incomparable ||
      rel.marked == Relation::BStrictlyInA || rel.marked == Relation::Incomparable)
    throw DesError(ErrorKind::PreconditionViolated,
                   "languages not contained in the plant");
  Generator r = sync_product(k, g);
  // Containment makes the pairing language-preserving; marking follows k.
  for (int q = 0; q < r.num_states(); ++q) r.marked[q] = k.marked[r.provenance[q][0]];
  detail::rename_after_first_operand(r, k.state_names);
  return r;
}

namespace detail {

/// Pair k with its own observer: unobservable events advance k alone,
/// observable events advance both. Each pair state carries (k state,
/// observer state); the observer component is the uncertainty set of
/// every string reaching the state. Provenance: {k state, observer state}.
struct ObserverPairing {
  Generator pairing;
  Generator obs;
};

inline ObserverPairing observer_pairing(const Generator& k) {
  ObserverPairing res;
  res.obs = observer(k);
  Generator& r = res.pairing;
  r.events = k.events;
  if (k.empty()) return res;
  std::map<std::pair<int32_t, int32_t>, int32_t> index;
  std::deque<int32_t> queue;
  auto intern = [&](int32_t y, int32_t x) {
    auto [it, fresh] = index.try_emplace({y, x}, r.num_states());
    if (fresh) {
      r.add_state(k.state_names[y] + "|" + res.obs.state_names[x], k.marked[y]);
      r.provenance.push_back({y, x});
      queue.push_back(it->second);
    }
    return it->second;
  };
  r.initial = intern(k.initial, res.obs.initial);
  while (!queue.empty()) {
    int32_t src = queue.front();
    queue.pop_front();
    auto [y, x] = std::pair(r.provenance[src][0], r.provenance[src][1]);
    for (const auto& t : k.out[y]) {
      if (k.events->observable(t.event)) {
        auto xn = res.obs.step(x, t.event);
        if (!xn)
          throw DesError(ErrorKind::Internal, "observer lost a projected event");
        int32_t dst = intern(t.target, *xn);
        r.out[src].push_back({t.event, dst});
      } else {
        int32_t dst = intern(t.target, x);
        r.out[src].push_back({t.event, dst});
      }
    }
  }
  return res;
}

}  // namespace detail

/// Witness for a failed uncertainty-set consistency check: a state reached
/// by strings with distinct uncertainty sets, and the two sets.
struct UncertaintyReport {
  bool consistent = true;
  std::string state;
  std::vector<std::string> set_a, set_b;
};

/// Each state must be reached only by strings sharing one uncertainty set
/// (the set of states reached by lookalike strings).
inline UncertaintyReport check_assumption2(const Generator& k) {
  UncertaintyReport rep;
  if (k.empty()) return rep;
  auto pairing = detail::observer_pairing(k);
  std::map<int32_t, int32_t> seen;  // k state -> observer state
  for (const auto& prov : pairing.pairing.provenance) {
    auto [it, fresh] = seen.try_emplace(prov[0], prov[1]);
    if (fresh || it->second == prov[1]) continue;
    rep.consistent = false;
    rep.state = k.state_names[prov[0]];
    for (int32_t q : pairing.obs.provenance[it->second]) rep.set_a.push_back(k.state_names[q]);
    for (int32_t q : pairing.obs.provenance[prov[1]]) rep.set_b.push_back(k.state_names[q]);
    return rep;
  }
  return rep;
}

/// Split states reached by strings with different uncertainty sets, so the
/// refined generator satisfies the consistency required by the supremal
/// iteration. Language-preserving; unsplit states keep their names.
inline Generator normalize_assumption2(const Generator& k) {
  if (k.empty()) return Generator::make_empty(k.events);
  Generator r = detail::observer_pairing(k).pairing;
  detail::rename_after_first_operand(r, k.state_names);
  return r;
}

/// Counterexample to the marked-language observer property: after string s,
/// the observed continuation t promises a marked completion that no actual
/// continuation of s with the same projection can deliver.
struct ObserverPropertyReport {
  bool holds = true;
  std::vector<int32_t> witness_s, witness_t;
};

/// Does the projection report enough to steer k to marked completions?
/// Formally: P(s)t in P(Lm(k)) with s in L(k) implies some u with
/// P(u) = t and su in Lm(k). Checked on the observer pairing by a subset
/// search: from each reachable pair state, every observably-marked
/// continuation must be realizable by an actual marked run.
inline ObserverPropertyReport is_lm_observer(const Generator& k) {
  ObserverPropertyReport rep;
  if (k.empty()) return rep;
  if (!is_nonblocking(k))
    throw DesError(ErrorKind::Blocking, "observer property requires a nonblocking input");
  auto pairing = detail::observer_pairing(k);
  const Generator& B = pairing.pairing;
  const Generator& obs = pairing.obs;

  // Search states: (subset of pairing states, observer state). The subset
  // holds the runs that realize the observed continuation so far and may
  // die out while the observation continues. A state is a violation when
  // the observer component is marked but no surviving run is.
  struct Node {
    std::vector<int32_t> members;
    int32_t z;
    bool operator<(const Node& o) const {
      return std::tie(z, members) < std::tie(o.z, o.members);
    }
  };
  std::map<Node, int32_t> index;
  std::vector<const Node*> nodes;
  std::vector<std::pair<int32_t, int32_t>> parent;  // (node, event); -1 at roots
  std::vector<int32_t> root_of;                     // originating pairing state
  std::deque<int32_t> queue;
  auto intern = [&](Node node, int32_t par, int32_t via, int32_t root) {
    auto [it, fresh] = index.try_emplace(std::move(node), (int)nodes.size());
    if (fresh) {
      nodes.push_back(&it->first);
      parent.push_back({par, via});
      root_of.push_back(root);
      queue.push_back(it->second);
    }
  };

  auto uo_closure_b = [&](std::vector<int32_t> seed) {
    std::set<int32_t> seen(seed.begin(), seed.end());
    std::deque<int32_t> work(seed.begin(), seed.end());
    while (!work.empty()) {
      int32_t b = work.front();
      work.pop_front();
      for (const auto& t : B.out[b])
        if (!B.events->observable(t.event) && seen.insert(t.target).second)
          work.push_back(t.target);
    }
    return std::vector<int32_t>(seen.begin(), seen.end());
  };

  for (int32_t b = 0; b < B.num_states(); ++b)
    intern({uo_closure_b({b}), B.provenance[b][1]}, -1, -1, b);

  auto observable = B.events->observable_events();
  int violation = -1;
  while (!queue.empty() && violation < 0) {
    int32_t cur = queue.front();
    queue.pop_front();
    const Node& node = *nodes[cur];
    bool member_marked = false;
    for (int32_t b : node.members) member_marked = member_marked || B.marked[b];
    if (obs.marked[node.z] && !member_marked) {
      violation = cur;
      break;
    }
    for (int32_t e : observable) {
      auto zn = obs.step(node.z, e);
      if (!zn) continue;  // observation cannot continue this way
      std::vector<int32_t> moved;
      for (int32_t b : node.members) {
        auto n = B.step(b, e);
        if (n) moved.push_back(*n);
      }
      intern({uo_closure_b(std::move(moved)), *zn}, cur, e, root_of[cur]);
    }
  }
  if (violation < 0) return rep;

  rep.holds = false;
  for (int i = violation; parent[i].first >= 0; i = parent[i].first)
    rep.witness_t.push_back(parent[i].second);
  std::reverse(rep.witness_t.begin(), rep.witness_t.end());
  // Shortest string reaching the root pairing state.
  std::vector<int32_t> via_state(B.num_states(), -1), via_event(B.num_states(), -1);
  std::vector<char> seen(B.num_states(), 0);
  seen[B.initial] = 1;
  std::deque<int32_t> walk{B.initial};
  while (!walk.empty()) {
    int32_t q = walk.front();
    walk.pop_front();
    for (const auto& t : B.out[q])
      if (!seen[t.target]) {
        seen[t.target] = 1;
        via_state[t.target] = q;
        via_event[t.target] = t.event;
        walk.push_back(t.target);
      }
  }
  for (int32_t q = root_of[violation]; via_event[q] >= 0; q = via_state[q])
    rep.witness_s.push_back(via_event[q]);
  std::reverse(rep.witness_s.begin(), rep.witness_s.end());
  return rep;
}

}  // namespace des
