#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/generator.hpp"

namespace des {

enum class Relation { Equal, AStrictlyInB, BStrictlyInA, Incomparable };

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "Equal";
    case Relation::AStrictlyInB: return "AStrictlyInB";
    case Relation::BStrictlyInA: return "BStrictlyInA";
    case Relation::Incomparable: return "Incomparable";
  }
  return "?";
}

/// Comparison of two generators as language pairs (closed, marked).
/// Witnesses are shortest strings (ties broken by event order) proving
/// non-inclusion in the stated direction.
struct LanguageRelation {
  Relation closed = Relation::Equal;
  Relation marked = Relation::Equal;
  std::optional<std::vector<int32_t>> closed_in_a_only, closed_in_b_only;
  std::optional<std::vector<int32_t>> marked_in_a_only, marked_in_b_only;

  /// Joint verdict over both language pairs.
  Relation overall() const {
    auto le = [](Relation r) { return r == Relation::Equal || r == Relation::AStrictlyInB; };
    auto ge = [](Relation r) { return r == Relation::Equal || r == Relation::BStrictlyInA; };
    if (closed == Relation::Equal && marked == Relation::Equal) return Relation::Equal;
    if (le(closed) && le(marked)) return Relation::AStrictlyInB;
    if (ge(closed) && ge(marked)) return Relation::BStrictlyInA;
    return Relation::Incomparable;
  }
};

namespace detail {

/// Explore the product of two dump-completions breadth-first, expanding
/// events in increasing order, and collect the first (hence shortest,
/// lexicographically least) string reaching a pair that satisfies each
/// predicate of interest.
struct PairSearch {
  const Generator& a;
  const Generator& b;
  std::vector<std::pair<int32_t, int32_t>> states;
  std::vector<std::pair<int32_t, int32_t>> parent;  // (state index, event)

  PairSearch(const Generator& ca, const Generator& cb) : a(ca), b(cb) {
    states.push_back({ca.initial, cb.initial});
    parent.push_back({-1, -1});
  }

  std::vector<int32_t> trace(int idx) const {
    std::vector<int32_t> word;
    for (int i = idx; parent[i].first >= 0; i = parent[i].first)
      word.push_back(parent[i].second);
    std::reverse(word.begin(), word.end());
    return word;
  }
};

}  // namespace detail

/// Compare L and Lm of two generators over the same alphabet.
inline LanguageRelation language_relation(const Generator& a, const Generator& b) {
  require_same_alphabet(a.events, b.events);
  auto [ca, dump_a] = complete_with_dump(a);
  auto [cb, dump_b] = complete_with_dump(b);

  detail::PairSearch search(ca, cb);
  std::map<std::pair<int32_t, int32_t>, int32_t> index{{search.states[0], 0}};
  const int ne = a.events->size();

  LanguageRelation rel;
  auto note = [&](int idx) {
    auto [p, q] = search.states[idx];
    if (p != dump_a && q == dump_b && !rel.closed_in_a_only)
      rel.closed_in_a_only = search.trace(idx);
    if (q != dump_b && p == dump_a && !rel.closed_in_b_only)
      rel.closed_in_b_only = search.trace(idx);
    if (ca.marked[p] && !cb.marked[q] && !rel.marked_in_a_only)
      rel.marked_in_a_only = search.trace(idx);
    if (cb.marked[q] && !ca.marked[p] && !rel.marked_in_b_only)
      rel.marked_in_b_only = search.trace(idx);
  };

  note(0);
  for (int head = 0; head < (int)search.states.size(); ++head) {
    auto [p, q] = search.states[head];
    for (int e = 0; e < ne; ++e) {
      auto pn = *ca.step(p, e);
      auto qn = *cb.step(q, e);
      auto [it, fresh] = index.try_emplace({pn, qn}, (int)search.states.size());
      if (!fresh) continue;
      search.states.push_back({pn, qn});
      search.parent.push_back({head, e});
      note(it->second);
    }
  }

  auto classify = [](const std::optional<std::vector<int32_t>>& a_only,
                     const std::optional<std::vector<int32_t>>& b_only) {
    if (a_only && b_only) return Relation::Incomparable;
    if (a_only) return Relation::BStrictlyInA;
    if (b_only) return Relation::AStrictlyInB;
    return Relation::Equal;
  };
  rel.closed = classify(rel.closed_in_a_only, rel.closed_in_b_only);
  rel.marked = classify(rel.marked_in_a_only, rel.marked_in_b_only);
  return rel;
}

inline bool same_languages(const Generator& a, const Generator& b) {
  return language_relation(a, b).overall() == Relation::Equal;
}

namespace detail {

inline bool within(Relation r) {
  return r == Relation::Equal || r == Relation::AStrictlyInB;
}

}  // namespace detail

/// Render a witness string with the conventional dot separator;
/// the empty string prints as "<empty>".
inline std::string format_word(const EventTable& events, const std::vector<int32_t>& word) {
  if (word.empty()) return "<empty>";
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += '.';
    s += events.name(word[i]);
  }
  return s;
}

/// Minimal deterministic generator with the same closed and marked
/// language: reachable part, then Moore partition refinement (undefined
/// successors count as a distinct class), then quotient in BFS order.
/// Merged states take the name of their lowest-numbered member.
inline Generator minimize(const Generator& g) {
  if (g.empty()) return Generator::make_empty(g.events);
  Generator r = canonicalize(g);  // reachable part, dense ids
  const int n = r.num_states();
  const int ne = r.events->size();

  std::vector<int32_t> cls(n);
  for (int q = 0; q < n; ++q) cls[q] = r.marked[q] ? 1 : 0;
  int num_classes = 2;

  for (;;) {
    // Signature: own class plus the class (or -1) of each successor.
    std::map<std::vector<int32_t>, int32_t> sig_to_class;
    std::vector<int32_t> next(n);
    std::vector<int32_t> sig(ne + 1);
    for (int q = 0; q < n; ++q) {
      sig[0] = cls[q];
      for (int e = 0; e < ne; ++e) sig[e + 1] = -1;
      for (const auto& t : r.out[q]) sig[t.event + 1] = cls[t.target];
      next[q] = sig_to_class.try_emplace(sig, (int)sig_to_class.size()).first->second;
    }
    int count = (int)sig_to_class.size();
    bool stable = (count == num_classes);
    cls = std::move(next);
    num_classes = count;
    if (stable) break;
  }

  Generator m;
  m.events = r.events;
  std::vector<int32_t> rep(num_classes, -1);
  std::vector<int32_t> state_of(num_classes, -1);
  for (int q = 0; q < n; ++q)
    if (rep[cls[q]] < 0) rep[cls[q]] = q;
  // Allocate quotient states in BFS order over the quotient graph.
  std::deque<int32_t> queue{cls[r.initial]};
  state_of[cls[r.initial]] = m.add_state(r.state_names[rep[cls[r.initial]]],
                                         r.marked[rep[cls[r.initial]]]);
  m.initial = 0;
  while (!queue.empty()) {
    int32_t c = queue.front();
    queue.pop_front();
    for (const auto& t : r.out[rep[c]]) {
      int32_t tc = cls[t.target];
      if (state_of[tc] < 0) {
        state_of[tc] = m.add_state(r.state_names[rep[tc]], r.marked[rep[tc]]);
        queue.push_back(tc);
      }
      m.out[state_of[c]].push_back({t.event, state_of[tc]});
    }
  }
  return m;
}

}  // namespace des
