#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/generator.hpp"
#include "des/language.hpp"
#include "des/project.hpp"

namespace des {

struct ControllabilityReport {
  bool holds = true;
  std::vector<int32_t> witness;  // string after which the event is forced
  int32_t event = -1;
};

/// K is controllable when no string of it can be extended inside the plant
/// by an uncontrollable event that K forbids.
inline ControllabilityReport is_controllable(const Generator& g, const Generator& k) {
  require_same_alphabet(g.events, k.events);
  ControllabilityReport rep;
  if (g.empty() || k.empty()) return rep;
  auto uncontrollable = g.events->uncontrollable_events();

  std::map<std::pair<int32_t, int32_t>, int32_t> index;
  std::vector<std::pair<int32_t, int32_t>> pairs{{k.initial, g.initial}};
  std::vector<std::pair<int32_t, int32_t>> parent{{-1, -1}};
  index.emplace(pairs[0], 0);
  for (int head = 0; head < (int)pairs.size(); ++head) {
    auto [y, q] = pairs[head];
    for (int32_t e : uncontrollable)
      if (g.defined(q, e) && !k.defined(y, e)) {
        rep.holds = false;
        rep.event = e;
        for (int i = head; parent[i].first >= 0; i = parent[i].first)
          rep.witness.push_back(parent[i].second);
        std::reverse(rep.witness.begin(), rep.witness.end());
        return rep;
      }
    for (const auto& t : k.out[y]) {
      auto qn = g.step(q, t.event);
      if (!qn) continue;
      auto [it, fresh] = index.try_emplace({t.target, *qn}, (int)pairs.size());
      if (fresh) {
        pairs.push_back({t.target, *qn});
        parent.push_back({head, t.event});
      }
    }
  }
  return rep;
}

/// Supremal controllable sublanguage of Lm(k) within the plant: pair the
/// two, repeatedly delete pair states where the plant can force an
/// uncontrollable event the candidate side forbids, and trim. States that
/// were not split keep their candidate-side names.
inline Generator supcon(const Generator& g, const Generator& k) {
  require_same_alphabet(g.events, k.events);
  if (g.empty() || k.empty()) return Generator::make_empty(k.events);
  auto uncontrollable = g.events->uncontrollable_events();

  // Candidate paired with the plant; marking is the conjunction.
  Generator cur;
  cur.events = k.events;
  {
    std::map<std::pair<int32_t, int32_t>, int32_t> index;
    std::deque<int32_t> queue;
    auto intern = [&](int32_t y, int32_t q) {
      auto [it, fresh] = index.try_emplace({y, q}, cur.num_states());
      if (fresh) {
        cur.add_state("", k.marked[y] && g.marked[q]);
        cur.provenance.push_back({y, q});
        queue.push_back(it->second);
      }
      return it->second;
    };
    cur.initial = intern(k.initial, g.initial);
    while (!queue.empty()) {
      int32_t src = queue.front();
      queue.pop_front();
      auto [y, q] = std::pair(cur.provenance[src][0], cur.provenance[src][1]);
      for (const auto& t : k.out[y]) {
        auto qn = g.step(q, t.event);
        if (!qn) continue;
        int32_t dst = intern(t.target, *qn);
        cur.out[src].push_back({t.event, dst});
      }
    }
    detail::rename_after_first_operand(cur, k.state_names);
  }

  for (;;) {
    if (cur.empty()) return cur;
    std::vector<char> keep(cur.num_states(), 1);
    bool any_bad = false;
    for (int s = 0; s < cur.num_states(); ++s) {
      int32_t q = cur.provenance[s][1];
      for (int32_t e : uncontrollable)
        if (g.defined(q, e) && !cur.defined(s, e)) {
          keep[s] = 0;
          any_bad = true;
          break;
        }
    }
    if (!any_bad) return cur;
    cur = trim(restrict_states(cur, keep));
  }
}

struct NormalityReport {
  bool marked_normal = true;
  bool closed_normal = true;
  // Strings inside the observation-closed hull but outside the language.
  std::optional<std::vector<int32_t>> marked_witness, closed_witness;
};

namespace detail {

/// Recognizer of the inverse-projected projection of k's languages,
/// restricted to the plant: the hull every normal language equals.
inline Generator observation_hull(const Generator& g, const Generator& k) {
  Generator lifted = add_self_loops(observer(k), k.events->unobservable_events());
  lifted.provenance.clear();
  Generator hull = sync_product(lifted, g);
  for (int s = 0; s < hull.num_states(); ++s)
    hull.marked[s] = lifted.marked[hull.provenance[s][0]] && g.marked[hull.provenance[s][1]];
  return hull;
}

}  // namespace detail

/// Normality of k w.r.t. the plant and the projection: marked language
/// and closure each equal their observation hull.
inline NormalityReport is_normal(const Generator& g, const Generator& k) {
  require_same_alphabet(g.events, k.events);
  NormalityReport rep;
  if (k.empty()) return rep;  // the empty language is trivially normal
  auto rel = language_relation(k, detail::observation_hull(g, k));
  if (rel.marked != Relation::Equal) {
    rep.marked_normal = false;
    rep.marked_witness = rel.marked_in_b_only;
  }
  if (rel.closed != Relation::Equal) {
    rep.closed_normal = false;
    rep.closed_witness = rel.closed_in_b_only;
  }
  return rep;
}

/// Supremal sublanguage of k that is normal (marked and closed) w.r.t. the
/// plant. Iterated surgery on the candidate paired with its observation
/// classes over the whole plant language:
///   - a state whose class contains a plant string outside the closure is
///     deleted (no normal sublanguage can keep any string reaching it);
///   - a marked state whose class contains a marked plant string that the
///     candidate does not mark is unmarked.
/// Trim and repeat until nothing changes.
inline Generator supnorm(const Generator& g, const Generator& k) {
  require_same_alphabet(g.events, k.events);
  if (!is_nonblocking(k))
    throw DesError(ErrorKind::Blocking, "candidate must be nonblocking");
  if (k.empty() || g.empty()) return Generator::make_empty(k.events);
  {
    auto rel = language_relation(k, g);
    if (!detail::within(rel.closed) || !detail::within(rel.marked))
      throw DesError(ErrorKind::PreconditionViolated,
                     "candidate languages not inside the plant");
  }

  Generator cur = k;
  const int cap = g.num_states() + k.num_states() + 2;
  for (int round = 0; ; ++round) {
    if (round > cap)
      throw DesError(ErrorKind::Internal, "normality iteration failed to converge");
    if (cur.empty()) return cur;

    // D: every plant string with its position relative to the candidate's
    // closure (dump once outside). Provenance: (plant state, completed
    // candidate state).
    auto completion = complete_with_dump(cur);
    const Generator& kt = completion.automaton;
    const int32_t dump = completion.dump;
    Generator D;
    D.events = g.events;
    {
      std::map<std::pair<int32_t, int32_t>, int32_t> index;
      std::deque<int32_t> queue;
      auto intern = [&](int32_t q, int32_t y) {
        auto [it, fresh] = index.try_emplace({q, y}, D.num_states());
        if (fresh) {
          D.add_state("", g.marked[q]);
          D.provenance.push_back({q, y});
          queue.push_back(it->second);
        }
        return it->second;
      };
      D.initial = intern(g.initial, kt.initial);
      while (!queue.empty()) {
        int32_t src = queue.front();
        queue.pop_front();
        auto [q, y] = std::pair(D.provenance[src][0], D.provenance[src][1]);
        for (const auto& t : g.out[q]) {
          int32_t dst = intern(t.target, *kt.step(y, t.event));
          D.out[src].push_back({t.event, dst});
        }
      }
    }
    Generator OD = observer(D);

    // Candidate paired with its observation class; unobservable events
    // advance the candidate alone.
    Generator V;
    V.events = g.events;
    {
      std::map<std::pair<int32_t, int32_t>, int32_t> index;
      std::deque<int32_t> queue;
      auto intern = [&](int32_t y, int32_t w) {
        auto [it, fresh] = index.try_emplace({y, w}, V.num_states());
        if (fresh) {
          V.add_state("", cur.marked[y]);
          V.provenance.push_back({y, w});
          queue.push_back(it->second);
        }
        return it->second;
      };
      V.initial = intern(cur.initial, OD.initial);
      while (!queue.empty()) {
        int32_t src = queue.front();
        queue.pop_front();
        auto [y, w] = std::pair(V.provenance[src][0], V.provenance[src][1]);
        for (const auto& t : cur.out[y]) {
          if (g.events->observable(t.event)) {
            auto wn = OD.step(w, t.event);
            if (!wn)
              throw DesError(ErrorKind::Internal, "observation class lost an event");
            int32_t dst = intern(t.target, *wn);
            V.out[src].push_back({t.event, dst});
          } else {
            int32_t dst = intern(t.target, w);
            V.out[src].push_back({t.event, dst});
          }
        }
      }
    }

    std::vector<char> keep(V.num_states(), 1);
    bool changed = false;
    for (int s = 0; s < V.num_states(); ++s) {
      int32_t w = V.provenance[s][1];
      bool doomed = false, spoiler = false;
      for (int32_t d : OD.provenance[w]) {
        int32_t q = D.provenance[d][0], y = D.provenance[d][1];
        if (y == dump) {
          doomed = true;
          break;
        }
        if (g.marked[q] && !kt.marked[y]) spoiler = true;
      }
      if (doomed) {
        keep[s] = 0;
        changed = true;
      } else if (spoiler && V.marked[s]) {
        V.marked[s] = false;
        changed = true;
      }
    }
    if (!changed) return cur;
    detail::rename_after_first_operand(V, cur.state_names);
    cur = trim(restrict_states(V, keep));
  }
}

/// Alternate the controllable and normal suprema until the language is
/// both. Terminates: each pass only shrinks.
inline Generator supnorm_con(const Generator& g, const Generator& k) {
  Generator cur = supcon(g, k);
  for (;;) {
    if (cur.empty()) return cur;
    Generator n = supnorm(g, cur);
    if (same_languages(n, cur)) return n;  // cur was controllable already
    Generator c = supcon(g, n);
    if (same_languages(c, n)) return c;  // n was normal already
    cur = std::move(c);
  }
}

}  // namespace des
