#pragma once

#include <algorithm>
#include <array>
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

/// Which events the transition-removal step may act on. Removing only
/// controllable transitions is what the combined supervisory iteration
/// needs: uncontrollable transitions are the controllability pass's
/// responsibility, and cutting them here would lose supremality.
enum class ConditionEvents { All, ControllableOnly };

namespace detail {

/// Skeleton shared by the group computation and the supremal pass: the
/// reachable (plant, ambient, completed-candidate) triples, grouped by
/// observed string via the subset construction over observable events
/// with unobservable closure. A group's rows forget the ambient component
/// and collapse duplicates; `step` records the group reached by each
/// observable event.
struct LookalikeClasses {
  std::vector<std::array<int32_t, 3>> triples;
  std::vector<std::vector<int32_t>> members;                   // group -> triple ids
  std::vector<std::vector<std::pair<int32_t, int32_t>>> step;  // group -> (event, group)
  std::vector<std::vector<std::pair<int32_t, int32_t>>> rows;  // group -> (plant, candidate)
  int32_t initial = -1;
};

inline LookalikeClasses lookalike_classes(const Generator& g, const Generator& ambient,
                                          const Generator& kt) {
  LookalikeClasses cls;
  if (g.empty() || ambient.empty()) return cls;

  // The ambient component confines rows to its closed language.
  auto& triples = cls.triples;
  std::map<std::array<int32_t, 3>, int32_t> triple_index;
  std::deque<int32_t> work;
  auto intern_triple = [&](int32_t q, int32_t a, int32_t y) {
    auto [it, fresh] = triple_index.try_emplace({q, a, y}, (int)triples.size());
    if (fresh) {
      triples.push_back({q, a, y});
      work.push_back(it->second);
    }
    return it->second;
  };
  intern_triple(g.initial, ambient.initial, kt.initial);
  const int ne = g.events->size();
  std::vector<std::vector<std::pair<int32_t, int32_t>>> tstep(1);  // per triple: (event, next)
  while (!work.empty()) {
    int32_t cur = work.front();
    work.pop_front();
    auto [q, a, y] = triples[cur];
    if ((int)tstep.size() <= cur) tstep.resize(cur + 1);
    for (int e = 0; e < ne; ++e) {
      auto qn = g.step(q, e);
      if (!qn) continue;
      auto an = ambient.step(a, e);
      if (!an) continue;
      tstep[cur].push_back({e, intern_triple(*qn, *an, *kt.step(y, e))});
    }
  }
  tstep.resize(triples.size());

  auto closure = [&](std::vector<int32_t> seed) {
    std::set<int32_t> seen(seed.begin(), seed.end());
    std::deque<int32_t> queue(seed.begin(), seed.end());
    while (!queue.empty()) {
      int32_t t = queue.front();
      queue.pop_front();
      for (auto [e, n] : tstep[t])
        if (!g.events->observable(e) && seen.insert(n).second) queue.push_back(n);
    }
    return std::vector<int32_t>(seen.begin(), seen.end());
  };

  std::map<std::vector<int32_t>, int32_t> group_index;
  std::deque<int32_t> frontier;
  auto intern_group = [&](std::vector<int32_t> group) {
    auto [it, fresh] = group_index.try_emplace(std::move(group), (int)cls.members.size());
    if (fresh) {
      cls.members.push_back(it->first);
      frontier.push_back(it->second);
    }
    return it->second;
  };
  cls.initial = intern_group(closure({0}));
  cls.step.resize(1);
  auto observable = g.events->observable_events();
  while (!frontier.empty()) {
    int32_t cur = frontier.front();
    frontier.pop_front();
    const auto group = cls.members[cur];
    if ((int)cls.step.size() <= cur) cls.step.resize(cur + 1);
    for (int32_t e : observable) {
      std::vector<int32_t> moved;
      for (int32_t t : group)
        for (auto [te, n] : tstep[t])
          if (te == e) moved.push_back(n);
      if (moved.empty()) continue;
      int32_t next = intern_group(closure(std::move(moved)));
      cls.step[cur].push_back({e, next});
    }
  }
  cls.step.resize(cls.members.size());

  cls.rows.resize(cls.members.size());
  for (size_t c = 0; c < cls.members.size(); ++c) {
    std::set<std::pair<int32_t, int32_t>> rows;
    for (int32_t t : cls.members[c]) rows.insert({triples[t][0], triples[t][2]});
    cls.rows[c].assign(rows.begin(), rows.end());
  }
  return cls;
}

}  // namespace detail

/// The lookalike groups: for each observed string, the set of (plant
/// state, completed-candidate state) pairs reached by the strings of the
/// ambient language with that observation. Rows whose candidate component
/// equals `dump` stem from ambient strings outside the candidate's
/// closure. Groups are deduplicated by value and singletons are dropped
/// (a lone row can never witness an inconsistency).
struct TSetFamily {
  std::vector<std::vector<std::pair<int32_t, int32_t>>> sets;
  Generator completed;  // candidate with dump completion, for lookups
  int32_t dump = -1;
};

inline TSetFamily compute_T_family(const Generator& g, const Generator& ambient,
                                   const Generator& k) {
  require_same_alphabet(g.events, ambient.events);
  require_same_alphabet(g.events, k.events);
  TSetFamily family;
  auto completion = complete_with_dump(k);
  family.completed = std::move(completion.automaton);
  family.dump = completion.dump;
  auto classes = detail::lookalike_classes(g, ambient, family.completed);
  std::set<std::vector<std::pair<int32_t, int32_t>>> seen;
  for (const auto& rows : classes.rows)
    if (rows.size() >= 2 && seen.insert(rows).second) family.sets.push_back(rows);
  return family;
}

struct RemovedTransition {
  std::string src, event, dst;
  bool operator==(const RemovedTransition&) const = default;
};

/// What one pass changed: the lookalike-group sizes it saw, the
/// transitions it deleted, the states it unmarked.
struct SupIteration {
  std::vector<int> family_sizes;
  std::vector<RemovedTransition> removed;
  std::vector<std::string> unmarked;
  bool changed() const { return !removed.empty() || !unmarked.empty(); }
};

struct StepResult {
  Generator next;
  SupIteration record;
};

/// One pass of the supremal iteration: scan every lookalike group for the
/// two inconsistencies and repair them by surgery on the candidate.
///   - A group member whose plant state can take an event that would leave
///     the candidate's closure poisons that event for the whole group:
///     every member transition on it is deleted (restricted to the event
///     filter).
///   - A group member that is marked in the plant but not in the candidate
///     forces every marked member of the group to be unmarked.
/// Surgery acts on the refinement that pairs each candidate state with its
/// lookalike group, so it removes exactly the strings whose groups force
/// it: a candidate state shared by several observation classes never drags
/// a clean class down with a dirty one. States that were not split keep
/// their names; the result is trimmed. Without violations the candidate is
/// returned untouched.
inline StepResult suprelobs_step(const Generator& g, const Generator& ambient,
                                 const Generator& k,
                                 ConditionEvents filter = ConditionEvents::All) {
  StepResult res;
  res.next = k;
  if (k.empty() || g.empty() || ambient.empty()) return res;
  auto completion = complete_with_dump(k);
  const Generator& kt = completion.automaton;
  const int32_t dump = completion.dump;
  auto classes = detail::lookalike_classes(g, ambient, kt);
  const int ne = g.events->size();

  // Violations per distinct row set; groups sharing their rows share them.
  struct Violation {
    std::vector<int32_t> poisoned;
    bool marking = false;
  };
  std::map<std::vector<std::pair<int32_t, int32_t>>, int32_t> row_index;
  std::vector<Violation> violations;
  std::vector<int32_t> verdict(classes.members.size(), -1);  // group -> violation id
  bool any = false;
  for (size_t c = 0; c < classes.members.size(); ++c) {
    const auto& rows = classes.rows[c];
    if (rows.size() < 2) continue;
    auto [it, fresh] = row_index.try_emplace(rows, (int)violations.size());
    verdict[c] = it->second;
    if (!fresh) continue;
    res.record.family_sizes.push_back((int)rows.size());
    Violation v;
    for (int e = 0; e < ne; ++e) {
      if (filter == ConditionEvents::ControllableOnly && !g.events->controllable(e))
        continue;
      bool poisoned = false, cuttable = false;
      for (auto [q, y] : rows) {
        if (g.defined(q, e) && *kt.step(y, e) == dump) poisoned = true;
        if (y != dump && *kt.step(y, e) != dump) cuttable = true;
      }
      if (poisoned && cuttable) v.poisoned.push_back(e);
    }
    bool dirty = false, unmarkable = false;
    for (auto [q, y] : rows) {
      if (g.marked[q] && (y == dump || !kt.marked[y])) dirty = true;
      if (y != dump && kt.marked[y]) unmarkable = true;
    }
    v.marking = dirty && unmarkable;
    any = any || !v.poisoned.empty() || v.marking;
    violations.push_back(std::move(v));
  }
  if (!any) return res;

  // Refine the candidate so each state knows its lookalike group:
  // unobservable events advance the candidate alone, observable events
  // advance the group too.
  Generator refined;
  refined.events = k.events;
  std::map<std::pair<int32_t, int32_t>, int32_t> index;
  std::deque<int32_t> queue;
  auto intern = [&](int32_t y, int32_t c) {
    auto [it, fresh] = index.try_emplace({y, c}, refined.num_states());
    if (fresh) {
      refined.add_state(k.state_names[y], k.marked[y]);
      refined.provenance.push_back({y, c});
      queue.push_back(it->second);
    }
    return it->second;
  };
  refined.initial = intern(k.initial, classes.initial);
  while (!queue.empty()) {
    int32_t src = queue.front();
    queue.pop_front();
    auto [y, c] = std::pair(refined.provenance[src][0], refined.provenance[src][1]);
    for (const auto& t : k.out[y]) {
      int32_t cn = c;
      if (k.events->observable(t.event)) {
        cn = -1;
        for (auto [e, n] : classes.step[c])
          if (e == t.event) cn = n;
        if (cn < 0)
          throw DesError(ErrorKind::Internal, "lookalike groups lost a candidate event");
      }
      int32_t dst = intern(t.target, cn);
      refined.out[src].push_back({t.event, dst});
    }
  }
  detail::rename_after_first_operand(refined, k.state_names);

  std::set<std::pair<int32_t, int32_t>> cut;  // (refined state, event)
  std::set<int32_t> unmark;
  for (int32_t p = 0; p < refined.num_states(); ++p) {
    int32_t y = refined.provenance[p][0], c = refined.provenance[p][1];
    if (verdict[c] < 0) continue;
    const Violation& v = violations[verdict[c]];
    for (int32_t e : v.poisoned)
      if (k.defined(y, e)) cut.insert({p, e});
    if (v.marking && k.marked[y]) unmark.insert(p);
  }
  for (auto [p, e] : cut)
    res.record.removed.push_back({refined.state_names[p], g.events->name(e),
                                  refined.state_names[*refined.step(p, e)]});
  for (int32_t p : unmark) res.record.unmarked.push_back(refined.state_names[p]);
  if (!res.record.changed()) return res;

  for (auto [p, e] : cut) {
    auto& row = refined.out[p];
    row.erase(std::find_if(row.begin(), row.end(),
                           [e = e](const Generator::Transition& t) { return t.event == e; }));
  }
  for (int32_t p : unmark) refined.marked[p] = false;
  res.next = trim(refined);
  return res;
}

/// Result of the supremal iteration, with the per-pass trace (the final,
/// unchanged pass included) and the normalized candidate it started from.
struct SupRelObsResult {
  Generator result;
  Generator normalized;
  std::vector<SupIteration> iterations;
};

namespace detail {

inline void require_sandwich(const Generator& g, const Generator& ambient,
                             const Generator& k) {
  require_same_alphabet(g.events, ambient.events);
  require_same_alphabet(g.events, k.events);
  if (!within(language_relation(k, ambient).closed))
    throw DesError(ErrorKind::PreconditionViolated,
                   "candidate closure not inside the ambient language");
  if (!within(language_relation(ambient, g).closed))
    throw DesError(ErrorKind::PreconditionViolated,
                   "ambient language not inside the plant");
  if (!within(language_relation(k, g).marked))
    throw DesError(ErrorKind::PreconditionViolated,
                   "candidate marked language not inside the plant's");
}

}  // namespace detail

/// Largest sublanguage of the candidate that stays consistent under
/// partial observation relative to the ambient language (which is frozen
/// for the whole run). The candidate is first refined so that each state
/// determines its plant state and its uncertainty set; the iteration then
/// deletes and unmarks until a fixpoint.
inline SupRelObsResult suprelobs(const Generator& g, const Generator& ambient,
                                 const Generator& k,
                                 ConditionEvents filter = ConditionEvents::All) {
  if (!is_nonblocking(k))
    throw DesError(ErrorKind::Blocking, "candidate must be nonblocking");
  detail::require_sandwich(g, ambient, k);
  SupRelObsResult res;
  if (k.empty()) {
    res.result = Generator::make_empty(k.events);
    res.normalized = res.result;
    return res;
  }
  res.normalized = normalize_assumption2(normalize_assumption1(k, g));
  Generator cur = res.normalized;
  // Runaway guard only; the iteration shrinks the candidate's language
  // every pass and converges long before this in practice.
  const int cap = g.num_states() + cur.num_states() + cur.num_transitions() + 64;
  for (int pass = 0; ; ++pass) {
    if (pass > cap)
      throw DesError(ErrorKind::Internal, "supremal iteration failed to converge");
    auto step = suprelobs_step(g, ambient, cur, filter);
    res.iterations.push_back(step.record);
    if (!step.record.changed()) break;
    cur = std::move(step.next);
    if (cur.empty()) break;
  }
  res.result = cur;
  return res;
}

/// Outcome of the definitional check: which condition broke, the two
/// lookalike strings, and (for the transition condition) the event.
struct RelObsReport {
  bool holds = true;
  int condition = 0;  // 1: continuation consistency, 2: marking consistency
  std::vector<int32_t> witness_s, witness_s_prime;
  int32_t event = -1;
};

/// Decide relative observability of k within the ambient language by
/// exhaustive search over lookalike string pairs, tracked as pairs of
/// (plant, completed ambient, completed candidate) triples.
inline RelObsReport check_relative_observability(const Generator& g,
                                                 const Generator& ambient,
                                                 const Generator& k) {
  if (!is_nonblocking(k))
    throw DesError(ErrorKind::Blocking, "candidate must be nonblocking");
  detail::require_sandwich(g, ambient, k);
  RelObsReport rep;
  if (g.empty() || k.empty()) return rep;

  auto [ct, dump_c] = complete_with_dump(ambient);
  auto [kt, dump_k] = complete_with_dump(k);

  std::vector<std::tuple<int32_t, int32_t, int32_t>> triples;
  std::map<std::tuple<int32_t, int32_t, int32_t>, int32_t> triple_index;
  std::deque<int32_t> work;
  auto intern_triple = [&](int32_t q, int32_t c, int32_t y) {
    auto [it, fresh] = triple_index.try_emplace({q, c, y}, (int)triples.size());
    if (fresh) {
      triples.push_back({q, c, y});
      work.push_back(it->second);
    }
    return it->second;
  };
  int32_t x0 = intern_triple(g.initial, ct.initial, kt.initial);
  const int ne = g.events->size();
  std::vector<std::vector<std::pair<int32_t, int32_t>>> step(1);
  while (!work.empty()) {
    int32_t cur = work.front();
    work.pop_front();
    auto [q, c, y] = triples[cur];
    if ((int)step.size() <= cur) step.resize(cur + 1);
    for (int e = 0; e < ne; ++e) {
      auto qn = g.step(q, e);
      if (!qn) continue;
      step[cur].push_back({e, intern_triple(*qn, *ct.step(c, e), *kt.step(y, e))});
    }
  }
  step.resize(triples.size());

  // Breadth-first search over ordered lookalike pairs. Edge kinds: left
  // side moves on an unobservable event, right side does, or both move on
  // an observable one.
  enum Side : int8_t { Left, Right, Joint };
  std::map<std::pair<int32_t, int32_t>, int32_t> pair_index;
  std::vector<std::pair<int32_t, int32_t>> pairs;
  std::vector<std::tuple<int32_t, Side, int32_t>> parent;  // (pair, side, event)
  std::deque<int32_t> queue;
  auto intern_pair = [&](int32_t l, int32_t r, int32_t par, Side side, int32_t e) {
    auto [it, fresh] = pair_index.try_emplace({l, r}, (int)pairs.size());
    if (fresh) {
      pairs.push_back({l, r});
      parent.push_back({par, side, e});
      queue.push_back(it->second);
    }
  };
  intern_pair(x0, x0, -1, Joint, -1);

  auto violation_at = [&](int32_t l, int32_t r) -> std::optional<std::pair<int, int32_t>> {
    auto [ql, cl, yl] = triples[l];
    auto [qr, cr, yr] = triples[r];
    (void)ql;
    (void)cl;
    if (cr == dump_c) return std::nullopt;  // right string outside the ambient
    for (int e = 0; e < ne; ++e) {
      if (*kt.step(yl, e) == dump_k) continue;       // left continuation not in closure
      if (!g.defined(qr, e)) continue;               // right continuation not in plant
      if (*kt.step(yr, e) == dump_k) return std::pair(1, (int32_t)e);
    }
    if (kt.marked[yl] && g.marked[qr] && !kt.marked[yr]) return std::pair(2, (int32_t)-1);
    return std::nullopt;
  };

  while (!queue.empty()) {
    int32_t cur = queue.front();
    queue.pop_front();
    auto [l, r] = pairs[cur];
    if (auto v = violation_at(l, r)) {
      rep.holds = false;
      rep.condition = v->first;
      rep.event = v->second;
      for (int i = cur; std::get<0>(parent[i]) >= 0; i = std::get<0>(parent[i])) {
        auto [p, side, e] = parent[i];
        if (side != Right) rep.witness_s.push_back(e);
        if (side != Left) rep.witness_s_prime.push_back(e);
      }
      std::reverse(rep.witness_s.begin(), rep.witness_s.end());
      std::reverse(rep.witness_s_prime.begin(), rep.witness_s_prime.end());
      return rep;
    }
    for (auto [e, ln] : step[l])
      if (!g.events->observable(e)) intern_pair(ln, r, cur, Left, e);
    for (auto [e, rn] : step[r])
      if (!g.events->observable(e)) intern_pair(l, rn, cur, Right, e);
    for (auto [e, ln] : step[l]) {
      if (!g.events->observable(e)) continue;
      for (auto [e2, rn] : step[r])
        if (e2 == e) intern_pair(ln, rn, cur, Joint, e);
    }
  }
  return rep;
}

/// Plain observability: the ambient language is the candidate's own
/// closure.
inline RelObsReport check_observability(const Generator& g, const Generator& k) {
  return check_relative_observability(g, k, k);
}

}  // namespace des
