#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <des/des.hpp>

namespace des::test {

using Word = std::vector<int32_t>;
using Lang = std::set<Word>;

// Exhaustive view of a small acyclic plant: every string of L(G) gets a
// bit position, sublanguages become uint64_t masks, and the definitional
// checks become loops over set bits. This is the independent yardstick
// the library algorithms are measured against.
struct Universe {
  std::vector<Word> strings;
  std::map<Word, int> index;
  std::vector<uint64_t> prefix_mask;      // prefixes of i, i included
  std::vector<std::array<int, 8>> child;  // one-event extension, -1 outside L(G)
  std::vector<int> parent;                // -1 for the empty string
  std::vector<int> last_event;
  std::vector<int> proj_class;
  std::vector<uint64_t> class_mask;       // lookalikes per projected string
  std::vector<int> uncontrollable;
  uint64_t marked = 0;                    // Lm(G)
  uint64_t all = 0;                       // L(G)
  int num_events = 0;
};

namespace detail {
inline bool enumerate_words(const Generator& g, int32_t q, Word& cur, Lang& closed,
                            Lang& marked) {
  if (cur.size() > 64 || closed.size() > 64) return false;
  closed.insert(cur);
  if (g.marked[q]) marked.insert(cur);
  for (const auto& tr : g.out[q]) {
    cur.push_back(tr.event);
    bool ok = enumerate_words(g, tr.target, cur, closed, marked);
    cur.pop_back();
    if (!ok) return false;
  }
  return true;
}
}  // namespace detail

/// False when L(G) does not fit in 64 strings; the caller resamples.
inline bool build_universe(const Generator& g, Universe& u) {
  u = Universe{};
  u.num_events = static_cast<int>(g.events->size());
  if (u.num_events > 8) return false;
  Lang closed, marked;
  if (!g.empty()) {
    Word cur;
    if (!detail::enumerate_words(g, g.initial, cur, closed, marked)) return false;
  }
  if (closed.size() > 64) return false;
  u.strings.assign(closed.begin(), closed.end());
  const int n = static_cast<int>(u.strings.size());
  for (int i = 0; i < n; ++i) u.index[u.strings[i]] = i;
  u.all = n == 64 ? ~0ull : (1ull << n) - 1;
  u.prefix_mask.resize(n);
  u.child.resize(n);
  u.parent.resize(n);
  u.last_event.resize(n);
  std::map<Word, int> classes;
  for (int i = 0; i < n; ++i) {
    const Word& w = u.strings[i];
    uint64_t pm = 0;
    for (size_t l = 0; l <= w.size(); ++l)
      pm |= 1ull << u.index.at(Word(w.begin(), w.begin() + l));
    u.prefix_mask[i] = pm;
    if (w.empty()) {
      u.parent[i] = -1;
      u.last_event[i] = -1;
    } else {
      u.parent[i] = u.index.at(Word(w.begin(), w.end() - 1));
      u.last_event[i] = w.back();
    }
    u.child[i].fill(-1);
    for (int e = 0; e < u.num_events; ++e) {
      Word we = w;
      we.push_back(e);
      if (auto it = u.index.find(we); it != u.index.end()) u.child[i][e] = it->second;
    }
    auto [it, fresh] = classes.emplace(project_string(*g.events, w),
                                       static_cast<int>(classes.size()));
    (void)fresh;
    u.proj_class.push_back(it->second);
  }
  u.class_mask.assign(classes.size(), 0);
  for (int i = 0; i < n; ++i) u.class_mask[u.proj_class[i]] |= 1ull << i;
  for (const auto& w : marked) u.marked |= 1ull << u.index.at(w);
  u.uncontrollable = g.events->uncontrollable_events();
  return true;
}

/// Marked strings of k as universe bits; k must live inside the plant.
inline uint64_t marked_mask_of(const Universe& u, const Generator& k) {
  if (k.empty()) return 0;
  Lang closed, marked;
  Word cur;
  if (!detail::enumerate_words(k, k.initial, cur, closed, marked))
    throw DesError(ErrorKind::Internal, "oracle: candidate language too large");
  uint64_t m = 0;
  for (const auto& w : marked) {
    auto it = u.index.find(w);
    if (it == u.index.end())
      throw DesError(ErrorKind::Internal, "oracle: string outside the plant");
    m |= 1ull << it->second;
  }
  return m;
}

inline uint64_t closure_of(const Universe& u, uint64_t marked_bits) {
  uint64_t c = 0;
  for (uint64_t rest = marked_bits; rest; rest &= rest - 1)
    c |= u.prefix_mask[std::countr_zero(rest)];
  return c;
}

/// Definition-level relative observability of the sublanguage marked_bits
/// against an ambient closed language.
inline bool relobs_mask(const Universe& u, uint64_t marked_bits, uint64_t ambient_closed) {
  const uint64_t kc = closure_of(u, marked_bits);
  for (uint64_t rest = kc; rest; rest &= rest - 1) {
    int t = std::countr_zero(rest);
    if (u.parent[t] < 0) continue;
    int s = u.parent[t];
    int e = u.last_event[t];
    // every lookalike of s inside the ambient must follow along with e
    for (uint64_t look = u.class_mask[u.proj_class[s]] & ambient_closed; look;
         look &= look - 1) {
      int spe = u.child[std::countr_zero(look)][e];
      if (spe >= 0 && !(kc >> spe & 1)) return false;
    }
  }
  for (uint64_t rest = marked_bits; rest; rest &= rest - 1) {
    int s = std::countr_zero(rest);
    if (u.class_mask[u.proj_class[s]] & ambient_closed & u.marked & ~marked_bits)
      return false;
  }
  return true;
}

inline bool controllable_mask(const Universe& u, uint64_t marked_bits) {
  const uint64_t kc = closure_of(u, marked_bits);
  for (uint64_t rest = kc; rest; rest &= rest - 1) {
    int s = std::countr_zero(rest);
    for (int e : u.uncontrollable) {
      int se = u.child[s][e];
      if (se >= 0 && !(kc >> se & 1)) return false;
    }
  }
  return true;
}

inline bool normal_marked_mask(const Universe& u, uint64_t marked_bits) {
  for (uint64_t rest = marked_bits; rest; rest &= rest - 1) {
    int s = std::countr_zero(rest);
    if (u.class_mask[u.proj_class[s]] & u.marked & ~marked_bits) return false;
  }
  return true;
}

inline bool normal_closed_mask(const Universe& u, uint64_t marked_bits) {
  const uint64_t kc = closure_of(u, marked_bits);
  for (uint64_t rest = kc; rest; rest &= rest - 1) {
    int s = std::countr_zero(rest);
    if (u.class_mask[u.proj_class[s]] & ~kc) return false;
  }
  return true;
}

inline bool normal_mask(const Universe& u, uint64_t marked_bits) {
  return normal_marked_mask(u, marked_bits) && normal_closed_mask(u, marked_bits);
}

/// Union of every sublanguage satisfying the predicate. For properties
/// closed under union this is the supremal element of the family.
template <class Pred>
inline uint64_t supremal_mask(uint64_t marked_bits, Pred&& passes,
                              std::vector<uint64_t>* passing = nullptr) {
  uint64_t best = 0;
  uint64_t s = marked_bits;
  for (;;) {
    if (s && passes(s)) {
      best |= s;
      if (passing) passing->push_back(s);
    }
    if (!s) break;
    s = (s - 1) & marked_bits;
  }
  return best;
}

}  // namespace des::test
