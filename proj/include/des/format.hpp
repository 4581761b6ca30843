#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "des/events.hpp"
#include "des/generator.hpp"

namespace des {

/// Text form of a generator:
///   desgen 1
///   event <name> <c|u> <o|x>
///   state <name> [initial] [marked]
///   trans <src> <event> <dst>
/// '#' starts a comment (rest of line); blank lines are ignored. Exactly
/// one state carries `initial`. A language-less generator is written as
/// the single directive `empty` after its event block.

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

}  // namespace detail

inline Generator parse_generator(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto fail = [&](ErrorKind kind, const std::string& what) -> DesError {
    return DesError(kind, "line " + std::to_string(lineno) + ": " + what);
  };

  std::vector<EventTable::Event> events;
  std::map<std::string, int32_t> event_ids;
  std::vector<std::string> state_names;
  std::vector<bool> state_marked;
  std::map<std::string, int32_t> state_ids;
  int32_t initial = -1;
  struct RawTransition {
    int32_t src, event, dst;
    int lineno;
  };
  std::vector<RawTransition> transitions;
  bool saw_header = false, saw_empty = false, saw_content = false;

  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (!saw_header) {
      if (tokens.size() != 2 || tokens[0] != "desgen" || tokens[1] != "1")
        throw fail(ErrorKind::SyntaxError, "expected header 'desgen 1'");
      saw_header = true;
      continue;
    }
    saw_content = true;
    const std::string& directive = tokens[0];
    if (directive == "event") {
      if (tokens.size() != 4)
        throw fail(ErrorKind::SyntaxError, "event takes <name> <c|u> <o|x>");
      if (event_ids.count(tokens[1]))
        throw fail(ErrorKind::SyntaxError, "event '" + tokens[1] + "' declared twice");
      if (tokens[2] != "c" && tokens[2] != "u")
        throw fail(ErrorKind::SyntaxError, "control flag must be 'c' or 'u'");
      if (tokens[3] != "o" && tokens[3] != "x")
        throw fail(ErrorKind::SyntaxError, "observation flag must be 'o' or 'x'");
      event_ids.emplace(tokens[1], (int32_t)events.size());
      events.push_back({tokens[1], tokens[2] == "c", tokens[3] == "o"});
    } else if (directive == "empty") {
      if (tokens.size() != 1) throw fail(ErrorKind::SyntaxError, "empty takes no arguments");
      if (!state_names.empty() || !transitions.empty())
        throw fail(ErrorKind::SyntaxError, "empty cannot follow states or transitions");
      saw_empty = true;
    } else if (directive == "state") {
      if (saw_empty) throw fail(ErrorKind::SyntaxError, "states not allowed after 'empty'");
      if (tokens.size() < 2 || tokens.size() > 4)
        throw fail(ErrorKind::SyntaxError, "state takes <name> [initial] [marked]");
      if (state_ids.count(tokens[1]))
        throw fail(ErrorKind::SyntaxError, "state '" + tokens[1] + "' declared twice");
      bool is_initial = false, is_marked = false;
      for (size_t i = 2; i < tokens.size(); ++i) {
        if (tokens[i] == "initial" && !is_initial)
          is_initial = true;
        else if (tokens[i] == "marked" && !is_marked)
          is_marked = true;
        else
          throw fail(ErrorKind::SyntaxError, "unexpected state attribute '" + tokens[i] + "'");
      }
      if (is_initial) {
        if (initial >= 0)
          throw fail(ErrorKind::SyntaxError, "second initial state '" + tokens[1] + "'");
        initial = (int32_t)state_names.size();
      }
      state_ids.emplace(tokens[1], (int32_t)state_names.size());
      state_names.push_back(tokens[1]);
      state_marked.push_back(is_marked);
    } else if (directive == "trans") {
      if (saw_empty)
        throw fail(ErrorKind::SyntaxError, "transitions not allowed after 'empty'");
      if (tokens.size() != 4)
        throw fail(ErrorKind::SyntaxError, "trans takes <src> <event> <dst>");
      auto src = state_ids.find(tokens[1]);
      if (src == state_ids.end())
        throw fail(ErrorKind::UnknownReference, "unknown state '" + tokens[1] + "'");
      auto ev = event_ids.find(tokens[2]);
      if (ev == event_ids.end())
        throw fail(ErrorKind::UnknownReference, "unknown event '" + tokens[2] + "'");
      auto dst = state_ids.find(tokens[3]);
      if (dst == state_ids.end())
        throw fail(ErrorKind::UnknownReference, "unknown state '" + tokens[3] + "'");
      transitions.push_back({src->second, ev->second, dst->second, lineno});
    } else {
      throw fail(ErrorKind::SyntaxError, "unknown directive '" + directive + "'");
    }
  }

  if (!saw_content) {
    lineno = lineno ? lineno : 1;
    throw fail(ErrorKind::NoInitialState, "no initial state declared");
  }
  if (events.empty()) {
    throw fail(ErrorKind::SyntaxError, "no events declared");
  }
  Generator g;
  g.events = EventTable::make(std::move(events));
  if (saw_empty) return g;
  if (initial < 0) throw fail(ErrorKind::NoInitialState, "no initial state declared");
  g.initial = initial;
  g.state_names = std::move(state_names);
  for (bool m : state_marked) g.marked.push_back(m);
  g.out.resize(g.state_names.size());
  for (const auto& t : transitions) {
    lineno = t.lineno;
    if (g.defined(t.src, t.event))
      throw fail(ErrorKind::DuplicateTransition,
                 "state '" + g.state_names[t.src] + "' already has event '" +
                     g.events->name(t.event) + "'");
    g.add_transition(t.src, t.event, t.dst);
  }
  return g;
}

inline Generator parse_generator_text(const std::string& text) {
  std::istringstream in(text);
  return parse_generator(in);
}

inline Generator load_generator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DesError(ErrorKind::UnknownReference, "cannot open '" + path + "'");
  try {
    return parse_generator(in);
  } catch (const DesError& e) {
    throw DesError(e.kind(), path + ": " + e.what());
  }
}

/// Rebuild with events renumbered into lexicographic name order (rows
/// re-sorted accordingly). Part of the canonical written form.
inline Generator with_sorted_events(const Generator& g) {
  std::vector<EventTable::Event> sorted = g.events->events();
  std::sort(sorted.begin(), sorted.end(),
            [](const EventTable::Event& a, const EventTable::Event& b) {
              return a.name < b.name;
            });
  std::vector<int32_t> remap(sorted.size());
  for (int e = 0; e < (int)sorted.size(); ++e) remap[g.events->find(sorted[e].name)] = e;
  Generator r = g;
  r.events = EventTable::make(std::move(sorted));
  for (auto& row : r.out) {
    for (auto& t : row) t.event = remap[t.event];
    std::sort(row.begin(), row.end(),
              [](const Generator::Transition& a, const Generator::Transition& b) {
                return a.event < b.event;
              });
  }
  return r;
}

/// Canonical text: events in name order, states in breadth-first order
/// from the initial state (unreachable states are not written),
/// transitions grouped by source.
inline void write_generator(std::ostream& out, const Generator& g) {
  Generator c = canonicalize(with_sorted_events(g));
  out << "desgen 1\n";
  for (int e = 0; e < c.events->size(); ++e)
    out << "event " << c.events->name(e) << ' ' << (c.events->controllable(e) ? 'c' : 'u')
        << ' ' << (c.events->observable(e) ? 'o' : 'x') << '\n';
  if (c.empty()) {
    out << "empty\n";
    return;
  }
  for (int q = 0; q < c.num_states(); ++q) {
    out << "state " << c.state_names[q];
    if (q == c.initial) out << " initial";
    if (c.marked[q]) out << " marked";
    out << '\n';
  }
  for (int q = 0; q < c.num_states(); ++q)
    for (const auto& t : c.out[q])
      out << "trans " << c.state_names[q] << ' ' << c.events->name(t.event) << ' '
          << c.state_names[t.target] << '\n';
}

inline std::string serialize_generator(const Generator& g) {
  std::ostringstream out;
  write_generator(out, g);
  return out.str();
}

inline void save_generator(const std::string& path, const Generator& g) {
  std::ofstream out(path);
  if (!out) throw DesError(ErrorKind::UnknownReference, "cannot write '" + path + "'");
  write_generator(out, g);
}

/// Graphviz rendering, for inspection.
inline void write_dot(std::ostream& out, const Generator& g, const std::string& title = "G") {
  out << "digraph \"" << title << "\" {\n  rankdir=LR;\n";
  if (g.empty()) {
    out << "  empty [shape=plaintext,label=\"(empty)\"];\n}\n";
    return;
  }
  out << "  init [shape=point];\n";
  for (int q = 0; q < g.num_states(); ++q)
    out << "  q" << q << " [label=\"" << g.state_names[q] << "\",shape="
        << (g.marked[q] ? "doublecircle" : "circle") << "];\n";
  out << "  init -> q" << g.initial << ";\n";
  for (int q = 0; q < g.num_states(); ++q)
    for (const auto& t : g.out[q]) {
      out << "  q" << q << " -> q" << t.target << " [label=\"" << g.events->name(t.event);
      if (!g.events->observable(t.event)) out << " (uo)";
      out << "\"];\n";
    }
  out << "}\n";
}

}  // namespace des
