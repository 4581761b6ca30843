#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <des/des.hpp>

namespace des::test {

/// "a.b.c" -> event ids against g's table; "" is the empty string.
inline std::vector<int32_t> word(const Generator& g, const std::string& dotted) {
  std::vector<int32_t> w;
  std::istringstream in(dotted);
  std::string tok;
  while (std::getline(in, tok, '.'))
    if (!tok.empty()) w.push_back(g.events->require(tok));
  return w;
}

inline bool in_closed(const Generator& g, const std::string& s) {
  return g.run(word(g, s)).has_value();
}

inline bool in_marked(const Generator& g, const std::string& s) {
  return g.accepts(word(g, s));
}

inline std::set<std::string> state_name_set(const Generator& g) {
  return std::set<std::string>(g.state_names.begin(), g.state_names.end());
}

inline std::string dotted(const Generator& g, const std::vector<int32_t>& w) {
  return format_word(*g.events, w);
}

}  // namespace des::test
