#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace des {

enum class ErrorKind {
  AlphabetMismatch,
  PreconditionViolated,
  UnknownEvent,
  Blocking,
  SyntaxError,
  DuplicateTransition,
  UnknownReference,
  NoInitialState,
  Internal,
};

class DesError : public std::runtime_error {
public:
  DesError(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::UnknownEvent: return "UnknownEvent";
    case ErrorKind::Blocking: return "Blocking";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateTransition: return "DuplicateTransition";
    case ErrorKind::UnknownReference: return "UnknownReference";
    case ErrorKind::NoInitialState: return "NoInitialState";
    case ErrorKind::Internal: return "Internal";
  }
  return "?";
}

/// The alphabet: an ordered set of named events, each either controllable or
/// not and either observable or not. Shared immutably between generators.
class EventTable {
public:
  struct Event {
    std::string name;
    bool controllable = false;
    bool observable = true;
  };

  static std::shared_ptr<const EventTable> make(std::vector<Event> events) {
    auto t = std::shared_ptr<EventTable>(new EventTable());
    t->events_ = std::move(events);
    for (int i = 0; i < (int)t->events_.size(); ++i) {
      const auto& e = t->events_[i];
      if (e.name.empty())
        throw DesError(ErrorKind::SyntaxError, "empty event name");
      if (!t->index_.emplace(e.name, i).second)
        throw DesError(ErrorKind::SyntaxError, "duplicate event: " + e.name);
    }
    return t;
  }

  int size() const { return (int)events_.size(); }
  const std::string& name(int e) const { return events_[e].name; }
  bool controllable(int e) const { return events_[e].controllable; }
  bool observable(int e) const { return events_[e].observable; }

  int find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }
  int require(const std::string& name) const {
    int e = find(name);
    if (e < 0) throw DesError(ErrorKind::UnknownEvent, "unknown event: " + name);
    return e;
  }

  std::vector<int> observable_events() const {
    std::vector<int> v;
    for (int e = 0; e < size(); ++e)
      if (observable(e)) v.push_back(e);
    return v;
  }
  std::vector<int> controllable_events() const {
    std::vector<int> v;
    for (int e = 0; e < size(); ++e)
      if (controllable(e)) v.push_back(e);
    return v;
  }
  std::vector<int> uncontrollable_events() const {
    std::vector<int> v;
    for (int e = 0; e < size(); ++e)
      if (!controllable(e)) v.push_back(e);
    return v;
  }
  std::vector<int> unobservable_events() const {
    std::vector<int> v;
    for (int e = 0; e < size(); ++e)
      if (!observable(e)) v.push_back(e);
    return v;
  }

  bool same_as(const EventTable& o) const {
    if (events_.size() != o.events_.size()) return false;
    for (size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].name != o.events_[i].name ||
          events_[i].controllable != o.events_[i].controllable ||
          events_[i].observable != o.events_[i].observable)
        return false;
    }
    return true;
  }

  /// Copy with the observable (and optionally controllable) sets replaced.
  std::shared_ptr<const EventTable> with_attributes(
      const std::vector<std::string>* unobservable,
      const std::vector<std::string>* uncontrollable) const {
    std::vector<Event> ev = events_;
    if (unobservable) {
      for (auto& e : ev) e.observable = true;
      for (const auto& n : *unobservable) {
        int i = require(n);
        ev[i].observable = false;
      }
    }
    if (uncontrollable) {
      for (auto& e : ev) e.controllable = true;
      for (const auto& n : *uncontrollable) {
        int i = require(n);
        ev[i].controllable = false;
      }
    }
    return make(std::move(ev));
  }

  const std::vector<Event>& events() const { return events_; }

private:
  EventTable() = default;
  std::vector<Event> events_;
  std::unordered_map<std::string, int> index_;
};

using EventTablePtr = std::shared_ptr<const EventTable>;

inline void require_same_alphabet(const EventTablePtr& a, const EventTablePtr& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || !a->same_as(*b))
    throw DesError(ErrorKind::AlphabetMismatch,
                   "operands use different event tables");
}

}  // namespace des
