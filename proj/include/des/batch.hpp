#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "des/control.hpp"
#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/format.hpp"
#include "des/generator.hpp"
#include "des/language.hpp"
#include "des/pipeline.hpp"

namespace des {

/// Rebuild g over `table`, which must contain every event of g's own
/// table with the same names (ids may differ). Attributes come from
/// `table`.
inline Generator remap_events(const Generator& g, EventTablePtr table) {
  std::vector<int32_t> remap(g.events->size());
  for (int e = 0; e < g.events->size(); ++e) {
    int32_t to = table->find(g.events->name(e));
    if (to < 0)
      throw DesError(ErrorKind::UnknownEvent,
                     "event '" + g.events->name(e) + "' missing from the target alphabet");
    remap[e] = to;
  }
  Generator r = g;
  r.events = std::move(table);
  for (auto& row : r.out) {
    for (auto& t : row) t.event = remap[t.event];
    std::sort(row.begin(), row.end(),
              [](const Generator::Transition& a, const Generator::Transition& b) {
                return a.event < b.event;
              });
  }
  return r;
}

/// Union alphabet of all operands, name-sorted. Attribute conflicts
/// (an event controllable here, uncontrollable there) are errors.
inline EventTablePtr union_alphabet(const std::vector<Generator>& parts) {
  std::map<std::string, EventTable::Event> merged;
  for (const auto& part : parts)
    for (const auto& ev : part.events->events()) {
      auto [it, fresh] = merged.try_emplace(ev.name, ev);
      if (!fresh && (it->second.controllable != ev.controllable ||
                     it->second.observable != ev.observable))
        throw DesError(ErrorKind::SyntaxError,
                       "event '" + ev.name + "' declared with conflicting attributes");
    }
  std::vector<EventTable::Event> events;
  for (auto& [name, ev] : merged) events.push_back(ev);
  return EventTable::make(std::move(events));
}

/// General synchronous composition: events shared by both operands must be
/// taken jointly, private events interleave. Realized on the union
/// alphabet by self-looping each operand on the other's private events.
inline Generator compose(const Generator& a, const Generator& b) {
  auto table = union_alphabet({a, b});
  auto foreign = [&](const Generator& g) {
    std::vector<int32_t> fs;
    for (int e = 0; e < table->size(); ++e)
      if (g.events->find(table->name(e)) < 0) fs.push_back(e);
    return fs;
  };
  Generator la = add_self_loops(remap_events(a, table), foreign(a));
  Generator lb = add_self_loops(remap_events(b, table), foreign(b));
  return sync_product(la, lb);
}

inline Generator compose_all(const std::vector<Generator>& parts) {
  if (parts.empty()) throw DesError(ErrorKind::PreconditionViolated, "nothing to compose");
  Generator acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) acc = compose(acc, parts[i]);
  return acc;
}

/// One experiment in a batch file: an observability (and optionally
/// controllability) configuration plus expected minimized supervisor
/// sizes.
struct BatchCase {
  std::string name;
  std::vector<std::string> unobservable;
  std::optional<std::vector<std::string>> uncontrollable;
  std::optional<int> expect_relobs, expect_normal, expect_rounds;
};

struct BatchPlan {
  std::vector<std::string> plant_files, spec_files;
  std::vector<BatchCase> cases;
};

/// Batch file:
///   desbatch 1
///   plant <path>        (repeatable; composed)
///   spec <path>         (repeatable; composed, then met with the plant)
///   case name=<label> uo=<e,e,...> [uc=<e,...>] [relobs=<n>] [normal=<n>] [rounds=<n>]
/// The bare token `expect` may precede the expectation keys for
/// readability. Paths are resolved against the batch file's directory.
inline BatchPlan parse_batch(std::istream& in, const std::string& base_dir) {
  BatchPlan plan;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  auto fail = [&](const std::string& what) -> DesError {
    return DesError(ErrorKind::SyntaxError, "line " + std::to_string(lineno) + ": " + what);
  };
  auto resolve = [&](const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
  };
  auto split_list = [](const std::string& csv) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ','))
      if (!item.empty()) items.push_back(item);
    return items;
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (!saw_header) {
      if (tokens.size() != 2 || tokens[0] != "desbatch" || tokens[1] != "1")
        throw fail("expected header 'desbatch 1'");
      saw_header = true;
      continue;
    }
    if (tokens[0] == "plant" && tokens.size() == 2) {
      plan.plant_files.push_back(resolve(tokens[1]));
    } else if (tokens[0] == "spec" && tokens.size() == 2) {
      plan.spec_files.push_back(resolve(tokens[1]));
    } else if (tokens[0] == "case") {
      BatchCase c;
      bool saw_uo = false;
      for (size_t i = 1; i < tokens.size(); ++i) {
        if (tokens[i] == "expect") continue;
        auto eq = tokens[i].find('=');
        if (eq == std::string::npos) throw fail("expected key=value, got '" + tokens[i] + "'");
        std::string key = tokens[i].substr(0, eq), value = tokens[i].substr(eq + 1);
        if (key == "name") {
          c.name = value;
        } else if (key == "uo") {
          c.unobservable = split_list(value);
          saw_uo = true;
        } else if (key == "uc") {
          c.uncontrollable = split_list(value);
        } else if (key == "relobs" || key == "normal" || key == "rounds") {
          int n;
          try {
            n = std::stoi(value);
          } catch (...) {
            throw fail("'" + key + "' expects an integer");
          }
          (key == "relobs" ? c.expect_relobs
                           : key == "normal" ? c.expect_normal : c.expect_rounds) = n;
        } else {
          throw fail("unknown case key '" + key + "'");
        }
      }
      if (!saw_uo) throw fail("case needs uo=<events> (use uo= for none)");
      if (c.name.empty()) c.name = "case" + std::to_string(plan.cases.size() + 1);
      plan.cases.push_back(std::move(c));
    } else {
      throw fail("unknown directive '" + tokens[0] + "'");
    }
  }
  if (!saw_header) throw DesError(ErrorKind::SyntaxError, "empty batch file");
  if (plan.plant_files.empty()) throw DesError(ErrorKind::SyntaxError, "no plant files");
  return plan;
}

inline BatchPlan load_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DesError(ErrorKind::UnknownReference, "cannot open '" + path + "'");
  return parse_batch(in, std::filesystem::path(path).parent_path().string());
}

struct BatchOutcome {
  std::string name;
  int relobs_states = 0, normal_states = 0, rounds = 0;
  double seconds = 0.0;
  bool ok = true;        // all stated expectations met
  std::string mismatch;  // human-readable discrepancies
};

/// Run every case: per case, override the event attributes, compute the
/// two supervisors, minimize, compare against expectations. Cases are
/// independent and can run on `jobs` threads; the result order follows
/// the file.
inline std::vector<BatchOutcome> run_batch(const BatchPlan& plan, int jobs = 1) {
  std::vector<Generator> plants, specs;
  for (const auto& f : plan.plant_files) plants.push_back(load_generator(f));
  Generator plant = compose_all(plants);
  Generator candidate;
  if (plan.spec_files.empty()) {
    candidate = plant;
  } else {
    for (const auto& f : plan.spec_files) specs.push_back(load_generator(f));
    candidate = compose(compose_all(specs), plant);
  }
  // Put both on one full alphabet so per-case attribute overrides apply
  // uniformly.
  auto table = union_alphabet({plant, candidate});
  plant = remap_events(plant, table);
  candidate = remap_events(candidate, table);

  std::vector<BatchOutcome> outcomes(plan.cases.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= plan.cases.size()) return;
      const BatchCase& c = plan.cases[i];
      BatchOutcome& out = outcomes[i];
      out.name = c.name;
      auto t0 = std::chrono::steady_clock::now();
      try {
        auto case_table = table->with_attributes(
            &c.unobservable, c.uncontrollable ? &*c.uncontrollable : nullptr);
        Generator case_plant = plant, case_k = candidate;
        case_plant.events = case_table;
        case_k.events = case_table;

        auto pipeline = suprelobs_con(case_plant, case_k);
        out.relobs_states = minimize(pipeline.result).num_states();
        out.rounds = pipeline.rounds;
        Generator normal = supnorm_con(case_plant, case_k);
        out.normal_states = minimize(normal).num_states();
      } catch (const std::exception& e) {
        out.ok = false;
        out.mismatch = e.what();
        out.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        continue;
      }
      out.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      std::ostringstream bad;
      auto expect = [&](const char* what, std::optional<int> want, int got) {
        if (want && *want != got) {
          out.ok = false;
          bad << (bad.str().empty() ? "" : "; ") << what << " expected " << *want
              << ", got " << got;
        }
      };
      expect("relobs", c.expect_relobs, out.relobs_states);
      expect("normal", c.expect_normal, out.normal_states);
      expect("rounds", c.expect_rounds, out.rounds);
      out.mismatch = bad.str();
    }
  };
  int n = std::max(1, std::min<int>(jobs, (int)plan.cases.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return outcomes;
}

}  // namespace des
