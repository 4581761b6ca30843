#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "des/control.hpp"
#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/generator.hpp"
#include "des/language.hpp"
#include "des/relobs.hpp"

namespace des {

struct PipelineRound {
  int states_after_control_pass = 0;
  int states_after_observation_pass = 0;
  int observation_iterations = 0;
};

/// Trace of the alternation. Each round first takes the supremal
/// controllable sublanguage, then repeatedly sweeps out observational
/// inconsistencies, with each sweep measured against the current
/// candidate's own closure: the ambient follows the shrinking supervisor,
/// so a string disabled by an earlier sweep no longer constrains later
/// ones. (This is deliberately weaker than suprelobs, whose frozen
/// ambient would also discharge marked strings whose lookalikes the
/// iteration itself removed — under control, those lookalikes are simply
/// disabled.) The fixpoint is controllable, and consistent relative to
/// its own closure, hence observable. `rounds` counts the rounds that
/// changed the language — at least 1; the final confirming round is
/// executed but not counted.
struct PipelineResult {
  Generator result;
  int rounds = 0;
  std::vector<PipelineRound> trace;
};

inline PipelineResult suprelobs_con(const Generator& g, const Generator& k) {
  PipelineResult res;
  Generator cur = k;
  const int round_cap = g.num_states() + k.num_states() + 2;
  int executed = 0;
  for (;;) {
    if (++executed > round_cap)
      throw DesError(ErrorKind::Internal, "alternation failed to converge");
    Generator observed = supcon(g, cur);
    PipelineRound round;
    round.states_after_control_pass = observed.num_states();
    const int sweep_cap =
        g.num_states() + observed.num_states() + observed.num_transitions() + 64;
    for (;;) {
      if (++round.observation_iterations > sweep_cap)
        throw DesError(ErrorKind::Internal, "consistency sweeps failed to converge");
      auto step = suprelobs_step(g, observed, observed, ConditionEvents::ControllableOnly);
      if (!step.record.changed()) break;
      observed = std::move(step.next);
      if (observed.empty()) break;
    }
    round.states_after_observation_pass = observed.num_states();
    res.trace.push_back(round);
    if (same_languages(observed, cur)) {
      res.result = std::move(observed);
      res.rounds = std::max(1, executed - 1);
      return res;
    }
    cur = std::move(observed);
  }
}

/// Properties the alternation's fixpoint must exhibit: nonblocking,
/// controllable, consistent under partial observation relative to its own
/// closure, and inside the original candidate.
struct FixpointCheck {
  Generator result;
  int rounds = 0;
  bool nonblocking = false;
  bool controllable = false;
  bool relatively_observable = false;
  bool within_candidate = false;
  bool ok() const {
    return nonblocking && controllable && relatively_observable && within_candidate;
  }
};

inline FixpointCheck verify_theorem4(const Generator& g, const Generator& k) {
  FixpointCheck check;
  auto pipeline = suprelobs_con(g, k);
  check.result = std::move(pipeline.result);
  check.rounds = pipeline.rounds;
  check.nonblocking = is_nonblocking(check.result);
  check.controllable = is_controllable(g, check.result).holds;
  check.relatively_observable =
      check.result.empty() ||
      check_relative_observability(g, check.result, check.result).holds;
  auto rel = language_relation(check.result, k);
  check.within_candidate = detail::within(rel.closed) && detail::within(rel.marked);
  return check;
}

}  // namespace des
