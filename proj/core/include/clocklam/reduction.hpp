#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clocklam/term.hpp"

namespace clocklam {

// Simple-redex classification: a redex (\x.A)B is linear when x occurs at
// most once in A, call-by-value when B is a beta normal form. A redex is
// simple when it is linear or call-by-value (anything but Neither).
enum class RedexClass : std::uint8_t { Linear, CallByValue, Both, Neither };

const char* redex_class_name(RedexClass c);  // "linear" "cbv" "both" "neither"

inline bool is_simple_redex(RedexClass c) { return c != RedexClass::Neither; }

struct StepRecord {
  Position position;
  RedexClass klass;
};
using StepTrace = std::vector<StepRecord>;

std::string trace_to_json(const StepTrace& trace);

enum class OutcomeStatus : std::uint8_t { Reached, Cycle, FuelExhausted };

// Result of a bounded reduction search. For Reached, `term` satisfies the
// requested form and `trace` are the steps that led there. For Cycle, `term`
// is a state that recurs in the (deterministic) reduction, which certifies
// that the search can never succeed; `trace` leads from the input to that
// state. For FuelExhausted nothing is certified; `term` is the last state.
struct ReductionOutcome {
  OutcomeStatus status = OutcomeStatus::FuelExhausted;
  TermPtr term;
  StepTrace trace;
};

bool is_hnf(const TermPtr& t);
bool is_whnf(const TermPtr& t);

// Position of the unique head redex, or nullopt if t is an hnf.
std::optional<Position> head_redex_position(const TermPtr& t);

// All redex positions in leftmost-outermost (preorder) order.
std::vector<Position> redex_positions(const TermPtr& t);

// Contract the redex at p. Throws std::invalid_argument when p is not a
// valid position or does not point at a redex.
TermPtr beta_step_at(const TermPtr& t, const Position& p);

RedexClass classify_redex(const TermPtr& t, const Position& p);

ReductionOutcome reduce_to_hnf(const TermPtr& t, std::uint32_t fuel = 10000);
ReductionOutcome reduce_to_whnf(const TermPtr& t, std::uint32_t fuel = 10000);
// Head-reduce until the term is a variable, an abstraction, or an
// application whose function side provably never becomes an abstraction.
// Cycle certifies root-activeness.
ReductionOutcome reduce_to_root_stable(const TermPtr& t,
                                       std::uint32_t fuel = 10000);
// Leftmost-outermost reduction to beta normal form.
ReductionOutcome normalize(const TermPtr& t, std::uint32_t fuel = 10000);

// Bounded bidirectional search for a common reduct. Convertible is sound;
// Unknown is not a proof of inconvertibility. The returned step paths replay
// from a respectively b to the witness via beta_step_at.
struct ConvertOutcome {
  enum class Status : std::uint8_t { Convertible, Unknown };
  Status status = Status::Unknown;
  TermPtr witness;
  std::vector<Position> path_a, path_b;
  std::uint32_t explored = 0;
};

struct ConvertBudget {
  std::uint32_t nodes = 2500;       // total expansions across both sides
  std::uint32_t size_cap = 2000;    // reducts larger than this are pruned
};

ConvertOutcome convertible_bounded(const TermPtr& a, const TermPtr& b,
                                   const ConvertBudget& budget = {});

}  // namespace clocklam
