#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clocklam/clocked_tree.hpp"
#include "clocklam/rational.hpp"
#include "clocklam/reduction.hpp"
#include "clocklam/term.hpp"

namespace clocklam {

enum class SimpleStatus : std::uint8_t { Simple, NotSimple, Unknown };

struct SimpleCheck {
  SimpleStatus status = SimpleStatus::Unknown;
  // Simple: the closed set of expansion states whose head reductions were
  // verified to contract only simple redexes (a co-inductive certificate).
  std::vector<TermPtr> states;
  // NotSimple: the offending redex.
  TermPtr witness_state;
  Position witness_position;
  RedexClass witness_class = RedexClass::Neither;
};

// Co-recursive check over the layers of the Boehm tree, memoized up to alpha
// equality; states whose bounded head reduction cycles have no hnf and are
// simple by definition. depth bounds the number of distinct states explored.
SimpleCheck is_simple_term(const TermPtr& t, std::uint32_t depth = 64,
                           std::uint32_t fuel = 10000);

struct SimpleReduct {
  TermPtr term;
  std::vector<Position> path;  // beta steps from the input to the reduct
  SimpleCheck check;
};

struct SimpleSearchBudget {
  std::uint32_t head_steps = 16;   // prefix of the head reduction to scan
  std::uint32_t states = 64;       // per-candidate simplicity budget
  std::uint32_t fuel = 10000;
  std::uint32_t normalize_fuel = 400;   // for closed-subterm normalization
  std::uint32_t normalize_size = 240;   // skip larger closed subterms
};

// Searches the reducts of t for a certified simple term. Candidates are the
// head reducts themselves plus two tidying passes applied to each: bounded
// normalization of closed subterms (Y0 (S S) ... becomes theta theta ...)
// and contraction of linear redexes (I z arguments collapse).
std::optional<SimpleReduct> find_simple_reduct(
    const TermPtr& t, const SimpleSearchBudget& budget = {});

enum class VerdictKind : std::uint8_t { Inconvertible, Convertible, Inconclusive };
enum class Method : std::uint8_t {
  None,
  BtDifference,
  SimpleSimple,
  AtomicSimpleSimple,
  SimpleVsReduct
};
const char* verdict_kind_name(VerdictKind v);
const char* method_name(Method m);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  Method method = Method::None;
  std::string reason;  // Inconclusive explanation

  // Convertible: a common reduct with replayable step paths.
  TermPtr common_reduct;
  std::vector<Position> path_m, path_n;

  // Inconvertible: the reducts compared, how they were reached, the relation
  // that separates them and the witnessing product pairs.
  TermPtr reduct_m, reduct_n;
  std::vector<Position> reduct_path_m, reduct_path_n;
  std::string relation;
  std::vector<std::string> witness_positions;
  std::vector<std::pair<std::string, std::string>> cycle_states;
  std::optional<Position> difference_position;  // BtDifference
  std::uint32_t established_depth = 0;
};

struct DiscriminationConfig {
  std::uint32_t depth = 16;
  std::uint32_t fuel = 10000;
  bool atomic = true;  // run the atomic-clock stage
  std::uint32_t prefix_cut = 0;
  std::uint32_t rational_states = 256;
  SimpleSearchBudget simple_budget = {};

  ConvertBudget convert_budget() const {
    return {std::min<std::uint32_t>(fuel, 2500), 2000};
  }
};

// Verdict pipeline: (1) bounded convertibility, (2) certified Boehm tree
// difference, (3) simple reducts compared under count clocks infinitely
// often, (4) the same under atomic clocks, (5) a one-sided comparison of a
// simple reduct against plain reducts of the other term.
Verdict discriminate(const TermPtr& m, const TermPtr& n,
                     const DiscriminationConfig& config = {});

std::string verdict_to_json(const Verdict& v, const DiscriminationConfig& config);

// Replays a verdict's certificate: reducts re-reduce, simplicity and
// rational trees re-certify, relations re-evaluate.
bool verify_verdict(const TermPtr& m, const TermPtr& n, const Verdict& v,
                    const DiscriminationConfig& config);

}  // namespace clocklam
