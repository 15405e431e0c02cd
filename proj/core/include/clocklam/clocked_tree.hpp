#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clocklam/reduction.hpp"
#include "clocklam/term.hpp"

namespace clocklam {

enum class ClockMode : std::uint8_t { Count, Atomic };

// Node annotation: the number of head steps that produced the node, or in
// atomic mode the exact list of head-step positions (count == positions
// length there).
struct Annotation {
  ClockMode mode = ClockMode::Count;
  std::uint32_t count = 0;
  std::vector<Position> positions;

  static Annotation from_trace(const StepTrace& trace, ClockMode mode);
};

bool annotation_equal(const Annotation& a, const Annotation& b);

// a embeds into b order-preservingly; realizes b >= a on position lists.
bool subsequence_leq(const std::vector<Position>& a,
                     const std::vector<Position>& b);

enum class TreeKind : std::uint8_t {
  Bot,      // certified meaningless subterm (no annotation)
  Unknown,  // fuel or depth exhausted; nothing certified
  BtNode,   // hnf layer: binders, head variable, children
  LlAbs,    // whnf abstraction layer: one binder, one child
  LlHead,   // whnf head-variable layer
  BeVar,    // root-stable variable
  BeAbs,    // root-stable abstraction
  BeApp     // root-stable application (two children)
};

struct ClockedTree;
using TreePtr = std::shared_ptr<const ClockedTree>;

struct ClockedTree {
  TreeKind kind = TreeKind::Unknown;
  std::optional<Annotation> annotation;
  std::vector<std::string> binders;  // BtNode: n binders; LlAbs/BeAbs: one
  std::string head;                  // BtNode/LlHead head, BeVar name
  std::vector<TreePtr> children;

  static TreePtr bot();
  static TreePtr unknown();
  static TreePtr node(TreeKind kind, std::optional<Annotation> ann,
                      std::vector<std::string> binders, std::string head,
                      std::vector<TreePtr> children);
};

struct TreeConfig {
  std::uint32_t depth = 16;
  std::uint32_t fuel = 10000;
  ClockMode mode = ClockMode::Count;
};

TreePtr clocked_bt(const TermPtr& t, const TreeConfig& config = {});
TreePtr clocked_llt(const TermPtr& t, const TreeConfig& config = {});
TreePtr clocked_bet(const TermPtr& t, const TreeConfig& config = {});

TreePtr deannotate(const TreePtr& t);
// Atomic annotations projected to counts (lengths of the position lists).
TreePtr project_counts(const TreePtr& t);

// Alpha-aware structural equality including annotations.
bool tree_equal(const TreePtr& a, const TreePtr& b);

// Decomposition of an hnf into binders / head / children terms, opening the
// binders as deterministically chosen fresh free variables. Shared by the
// tree builders and the simple-term checker so expansion states coincide.
struct HnfParts {
  std::vector<std::string> binders;
  std::string head;
  std::vector<TermPtr> children;
};
HnfParts decompose_hnf(const TermPtr& hnf);

enum class RelKind : std::uint8_t { Eq, Ne, Le, Ge, Lt, Gt };
const char* rel_kind_name(RelKind r);
std::optional<RelKind> rel_kind_from_name(std::string_view s);
bool annotation_related(const Annotation& a, const Annotation& b, RelKind r);

enum class Tri : std::uint8_t { Holds, Fails, Unknown };
const char* tri_name(Tri t);

// Lifted relation at one position of the annotated trees: holds when both
// sides are unannotated there, or both are annotated and related by r.
// Unknown if either side is an Unknown leaf; structure mismatch fails.
Tri rel_at(const TreePtr& a, const TreePtr& b, const Position& p, RelKind r);

// Relation at every position of the truncations. Fails is definitive;
// Holds is only reported when no Unknown leaf was encountered, i.e. both
// trees are fully resolved. prefix_cut ignores positions shorter than it.
Tri rel_all(const TreePtr& a, const TreePtr& b, RelKind r,
            std::uint32_t prefix_cut = 0);

// Node of the annotated tree seen as a term over {0,1,2} positions.
const ClockedTree* tree_at(const TreePtr& t, const Position& p);

std::string tree_to_text(const TreePtr& t, PrintStyle style = PrintStyle::Ascii);
std::string tree_to_json(const TreePtr& t);
std::string tree_to_dot(const TreePtr& t);

}  // namespace clocklam
