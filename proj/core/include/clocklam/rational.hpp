#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clocklam/clocked_tree.hpp"

namespace clocklam {

// Finite-graph presentation of a clocked Boehm tree: every node records the
// expansion state (an alpha-normal term) it was produced from, and children
// may point back to earlier nodes when an expansion state recurs. Unfolding
// the graph reproduces the infinite clocked tree, which makes the graph a
// checkable certificate for "eventually" and "infinitely often" claims.
struct RationalTree {
  struct Node {
    TreeKind kind = TreeKind::BtNode;  // BtNode or Bot
    std::optional<Annotation> annotation;
    std::vector<std::string> binders;
    std::string head;
    std::vector<std::uint32_t> children;
    TermPtr state;
  };
  std::vector<Node> nodes;
  std::uint32_t root = 0;

  // Ids of nodes that lie on a cycle of the graph.
  std::vector<std::uint32_t> cycle_nodes() const;
  // Ids of nodes reachable from some cycle (nodes of unbounded depth).
  std::vector<bool> recurrent_mask() const;
};

struct RationalConfig {
  std::uint32_t max_states = 256;
  std::uint32_t fuel = 10000;
  ClockMode mode = ClockMode::Count;
};

// Expand the clocked BT of t, memoizing expansion states up to alpha
// equality. Returns nullopt when the frontier fails to close within the
// state budget or a head-reduction runs out of fuel.
std::optional<RationalTree> rational_expand(const TermPtr& t,
                                            const RationalConfig& config = {});

TreePtr unfold(const RationalTree& rt, std::uint32_t depth);

std::string rational_to_dot(const RationalTree& rt);
std::string rational_to_json(const RationalTree& rt);

// Evidence produced by the product-graph relation checks.
struct ProductCert {
  struct PairInfo {
    std::uint32_t a = 0, b = 0;
    bool annotated = false;
    bool related = false;
    bool recurrent = false;
    bool structure_mismatch = false;
    Position position;  // first position the pair was reached at
  };
  std::vector<PairInfo> pairs;
  bool structure_ok = true;   // deannotated unfoldings are bisimilar
  bool complete = false;      // product closed within budget
  std::string relation;
  std::vector<std::size_t> witnesses;  // indices into pairs
};

// Relation between the two (fully certified) infinite clocked trees:
//   rel_all: R holds at every position.
//   rel_eventually: R holds at all positions below some finite depth.
//   rel_infinitely_often: R holds at infinitely many positions, each with
//   both sides annotated.
// All three fail when the underlying tree structures differ.
Tri rel_all_rational(const RationalTree& a, const RationalTree& b, RelKind r,
                     ProductCert* cert = nullptr);
Tri rel_eventually_rational(const RationalTree& a, const RationalTree& b,
                            RelKind r, ProductCert* cert = nullptr);
Tri rel_infinitely_often_rational(const RationalTree& a, const RationalTree& b,
                                  RelKind r, ProductCert* cert = nullptr);

}  // namespace clocklam
