#include "clocklam/rational.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

namespace clocklam {

namespace {

std::vector<bool> on_cycle_mask(const std::vector<RationalTree::Node>& nodes) {
  std::size_t n = nodes.size();
  std::vector<bool> mask(n, false);
  // graphs here are tiny; a reachability pass per node is fine
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::deque<std::uint32_t> work;
    for (auto c : nodes[s].children) work.push_back(c);
    bool found = false;
    while (!work.empty() && !found) {
      auto v = work.front();
      work.pop_front();
      if (v == s) { found = true; break; }
      if (seen[v]) continue;
      seen[v] = true;
      for (auto c : nodes[v].children) work.push_back(c);
    }
    mask[s] = found;
  }
  return mask;
}

}  // namespace

std::vector<std::uint32_t> RationalTree::cycle_nodes() const {
  auto mask = on_cycle_mask(nodes);
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

std::vector<bool> RationalTree::recurrent_mask() const {
  auto mask = on_cycle_mask(nodes);
  std::vector<bool> recurrent = mask;
  std::deque<std::uint32_t> work;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) work.push_back(static_cast<std::uint32_t>(i));
  while (!work.empty()) {
    auto v = work.front();
    work.pop_front();
    for (auto c : nodes[v].children) {
      if (!recurrent[c]) {
        recurrent[c] = true;
        work.push_back(c);
      }
    }
  }
  return recurrent;
}

std::optional<RationalTree> rational_expand(const TermPtr& t,
                                            const RationalConfig& config) {
  RationalTree rt;
  TermMap<std::uint32_t> memo;
  std::deque<std::uint32_t> work;

  auto state_id = [&](const TermPtr& s) -> std::optional<std::uint32_t> {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    if (rt.nodes.size() >= config.max_states) return std::nullopt;
    std::uint32_t id = static_cast<std::uint32_t>(rt.nodes.size());
    rt.nodes.push_back({});
    rt.nodes.back().state = s;
    memo.emplace(s, id);
    work.push_back(id);
    return id;
  };

  auto root = state_id(t);
  if (!root) return std::nullopt;
  rt.root = *root;

  while (!work.empty()) {
    std::uint32_t id = work.front();
    work.pop_front();
    TermPtr state = rt.nodes[id].state;
    auto out = reduce_to_hnf(state, config.fuel);
    if (out.status == OutcomeStatus::FuelExhausted) return std::nullopt;
    if (out.status == OutcomeStatus::Cycle) {
      rt.nodes[id].kind = TreeKind::Bot;
      continue;
    }
    auto parts = decompose_hnf(out.term);
    rt.nodes[id].kind = TreeKind::BtNode;
    rt.nodes[id].annotation = Annotation::from_trace(out.trace, config.mode);
    rt.nodes[id].binders = std::move(parts.binders);
    rt.nodes[id].head = std::move(parts.head);
    for (const auto& c : parts.children) {
      auto cid = state_id(c);
      if (!cid) return std::nullopt;
      rt.nodes[id].children.push_back(*cid);
    }
  }
  return rt;
}

namespace {
TreePtr unfold_rec(const RationalTree& rt, std::uint32_t id,
                   std::uint32_t depth) {
  if (depth == 0) return ClockedTree::unknown();
  const auto& n = rt.nodes[id];
  if (n.kind == TreeKind::Bot) return ClockedTree::bot();
  std::vector<TreePtr> children;
  children.reserve(n.children.size());
  for (auto c : n.children) children.push_back(unfold_rec(rt, c, depth - 1));
  return ClockedTree::node(TreeKind::BtNode, n.annotation, n.binders, n.head,
                           std::move(children));
}
}  // namespace

TreePtr unfold(const RationalTree& rt, std::uint32_t depth) {
  return unfold_rec(rt, rt.root, depth);
}

// --- Product-graph relation checks --------------------------------------------

namespace {

using NameBij = std::vector<std::pair<std::string, std::string>>;

struct ProductKey {
  std::uint32_t a, b;
  NameBij sigma;  // sorted by first component
  bool operator==(const ProductKey& o) const {
    return a == o.a && b == o.b && sigma == o.sigma;
  }
};
struct ProductKeyHash {
  std::size_t operator()(const ProductKey& k) const {
    std::size_t h = k.a * 1000003u + k.b;
    for (const auto& [x, y] : k.sigma) {
      h = h * 31 + std::hash<std::string>{}(x);
      h = h * 31 + std::hash<std::string>{}(y);
    }
    return h;
  }
};

bool heads_match(const NameBij& sigma, const std::string& a,
                 const std::string& b) {
  for (const auto& [x, y] : sigma) {
    if (x == a) return y == b;
    if (y == b) return false;
  }
  return a == b;
}

NameBij extend(NameBij sigma, const std::vector<std::string>& as,
               const std::vector<std::string>& bs) {
  for (std::size_t i = 0; i < as.size(); ++i) {
    std::erase_if(sigma, [&](const auto& p) {
      return p.first == as[i] || p.second == bs[i];
    });
    sigma.emplace_back(as[i], bs[i]);
  }
  std::sort(sigma.begin(), sigma.end());
  return sigma;
}

NameBij restrict_to(const NameBij& sigma, const std::set<std::string>& fa,
                    const std::set<std::string>& fb) {
  NameBij out;
  for (const auto& p : sigma)
    if (fa.count(p.first) || fb.count(p.second)) out.push_back(p);
  return out;
}

struct ProductGraph {
  std::vector<ProductKey> keys;
  std::vector<std::vector<std::uint32_t>> edges;
  std::vector<ProductCert::PairInfo> info;
  bool complete = true;
};

ProductGraph build_product(const RationalTree& A, const RationalTree& B,
                           RelKind r, std::uint32_t max_pairs = 4096) {
  ProductGraph g;
  std::unordered_map<ProductKey, std::uint32_t, ProductKeyHash> index;
  std::deque<std::uint32_t> work;

  auto intern = [&](ProductKey key, Position pos) -> std::optional<std::uint32_t> {
    if (auto it = index.find(key); it != index.end()) return it->second;
    if (g.keys.size() >= max_pairs) return std::nullopt;
    std::uint32_t id = static_cast<std::uint32_t>(g.keys.size());
    index.emplace(key, id);
    g.keys.push_back(std::move(key));
    g.edges.emplace_back();
    ProductCert::PairInfo pi;
    pi.a = g.keys.back().a;
    pi.b = g.keys.back().b;
    pi.position = std::move(pos);
    g.info.push_back(std::move(pi));
    work.push_back(id);
    return id;
  };

  auto root = intern({A.root, B.root, {}}, {});
  if (!root) {
    g.complete = false;
    return g;
  }

  while (!work.empty()) {
    std::uint32_t id = work.front();
    work.pop_front();
    ProductKey key = g.keys[id];
    const auto& na = A.nodes[key.a];
    const auto& nb = B.nodes[key.b];
    auto& pi = g.info[id];

    if (na.kind != nb.kind || na.binders.size() != nb.binders.size() ||
        na.children.size() != nb.children.size()) {
      pi.structure_mismatch = true;
      continue;
    }
    if (na.kind == TreeKind::Bot) continue;

    NameBij sigma = extend(key.sigma, na.binders, nb.binders);
    if (!heads_match(sigma, na.head, nb.head)) {
      pi.structure_mismatch = true;
      continue;
    }
    pi.annotated = na.annotation.has_value() && nb.annotation.has_value();
    if (pi.annotated)
      pi.related = annotation_related(*na.annotation, *nb.annotation, r);

    std::size_t n = na.binders.size();
    std::size_t m = na.children.size();
    for (std::size_t i = 0; i < m; ++i) {
      auto fa = free_names(A.nodes[na.children[i]].state);
      auto fb = free_names(B.nodes[nb.children[i]].state);
      Position child_pos = pi.position;
      for (std::size_t k = 0; k < n; ++k) child_pos.push_back(0);
      for (std::size_t k = 0; k + 1 + i < m; ++k) child_pos.push_back(1);
      child_pos.push_back(2);
      auto cid = intern({na.children[i], nb.children[i],
                         restrict_to(sigma, fa, fb)},
                        std::move(child_pos));
      if (!cid) {
        g.complete = false;
        return g;
      }
      g.edges[id].push_back(*cid);
    }
  }
  return g;
}

void analyze_recurrence(ProductGraph& g) {
  std::size_t n = g.keys.size();
  std::vector<bool> on_cycle(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::deque<std::uint32_t> work(g.edges[s].begin(), g.edges[s].end());
    while (!work.empty()) {
      auto v = work.front();
      work.pop_front();
      if (v == s) { on_cycle[s] = true; break; }
      if (seen[v]) continue;
      seen[v] = true;
      for (auto c : g.edges[v]) work.push_back(c);
    }
  }
  std::deque<std::uint32_t> work;
  for (std::size_t i = 0; i < n; ++i)
    if (on_cycle[i]) {
      g.info[i].recurrent = true;
      work.push_back(static_cast<std::uint32_t>(i));
    }
  while (!work.empty()) {
    auto v = work.front();
    work.pop_front();
    for (auto c : g.edges[v])
      if (!g.info[c].recurrent) {
        g.info[c].recurrent = true;
        work.push_back(c);
      }
  }
}

void fill_cert(ProductCert* cert, const ProductGraph& g, RelKind r) {
  if (!cert) return;
  cert->pairs = g.info;
  cert->complete = g.complete;
  cert->relation = rel_kind_name(r);
  cert->structure_ok = true;
  for (const auto& pi : g.info)
    if (pi.structure_mismatch) cert->structure_ok = false;
}

}  // namespace

Tri rel_all_rational(const RationalTree& a, const RationalTree& b, RelKind r,
                     ProductCert* cert) {
  ProductGraph g = build_product(a, b, r);
  analyze_recurrence(g);
  fill_cert(cert, g, r);
  if (!g.complete) return Tri::Unknown;
  for (const auto& pi : g.info)
    if (pi.structure_mismatch) return Tri::Fails;
  for (std::size_t i = 0; i < g.info.size(); ++i)
    if (g.info[i].annotated && !g.info[i].related) {
      if (cert) cert->witnesses.push_back(i);
      return Tri::Fails;
    }
  return Tri::Holds;
}

Tri rel_eventually_rational(const RationalTree& a, const RationalTree& b,
                            RelKind r, ProductCert* cert) {
  ProductGraph g = build_product(a, b, r);
  analyze_recurrence(g);
  fill_cert(cert, g, r);
  if (!g.complete) return Tri::Unknown;
  for (const auto& pi : g.info)
    if (pi.structure_mismatch) return Tri::Fails;
  for (std::size_t i = 0; i < g.info.size(); ++i) {
    const auto& pi = g.info[i];
    if (pi.recurrent && pi.annotated && !pi.related) {
      if (cert) cert->witnesses.push_back(i);
      return Tri::Fails;
    }
  }
  return Tri::Holds;
}

Tri rel_infinitely_often_rational(const RationalTree& a, const RationalTree& b,
                                  RelKind r, ProductCert* cert) {
  ProductGraph g = build_product(a, b, r);
  analyze_recurrence(g);
  fill_cert(cert, g, r);
  if (!g.complete) return Tri::Unknown;
  for (const auto& pi : g.info)
    if (pi.structure_mismatch) return Tri::Fails;
  bool found = false;
  for (std::size_t i = 0; i < g.info.size(); ++i) {
    const auto& pi = g.info[i];
    if (pi.recurrent && pi.annotated && pi.related) {
      if (cert) cert->witnesses.push_back(i);
      found = true;
    }
  }
  return found ? Tri::Holds : Tri::Fails;
}

// --- Rendering ----------------------------------------------------------------

std::string rational_to_dot(const RationalTree& rt) {
  std::ostringstream os;
  os << "digraph rational_tree {\n  node [shape=ellipse];\n";
  for (std::size_t i = 0; i < rt.nodes.size(); ++i) {
    const auto& n = rt.nodes[i];
    std::string label;
    if (n.kind == TreeKind::Bot) {
      label = "⊥";
    } else {
      if (n.annotation) {
        if (n.annotation->mode == ClockMode::Count) {
          label += "[" + std::to_string(n.annotation->count) + "]";
        } else {
          label += "[⟨";
          for (std::size_t k = 0; k < n.annotation->positions.size(); ++k) {
            if (k) label += ",";
            std::string p = position_to_string(n.annotation->positions[k]);
            label += p.empty() ? "ε" : p;
          }
          label += "⟩]";
        }
      }
      if (!n.binders.empty()) {
        label += " λ";
        for (std::size_t k = 0; k < n.binders.size(); ++k) {
          if (k) label += ' ';
          label += n.binders[k];
        }
        label += '.';
      }
      label += ' ';
      label += n.head;
    }
    os << "  n" << i << " [label=\"" << label << "\"";
    if (n.kind == TreeKind::Bot) os << ", shape=box";
    os << "];\n";
  }
  // mark edges that point back to an ancestor of the DFS spanning tree
  std::vector<int> state(rt.nodes.size(), 0);  // 0 new, 1 on stack, 2 done
  struct Frame { std::uint32_t id; std::size_t next; };
  std::vector<Frame> stack{{rt.root, 0}};
  state[rt.root] = 1;
  while (!stack.empty()) {
    auto& f = stack.back();
    const auto& n = rt.nodes[f.id];
    if (f.next >= n.children.size()) {
      state[f.id] = 2;
      stack.pop_back();
      continue;
    }
    std::uint32_t c = n.children[f.next++];
    if (state[c] == 0) {
      os << "  n" << f.id << " -> n" << c << ";\n";
      state[c] = 1;
      stack.push_back({c, 0});
    } else if (state[c] == 1) {
      os << "  n" << f.id << " -> n" << c << " [style=dashed];\n";
    } else {
      os << "  n" << f.id << " -> n" << c << " [style=dotted];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string rational_to_json(const RationalTree& rt) {
  nlohmann::json j;
  j["root"] = rt.root;
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < rt.nodes.size(); ++i) {
    const auto& n = rt.nodes[i];
    nlohmann::json nj;
    nj["id"] = i;
    nj["kind"] = n.kind == TreeKind::Bot ? "bot" : "bt";
    if (n.annotation) {
      if (n.annotation->mode == ClockMode::Count) {
        nj["annotation"] = n.annotation->count;
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : n.annotation->positions)
          arr.push_back(position_to_string(p));
        nj["annotation"] = arr;
      }
    } else {
      nj["annotation"] = nullptr;
    }
    nj["binders"] = n.binders;
    nj["head"] = n.head;
    nj["children"] = n.children;
    nj["state"] = print(n.state);
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  return j.dump();
}

}  // namespace clocklam
