#include "clocklam/clocked_tree.hpp"

#include <cassert>
#include <sstream>

#include <json.hpp>

namespace clocklam {

Annotation Annotation::from_trace(const StepTrace& trace, ClockMode mode) {
  Annotation a;
  a.mode = mode;
  a.count = static_cast<std::uint32_t>(trace.size());
  if (mode == ClockMode::Atomic) {
    a.positions.reserve(trace.size());
    for (const auto& s : trace) a.positions.push_back(s.position);
  }
  return a;
}

bool annotation_equal(const Annotation& a, const Annotation& b) {
  if (a.mode != b.mode) return false;
  if (a.mode == ClockMode::Count) return a.count == b.count;
  return a.positions == b.positions;
}

bool subsequence_leq(const std::vector<Position>& a,
                     const std::vector<Position>& b) {
  std::size_t i = 0;
  for (std::size_t j = 0; i < a.size() && j < b.size(); ++j)
    if (a[i] == b[j]) ++i;
  return i == a.size();
}

TreePtr ClockedTree::bot() {
  static TreePtr instance = std::make_shared<ClockedTree>(
      ClockedTree{TreeKind::Bot, std::nullopt, {}, "", {}});
  return instance;
}

TreePtr ClockedTree::unknown() {
  static TreePtr instance = std::make_shared<ClockedTree>(
      ClockedTree{TreeKind::Unknown, std::nullopt, {}, "", {}});
  return instance;
}

TreePtr ClockedTree::node(TreeKind kind, std::optional<Annotation> ann,
                          std::vector<std::string> binders, std::string head,
                          std::vector<TreePtr> children) {
  return std::make_shared<ClockedTree>(ClockedTree{
      kind, std::move(ann), std::move(binders), std::move(head),
      std::move(children)});
}

HnfParts decompose_hnf(const TermPtr& hnf) {
  HnfParts parts;
  TermPtr cur = hnf;
  while (cur->kind() == TermKind::Abs) {
    std::set<std::string> avoid = free_names(cur);
    for (const auto& b : parts.binders) avoid.insert(b);
    std::string name =
        fresh_name(cur->name().empty() ? "x" : cur->name(), avoid);
    cur = open_abs(cur, name);
    parts.binders.push_back(name);
  }
  std::vector<TermPtr> rev;
  while (cur->kind() == TermKind::App) {
    rev.push_back(cur->arg());
    cur = cur->fun();
  }
  assert(cur->kind() != TermKind::Abs);
  parts.head = cur->kind() == TermKind::FreeVar
                   ? cur->name()
                   : "#" + std::to_string(cur->index());
  parts.children.assign(rev.rbegin(), rev.rend());
  return parts;
}

namespace {

struct ExpandKey {
  TermPtr term;
  std::uint32_t depth;
};
struct ExpandKeyHash {
  std::size_t operator()(const ExpandKey& k) const {
    return k.term->hash() * 31 + k.depth;
  }
};
struct ExpandKeyEq {
  bool operator()(const ExpandKey& a, const ExpandKey& b) const {
    return a.depth == b.depth && alpha_eq(a.term, b.term);
  }
};

struct Expander {
  TreeConfig cfg;
  std::unordered_map<ExpandKey, TreePtr, ExpandKeyHash, ExpandKeyEq> memo;

  TreePtr bt(const TermPtr& t, std::uint32_t depth) {
    if (depth == 0) return ClockedTree::unknown();
    ExpandKey key{t, depth};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto out = reduce_to_hnf(t, cfg.fuel);
    TreePtr result;
    if (out.status == OutcomeStatus::Cycle) {
      result = ClockedTree::bot();
    } else if (out.status == OutcomeStatus::FuelExhausted) {
      result = ClockedTree::unknown();
    } else {
      auto parts = decompose_hnf(out.term);
      std::vector<TreePtr> children;
      children.reserve(parts.children.size());
      for (const auto& c : parts.children) children.push_back(bt(c, depth - 1));
      result = ClockedTree::node(
          TreeKind::BtNode, Annotation::from_trace(out.trace, cfg.mode),
          std::move(parts.binders), std::move(parts.head),
          std::move(children));
    }
    memo.emplace(key, result);
    return result;
  }

  TreePtr llt(const TermPtr& t, std::uint32_t depth) {
    if (depth == 0) return ClockedTree::unknown();
    ExpandKey key{t, depth};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto out = reduce_to_whnf(t, cfg.fuel);
    TreePtr result;
    if (out.status == OutcomeStatus::Cycle) {
      result = ClockedTree::bot();
    } else if (out.status == OutcomeStatus::FuelExhausted) {
      result = ClockedTree::unknown();
    } else if (out.term->kind() == TermKind::Abs) {
      std::string name = fresh_name(
          out.term->name().empty() ? "x" : out.term->name(),
          free_names(out.term));
      TermPtr body = open_abs(out.term, name);
      result = ClockedTree::node(
          TreeKind::LlAbs, Annotation::from_trace(out.trace, cfg.mode),
          {name}, "", {llt(body, depth - 1)});
    } else {
      auto parts = decompose_hnf(out.term);
      std::vector<TreePtr> children;
      children.reserve(parts.children.size());
      for (const auto& c : parts.children)
        children.push_back(llt(c, depth - 1));
      result = ClockedTree::node(
          TreeKind::LlHead, Annotation::from_trace(out.trace, cfg.mode), {},
          std::move(parts.head), std::move(children));
    }
    memo.emplace(key, result);
    return result;
  }

  TreePtr bet(const TermPtr& t, std::uint32_t depth) {
    if (depth == 0) return ClockedTree::unknown();
    ExpandKey key{t, depth};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto out = reduce_to_root_stable(t, cfg.fuel);
    TreePtr result;
    if (out.status == OutcomeStatus::Cycle) {
      result = ClockedTree::bot();
    } else if (out.status == OutcomeStatus::FuelExhausted) {
      result = ClockedTree::unknown();
    } else {
      auto ann = Annotation::from_trace(out.trace, cfg.mode);
      const TermPtr& s = out.term;
      switch (s->kind()) {
        case TermKind::FreeVar:
          result = ClockedTree::node(TreeKind::BeVar, ann, {}, s->name(), {});
          break;
        case TermKind::BoundVar:
          result = ClockedTree::node(TreeKind::BeVar, ann, {},
                                     "#" + std::to_string(s->index()), {});
          break;
        case TermKind::Abs: {
          std::string name = fresh_name(s->name().empty() ? "x" : s->name(),
                                        free_names(s));
          result = ClockedTree::node(TreeKind::BeAbs, ann, {name}, "",
                                     {bet(open_abs(s, name), depth - 1)});
          break;
        }
        case TermKind::App:
          result = ClockedTree::node(
              TreeKind::BeApp, ann, {}, "",
              {bet(s->fun(), depth - 1), bet(s->arg(), depth - 1)});
          break;
      }
    }
    memo.emplace(key, result);
    return result;
  }
};

}  // namespace

TreePtr clocked_bt(const TermPtr& t, const TreeConfig& config) {
  Expander e{config, {}};
  return e.bt(t, config.depth);
}

TreePtr clocked_llt(const TermPtr& t, const TreeConfig& config) {
  Expander e{config, {}};
  return e.llt(t, config.depth);
}

TreePtr clocked_bet(const TermPtr& t, const TreeConfig& config) {
  Expander e{config, {}};
  return e.bet(t, config.depth);
}

TreePtr deannotate(const TreePtr& t) {
  if (!t->annotation && t->children.empty()) return t;
  std::vector<TreePtr> children;
  children.reserve(t->children.size());
  for (const auto& c : t->children) children.push_back(deannotate(c));
  return ClockedTree::node(t->kind, std::nullopt, t->binders, t->head,
                           std::move(children));
}

TreePtr project_counts(const TreePtr& t) {
  std::optional<Annotation> ann;
  if (t->annotation) {
    Annotation a;
    a.mode = ClockMode::Count;
    a.count = t->annotation->mode == ClockMode::Atomic
                  ? static_cast<std::uint32_t>(t->annotation->positions.size())
                  : t->annotation->count;
    ann = a;
  }
  std::vector<TreePtr> children;
  children.reserve(t->children.size());
  for (const auto& c : t->children) children.push_back(project_counts(c));
  return ClockedTree::node(t->kind, std::move(ann), t->binders, t->head,
                           std::move(children));
}

namespace {

// Positional binder correspondence for alpha-aware comparisons.
struct NamePairs {
  std::vector<std::pair<std::string, std::string>> stack;

  bool heads_match(const std::string& a, const std::string& b) const {
    for (std::size_t i = stack.size(); i-- > 0;) {
      bool ha = stack[i].first == a;
      bool hb = stack[i].second == b;
      if (ha || hb) return ha && hb;
    }
    return a == b;
  }
};

bool tree_equal_rec(const TreePtr& a, const TreePtr& b, NamePairs& names) {
  if (a->kind != b->kind) return false;
  if (a->annotation.has_value() != b->annotation.has_value()) return false;
  if (a->annotation && !annotation_equal(*a->annotation, *b->annotation))
    return false;
  if (a->binders.size() != b->binders.size()) return false;
  if (a->children.size() != b->children.size()) return false;
  bool check_head = a->kind == TreeKind::BtNode ||
                    a->kind == TreeKind::LlHead || a->kind == TreeKind::BeVar;
  for (std::size_t i = 0; i < a->binders.size(); ++i)
    names.stack.emplace_back(a->binders[i], b->binders[i]);
  bool ok = true;
  if (check_head && !names.heads_match(a->head, b->head)) ok = false;
  for (std::size_t i = 0; ok && i < a->children.size(); ++i)
    ok = tree_equal_rec(a->children[i], b->children[i], names);
  names.stack.resize(names.stack.size() - a->binders.size());
  return ok;
}

}  // namespace

bool tree_equal(const TreePtr& a, const TreePtr& b) {
  NamePairs names;
  return tree_equal_rec(a, b, names);
}

const char* rel_kind_name(RelKind r) {
  switch (r) {
    case RelKind::Eq: return "=";
    case RelKind::Ne: return "!=";
    case RelKind::Le: return "<=";
    case RelKind::Ge: return ">=";
    case RelKind::Lt: return "<";
    case RelKind::Gt: return ">";
  }
  return "?";
}

std::optional<RelKind> rel_kind_from_name(std::string_view s) {
  if (s == "=" || s == "==" || s == "eq") return RelKind::Eq;
  if (s == "!=" || s == "ne") return RelKind::Ne;
  if (s == "<=" || s == "le") return RelKind::Le;
  if (s == ">=" || s == "ge") return RelKind::Ge;
  if (s == "<" || s == "lt") return RelKind::Lt;
  if (s == ">" || s == "gt") return RelKind::Gt;
  return std::nullopt;
}

bool annotation_related(const Annotation& a, const Annotation& b, RelKind r) {
  if (a.mode == ClockMode::Count || b.mode == ClockMode::Count) {
    std::uint32_t ka = a.mode == ClockMode::Atomic
                           ? static_cast<std::uint32_t>(a.positions.size())
                           : a.count;
    std::uint32_t kb = b.mode == ClockMode::Atomic
                           ? static_cast<std::uint32_t>(b.positions.size())
                           : b.count;
    switch (r) {
      case RelKind::Eq: return ka == kb;
      case RelKind::Ne: return ka != kb;
      case RelKind::Le: return ka <= kb;
      case RelKind::Ge: return ka >= kb;
      case RelKind::Lt: return ka < kb;
      case RelKind::Gt: return ka > kb;
    }
  }
  // atomic annotations: subsequence embedding order
  bool eq = a.positions == b.positions;
  switch (r) {
    case RelKind::Eq: return eq;
    case RelKind::Ne: return !eq;
    case RelKind::Le: return subsequence_leq(a.positions, b.positions);
    case RelKind::Ge: return subsequence_leq(b.positions, a.positions);
    case RelKind::Lt: return !eq && subsequence_leq(a.positions, b.positions);
    case RelKind::Gt: return !eq && subsequence_leq(b.positions, a.positions);
  }
  return false;
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Holds: return "holds";
    case Tri::Fails: return "fails";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Resolve a {0,1,2} position against the tree seen as an annotated term.
// Fragment roots carry the annotation; inner lambda/application/variable
// spots of an hnf layer are unannotated.
struct Spot {
  enum class State { Invalid, Unknown, Annotated, Plain };
  State state = State::Invalid;
  const ClockedTree* node = nullptr;
};

Spot resolve(const ClockedTree* t, const Position& p, std::size_t i) {
  if (t->kind == TreeKind::Unknown) return {Spot::State::Unknown, t};
  if (i == p.size()) {
    return {t->annotation ? Spot::State::Annotated : Spot::State::Plain, t};
  }
  switch (t->kind) {
    case TreeKind::Bot:
      return {};  // no positions below bottom
    case TreeKind::BtNode: {
      std::size_t n = t->binders.size();
      std::size_t m = t->children.size();
      std::size_t j = i;
      std::size_t lam = 0;
      while (lam < n && j < p.size() && p[j] == 0) { ++lam; ++j; }
      if (lam < n)
        return j == p.size() ? Spot{Spot::State::Plain, t} : Spot{};
      // application spine: 1 moves toward the head, 2 enters a child
      std::size_t spine = 0;  // children still to the right: m - spine
      while (j < p.size()) {
        std::size_t remaining = m - spine;
        if (remaining == 0) return {};  // at the head variable, a leaf
        if (p[j] == 1) { ++spine; ++j; continue; }
        if (p[j] == 2)
          return resolve(t->children[m - spine - 1].get(), p, j + 1);
        return {};
      }
      return {Spot::State::Plain, t};
    }
    case TreeKind::LlAbs:
    case TreeKind::BeAbs:
      if (p[i] != 0) return {};
      return resolve(t->children[0].get(), p, i + 1);
    case TreeKind::LlHead: {
      std::size_t m = t->children.size();
      std::size_t spine = 0;
      std::size_t j = i;
      while (j < p.size()) {
        std::size_t remaining = m - spine;
        if (remaining == 0) return {};
        if (p[j] == 1) { ++spine; ++j; continue; }
        if (p[j] == 2)
          return resolve(t->children[m - spine - 1].get(), p, j + 1);
        return {};
      }
      return {Spot::State::Plain, t};
    }
    case TreeKind::BeVar:
      return {};
    case TreeKind::BeApp:
      if (p[i] == 1) return resolve(t->children[0].get(), p, i + 1);
      if (p[i] == 2) return resolve(t->children[1].get(), p, i + 1);
      return {};
    default:
      return {};
  }
}

}  // namespace

const ClockedTree* tree_at(const TreePtr& t, const Position& p) {
  Spot s = resolve(t.get(), p, 0);
  return s.state == Spot::State::Invalid ? nullptr : s.node;
}

Tri rel_at(const TreePtr& a, const TreePtr& b, const Position& p, RelKind r) {
  Spot sa = resolve(a.get(), p, 0);
  Spot sb = resolve(b.get(), p, 0);
  if (sa.state == Spot::State::Unknown || sb.state == Spot::State::Unknown)
    return Tri::Unknown;
  if (sa.state == Spot::State::Invalid || sb.state == Spot::State::Invalid)
    return Tri::Fails;
  bool aa = sa.state == Spot::State::Annotated;
  bool ab = sb.state == Spot::State::Annotated;
  if (aa != ab) return Tri::Fails;
  if (!aa) return Tri::Holds;
  return annotation_related(*sa.node->annotation, *sb.node->annotation, r)
             ? Tri::Holds
             : Tri::Fails;
}

namespace {

Tri combine(Tri a, Tri b) {
  if (a == Tri::Fails || b == Tri::Fails) return Tri::Fails;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::Holds;
}

Tri rel_all_rec(const TreePtr& a, const TreePtr& b, RelKind r,
                std::uint32_t cut, std::uint32_t pos_len, NamePairs& names) {
  if (a->kind == TreeKind::Unknown || b->kind == TreeKind::Unknown)
    return Tri::Unknown;
  if (a->kind != b->kind || a->binders.size() != b->binders.size() ||
      a->children.size() != b->children.size())
    return Tri::Fails;
  bool check_head = a->kind == TreeKind::BtNode ||
                    a->kind == TreeKind::LlHead || a->kind == TreeKind::BeVar;
  for (std::size_t i = 0; i < a->binders.size(); ++i)
    names.stack.emplace_back(a->binders[i], b->binders[i]);
  Tri result = Tri::Holds;
  if (check_head && !names.heads_match(a->head, b->head)) result = Tri::Fails;
  if (result == Tri::Holds && a->annotation.has_value()) {
    if (!b->annotation.has_value())
      result = Tri::Fails;
    else if (pos_len >= cut &&
             !annotation_related(*a->annotation, *b->annotation, r))
      result = Tri::Fails;
  } else if (result == Tri::Holds && b->annotation.has_value()) {
    result = Tri::Fails;
  }
  if (result != Tri::Fails) {
    std::size_t n = a->binders.size();
    std::size_t m = a->children.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::uint32_t child_len;
      if (a->kind == TreeKind::BtNode)
        child_len = pos_len + static_cast<std::uint32_t>(n + (m - 1 - i) + 1);
      else if (a->kind == TreeKind::LlHead)
        child_len = pos_len + static_cast<std::uint32_t>((m - 1 - i) + 1);
      else
        child_len = pos_len + 1;
      result = combine(result,
                       rel_all_rec(a->children[i], b->children[i], r, cut,
                                   child_len, names));
      if (result == Tri::Fails) break;
    }
  }
  names.stack.resize(names.stack.size() - a->binders.size());
  return result;
}

}  // namespace

Tri rel_all(const TreePtr& a, const TreePtr& b, RelKind r,
            std::uint32_t prefix_cut) {
  NamePairs names;
  return rel_all_rec(a, b, r, prefix_cut, 0, names);
}

// --- Rendering ----------------------------------------------------------------

namespace {

std::string annotation_text(const Annotation& a, PrintStyle style) {
  std::string s = "[";
  if (a.mode == ClockMode::Count) {
    s += std::to_string(a.count);
  } else {
    s += style == PrintStyle::Ascii ? "<" : "⟨";
    for (std::size_t i = 0; i < a.positions.size(); ++i) {
      if (i) s += ",";
      std::string p = position_to_string(a.positions[i]);
      if (p.empty()) p = style == PrintStyle::Ascii ? "e" : "ε";
      s += p;
    }
    s += style == PrintStyle::Ascii ? ">" : "⟩";
  }
  s += "]";
  return s;
}

void render(const ClockedTree* t, PrintStyle style, std::string& out);

void render_child(const ClockedTree* t, PrintStyle style, std::string& out) {
  bool leaf = t->kind == TreeKind::Bot || t->kind == TreeKind::Unknown;
  if (!leaf) out += '(';
  render(t, style, out);
  if (!leaf) out += ')';
}

void render(const ClockedTree* t, PrintStyle style, std::string& out) {
  switch (t->kind) {
    case TreeKind::Bot:
      out += style == PrintStyle::Ascii ? "_|_" : "⊥";
      return;
    case TreeKind::Unknown:
      out += "?";
      return;
    default:
      break;
  }
  if (t->annotation) out += annotation_text(*t->annotation, style);
  switch (t->kind) {
    case TreeKind::BtNode: {
      if (!t->binders.empty()) {
        out += style == PrintStyle::Ascii ? "\\" : "λ";
        for (std::size_t i = 0; i < t->binders.size(); ++i) {
          if (i) out += ' ';
          out += t->binders[i];
        }
        out += '.';
      }
      out += t->head;
      for (const auto& c : t->children) {
        out += ' ';
        render_child(c.get(), style, out);
      }
      break;
    }
    case TreeKind::LlAbs:
    case TreeKind::BeAbs:
      out += style == PrintStyle::Ascii ? "\\" : "λ";
      out += t->binders[0];
      out += '.';
      render(t->children[0].get(), style, out);
      break;
    case TreeKind::LlHead:
      out += t->head;
      for (const auto& c : t->children) {
        out += ' ';
        render_child(c.get(), style, out);
      }
      break;
    case TreeKind::BeVar:
      out += t->head;
      break;
    case TreeKind::BeApp:
      out += '(';
      render(t->children[0].get(), style, out);
      out += ' ';
      render(t->children[1].get(), style, out);
      out += ')';
      break;
    default:
      break;
  }
}

const char* kind_name(TreeKind k) {
  switch (k) {
    case TreeKind::Bot: return "bot";
    case TreeKind::Unknown: return "unknown";
    case TreeKind::BtNode: return "bt";
    case TreeKind::LlAbs: return "ll-abs";
    case TreeKind::LlHead: return "ll-head";
    case TreeKind::BeVar: return "be-var";
    case TreeKind::BeAbs: return "be-abs";
    case TreeKind::BeApp: return "be-app";
  }
  return "?";
}

nlohmann::json annotation_json(const Annotation& a) {
  if (a.mode == ClockMode::Count) return a.count;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : a.positions) arr.push_back(position_to_string(p));
  return arr;
}

nlohmann::json tree_json_rec(const ClockedTree* t) {
  nlohmann::json j;
  j["kind"] = kind_name(t->kind);
  j["annotation"] = t->annotation ? annotation_json(*t->annotation)
                                  : nlohmann::json(nullptr);
  j["binders"] = t->binders;
  j["head"] = t->head;
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : t->children) children.push_back(tree_json_rec(c.get()));
  j["children"] = std::move(children);
  return j;
}

void dot_rec(const ClockedTree* t, int& counter, std::ostringstream& os,
             int& my_id) {
  my_id = counter++;
  std::string label;
  switch (t->kind) {
    case TreeKind::Bot: label = "⊥"; break;
    case TreeKind::Unknown: label = "?"; break;
    default: {
      if (t->annotation) label += annotation_text(*t->annotation,
                                                  PrintStyle::Unicode);
      if (!t->binders.empty()) {
        label += " λ";
        for (std::size_t i = 0; i < t->binders.size(); ++i) {
          if (i) label += ' ';
          label += t->binders[i];
        }
        label += '.';
      }
      if (!t->head.empty()) {
        label += ' ';
        label += t->head;
      }
      if (t->kind == TreeKind::BeApp) label += " @";
      break;
    }
  }
  os << "  n" << my_id << " [label=\"" << label << "\"";
  if (t->kind == TreeKind::Unknown) os << ", shape=diamond";
  if (t->kind == TreeKind::Bot) os << ", shape=box";
  os << "];\n";
  for (const auto& c : t->children) {
    int child_id = 0;
    dot_rec(c.get(), counter, os, child_id);
    os << "  n" << my_id << " -> n" << child_id << ";\n";
  }
}

}  // namespace

std::string tree_to_text(const TreePtr& t, PrintStyle style) {
  std::string out;
  render(t.get(), style, out);
  return out;
}

std::string tree_to_json(const TreePtr& t) {
  return tree_json_rec(t.get()).dump();
}

std::string tree_to_dot(const TreePtr& t) {
  std::ostringstream os;
  os << "digraph clocked_tree {\n  node [shape=ellipse];\n";
  int counter = 0;
  int root_id = 0;
  dot_rec(t.get(), counter, os, root_id);
  os << "}\n";
  return os.str();
}

}  // namespace clocklam
