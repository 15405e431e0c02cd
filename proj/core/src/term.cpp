#include "clocklam/term.hpp"

#include <algorithm>
#include <cassert>

namespace clocklam {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

TermPtr Term::bound(int index) {
  assert(index >= 0);
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::BoundVar;
  t->index_ = index;
  t->hash_ = hash_combine(0x11, static_cast<std::size_t>(index));
  t->size_ = 1;
  t->dangling_ = index + 1;
  t->has_free_ = false;
  t->normal_ = true;
  return t;
}

TermPtr Term::free_var(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::FreeVar;
  t->name_ = std::move(name);
  t->hash_ = hash_combine(0x22, std::hash<std::string>{}(t->name_));
  t->size_ = 1;
  t->dangling_ = 0;
  t->has_free_ = true;
  t->normal_ = true;
  return t;
}

TermPtr Term::abs(std::string hint, TermPtr body) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::Abs;
  t->name_ = std::move(hint);
  t->hash_ = hash_combine(0x33, body->hash());
  t->size_ = 1 + body->size();
  t->dangling_ = std::max(0, body->dangling() - 1);
  t->has_free_ = body->has_free_names();
  t->normal_ = body->is_normal_form();
  t->left_ = std::move(body);
  return t;
}

TermPtr Term::app(TermPtr fun, TermPtr arg) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = TermKind::App;
  t->hash_ = hash_combine(hash_combine(0x44, fun->hash()), arg->hash());
  t->size_ = 1 + fun->size() + arg->size();
  t->dangling_ = std::max(fun->dangling(), arg->dangling());
  t->has_free_ = fun->has_free_names() || arg->has_free_names();
  t->normal_ = fun->is_normal_form() && arg->is_normal_form() &&
               fun->kind() != TermKind::Abs;
  t->left_ = std::move(fun);
  t->right_ = std::move(arg);
  return t;
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash() != b->hash() || a->kind() != b->kind() ||
      a->size() != b->size())
    return false;
  switch (a->kind()) {
    case TermKind::BoundVar:
      return a->index() == b->index();
    case TermKind::FreeVar:
      return a->name() == b->name();
    case TermKind::Abs:
      return alpha_eq(a->body(), b->body());
    case TermKind::App:
      return alpha_eq(a->fun(), b->fun()) && alpha_eq(a->arg(), b->arg());
  }
  return false;
}

TermPtr apply(TermPtr fun, const std::vector<TermPtr>& args) {
  for (const auto& a : args) fun = Term::app(std::move(fun), a);
  return fun;
}

TermPtr apply_n(TermPtr fun, const TermPtr& arg, std::uint32_t n) {
  for (std::uint32_t i = 0; i < n; ++i) fun = Term::app(std::move(fun), arg);
  return fun;
}

// --- Positions ---------------------------------------------------------------

std::string position_to_string(const Position& p) {
  std::string s;
  s.reserve(p.size());
  for (auto d : p) s.push_back(static_cast<char>('0' + d));
  return s;
}

std::optional<Position> position_from_string(std::string_view s) {
  Position p;
  p.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '2') return std::nullopt;
    p.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return p;
}

std::size_t PositionHash::operator()(const Position& p) const {
  std::size_t h = 0x55;
  for (auto d : p) h = hash_combine(h, d);
  return h;
}

std::optional<TermPtr> subterm_at(const TermPtr& t, const Position& p) {
  TermPtr cur = t;
  for (auto d : p) {
    switch (cur->kind()) {
      case TermKind::Abs:
        if (d != 0) return std::nullopt;
        cur = cur->body();
        break;
      case TermKind::App:
        if (d == 1)
          cur = cur->fun();
        else if (d == 2)
          cur = cur->arg();
        else
          return std::nullopt;
        break;
      default:
        return std::nullopt;
    }
  }
  return cur;
}

namespace {
void collect_positions(const TermPtr& t, Position& here,
                       std::vector<Position>& out) {
  out.push_back(here);
  switch (t->kind()) {
    case TermKind::Abs:
      here.push_back(0);
      collect_positions(t->body(), here, out);
      here.pop_back();
      break;
    case TermKind::App:
      here.push_back(1);
      collect_positions(t->fun(), here, out);
      here.back() = 2;
      collect_positions(t->arg(), here, out);
      here.pop_back();
      break;
    default:
      break;
  }
}
}  // namespace

std::vector<Position> positions(const TermPtr& t) {
  std::vector<Position> out;
  out.reserve(t->size());
  Position here;
  collect_positions(t, here, out);
  return out;
}

// --- Parser ------------------------------------------------------------------

namespace {

bool is_ident_char(unsigned char c) {
  if (std::isalnum(c) || c == '_' || c == '\'') return true;
  return c >= 0x80;  // any UTF-8 continuation/lead byte joins an identifier
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  std::vector<std::string> binders;  // innermost last

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool at_lambda() {
    if (pos < text.size() && text[pos] == '\\') return true;
    // UTF-8 for the lambda sign
    return pos + 1 < text.size() &&
           static_cast<unsigned char>(text[pos]) == 0xce &&
           static_cast<unsigned char>(text[pos + 1]) == 0xbb;
  }

  void eat_lambda() { pos += text[pos] == '\\' ? 1 : 2; }

  std::string ident() {
    std::size_t start = pos;
    while (pos < text.size()) {
      unsigned char c = static_cast<unsigned char>(text[pos]);
      // stop at a lambda sign embedded in UTF-8 soup
      if (c == 0xce && pos + 1 < text.size() &&
          static_cast<unsigned char>(text[pos + 1]) == 0xbb)
        break;
      if (!is_ident_char(c)) break;
      ++pos;
    }
    return std::string(text.substr(start, pos - start));
  }

  TermPtr make_var(const std::string& name) {
    for (std::size_t i = binders.size(); i-- > 0;) {
      if (binders[i] == name)
        return Term::bound(static_cast<int>(binders.size() - 1 - i));
    }
    return Term::free_var(name);
  }

  TermPtr term() {
    skip_ws();
    if (at_lambda()) return lam();
    return application();
  }

  TermPtr lam() {
    eat_lambda();
    std::vector<std::string> names;
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == '.') break;
      if (pos >= text.size() || !is_ident_char(text[pos]))
        throw ParseError("expected binder or '.'", pos);
      names.push_back(ident());
    }
    ++pos;  // '.'
    if (names.empty()) throw ParseError("abstraction without binder", pos);
    for (const auto& n : names) binders.push_back(n);
    TermPtr body = term();
    for (std::size_t i = names.size(); i-- > 0;) {
      binders.pop_back();
      body = Term::abs(names[i], std::move(body));
    }
    return body;
  }

  TermPtr application() {
    TermPtr acc;
    for (;;) {
      skip_ws();
      if (pos >= text.size()) break;
      char c = text[pos];
      TermPtr atom;
      if (c == '(') {
        std::size_t open = pos;
        ++pos;
        atom = term();
        skip_ws();
        if (pos >= text.size() || text[pos] != ')')
          throw ParseError("unbalanced '('", open);
        ++pos;
      } else if (at_lambda()) {
        // abstraction body extends maximally right
        atom = lam();
        acc = acc ? Term::app(std::move(acc), std::move(atom)) : atom;
        break;
      } else if (is_ident_char(static_cast<unsigned char>(c))) {
        atom = make_var(ident());
      } else {
        break;
      }
      acc = acc ? Term::app(std::move(acc), std::move(atom)) : atom;
    }
    if (!acc) throw ParseError("expected a term", pos);
    return acc;
  }
};

}  // namespace

TermPtr parse(std::string_view text) {
  Parser p{text, 0, {}};
  TermPtr t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
  return t;
}

// --- Printer -----------------------------------------------------------------

namespace {

void print_rec(const TermPtr& t, std::vector<std::string>& scope,
               std::set<std::string>& in_scope, PrintStyle style,
               std::string& out, bool fun_pos, bool arg_pos) {
  switch (t->kind()) {
    case TermKind::BoundVar: {
      int i = t->index();
      if (i < static_cast<int>(scope.size()))
        out += scope[scope.size() - 1 - i];
      else
        out += "#" + std::to_string(i);  // dangling index, debug rendering
      break;
    }
    case TermKind::FreeVar:
      out += t->name();
      break;
    case TermKind::Abs: {
      bool parens = fun_pos || arg_pos;
      if (parens) out += '(';
      std::set<std::string> avoid = free_names(t->body());
      for (const auto& s : in_scope) avoid.insert(s);
      std::string name = fresh_name(t->name().empty() ? "x" : t->name(), avoid);
      out += style == PrintStyle::Ascii ? "\\" : "λ";
      out += name;
      out += '.';
      scope.push_back(name);
      bool inserted = in_scope.insert(name).second;
      print_rec(t->body(), scope, in_scope, style, out, false, false);
      if (inserted) in_scope.erase(name);
      scope.pop_back();
      if (parens) out += ')';
      break;
    }
    case TermKind::App: {
      if (arg_pos) out += '(';
      print_rec(t->fun(), scope, in_scope, style, out, true, false);
      out += ' ';
      print_rec(t->arg(), scope, in_scope, style, out, false, true);
      if (arg_pos) out += ')';
      break;
    }
  }
}

}  // namespace

std::string print(const TermPtr& t, PrintStyle style) {
  std::string out;
  std::vector<std::string> scope;
  std::set<std::string> in_scope;
  print_rec(t, scope, in_scope, style, out, false, false);
  return out;
}

// --- Substitution ------------------------------------------------------------

TermPtr shift(const TermPtr& t, int by, int cutoff) {
  if (by == 0 || t->dangling() <= cutoff) return t;
  switch (t->kind()) {
    case TermKind::BoundVar:
      return Term::bound(t->index() >= cutoff ? t->index() + by : t->index());
    case TermKind::FreeVar:
      return t;
    case TermKind::Abs:
      return Term::abs(t->name(), shift(t->body(), by, cutoff + 1));
    case TermKind::App:
      return Term::app(shift(t->fun(), by, cutoff),
                       shift(t->arg(), by, cutoff));
  }
  return t;
}

namespace {
TermPtr subst_index(const TermPtr& t, int target, const TermPtr& value) {
  if (t->dangling() <= target) return t;  // target index cannot occur
  switch (t->kind()) {
    case TermKind::BoundVar:
      if (t->index() == target) return shift(value, target);
      return t->index() > target ? Term::bound(t->index() - 1) : t;
    case TermKind::FreeVar:
      return t;
    case TermKind::Abs:
      return Term::abs(t->name(), subst_index(t->body(), target + 1, value));
    case TermKind::App:
      return Term::app(subst_index(t->fun(), target, value),
                       subst_index(t->arg(), target, value));
  }
  return t;
}
}  // namespace

TermPtr instantiate(const TermPtr& body, const TermPtr& value) {
  return subst_index(body, 0, value);
}

TermPtr substitute_free(const TermPtr& t, std::string_view name,
                        const TermPtr& value) {
  if (!t->has_free_names()) return t;
  switch (t->kind()) {
    case TermKind::BoundVar:
      return t;
    case TermKind::FreeVar:
      return t->name() == name ? shift(value, 0) : t;
    case TermKind::Abs: {
      // free names are never captured: bound variables are indices
      return Term::abs(t->name(),
                       substitute_free(t->body(), name, shift(value, 1)));
    }
    case TermKind::App:
      return Term::app(substitute_free(t->fun(), name, value),
                       substitute_free(t->arg(), name, value));
  }
  return t;
}

TermPtr open_abs(const TermPtr& abs_term, const std::string& fresh) {
  assert(abs_term->kind() == TermKind::Abs);
  return instantiate(abs_term->body(), Term::free_var(fresh));
}

namespace {
void collect_free(const TermPtr& t, std::set<std::string>& out) {
  if (!t->has_free_names()) return;
  switch (t->kind()) {
    case TermKind::FreeVar:
      out.insert(t->name());
      break;
    case TermKind::Abs:
      collect_free(t->body(), out);
      break;
    case TermKind::App:
      collect_free(t->fun(), out);
      collect_free(t->arg(), out);
      break;
    default:
      break;
  }
}
}  // namespace

std::set<std::string> free_names(const TermPtr& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

std::string fresh_name(const std::string& hint,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace clocklam
