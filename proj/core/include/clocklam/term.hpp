#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace clocklam {

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind : std::uint8_t { BoundVar, FreeVar, Abs, App };

// Immutable lambda term. Binding is index-based (de Bruijn), so
// alpha-equivalent terms have identical structure; abstraction nodes keep
// the surface binder name as a display hint only. Free variables are plain
// names. Structural hash and size are precomputed at construction.
class Term {
 public:
  TermKind kind() const { return kind_; }
  int index() const { return index_; }          // BoundVar
  const std::string& name() const { return name_; }  // FreeVar name / Abs hint
  const TermPtr& body() const { return left_; }  // Abs
  const TermPtr& fun() const { return left_; }   // App
  const TermPtr& arg() const { return right_; }  // App

  std::size_t hash() const { return hash_; }
  std::uint32_t size() const { return size_; }
  // Smallest n such that the term has no dangling index >= n.
  int dangling() const { return dangling_; }
  bool has_free_names() const { return has_free_; }
  bool is_closed() const { return dangling_ == 0 && !has_free_; }
  bool is_normal_form() const { return normal_; }

  static TermPtr bound(int index);
  static TermPtr free_var(std::string name);
  static TermPtr abs(std::string hint, TermPtr body);
  static TermPtr app(TermPtr fun, TermPtr arg);

 private:
  Term() = default;

  TermKind kind_ = TermKind::BoundVar;
  int index_ = 0;
  std::string name_;
  TermPtr left_, right_;
  std::size_t hash_ = 0;
  std::uint32_t size_ = 1;
  int dangling_ = 0;
  bool has_free_ = false;
  bool normal_ = true;
};

// Structural equality modulo binder hints, i.e. alpha equality.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

struct TermHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return alpha_eq(a, b);
  }
};
using TermSet = std::unordered_set<TermPtr, TermHash, TermEq>;
template <class V>
using TermMap = std::unordered_map<TermPtr, V, TermHash, TermEq>;

// Convenience spine constructors: apply(f, {a, b}) builds (f a) b.
TermPtr apply(TermPtr fun, const std::vector<TermPtr>& args);
TermPtr apply_n(TermPtr fun, const TermPtr& arg, std::uint32_t n);

// --- Positions ------------------------------------------------------------

// Path into a term over {0, 1, 2}: 0 descends under an abstraction,
// 1 into the function side, 2 into the argument side of an application.
using Position = std::vector<std::uint8_t>;

std::string position_to_string(const Position& p);  // epsilon renders as ""
std::optional<Position> position_from_string(std::string_view s);

struct PositionHash {
  std::size_t operator()(const Position& p) const;
};

std::optional<TermPtr> subterm_at(const TermPtr& t, const Position& p);
std::vector<Position> positions(const TermPtr& t);

// --- Parsing and printing --------------------------------------------------

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

// Grammar: term := lam | app ; lam := ("\" | "λ") ident+ "." term ;
// app := atom+ (left associative) ; atom := ident | "(" term ")".
// Unknown identifiers become free variables.
TermPtr parse(std::string_view text);

enum class PrintStyle { Ascii, Unicode };
std::string print(const TermPtr& t, PrintStyle style = PrintStyle::Ascii);

// --- Substitution machinery -------------------------------------------------

TermPtr shift(const TermPtr& t, int by, int cutoff = 0);
// Replace index 0 in the body of an eliminated binder, capture free.
TermPtr instantiate(const TermPtr& body, const TermPtr& value);
// Capture-avoiding substitution of a free variable by a term.
TermPtr substitute_free(const TermPtr& t, std::string_view name,
                        const TermPtr& value);
// Body of an abstraction with the binder opened as a free variable.
TermPtr open_abs(const TermPtr& abs_term, const std::string& fresh);

std::set<std::string> free_names(const TermPtr& t);
// Deterministic fresh-name choice: hint, hint1, hint2, ...
std::string fresh_name(const std::string& hint,
                       const std::set<std::string>& avoid);

}  // namespace clocklam
