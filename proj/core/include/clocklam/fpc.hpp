#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clocklam/clocked_tree.hpp"
#include "clocklam/reduction.hpp"
#include "clocklam/term.hpp"

namespace clocklam {

// Closed combinators with their standard definitions.
TermPtr make_i();        // \x.x
TermPtr make_s();        // \x y z.x z (y z)
TermPtr make_b();        // \x y z.x (y z)
TermPtr make_delta();    // \a b.b (a b)     (the Owl)
TermPtr make_eta();      // \x f.f (x x f)
TermPtr make_theta();    // \a b c.b c (a a b c)   (normal form of omega_{SS})
TermPtr make_epsilon();  // \a b c.b c (a b c)
TermPtr make_a();        // B S (unreduced)
TermPtr make_y0();       // Curry: \f.(\x.f (x x)) (\x.f (x x))
TermPtr make_y1();       // Turing: eta eta
// \x.f (x x) for a chosen free head variable f.
TermPtr make_omega(const std::string& head);
// Normal form of omega_delta: \a b.b (a a b). Also goes by the letter xi;
// kept apart from the xi generation scheme.
TermPtr make_omega_delta_nf();
// \n a b c.a b c (n a b c), the xi of the generation schemes.
TermPtr make_xi_scheme();
// \y p1...pn x.x (y p1...pn x)
TermPtr make_q(std::uint32_t n);

// Catalog lookup by name; accepts ascii and greek spellings. Yn and Un
// resolve to the Boehm respectively Scott sequence representatives.
std::optional<TermPtr> make(std::string_view name);
// Replace resolvable free identifiers in a parsed term by catalog entries.
TermPtr resolve_catalog_names(const TermPtr& t);

// Y0 delta^n, the Boehm sequence.
TermPtr bohm_fpc(std::uint32_t n);
// B Y0 S^n I, the Scott sequence.
TermPtr scott_fpc(std::uint32_t n);
// Y (S S) S^n I; (k+3n+7)-reducing when Y is k-reducing.
TermPtr reducing_scott_fpc(const TermPtr& y, std::uint32_t n);

enum class Scheme { I, II, III, IV, V, VI, Epsilon, Xi };
std::optional<Scheme> scheme_from_name(std::string_view s);
const char* scheme_name(Scheme s);
// Generation schemes applied to an fpc. V takes the A-power n; VI takes the
// dummy arguments.
TermPtr scheme_fpc(Scheme scheme, const TermPtr& y, std::uint32_t n = 0,
                   const std::vector<TermPtr>& dummies = {});

// Y0 B_{n1} ... B_{nk} with B_n the vector (S S) S^n I.
TermPtr vector_fpc(const std::vector<std::uint32_t>& ns);
// N I^(n-1); a solution of N a1..an = a1..an (N a1..an) becomes an fpc.
TermPtr pre_fpc_close(const TermPtr& n_term, std::uint32_t n);

struct FpcCheckReport {
  // least k with Y x ->h^k x (Y x) syntactically, if the head reduction of
  // Y x ends in exactly that term
  std::optional<std::uint32_t> reducing_k;
  // levels to which the Boehm tree of Y x was verified to be x (x (x ...))
  std::uint32_t bt_x_omega_depth = 0;
  // bounded search for Y x =beta x (Y x)
  Tri convertible = Tri::Unknown;
};

FpcCheckReport check_fpc(const TermPtr& y, std::uint32_t depth = 8,
                         std::uint32_t fuel = 10000);

// Z and Z' with Z x = x (Z' x) and Z' x = x (Z x), built from a single fixed
// point of a pair-valued functional with Church booleans as selectors.
std::pair<TermPtr, TermPtr> make_flipflop_wfpc();

// --- delta-term toolkit ------------------------------------------------------

// Applicative combinations of the Owl.
bool is_delta_term(const TermPtr& t);
std::uint32_t delta_length(const TermPtr& t);  // number of delta occurrences

enum class DeltaSn : std::uint8_t { Sn, NotSn, Trivial };
// A non-trivial delta term is SN iff it contains exactly one occurrence of
// the subterm delta delta.
DeltaSn delta_sn_criterion(const TermPtr& t);

enum class SearchSn : std::uint8_t { Sn, NotSn, Unknown };
// Exhaustive bounded reduction: Sn when the full reduction graph terminates,
// NotSn when a cycle or an implausibly long path is found, Unknown when the
// step budget runs out first.
SearchSn delta_sn_search(const TermPtr& t, std::uint32_t fuel = 10000);

// Convertibility by the length criterion; applies only to non-trivial SN
// delta terms, Unknown otherwise.
Tri delta_convertible_by_length(const TermPtr& a, const TermPtr& b);

}  // namespace clocklam
