#include "clocklam/fpc.hpp"

#include <cassert>
#include <functional>

namespace clocklam {

namespace {
TermPtr parsed(const char* text) { return parse(text); }
}  // namespace

TermPtr make_i() { return parsed("\\x.x"); }
TermPtr make_s() { return parsed("\\x y z.x z (y z)"); }
TermPtr make_b() { return parsed("\\x y z.x (y z)"); }
TermPtr make_delta() { return parsed("\\a b.b (a b)"); }
TermPtr make_eta() { return parsed("\\x f.f (x x f)"); }
TermPtr make_theta() { return parsed("\\a b c.b c (a a b c)"); }
TermPtr make_epsilon() { return parsed("\\a b c.b c (a b c)"); }
TermPtr make_a() { return Term::app(make_b(), make_s()); }
TermPtr make_y0() { return parsed("\\f.(\\x.f (x x)) (\\x.f (x x))"); }
TermPtr make_y1() { return Term::app(make_eta(), make_eta()); }
TermPtr make_omega_delta_nf() { return parsed("\\a b.b (a a b)"); }
TermPtr make_xi_scheme() { return parsed("\\n a b c.a b c (n a b c)"); }

TermPtr make_omega(const std::string& head) {
  // \x.head (x x)
  return Term::abs("x", Term::app(Term::free_var(head),
                                  Term::app(Term::bound(0), Term::bound(0))));
}

TermPtr make_q(std::uint32_t n) {
  // \y p1...pn x.x (y p1...pn x)
  TermPtr spine = Term::bound(static_cast<int>(n) + 1);  // y
  for (std::uint32_t i = 0; i < n; ++i)
    spine = Term::app(spine, Term::bound(static_cast<int>(n - i)));
  spine = Term::app(spine, Term::bound(0));               // y p1..pn x
  TermPtr body = Term::app(Term::bound(0), spine);        // x (...)
  TermPtr t = Term::abs("x", body);
  for (std::uint32_t i = n; i > 0; --i)
    t = Term::abs("p" + std::to_string(i), t);
  return Term::abs("y", t);
}

TermPtr bohm_fpc(std::uint32_t n) { return apply_n(make_y0(), make_delta(), n); }

TermPtr scott_fpc(std::uint32_t n) {
  TermPtr t = Term::app(make_b(), make_y0());
  t = apply_n(t, make_s(), n);
  return Term::app(t, make_i());
}

TermPtr reducing_scott_fpc(const TermPtr& y, std::uint32_t n) {
  TermPtr ss = Term::app(make_s(), make_s());
  TermPtr t = Term::app(y, ss);
  t = apply_n(t, make_s(), n);
  return Term::app(t, make_i());
}

std::optional<Scheme> scheme_from_name(std::string_view s) {
  if (s == "i") return Scheme::I;
  if (s == "ii") return Scheme::II;
  if (s == "iii") return Scheme::III;
  if (s == "iv") return Scheme::IV;
  if (s == "v") return Scheme::V;
  if (s == "vi") return Scheme::VI;
  if (s == "epsilon") return Scheme::Epsilon;
  if (s == "xi") return Scheme::Xi;
  return std::nullopt;
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::I: return "i";
    case Scheme::II: return "ii";
    case Scheme::III: return "iii";
    case Scheme::IV: return "iv";
    case Scheme::V: return "v";
    case Scheme::VI: return "vi";
    case Scheme::Epsilon: return "epsilon";
    case Scheme::Xi: return "xi";
  }
  return "?";
}

TermPtr scheme_fpc(Scheme scheme, const TermPtr& y, std::uint32_t n,
                   const std::vector<TermPtr>& dummies) {
  TermPtr a = make_a();
  TermPtr i = make_i();
  switch (scheme) {
    case Scheme::I: {
      // printed as Y(S(AI)I with a parenthesis missing; the bracketing that
      // passes the fpc check is Y (S (A I)) I
      TermPtr ai = Term::app(a, i);
      return Term::app(Term::app(y, Term::app(make_s(), ai)), i);
    }
    case Scheme::II: {
      TermPtr aaa = Term::app(Term::app(a, a), a);
      return Term::app(Term::app(Term::app(y, aaa), i), i);
    }
    case Scheme::III:
      return Term::app(y, Term::app(Term::app(a, i), i));
    case Scheme::IV:
      return Term::app(Term::app(y, Term::app(Term::app(a, a), i)), i);
    case Scheme::V: {
      TermPtr aaa = Term::app(Term::app(a, a), a);
      TermPtr t = apply_n(Term::app(y, aaa), a, n);
      return Term::app(Term::app(t, i), i);
    }
    case Scheme::VI: {
      TermPtr t = Term::app(
          y, make_q(static_cast<std::uint32_t>(dummies.size())));
      for (const auto& d : dummies) t = Term::app(t, d);
      return t;
    }
    case Scheme::Epsilon:
      return Term::app(Term::app(y, make_epsilon()), i);
    case Scheme::Xi:
      return Term::app(Term::app(Term::app(y, make_xi_scheme()), i), i);
  }
  throw std::invalid_argument("unknown scheme");
}

TermPtr vector_fpc(const std::vector<std::uint32_t>& ns) {
  TermPtr t = make_y0();
  TermPtr ss = Term::app(make_s(), make_s());
  for (auto n : ns) {
    t = Term::app(t, ss);
    t = apply_n(t, make_s(), n);
    t = Term::app(t, make_i());
  }
  return t;
}

TermPtr pre_fpc_close(const TermPtr& n_term, std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("pre_fpc_close needs n >= 1");
  return apply_n(n_term, make_i(), n - 1);
}

std::optional<TermPtr> make(std::string_view name) {
  if (name == "I") return make_i();
  if (name == "S") return make_s();
  if (name == "B") return make_b();
  if (name == "A") return make_a();
  if (name == "delta" || name == "δ") return make_delta();
  if (name == "eta" || name == "η") return make_eta();
  if (name == "theta" || name == "θ") return make_theta();
  if (name == "epsilon" || name == "ε") return make_epsilon();
  // xi doubles as a name for the normal form of omega_delta; the
  // generation-scheme xi is a separate catalog entry.
  if (name == "xi" || name == "ξ" || name == "omega_delta_nf")
    return make_omega_delta_nf();
  if (name == "xi_scheme") return make_xi_scheme();
  if (name == "omega_f") return make_omega("f");
  if (name.size() >= 2 && name[0] == 'Q') {
    std::uint32_t n = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return make_q(n);
  }
  if (name.size() >= 2 && (name[0] == 'Y' || name[0] == 'U')) {
    std::uint32_t n = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (name[0] == 'U') return scott_fpc(n);
    if (n == 0) return make_y0();
    // the working representative of Y_n: eta eta delta^(n-1), whose head
    // reduction realizes the 2n clock directly
    return apply_n(make_y1(), make_delta(), n - 1);
  }
  return std::nullopt;
}

TermPtr resolve_catalog_names(const TermPtr& t) {
  switch (t->kind()) {
    case TermKind::FreeVar: {
      auto r = make(t->name());
      return r ? *r : t;
    }
    case TermKind::Abs:
      return Term::abs(t->name(), resolve_catalog_names(t->body()));
    case TermKind::App:
      return Term::app(resolve_catalog_names(t->fun()),
                       resolve_catalog_names(t->arg()));
    default:
      return t;
  }
}

FpcCheckReport check_fpc(const TermPtr& y, std::uint32_t depth,
                         std::uint32_t fuel) {
  FpcCheckReport report;
  std::string x = fresh_name("x", free_names(y));
  TermPtr xv = Term::free_var(x);
  TermPtr yx = Term::app(y, xv);
  TermPtr target = Term::app(xv, yx);

  auto head = reduce_to_hnf(yx, fuel);
  if (head.status == OutcomeStatus::Reached && alpha_eq(head.term, target))
    report.reducing_k = static_cast<std::uint32_t>(head.trace.size());

  TreeConfig cfg{depth + 1, fuel, ClockMode::Count};
  TreePtr tree = clocked_bt(yx, cfg);
  const ClockedTree* cur = tree.get();
  std::uint32_t good = 0;
  while (good < depth && cur->kind == TreeKind::BtNode &&
         cur->binders.empty() && cur->head == x && cur->children.size() == 1) {
    ++good;
    cur = cur->children[0].get();
  }
  report.bt_x_omega_depth = good;

  auto conv = convertible_bounded(yx, target,
                                  {std::min<std::uint32_t>(fuel, 2000), 2000});
  report.convertible = conv.status == ConvertOutcome::Status::Convertible
                           ? Tri::Holds
                           : Tri::Unknown;
  return report;
}

std::pair<TermPtr, TermPtr> make_flipflop_wfpc() {
  TermPtr pair_c = parse("\\a b s.s a b");
  TermPtr tru = parse("\\a b.a");
  TermPtr fls = parse("\\a b.b");
  // G p = pair (\x.x (p false x)) (\x.x (p true x))
  auto component = [&](const TermPtr& sel) {
    //  \x.x (p sel x), with p bound one binder further out
    TermPtr px = Term::app(Term::app(Term::bound(1), sel), Term::bound(0));
    return Term::abs("x", Term::app(Term::bound(0), px));
  };
  TermPtr g_body =
      Term::app(Term::app(pair_c, component(fls)), component(tru));
  TermPtr g = Term::abs("p", g_body);
  TermPtr p = Term::app(make_y0(), g);
  return {Term::app(p, tru), Term::app(p, fls)};
}

// --- delta-term toolkit --------------------------------------------------------

bool is_delta_term(const TermPtr& t) {
  if (t->kind() == TermKind::App)
    return is_delta_term(t->fun()) && is_delta_term(t->arg());
  return alpha_eq(t, make_delta());
}

namespace {
void require_delta(const TermPtr& t) {
  if (!is_delta_term(t)) throw std::invalid_argument("not a delta term");
}

std::uint32_t count_delta_delta(const TermPtr& t, const TermPtr& dd) {
  std::uint32_t n = alpha_eq(t, dd) ? 1 : 0;
  if (t->kind() == TermKind::App)
    n += count_delta_delta(t->fun(), dd) + count_delta_delta(t->arg(), dd);
  return n;
}
}  // namespace

std::uint32_t delta_length(const TermPtr& t) {
  require_delta(t);
  if (t->kind() == TermKind::App)
    return delta_length(t->fun()) + delta_length(t->arg());
  return 1;
}

DeltaSn delta_sn_criterion(const TermPtr& t) {
  require_delta(t);
  if (t->kind() != TermKind::App) return DeltaSn::Trivial;
  TermPtr dd = Term::app(make_delta(), make_delta());
  return count_delta_delta(t, dd) == 1 ? DeltaSn::Sn : DeltaSn::NotSn;
}

SearchSn delta_sn_search(const TermPtr& t, std::uint32_t fuel) {
  require_delta(t);
  std::uint32_t path_limit =
      std::min<std::uint32_t>(fuel, 4 * t->size() + 64);
  std::uint32_t budget = fuel;
  TermSet proven;
  TermSet on_path;
  std::function<SearchSn(const TermPtr&, std::uint32_t)> dfs =
      [&](const TermPtr& cur, std::uint32_t depth) -> SearchSn {
    if (cur->is_normal_form()) return SearchSn::Sn;
    if (depth >= path_limit) return SearchSn::NotSn;
    if (on_path.count(cur)) return SearchSn::NotSn;  // reduction cycle
    if (proven.count(cur)) return SearchSn::Sn;
    on_path.insert(cur);
    for (const auto& p : redex_positions(cur)) {
      if (budget == 0) {
        on_path.erase(cur);
        return SearchSn::Unknown;
      }
      --budget;
      SearchSn r = dfs(beta_step_at(cur, p), depth + 1);
      if (r != SearchSn::Sn) {
        on_path.erase(cur);
        return r;
      }
    }
    on_path.erase(cur);
    proven.insert(cur);
    return SearchSn::Sn;
  };
  return dfs(t, 0);
}

Tri delta_convertible_by_length(const TermPtr& a, const TermPtr& b) {
  require_delta(a);
  require_delta(b);
  if (delta_sn_criterion(a) != DeltaSn::Sn ||
      delta_sn_criterion(b) != DeltaSn::Sn)
    return Tri::Unknown;
  return delta_length(a) == delta_length(b) ? Tri::Holds : Tri::Fails;
}

}  // namespace clocklam
