#include "clocklam/discrimination.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include <json.hpp>

namespace clocklam {

SimpleCheck is_simple_term(const TermPtr& t, std::uint32_t depth,
                           std::uint32_t fuel) {
  SimpleCheck out;
  TermSet visited;
  std::deque<TermPtr> work{t};
  while (!work.empty()) {
    TermPtr state = work.front();
    work.pop_front();
    if (visited.count(state)) continue;
    if (visited.size() >= depth) {
      out.status = SimpleStatus::Unknown;
      return out;
    }
    visited.insert(state);
    auto red = reduce_to_hnf(state, fuel);
    if (red.status == OutcomeStatus::FuelExhausted) {
      out.status = SimpleStatus::Unknown;
      return out;
    }
    if (red.status == OutcomeStatus::Cycle) continue;  // no hnf: simple layer
    TermPtr cur = state;
    for (const auto& step : red.trace) {
      if (!is_simple_redex(step.klass)) {
        out.status = SimpleStatus::NotSimple;
        out.witness_state = cur;
        out.witness_position = step.position;
        out.witness_class = step.klass;
        return out;
      }
      cur = beta_step_at(cur, step.position);
    }
    auto parts = decompose_hnf(red.term);
    for (const auto& c : parts.children)
      if (!visited.count(c)) work.push_back(c);
  }
  out.status = SimpleStatus::Simple;
  out.states.assign(visited.begin(), visited.end());
  return out;
}

namespace {

struct Steps {
  TermPtr term;
  std::vector<Position> path;
};

void append_prefixed(std::vector<Position>& into, const Position& prefix,
                     const StepTrace& trace) {
  for (const auto& s : trace) {
    Position p = prefix;
    p.insert(p.end(), s.position.begin(), s.position.end());
    into.push_back(std::move(p));
  }
}

// Bounded normalization of subterms, outermost first; recurses into
// subterms that fail to normalize. Dangling indices block an attempt (the
// fragment is not a standalone term), free names do not.
struct SubtermNormalizer {
  std::uint32_t fuel;
  std::uint32_t size_cap;
  TermMap<std::optional<ReductionOutcome>> cache;

  const std::optional<ReductionOutcome>& normal_form(const TermPtr& t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    std::optional<ReductionOutcome> result;
    auto out = normalize(t, fuel);
    if (out.status == OutcomeStatus::Reached) result = std::move(out);
    return cache.emplace(t, std::move(result)).first->second;
  }

  TermPtr run(const TermPtr& t, Position& here, std::vector<Position>& steps) {
    if (t->is_normal_form()) return t;
    if (t->dangling() == 0 && t->size() <= size_cap) {
      const auto& nf = normal_form(t);
      if (nf) {
        append_prefixed(steps, here, nf->trace);
        return nf->term;
      }
    }
    switch (t->kind()) {
      case TermKind::Abs: {
        here.push_back(0);
        TermPtr body = run(t->body(), here, steps);
        here.pop_back();
        return body == t->body() ? t : Term::abs(t->name(), body);
      }
      case TermKind::App: {
        here.push_back(1);
        TermPtr f = run(t->fun(), here, steps);
        here.back() = 2;
        TermPtr a = run(t->arg(), here, steps);
        here.pop_back();
        return f == t->fun() && a == t->arg() ? t : Term::app(f, a);
      }
      default:
        return t;
    }
  }
};

// Contract linear redexes (leftmost-outermost) to a fixpoint; these steps
// strictly shrink the term.
Steps linear_tidy(const TermPtr& t) {
  Steps s{t, {}};
  for (;;) {
    bool contracted = false;
    for (const auto& p : redex_positions(s.term)) {
      RedexClass c = classify_redex(s.term, p);
      if (c == RedexClass::Linear || c == RedexClass::Both) {
        s.term = beta_step_at(s.term, p);
        s.path.push_back(p);
        contracted = true;
        break;
      }
    }
    if (!contracted) return s;
  }
}

}  // namespace

std::optional<SimpleReduct> find_simple_reduct(const TermPtr& t,
                                               const SimpleSearchBudget& budget) {
  SubtermNormalizer cn{budget.normalize_fuel, budget.normalize_size, {}};
  TermSet tested;

  auto attempt = [&](const Steps& cand) -> std::optional<SimpleReduct> {
    if (tested.count(cand.term)) return std::nullopt;
    tested.insert(cand.term);
    SimpleCheck check = is_simple_term(cand.term, budget.states, budget.fuel);
    if (check.status != SimpleStatus::Simple) return std::nullopt;
    return SimpleReduct{cand.term, cand.path, std::move(check)};
  };

  auto closed_norm = [&](const Steps& base) {
    Steps out{base.term, base.path};
    Position here;
    out.term = cn.run(base.term, here, out.path);
    return out;
  };

  Steps head{t, {}};
  for (std::uint32_t h = 0;; ++h) {
    std::vector<Steps> candidates;
    candidates.push_back(head);
    Steps lin = linear_tidy(head.term);
    lin.path.insert(lin.path.begin(), head.path.begin(), head.path.end());
    candidates.push_back(lin);
    candidates.push_back(closed_norm(head));
    candidates.push_back(closed_norm(lin));
    for (auto& c : candidates) {
      Steps lin2 = linear_tidy(c.term);
      if (!lin2.path.empty()) {
        lin2.path.insert(lin2.path.begin(), c.path.begin(), c.path.end());
        if (auto r = attempt(lin2)) return r;
      }
      if (auto r = attempt(c)) return r;
    }
    if (h >= budget.head_steps) break;
    auto p = head_redex_position(head.term);
    if (!p) break;  // hnf reached; deeper candidates came from the tidiers
    head.path.push_back(*p);
    head.term = beta_step_at(head.term, *p);
  }
  return std::nullopt;
}

const char* verdict_kind_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Inconvertible: return "inconvertible";
    case VerdictKind::Convertible: return "convertible";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* method_name(Method m) {
  switch (m) {
    case Method::None: return "none";
    case Method::BtDifference: return "bt-difference";
    case Method::SimpleSimple: return "simple-simple";
    case Method::AtomicSimpleSimple: return "atomic-simple-simple";
    case Method::SimpleVsReduct: return "simple-vs-reduct";
  }
  return "?";
}

namespace {

// A certified structural difference of the truncated Boehm trees: both
// subtrees at the differing point are real (hnf layer or certified bottom)
// and the path to it contains no Unknown.
struct BtDiff {
  bool found = false;
  Position position;
};

bool stack_heads_match(
    const std::vector<std::pair<std::string, std::string>>& stack,
    const std::string& a, const std::string& b) {
  for (std::size_t i = stack.size(); i-- > 0;) {
    bool ha = stack[i].first == a;
    bool hb = stack[i].second == b;
    if (ha || hb) return ha && hb;
  }
  return a == b;
}

void bt_diff_rec(const TreePtr& a, const TreePtr& b, Position& here,
                 std::vector<std::pair<std::string, std::string>>& names,
                 BtDiff& out) {
  if (out.found) return;
  if (a->kind == TreeKind::Unknown || b->kind == TreeKind::Unknown) return;
  if (a->kind != b->kind || a->binders.size() != b->binders.size() ||
      a->children.size() != b->children.size()) {
    out.found = true;
    out.position = here;
    return;
  }
  for (std::size_t i = 0; i < a->binders.size(); ++i)
    names.emplace_back(a->binders[i], b->binders[i]);
  if (a->kind == TreeKind::BtNode &&
      !stack_heads_match(names, a->head, b->head)) {
    out.found = true;
    out.position = here;
  }
  for (std::size_t i = 0; i < a->children.size() && !out.found; ++i) {
    std::size_t n = a->binders.size();
    std::size_t m = a->children.size();
    for (std::size_t k = 0; k < n; ++k) here.push_back(0);
    for (std::size_t k = 0; k + 1 + i < m; ++k) here.push_back(1);
    here.push_back(2);
    bt_diff_rec(a->children[i], b->children[i], here, names, out);
    here.resize(here.size() - (n + (m - 1 - i) + 1));
  }
  names.resize(names.size() - a->binders.size());
}

struct RationalPair {
  RationalTree tree_m, tree_n;
};

std::vector<std::string> witness_positions_of(const ProductCert& cert) {
  std::vector<std::string> out;
  for (auto idx : cert.witnesses)
    out.push_back(position_to_string(cert.pairs[idx].position));
  return out;
}

std::vector<std::pair<std::string, std::string>> cycle_states_of(
    const ProductCert& cert, const RationalTree& a, const RationalTree& b) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& pi : cert.pairs) {
    if (pi.recurrent)
      out.emplace_back(print(a.nodes[pi.a].state), print(b.nodes[pi.b].state));
  }
  return out;
}

}  // namespace

Verdict discriminate(const TermPtr& m, const TermPtr& n,
                     const DiscriminationConfig& config) {
  Verdict v;

  // (1) bounded convertibility search
  auto conv = convertible_bounded(m, n, config.convert_budget());
  if (conv.status == ConvertOutcome::Status::Convertible) {
    v.kind = VerdictKind::Convertible;
    v.common_reduct = conv.witness;
    v.path_m = conv.path_a;
    v.path_n = conv.path_b;
    return v;
  }

  // (2) fully resolved Boehm tree difference on the truncations
  TreeConfig tree_cfg{config.depth, config.fuel, ClockMode::Count};
  TreePtr bt_m = clocked_bt(m, tree_cfg);
  TreePtr bt_n = clocked_bt(n, tree_cfg);
  {
    BtDiff diff;
    Position here;
    std::vector<std::pair<std::string, std::string>> names;
    bt_diff_rec(bt_m, bt_n, here, names, diff);
    if (diff.found) {
      v.kind = VerdictKind::Inconvertible;
      v.method = Method::BtDifference;
      v.difference_position = diff.position;
      v.established_depth = config.depth;
      v.reduct_m = m;
      v.reduct_n = n;
      return v;
    }
  }

  // (3)/(4) simple reducts under count then atomic clocks
  auto rm = find_simple_reduct(m, config.simple_budget);
  auto rn = find_simple_reduct(n, config.simple_budget);
  if (rm && rn && alpha_eq(rm->term, rn->term)) {
    // both sides reduce to the same simple term
    v.kind = VerdictKind::Convertible;
    v.common_reduct = rm->term;
    v.path_m = rm->path;
    v.path_n = rn->path;
    return v;
  }
  if (rm && rn) {
    for (ClockMode mode : {ClockMode::Count, ClockMode::Atomic}) {
      if (mode == ClockMode::Atomic && !config.atomic) continue;
      RationalConfig rc{config.rational_states, config.fuel, mode};
      auto rat_m = rational_expand(rm->term, rc);
      auto rat_n = rational_expand(rn->term, rc);
      if (!rat_m || !rat_n) break;
      ProductCert cert;
      Tri io = rel_infinitely_often_rational(*rat_m, *rat_n, RelKind::Ne,
                                             &cert);
      if (!cert.structure_ok && cert.complete) {
        // both trees fully certified and structurally different
        v.kind = VerdictKind::Inconvertible;
        v.method = Method::BtDifference;
        v.reduct_m = rm->term;
        v.reduct_n = rn->term;
        v.reduct_path_m = rm->path;
        v.reduct_path_n = rn->path;
        for (const auto& pi : cert.pairs)
          if (pi.structure_mismatch) {
            v.difference_position = pi.position;
            break;
          }
        return v;
      }
      if (io == Tri::Holds) {
        v.kind = VerdictKind::Inconvertible;
        v.method = mode == ClockMode::Count ? Method::SimpleSimple
                                            : Method::AtomicSimpleSimple;
        v.relation = "!= infinitely often";
        v.reduct_m = rm->term;
        v.reduct_n = rn->term;
        v.reduct_path_m = rm->path;
        v.reduct_path_n = rn->path;
        v.witness_positions = witness_positions_of(cert);
        v.cycle_states = cycle_states_of(cert, *rat_m, *rat_n);
        return v;
      }
    }
  }

  // (5) one-sided: a simple reduct strictly slower, infinitely often, than
  // some plain reduct of the other term
  auto one_sided = [&](const SimpleReduct& simple, const TermPtr& other,
                       bool simple_is_m) -> bool {
    RationalConfig rc{config.rational_states, config.fuel,
                      config.atomic ? ClockMode::Atomic : ClockMode::Count};
    auto rat_simple = rational_expand(simple.term, rc);
    if (!rat_simple) return false;
    // candidate reducts of the other side: its head reducts
    Steps cand{other, {}};
    for (std::uint32_t h = 0; h <= config.simple_budget.head_steps; ++h) {
      auto rat_other = rational_expand(cand.term, rc);
      if (rat_other) {
        ProductCert cert;
        Tri io = rel_infinitely_often_rational(*rat_simple, *rat_other,
                                               RelKind::Gt, &cert);
        if (io == Tri::Holds && cert.structure_ok) {
          v.kind = VerdictKind::Inconvertible;
          v.method = Method::SimpleVsReduct;
          v.relation = "> infinitely often";
          v.reduct_m = simple_is_m ? simple.term : cand.term;
          v.reduct_n = simple_is_m ? cand.term : simple.term;
          v.reduct_path_m = simple_is_m ? simple.path : cand.path;
          v.reduct_path_n = simple_is_m ? cand.path : simple.path;
          v.witness_positions = witness_positions_of(cert);
          return true;
        }
      }
      auto p = head_redex_position(cand.term);
      if (!p) break;
      cand.path.push_back(*p);
      cand.term = beta_step_at(cand.term, *p);
    }
    return false;
  };
  if (rm && one_sided(*rm, n, true)) return v;
  if (rn && one_sided(*rn, m, false)) return v;

  v.kind = VerdictKind::Inconclusive;
  if (!rm && !rn)
    v.reason = "no simple reduct found for either term within budget";
  else if (!rm || !rn)
    v.reason = "no simple reduct found for one term; one-sided clock "
               "comparison failed";
  else
    v.reason = "clocked Boehm trees not separated at the given budgets";
  return v;
}

namespace {
TermPtr replay(const TermPtr& start, const std::vector<Position>& path) {
  TermPtr cur = start;
  for (const auto& p : path) cur = beta_step_at(cur, p);
  return cur;
}
}  // namespace

std::string verdict_to_json(const Verdict& v,
                            const DiscriminationConfig& config) {
  nlohmann::json j;
  j["verdict"] = verdict_kind_name(v.kind);
  j["method"] = method_name(v.method);
  nlohmann::json cert;
  if (v.kind == VerdictKind::Convertible) {
    cert["commonReduct"] = print(v.common_reduct);
    nlohmann::json pm = nlohmann::json::array(), pn = nlohmann::json::array();
    for (const auto& p : v.path_m) pm.push_back(position_to_string(p));
    for (const auto& p : v.path_n) pn.push_back(position_to_string(p));
    cert["pathM"] = std::move(pm);
    cert["pathN"] = std::move(pn);
  } else if (v.kind == VerdictKind::Inconvertible) {
    cert["reductM"] = v.reduct_m ? print(v.reduct_m) : "";
    cert["reductN"] = v.reduct_n ? print(v.reduct_n) : "";
    cert["relation"] = v.relation;
    cert["witnessPositions"] = v.witness_positions;
    nlohmann::json cyc = nlohmann::json::array();
    for (const auto& [a, b] : v.cycle_states)
      cyc.push_back({{"stateM", a}, {"stateN", b}});
    cert["cycleNodes"] = std::move(cyc);
    if (v.difference_position)
      cert["differencePosition"] = position_to_string(*v.difference_position);
  } else {
    cert["reason"] = v.reason;
  }
  j["certificate"] = std::move(cert);
  j["budgets"] = {{"depth", config.depth},
                  {"fuel", config.fuel},
                  {"atomic", config.atomic}};
  return j.dump();
}

bool verify_verdict(const TermPtr& m, const TermPtr& n, const Verdict& v,
                    const DiscriminationConfig& config) {
  switch (v.kind) {
    case VerdictKind::Convertible: {
      TermPtr wm = replay(m, v.path_m);
      TermPtr wn = replay(n, v.path_n);
      return alpha_eq(wm, wn) && alpha_eq(wm, v.common_reduct);
    }
    case VerdictKind::Inconvertible: {
      switch (v.method) {
        case Method::BtDifference: {
          if (!v.reduct_path_m.empty() || !v.reduct_path_n.empty()) {
            if (!alpha_eq(replay(m, v.reduct_path_m), v.reduct_m)) return false;
            if (!alpha_eq(replay(n, v.reduct_path_n), v.reduct_n)) return false;
          }
          TreeConfig tc{config.depth, config.fuel, ClockMode::Count};
          BtDiff diff;
          Position here;
          std::vector<std::pair<std::string, std::string>> names;
          TreePtr a = clocked_bt(m, tc), b = clocked_bt(n, tc);
          bt_diff_rec(a, b, here, names, diff);
          if (diff.found) return true;
          // rational-certified difference
          RationalConfig rc{config.rational_states, config.fuel,
                            ClockMode::Count};
          auto ra = rational_expand(v.reduct_m, rc);
          auto rb = rational_expand(v.reduct_n, rc);
          if (!ra || !rb) return false;
          ProductCert cert;
          rel_infinitely_often_rational(*ra, *rb, RelKind::Ne, &cert);
          return cert.complete && !cert.structure_ok;
        }
        case Method::SimpleSimple:
        case Method::AtomicSimpleSimple: {
          if (!alpha_eq(replay(m, v.reduct_path_m), v.reduct_m)) return false;
          if (!alpha_eq(replay(n, v.reduct_path_n), v.reduct_n)) return false;
          if (is_simple_term(v.reduct_m, config.simple_budget.states,
                             config.fuel).status != SimpleStatus::Simple)
            return false;
          if (is_simple_term(v.reduct_n, config.simple_budget.states,
                             config.fuel).status != SimpleStatus::Simple)
            return false;
          ClockMode mode = v.method == Method::SimpleSimple
                               ? ClockMode::Count
                               : ClockMode::Atomic;
          RationalConfig rc{config.rational_states, config.fuel, mode};
          auto ra = rational_expand(v.reduct_m, rc);
          auto rb = rational_expand(v.reduct_n, rc);
          if (!ra || !rb) return false;
          ProductCert cert;
          return rel_infinitely_often_rational(*ra, *rb, RelKind::Ne, &cert) ==
                     Tri::Holds &&
                 cert.structure_ok;
        }
        case Method::SimpleVsReduct: {
          if (!alpha_eq(replay(m, v.reduct_path_m), v.reduct_m)) return false;
          if (!alpha_eq(replay(n, v.reduct_path_n), v.reduct_n)) return false;
          bool m_simple =
              is_simple_term(v.reduct_m, config.simple_budget.states,
                             config.fuel).status == SimpleStatus::Simple;
          bool n_simple =
              is_simple_term(v.reduct_n, config.simple_budget.states,
                             config.fuel).status == SimpleStatus::Simple;
          if (!m_simple && !n_simple) return false;
          RationalConfig rc{config.rational_states, config.fuel,
                            config.atomic ? ClockMode::Atomic
                                          : ClockMode::Count};
          auto ra = rational_expand(v.reduct_m, rc);
          auto rb = rational_expand(v.reduct_n, rc);
          if (!ra || !rb) return false;
          if (m_simple &&
              rel_infinitely_often_rational(*ra, *rb, RelKind::Gt) ==
                  Tri::Holds)
            return true;
          return n_simple &&
                 rel_infinitely_often_rational(*rb, *ra, RelKind::Gt) ==
                     Tri::Holds;
        }
        default:
          return false;
      }
    }
    case VerdictKind::Inconclusive:
      return true;
  }
  return false;
}

}  // namespace clocklam
