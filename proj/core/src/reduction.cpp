#include "clocklam/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include <json.hpp>

namespace clocklam {

const char* redex_class_name(RedexClass c) {
  switch (c) {
    case RedexClass::Linear: return "linear";
    case RedexClass::CallByValue: return "cbv";
    case RedexClass::Both: return "both";
    case RedexClass::Neither: return "neither";
  }
  return "?";
}

std::string trace_to_json(const StepTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : trace) {
    arr.push_back({{"position", position_to_string(s.position)},
                   {"kind", redex_class_name(s.klass)}});
  }
  return arr.dump();
}

bool is_hnf(const TermPtr& t) {
  TermPtr cur = t;
  while (cur->kind() == TermKind::Abs) cur = cur->body();
  while (cur->kind() == TermKind::App) cur = cur->fun();
  return cur->kind() != TermKind::Abs;
}

bool is_whnf(const TermPtr& t) {
  if (t->kind() == TermKind::Abs) return true;
  TermPtr cur = t;
  while (cur->kind() == TermKind::App) cur = cur->fun();
  return cur->kind() != TermKind::Abs;
}

std::optional<Position> head_redex_position(const TermPtr& t) {
  Position pos;
  TermPtr cur = t;
  while (cur->kind() == TermKind::Abs) {
    pos.push_back(0);
    cur = cur->body();
  }
  // walk to the head of the application spine
  std::uint32_t apps = 0;
  TermPtr head = cur;
  while (head->kind() == TermKind::App) {
    head = head->fun();
    ++apps;
  }
  if (head->kind() != TermKind::Abs || apps == 0) return std::nullopt;
  for (std::uint32_t i = 0; i + 1 < apps; ++i) pos.push_back(1);
  return pos;
}

namespace {
void collect_redexes(const TermPtr& t, Position& here,
                     std::vector<Position>& out) {
  if (t->is_normal_form()) return;
  switch (t->kind()) {
    case TermKind::Abs:
      here.push_back(0);
      collect_redexes(t->body(), here, out);
      here.pop_back();
      break;
    case TermKind::App:
      if (t->fun()->kind() == TermKind::Abs) out.push_back(here);
      here.push_back(1);
      collect_redexes(t->fun(), here, out);
      here.back() = 2;
      collect_redexes(t->arg(), here, out);
      here.pop_back();
      break;
    default:
      break;
  }
}

int count_bound(const TermPtr& t, int target) {
  if (t->dangling() <= target) return 0;
  switch (t->kind()) {
    case TermKind::BoundVar:
      return t->index() == target ? 1 : 0;
    case TermKind::Abs:
      return count_bound(t->body(), target + 1);
    case TermKind::App:
      return count_bound(t->fun(), target) + count_bound(t->arg(), target);
    default:
      return 0;
  }
}

TermPtr contract(const TermPtr& redex) {
  return instantiate(redex->fun()->body(), redex->arg());
}

TermPtr rebuild_at(const TermPtr& t, const Position& p, std::size_t i,
                   const TermPtr& replacement) {
  if (i == p.size()) return replacement;
  switch (t->kind()) {
    case TermKind::Abs:
      if (p[i] != 0) throw std::invalid_argument("invalid position");
      return Term::abs(t->name(), rebuild_at(t->body(), p, i + 1, replacement));
    case TermKind::App:
      if (p[i] == 1)
        return Term::app(rebuild_at(t->fun(), p, i + 1, replacement), t->arg());
      if (p[i] == 2)
        return Term::app(t->fun(), rebuild_at(t->arg(), p, i + 1, replacement));
      throw std::invalid_argument("invalid position");
    default:
      throw std::invalid_argument("invalid position");
  }
}
}  // namespace

std::vector<Position> redex_positions(const TermPtr& t) {
  std::vector<Position> out;
  Position here;
  collect_redexes(t, here, out);
  return out;
}

TermPtr beta_step_at(const TermPtr& t, const Position& p) {
  auto sub = subterm_at(t, p);
  if (!sub) throw std::invalid_argument("invalid position");
  const TermPtr& redex = *sub;
  if (redex->kind() != TermKind::App ||
      redex->fun()->kind() != TermKind::Abs)
    throw std::invalid_argument("not a redex");
  return rebuild_at(t, p, 0, contract(redex));
}

RedexClass classify_redex(const TermPtr& t, const Position& p) {
  auto sub = subterm_at(t, p);
  if (!sub) throw std::invalid_argument("invalid position");
  const TermPtr& redex = *sub;
  if (redex->kind() != TermKind::App ||
      redex->fun()->kind() != TermKind::Abs)
    throw std::invalid_argument("not a redex");
  bool linear = count_bound(redex->fun()->body(), 0) <= 1;
  bool cbv = redex->arg()->is_normal_form();
  if (linear && cbv) return RedexClass::Both;
  if (linear) return RedexClass::Linear;
  if (cbv) return RedexClass::CallByValue;
  return RedexClass::Neither;
}

namespace {

// Shared driver for the bounded form searches. `stop` decides whether the
// current state already has the requested shape; steps are head steps.
template <class StopFn>
ReductionOutcome head_search(const TermPtr& t, std::uint32_t fuel,
                             StopFn stop) {
  ReductionOutcome out;
  TermPtr cur = t;
  TermMap<std::uint32_t> first_seen;
  for (std::uint32_t step = 0;; ++step) {
    if (stop(cur)) {
      out.status = OutcomeStatus::Reached;
      out.term = cur;
      return out;
    }
    auto it = first_seen.find(cur);
    if (it != first_seen.end()) {
      out.status = OutcomeStatus::Cycle;
      out.term = cur;
      return out;
    }
    if (step >= fuel) {
      out.status = OutcomeStatus::FuelExhausted;
      out.term = cur;
      return out;
    }
    first_seen.emplace(cur, step);
    auto p = head_redex_position(cur);
    assert(p.has_value());
    out.trace.push_back({*p, classify_redex(cur, *p)});
    cur = beta_step_at(cur, *p);
  }
}

}  // namespace

ReductionOutcome reduce_to_hnf(const TermPtr& t, std::uint32_t fuel) {
  return head_search(t, fuel, [](const TermPtr& s) { return is_hnf(s); });
}

ReductionOutcome reduce_to_whnf(const TermPtr& t, std::uint32_t fuel) {
  return head_search(t, fuel, [](const TermPtr& s) { return is_whnf(s); });
}

ReductionOutcome reduce_to_root_stable(const TermPtr& t, std::uint32_t fuel) {
  // Head steps with eager stops: variables and abstractions are root-stable,
  // as is an application whose spine head is a variable. The remaining
  // root-stable applications (function side without whnf) are recognized
  // from the head reduction itself: when the state sequence closes into a
  // cycle, a root contraction inside the repeating segment means the root is
  // contracted forever (root-active); no root contraction after some index k
  // means the state at k was already root-stable.
  ReductionOutcome out;
  TermPtr cur = t;
  std::vector<TermPtr> states;
  TermMap<std::uint32_t> first_seen;
  for (std::uint32_t step = 0;; ++step) {
    if (cur->kind() != TermKind::App) {
      out.status = OutcomeStatus::Reached;
      out.term = cur;
      return out;
    }
    TermPtr head = cur;
    while (head->kind() == TermKind::App) head = head->fun();
    if (head->kind() != TermKind::Abs) {
      out.status = OutcomeStatus::Reached;  // head-variable rooted
      out.term = cur;
      return out;
    }
    auto it = first_seen.find(cur);
    if (it != first_seen.end()) {
      bool root_in_segment = false;
      for (std::size_t i = it->second; i < out.trace.size(); ++i)
        if (out.trace[i].position.empty()) root_in_segment = true;
      if (root_in_segment) {
        out.status = OutcomeStatus::Cycle;
        out.term = cur;
        return out;
      }
      // find the least k after the last root contraction
      std::size_t k = 0;
      for (std::size_t i = 0; i < out.trace.size(); ++i)
        if (out.trace[i].position.empty()) k = i + 1;
      out.status = OutcomeStatus::Reached;
      out.term = states[k];
      out.trace.resize(k);
      return out;
    }
    if (step >= fuel) {
      out.status = OutcomeStatus::FuelExhausted;
      out.term = cur;
      return out;
    }
    first_seen.emplace(cur, static_cast<std::uint32_t>(out.trace.size()));
    states.push_back(cur);
    auto p = head_redex_position(cur);
    assert(p.has_value());
    out.trace.push_back({*p, classify_redex(cur, *p)});
    cur = beta_step_at(cur, *p);
  }
}

ReductionOutcome normalize(const TermPtr& t, std::uint32_t fuel) {
  ReductionOutcome out;
  TermPtr cur = t;
  TermMap<std::uint32_t> first_seen;
  for (std::uint32_t step = 0;; ++step) {
    if (cur->is_normal_form()) {
      out.status = OutcomeStatus::Reached;
      out.term = cur;
      return out;
    }
    if (first_seen.count(cur)) {
      out.status = OutcomeStatus::Cycle;
      out.term = cur;
      return out;
    }
    if (step >= fuel) {
      out.status = OutcomeStatus::FuelExhausted;
      out.term = cur;
      return out;
    }
    first_seen.emplace(cur, step);
    auto rs = redex_positions(cur);
    assert(!rs.empty());
    out.trace.push_back({rs.front(), classify_redex(cur, rs.front())});
    cur = beta_step_at(cur, rs.front());
  }
}

ConvertOutcome convertible_bounded(const TermPtr& a, const TermPtr& b,
                                   const ConvertBudget& budget) {
  ConvertOutcome out;
  if (alpha_eq(a, b)) {
    out.status = ConvertOutcome::Status::Convertible;
    out.witness = a;
    return out;
  }

  struct Link {
    TermPtr parent;
    Position step;
  };
  TermMap<Link> seen[2];
  std::deque<TermPtr> frontier[2];
  seen[0].emplace(a, Link{});
  seen[1].emplace(b, Link{});
  frontier[0].push_back(a);
  frontier[1].push_back(b);

  auto path_to = [&](int side, TermPtr w) {
    std::vector<Position> path;
    for (;;) {
      auto& link = seen[side].at(w);
      if (!link.parent) break;
      path.push_back(link.step);
      w = link.parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::uint32_t expanded = 0;
  while ((!frontier[0].empty() || !frontier[1].empty()) &&
         expanded < budget.nodes) {
    int side;
    if (frontier[0].empty())
      side = 1;
    else if (frontier[1].empty())
      side = 0;
    else
      side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    TermPtr cur = frontier[side].front();
    frontier[side].pop_front();
    ++expanded;
    for (const auto& p : redex_positions(cur)) {
      TermPtr next = beta_step_at(cur, p);
      if (next->size() > budget.size_cap) continue;
      if (seen[side].count(next)) continue;
      seen[side].emplace(next, Link{cur, p});
      if (seen[1 - side].count(next)) {
        out.status = ConvertOutcome::Status::Convertible;
        out.witness = next;
        out.path_a = path_to(0, next);
        out.path_b = path_to(1, next);
        out.explored = expanded;
        return out;
      }
      frontier[side].push_back(next);
    }
  }
  out.explored = expanded;
  return out;
}

}  // namespace clocklam
