#include "cli.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clocklam/discrimination.hpp"
#include "clocklam/fpc.hpp"
#include "clocklam/rational.hpp"

namespace clocklam::cli {

namespace {

struct RunConfig {
  std::uint32_t depth = 16;
  std::uint32_t fuel = 10000;
  std::string mode = "count";
  std::uint32_t prefix_cut = 0;
  std::string format = "text";
  bool rational = false;
  std::uint64_t seed = 0;  // reserved for randomized workloads
  bool mode_given = false;

  ClockMode clock_mode() const {
    return mode == "atomic" ? ClockMode::Atomic : ClockMode::Count;
  }
  TreeConfig tree_config() const { return {depth, fuel, clock_mode()}; }
  DiscriminationConfig discrimination_config() const {
    DiscriminationConfig cfg;
    cfg.depth = depth;
    cfg.fuel = fuel;
    // the atomic stage runs unless counts were requested explicitly
    cfg.atomic = !(mode_given && mode == "count");
    cfg.prefix_cut = prefix_cut;
    return cfg;
  }
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--depth", cfg.depth, "Tree truncation depth")
      ->envname("CLOCKLAM_DEPTH");
  cmd->add_option("--fuel", cfg.fuel, "Head-step budget per search")
      ->envname("CLOCKLAM_FUEL");
  cmd->add_option("--mode", cfg.mode, "Clock annotations: count or atomic")
      ->check(CLI::IsMember({"count", "atomic"}))
      ->envname("CLOCKLAM_MODE");
  cmd->add_option("--prefix-cut", cfg.prefix_cut,
                  "Ignore positions shorter than this in relation checks")
      ->envname("CLOCKLAM_PREFIX_CUT");
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->envname("CLOCKLAM_FORMAT");
  cmd->add_option("--seed", cfg.seed, "Seed for randomized workloads")
      ->envname("CLOCKLAM_SEED");
}

TermPtr parse_with_catalog(const std::string& text) {
  return resolve_catalog_names(parse(text));
}

const char* status_word(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Reached: return "reached";
    case OutcomeStatus::Cycle: return "cycle";
    case OutcomeStatus::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

int status_code(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Reached: return 0;
    case OutcomeStatus::Cycle: return 2;
    case OutcomeStatus::FuelExhausted: return 3;
  }
  return 1;
}

int cmd_reduce(const std::string& term_text, const std::string& strategy,
               const RunConfig& cfg, std::ostream& out) {
  TermPtr t = parse_with_catalog(term_text);
  ReductionOutcome red;
  std::string form;
  if (strategy == "head") {
    red = reduce_to_hnf(t, cfg.fuel);
    form = "hnf";
  } else if (strategy == "whnf") {
    red = reduce_to_whnf(t, cfg.fuel);
    form = "whnf";
  } else if (strategy == "root-stable") {
    red = reduce_to_root_stable(t, cfg.fuel);
    form = "root-stable form";
  } else {
    red = normalize(t, cfg.fuel);
    form = "normal form";
  }
  if (cfg.format == "json") {
    nlohmann::json j;
    j["status"] = status_word(red.status);
    j["steps"] = red.trace.size();
    j["term"] = print(red.term);
    j["trace"] = nlohmann::json::parse(trace_to_json(red.trace));
    out << j.dump() << "\n";
  } else {
    out << "initial: " << print(t) << "\n";
    TermPtr cur = t;
    for (std::size_t i = 0; i < red.trace.size(); ++i) {
      cur = beta_step_at(cur, red.trace[i].position);
      std::string p = position_to_string(red.trace[i].position);
      out << "step " << (i + 1) << ": at " << (p.empty() ? "e" : p) << " ("
          << redex_class_name(red.trace[i].klass) << ") -> " << print(cur)
          << "\n";
    }
    switch (red.status) {
      case OutcomeStatus::Reached:
        out << "reached " << form << " in " << red.trace.size()
            << " steps: " << print(red.term) << "\n";
        break;
      case OutcomeStatus::Cycle:
        out << "cycle detected after " << red.trace.size()
            << " steps; state recurs: " << print(red.term) << "\n";
        break;
      case OutcomeStatus::FuelExhausted:
        out << "fuel exhausted after " << red.trace.size()
            << " steps at: " << print(red.term) << "\n";
        break;
    }
  }
  return status_code(red.status);
}

int cmd_tree(const std::string& term_text, const std::string& flavor,
             const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  TermPtr t = parse_with_catalog(term_text);
  if (cfg.rational) {
    if (flavor != "bt") {
      err << "--rational is only available for the bt flavor\n";
      return 1;
    }
    RationalConfig rc{256, cfg.fuel, cfg.clock_mode()};
    auto rt = rational_expand(t, rc);
    if (!rt) {
      err << "expansion did not close into a finite graph within budget\n";
      return 3;
    }
    if (cfg.format == "dot")
      out << rational_to_dot(*rt);
    else if (cfg.format == "json")
      out << rational_to_json(*rt) << "\n";
    else {
      for (std::size_t i = 0; i < rt->nodes.size(); ++i) {
        const auto& n = rt->nodes[i];
        out << "node " << i << (i == rt->root ? " (root)" : "") << ": ";
        if (n.kind == TreeKind::Bot) {
          out << "_|_";
        } else {
          TreePtr one = ClockedTree::node(TreeKind::BtNode, n.annotation,
                                          n.binders, n.head, {});
          out << tree_to_text(one);
          out << " -> [";
          for (std::size_t k = 0; k < n.children.size(); ++k)
            out << (k ? " " : "") << n.children[k];
          out << "]";
        }
        out << "  state: " << print(n.state) << "\n";
      }
    }
    return 0;
  }
  TreePtr tree;
  if (flavor == "llt")
    tree = clocked_llt(t, cfg.tree_config());
  else if (flavor == "bet")
    tree = clocked_bet(t, cfg.tree_config());
  else
    tree = clocked_bt(t, cfg.tree_config());
  if (cfg.format == "dot")
    out << tree_to_dot(tree);
  else if (cfg.format == "json")
    out << tree_to_json(tree) << "\n";
  else
    out << tree_to_text(tree) << "\n";
  return 0;
}

int verdict_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Inconvertible: return 0;
    case VerdictKind::Convertible: return 10;
    case VerdictKind::Inconclusive: return 20;
  }
  return 1;
}

int cmd_discriminate(const std::string& a_text, const std::string& b_text,
                     const RunConfig& cfg, std::ostream& out) {
  TermPtr a = parse_with_catalog(a_text);
  TermPtr b = parse_with_catalog(b_text);
  DiscriminationConfig dc = cfg.discrimination_config();
  Verdict v = discriminate(a, b, dc);
  if (cfg.format == "json") {
    out << verdict_to_json(v, dc) << "\n";
  } else {
    out << "verdict: " << verdict_kind_name(v.kind);
    if (v.kind == VerdictKind::Inconvertible)
      out << " (" << method_name(v.method) << ")";
    out << "\n";
    if (v.kind == VerdictKind::Convertible) {
      out << "common reduct: " << print(v.common_reduct) << "\n";
    } else if (v.kind == VerdictKind::Inconvertible) {
      if (v.reduct_m) out << "reduct M: " << print(v.reduct_m) << "\n";
      if (v.reduct_n) out << "reduct N: " << print(v.reduct_n) << "\n";
      if (!v.relation.empty()) out << "relation: " << v.relation << "\n";
      if (v.difference_position)
        out << "difference at position: "
            << position_to_string(*v.difference_position) << "\n";
    } else {
      out << "reason: " << v.reason << "\n";
    }
  }
  return verdict_code(v.kind);
}

// --- catalog -------------------------------------------------------------------

struct CatalogEntry {
  std::string name;
  TermPtr term;
};

std::optional<std::pair<std::uint32_t, std::uint32_t>> parse_range(
    const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      std::uint32_t n = static_cast<std::uint32_t>(std::stoul(s));
      return std::make_pair(0u, n);
    }
    std::uint32_t lo = static_cast<std::uint32_t>(std::stoul(s.substr(0, dots)));
    std::uint32_t hi =
        static_cast<std::uint32_t>(std::stoul(s.substr(dots + 2)));
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<std::vector<std::vector<std::uint32_t>>> parse_vectors(
    const std::string& s) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  bool in_vec = false;
  std::string num;
  auto flush_num = [&]() {
    if (!num.empty()) {
      cur.push_back(static_cast<std::uint32_t>(std::stoul(num)));
      num.clear();
    }
  };
  for (char c : s) {
    if (c == '(') {
      if (in_vec) return std::nullopt;
      in_vec = true;
      cur.clear();
    } else if (c == ')') {
      if (!in_vec) return std::nullopt;
      flush_num();
      out.push_back(cur);
      in_vec = false;
    } else if (c >= '0' && c <= '9') {
      num.push_back(c);
    } else if (c == ',' || c == ' ') {
      flush_num();
    } else {
      return std::nullopt;
    }
  }
  if (in_vec || !num.empty()) return std::nullopt;
  return out;
}

std::string vector_name(const std::vector<std::uint32_t>& v) {
  std::string s = "Y<";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ">";
}

// repeating spine clock of an fpc: the cycle annotations of the rational
// clocked BT of its simple reduct applied to a fresh variable
std::string fpc_clock(const TermPtr& y, const RunConfig& cfg) {
  TermPtr yx = Term::app(y, Term::free_var(fresh_name("x", free_names(y))));
  auto simple = find_simple_reduct(yx);
  if (!simple) return "?";
  RationalConfig rc{256, cfg.fuel, cfg.clock_mode()};
  auto rt = rational_expand(simple->term, rc);
  if (!rt) return "?";
  auto cyc = rt->cycle_nodes();
  std::string out;
  for (auto id : cyc) {
    const auto& n = rt->nodes[id];
    if (!n.annotation) continue;
    std::string one;
    if (n.annotation->mode == ClockMode::Count) {
      one = std::to_string(n.annotation->count);
    } else {
      one = "<";
      for (std::size_t i = 0; i < n.annotation->positions.size(); ++i) {
        if (i) one += ",";
        std::string p = position_to_string(n.annotation->positions[i]);
        one += p.empty() ? "e" : p;
      }
      one += ">";
    }
    if (out.find(one) == std::string::npos) {
      if (!out.empty()) out += "|";
      out += one;
    }
  }
  return out.empty() ? "?" : out;
}

int cmd_catalog_delta(const std::string& range, const RunConfig& cfg,
                      std::ostream& out, std::ostream& err);

int cmd_catalog(const std::string& family, const std::string& range,
                const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<CatalogEntry> entries;
  if (family == "bohm" || family == "scott") {
    auto r = parse_range(range.empty() ? "0..3" : range);
    if (!r) {
      err << "bad range; expected like 0..5\n";
      return 1;
    }
    for (std::uint32_t n = r->first; n <= r->second; ++n) {
      if (family == "bohm")
        entries.push_back({"Y" + std::to_string(n), bohm_fpc(n)});
      else
        entries.push_back({"U" + std::to_string(n), scott_fpc(n)});
    }
  } else if (family == "schemes") {
    TermPtr y0 = make_y0();
    for (Scheme s : {Scheme::I, Scheme::II, Scheme::III, Scheme::IV,
                     Scheme::Epsilon, Scheme::Xi}) {
      entries.push_back({scheme_name(s), scheme_fpc(s, y0)});
    }
    entries.push_back({"v(2)", scheme_fpc(Scheme::V, make_y0(), 2)});
    entries.push_back(
        {"vi(p1,p2)",
         scheme_fpc(Scheme::VI, make_y0(), 0,
                    {Term::free_var("p1"), Term::free_var("p2")})});
  } else if (family == "vectors") {
    auto vs = parse_vectors(range);
    if (!vs || vs->empty()) {
      err << "bad vectors; expected like (2,3),(3,2)\n";
      return 1;
    }
    for (const auto& v : *vs) entries.push_back({vector_name(v), vector_fpc(v)});
  } else if (family == "delta") {
    return cmd_catalog_delta(range, cfg, out, err);
  } else {
    err << "unknown family: " << family << "\n";
    return 1;
  }

  DiscriminationConfig dc = cfg.discrimination_config();

  struct PairVerdict {
    std::size_t i, j;
    Verdict v;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      pairs.emplace_back(i, j);

  // pairwise discrimination runs on parallel workers; output is assembled
  // by pair index
  std::vector<std::future<Verdict>> futures;
  futures.reserve(pairs.size());
  for (const auto& [i, j] : pairs)
    futures.push_back(std::async(std::launch::async | std::launch::deferred,
                                 [&, i = i, j = j]() {
                                   return discriminate(entries[i].term,
                                                       entries[j].term, dc);
                                 }));

  nlohmann::json manifest;
  manifest["family"] = family;
  nlohmann::json jentries = nlohmann::json::object();

  if (cfg.format != "json") out << "catalog " << family << "\n";
  for (const auto& e : entries) {
    auto rep = check_fpc(e.term, 8, cfg.fuel);
    std::string clock = fpc_clock(e.term, cfg);
    if (cfg.format == "json") {
      nlohmann::json je;
      je["term"] = print(e.term);
      je["reducingK"] = rep.reducing_k ? nlohmann::json(*rep.reducing_k)
                                       : nlohmann::json(nullptr);
      je["btDepth"] = rep.bt_x_omega_depth;
      je["convertibleWithUnfolding"] = rep.convertible == Tri::Holds;
      je["clock"] = clock;
      jentries[e.name] = std::move(je);
    } else {
      out << e.name << ": reducing_k=";
      if (rep.reducing_k)
        out << *rep.reducing_k;
      else
        out << "none";
      out << " bt_depth=" << rep.bt_x_omega_depth << " clock=" << clock
          << " term=" << print(e.term) << "\n";
    }
  }

  nlohmann::json jpairs = nlohmann::json::array();
  if (cfg.format != "json") out << "pairwise verdicts:\n";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    Verdict v = futures[k].get();
    const auto& [i, j] = pairs[k];
    if (cfg.format == "json") {
      nlohmann::json jp;
      jp["left"] = entries[i].name;
      jp["right"] = entries[j].name;
      jp["verdict"] = verdict_kind_name(v.kind);
      jp["method"] = method_name(v.method);
      jpairs.push_back(std::move(jp));
    } else {
      out << entries[i].name << " vs " << entries[j].name << ": "
          << verdict_kind_name(v.kind);
      if (v.kind == VerdictKind::Inconvertible) {
        out << " (" << method_name(v.method) << ")";
        if (v.method == Method::AtomicSimpleSimple)
          out << " [count clocks coincide]";
      }
      out << "\n";
    }
  }
  if (cfg.format == "json") {
    manifest["entries"] = std::move(jentries);
    manifest["pairwise"] = std::move(jpairs);
    out << manifest.dump() << "\n";
  }
  return 0;
}

// every applicative delta combination with the given number of applications
void enumerate_delta(std::uint32_t apps, std::vector<TermPtr>& out) {
  if (apps == 0) {
    out.push_back(make_delta());
    return;
  }
  for (std::uint32_t l = 0; l < apps; ++l) {
    std::vector<TermPtr> lefts, rights;
    enumerate_delta(l, lefts);
    enumerate_delta(apps - 1 - l, rights);
    for (const auto& a : lefts)
      for (const auto& b : rights) out.push_back(Term::app(a, b));
  }
}

int cmd_catalog_delta(const std::string& range, const RunConfig& cfg,
                      std::ostream& out, std::ostream& err) {
  std::uint32_t max_apps = 4;
  if (!range.empty()) {
    try {
      max_apps = static_cast<std::uint32_t>(std::stoul(range));
    } catch (...) {
      err << "bad delta range; expected a number of applications\n";
      return 1;
    }
  }
  std::vector<TermPtr> terms;
  for (std::uint32_t a = 1; a <= max_apps; ++a) enumerate_delta(a, terms);

  nlohmann::json jterms = nlohmann::json::array();
  std::uint32_t disagreements = 0;
  if (cfg.format != "json")
    out << "catalog delta (up to " << max_apps << " applications, "
        << terms.size() << " terms)\n";
  for (const auto& t : terms) {
    DeltaSn crit = delta_sn_criterion(t);
    SearchSn search = delta_sn_search(t, cfg.fuel);
    bool agree = (crit == DeltaSn::Sn && search == SearchSn::Sn) ||
                 (crit == DeltaSn::NotSn && search == SearchSn::NotSn);
    if (!agree) ++disagreements;
    const char* crit_name = crit == DeltaSn::Sn      ? "SN"
                            : crit == DeltaSn::NotSn ? "not-SN"
                                                     : "trivial";
    const char* search_name = search == SearchSn::Sn      ? "SN"
                              : search == SearchSn::NotSn ? "not-SN"
                                                          : "unknown";
    if (cfg.format == "json") {
      jterms.push_back({{"term", print(t)},
                        {"length", delta_length(t)},
                        {"criterion", crit_name},
                        {"search", search_name}});
    } else {
      out << print(t) << ": length=" << delta_length(t)
          << " criterion=" << crit_name << " search=" << search_name << "\n";
    }
  }
  if (cfg.format == "json") {
    nlohmann::json j;
    j["family"] = "delta";
    j["terms"] = std::move(jterms);
    j["disagreements"] = disagreements;
    out << j.dump() << "\n";
  } else {
    out << "criterion/search disagreements: " << disagreements << "\n";
  }
  return disagreements == 0 ? 0 : 1;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult result;
  std::ostringstream out, err;

  CLI::App app{"clocked Boehm tree laboratory for lambda terms"};
  app.require_subcommand(0, 1);
  RunConfig cfg;

  std::string term_text, strategy = "head", flavor = "bt";
  std::string term_a, term_b, family, range;

  CLI::App* reduce = app.add_subcommand(
      "reduce", "Reduce a term, printing every step with its position");
  reduce->add_option("term", term_text, "Term (catalog names resolve)")
      ->required();
  reduce->add_option("--strategy", strategy, "head|whnf|root-stable|normalize")
      ->check(CLI::IsMember({"head", "whnf", "root-stable", "normalize"}));
  add_common_options(reduce, cfg);

  CLI::App* tree = app.add_subcommand(
      "tree", "Render the clocked BT, LLT or BeT of a term");
  tree->add_option("term", term_text, "Term (catalog names resolve)")
      ->required();
  tree->add_option("--flavor", flavor, "bt|llt|bet")
      ->check(CLI::IsMember({"bt", "llt", "bet"}));
  tree->add_flag("--rational", cfg.rational,
                 "Emit the finite graph when the expansion closes");
  add_common_options(tree, cfg);

  CLI::App* disc = app.add_subcommand(
      "discriminate", "Decide beta-inconvertibility via clocked trees");
  disc->add_option("termA", term_a, "First term")->required();
  disc->add_option("termB", term_b, "Second term")->required();
  add_common_options(disc, cfg);

  CLI::App* cat = app.add_subcommand(
      "catalog", "Generate an fpc family, run checks and pairwise verdicts");
  cat->add_option("family", family, "bohm|scott|schemes|vectors|delta")
      ->required();
  cat->add_option("range", range, "0..5, (2,3),(3,2), or max applications");
  add_common_options(cat, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    result.exit_code = app.exit(e, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
  }

  cfg.mode_given = false;
  for (CLI::App* sub : {reduce, tree, disc, cat})
    if (sub->count("--mode") > 0) cfg.mode_given = true;

  try {
    if (app.got_subcommand(reduce))
      result.exit_code = cmd_reduce(term_text, strategy, cfg, out);
    else if (app.got_subcommand(tree))
      result.exit_code = cmd_tree(term_text, flavor, cfg, out, err);
    else if (app.got_subcommand(disc))
      result.exit_code = cmd_discriminate(term_a, term_b, cfg, out);
    else if (app.got_subcommand(cat))
      result.exit_code = cmd_catalog(family, range, cfg, out, err);
    else {
      err << app.help();
      result.exit_code = 1;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    result.exit_code = 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = 1;
  }
  result.out = out.str();
  result.err = err.str();
  return result;
}

}  // namespace clocklam::cli
