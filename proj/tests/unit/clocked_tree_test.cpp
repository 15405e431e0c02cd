#include <doctest.h>

#include "clocklam/clocked_tree.hpp"
#include "clocklam/fpc.hpp"

using namespace clocklam;

namespace {
TermPtr var(const char* n) { return Term::free_var(n); }

// spine annotations of a unary x (x (x ...)) clocked BT
std::vector<std::uint32_t> spine_counts(const TreePtr& t) {
  std::vector<std::uint32_t> out;
  const ClockedTree* cur = t.get();
  while (cur->kind == TreeKind::BtNode && cur->annotation) {
    out.push_back(cur->annotation->count);
    if (cur->children.size() != 1) break;
    cur = cur->children[0].get();
  }
  return out;
}
}  // namespace

TEST_CASE("clocked BT of the Curry and Turing fpcs") {
  TreeConfig cfg{4, 10000, ClockMode::Count};
  TreePtr y0 = clocked_bt(Term::app(make_y0(), var("f")), cfg);
  auto c0 = spine_counts(y0);
  REQUIRE(c0.size() == 4);
  CHECK(c0 == std::vector<std::uint32_t>{2, 1, 1, 1});
  CHECK(tree_at(y0, *position_from_string("2222"))->kind == TreeKind::Unknown);

  TreePtr y1 = clocked_bt(Term::app(make_y1(), var("f")), cfg);
  CHECK(spine_counts(y1) == std::vector<std::uint32_t>{2, 2, 2, 2});

  // both deannotate to the same Boehm tree to any common depth
  CHECK(tree_equal(deannotate(y0), deannotate(y1)));
}

TEST_CASE("atomic clocked BT of xi xi delta x") {
  TermPtr xi = make_omega_delta_nf();
  TermPtr t = apply(xi, {xi, make_delta(), var("x")});
  TreePtr tree = clocked_bt(t, {3, 10000, ClockMode::Atomic});
  REQUIRE(tree->annotation);
  std::vector<std::string> ps;
  for (const auto& p : tree->annotation->positions)
    ps.push_back(position_to_string(p));
  CHECK(ps == std::vector<std::string>{"11", "1", "1", ""});
  // the annotation repeats along the spine
  const ClockedTree* child = tree->children[0].get();
  REQUIRE(child->annotation);
  CHECK(child->annotation->positions == tree->annotation->positions);
}

TEST_CASE("clocked LLT examples") {
  // a a with a = \x y.x x: [1]\y.[1]\y....
  TermPtr a = parse("\\x.\\y.x x");
  TreePtr la = clocked_llt(Term::app(a, a), {4, 1000, ClockMode::Count});
  const ClockedTree* cur = la.get();
  for (int i = 0; i < 4; ++i) {
    REQUIRE(cur->kind == TreeKind::LlAbs);
    CHECK(cur->annotation->count == 1);
    cur = cur->children[0].get();
  }

  // b b with b = \x y z.x x: [1]\y.[0]\z.[1]\y.[0]\z...
  TermPtr b = parse("\\x.\\y.\\z.x x");
  TreePtr lb = clocked_llt(Term::app(b, b), {4, 1000, ClockMode::Count});
  cur = lb.get();
  std::vector<std::uint32_t> ks;
  for (int i = 0; i < 4; ++i) {
    REQUIRE(cur->kind == TreeKind::LlAbs);
    ks.push_back(cur->annotation->count);
    cur = cur->children[0].get();
  }
  CHECK(ks == std::vector<std::uint32_t>{1, 0, 1, 0});

  // \x.x is whnf at every level
  TreePtr li = clocked_llt(make_i(), {4, 1000, ClockMode::Count});
  REQUIRE(li->kind == TreeKind::LlAbs);
  CHECK(li->annotation->count == 0);
  CHECK(li->children[0]->kind == TreeKind::LlHead);
  CHECK(li->children[0]->annotation->count == 0);
}

TEST_CASE("clocked BeT examples") {
  TermPtr omega = parse("(\\x.x x) (\\x.x x)");
  CHECK(clocked_bet(omega, {4, 1000, ClockMode::Count})->kind == TreeKind::Bot);

  TreePtr ix = clocked_bet(parse("(\\x.x) y"), {4, 1000, ClockMode::Count});
  REQUIRE(ix->kind == TreeKind::BeVar);
  CHECK(ix->annotation->count == 1);
  CHECK(ix->head == "y");

  TreePtr lo = clocked_bet(Term::abs("x", omega), {4, 1000, ClockMode::Count});
  REQUIRE(lo->kind == TreeKind::BeAbs);
  CHECK(lo->annotation->count == 0);
  CHECK(lo->children[0]->kind == TreeKind::Bot);

  // Omega x: a syntactic application with a meaningless function side
  TreePtr ox = clocked_bet(Term::app(omega, Term::free_var("x")),
                           {4, 1000, ClockMode::Count});
  REQUIRE(ox->kind == TreeKind::BeApp);
  CHECK(ox->annotation->count == 0);
  CHECK(ox->children[0]->kind == TreeKind::Bot);
  CHECK(ox->children[1]->kind == TreeKind::BeVar);
}

TEST_CASE("deannotate and count projection") {
  TermPtr t = Term::app(make_y0(), var("f"));
  TreeConfig count_cfg{5, 10000, ClockMode::Count};
  TreeConfig atomic_cfg{5, 10000, ClockMode::Atomic};
  TreePtr counts = clocked_bt(t, count_cfg);
  TreePtr atomics = clocked_bt(t, atomic_cfg);
  CHECK(tree_equal(project_counts(atomics), counts));
  CHECK(tree_equal(deannotate(atomics), deannotate(counts)));
  CHECK(deannotate(ClockedTree::bot())->kind == TreeKind::Bot);
}

TEST_CASE("subsequence order on position lists") {
  auto pos = [](const char* s) { return *position_from_string(s); };
  CHECK(subsequence_leq({}, {pos("1")}));
  CHECK(subsequence_leq({pos("11"), pos("1")},
                        {pos("11"), pos("1"), pos("")}));
  // the Y2 / U2 distinction: incomparable both ways
  std::vector<Position> a{pos("11"), pos("1"), pos(""), pos("1")};
  std::vector<Position> b{pos("11"), pos("1"), pos("1"), pos("")};
  CHECK_FALSE(subsequence_leq(a, b));
  CHECK_FALSE(subsequence_leq(b, a));
}

TEST_CASE("lifted relations at positions") {
  TreeConfig cfg{6, 10000, ClockMode::Count};
  TreePtr a = clocked_bt(Term::app(make_y0(), var("f")), cfg);
  TreePtr b = clocked_bt(Term::app(make_y1(), var("f")), cfg);
  CHECK(rel_at(a, b, {}, RelKind::Le) == Tri::Holds);   // 2 <= 2
  CHECK(rel_at(a, b, {2}, RelKind::Le) == Tri::Holds);  // 1 <= 2
  CHECK(rel_at(a, b, {2}, RelKind::Ge) == Tri::Fails);  // 1 >= 2 is false
  // the head variable spot is unannotated on both sides
  CHECK(rel_at(a, b, {1}, RelKind::Eq) == Tri::Holds);
  // positions reaching the cut-off are unknown
  Position deep;
  for (int i = 0; i < 6; ++i) deep.push_back(2);
  CHECK(rel_at(a, b, deep, RelKind::Le) == Tri::Unknown);
}

TEST_CASE("rel_all on truncations") {
  TreeConfig cfg{5, 10000, ClockMode::Count};
  TreePtr a = clocked_bt(Term::app(make_y0(), var("f")), cfg);
  TreePtr b = clocked_bt(Term::app(make_y1(), var("f")), cfg);
  // 1 <= 2 on the spine, but unknown leaves block a definitive holds
  CHECK(rel_all(a, b, RelKind::Le) == Tri::Unknown);
  CHECK(rel_all(a, b, RelKind::Ge) == Tri::Fails);
  // fully resolved trees can hold definitively
  TreePtr na = clocked_bt(parse("(\\x.x) y"), cfg);
  TreePtr nb = clocked_bt(parse("(\\x.x) ((\\z.z) y)"), cfg);
  CHECK(rel_all(na, nb, RelKind::Le) == Tri::Holds);
  CHECK(rel_all(na, nb, RelKind::Eq) == Tri::Fails);
  // finite-prefix exclusion: differences only at the root vanish at cut 1
  CHECK(rel_all(na, nb, RelKind::Eq, 1) == Tri::Holds);
}

TEST_CASE("tree rendering") {
  TreeConfig cfg{3, 10000, ClockMode::Count};
  TreePtr a = clocked_bt(Term::app(make_y0(), var("f")), cfg);
  CHECK(tree_to_text(a) == "[2]f ([1]f ([1]f ?))");
  CHECK(tree_to_text(clocked_bet(parse("(\\x.x x) (\\x.x x)"), cfg)) == "_|_");

  std::string js = tree_to_json(a);
  CHECK(js.find("\"kind\":\"bt\"") != std::string::npos);
  CHECK(js.find("\"annotation\":2") != std::string::npos);

  TermPtr xi = make_omega_delta_nf();
  TermPtr t = apply(xi, {xi, make_delta(), var("x")});
  TreePtr atom = clocked_bt(t, {2, 10000, ClockMode::Atomic});
  CHECK(tree_to_text(atom) == "[<11,1,1,e>]x ([<11,1,1,e>]x ?)");
  CHECK(tree_to_text(atom, PrintStyle::Unicode) ==
        "[⟨11,1,1,ε⟩]x ([⟨11,1,1,ε⟩]x ?)");

  std::string dot = tree_to_dot(a);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("diamond") != std::string::npos);  // unknown leaf shape
}
