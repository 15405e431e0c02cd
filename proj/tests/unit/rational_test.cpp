#include <doctest.h>

#include "clocklam/fpc.hpp"
#include "clocklam/rational.hpp"

using namespace clocklam;

namespace {
TermPtr var(const char* n) { return Term::free_var(n); }
}  // namespace

TEST_CASE("rational expansion of the classic fpcs") {
  // Y1 f closes into a single self-looping node annotated 2
  auto y1 = rational_expand(Term::app(make_y1(), var("f")));
  REQUIRE(y1.has_value());
  REQUIRE(y1->nodes.size() == 1);
  CHECK(y1->nodes[0].annotation->count == 2);
  CHECK(y1->nodes[0].children == std::vector<std::uint32_t>{0});
  CHECK(y1->cycle_nodes() == std::vector<std::uint32_t>{0});

  // Y0 f: a [2] root into a [1] self-loop
  auto y0 = rational_expand(Term::app(make_y0(), var("f")));
  REQUIRE(y0.has_value());
  REQUIRE(y0->nodes.size() == 2);
  CHECK(y0->nodes[y0->root].annotation->count == 2);
  CHECK(y0->nodes[1].annotation->count == 1);
  CHECK(y0->nodes[1].children == std::vector<std::uint32_t>{1});

  // A_{Y1}: one node, annotation 3, both child edges looping
  TermPtr a_y1 = Term::app(make_y1(), parse("\\z.f z z"));
  auto ra = rational_expand(a_y1);
  REQUIRE(ra.has_value());
  REQUIRE(ra->nodes.size() == 1);
  CHECK(ra->nodes[0].annotation->count == 3);
  CHECK(ra->nodes[0].children == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("rational expansion refuses non-closing terms") {
  // delta delta (delta delta) exhausts fuel instead of closing
  TermPtr dd = Term::app(make_delta(), make_delta());
  CHECK_FALSE(rational_expand(Term::app(dd, dd), {64, 300, ClockMode::Count})
                  .has_value());
}

TEST_CASE("unfolding a rational tree matches the direct expansion") {
  for (std::uint32_t depth : {1u, 3u, 7u}) {
    for (const TermPtr& t :
         {Term::app(make_y0(), var("f")), Term::app(make_y1(), var("f")),
          Term::app(make_y1(), parse("\\z.f z z"))}) {
      auto rt = rational_expand(t);
      REQUIRE(rt.has_value());
      CHECK(tree_equal(unfold(*rt, depth),
                       clocked_bt(t, {depth, 10000, ClockMode::Count})));
    }
  }
}

TEST_CASE("atomic annotations replay the recorded head steps") {
  TermPtr xi = make_omega_delta_nf();
  TermPtr t = apply(xi, {xi, make_delta(), var("x")});
  auto rt = rational_expand(t, {64, 10000, ClockMode::Atomic});
  REQUIRE(rt.has_value());
  for (const auto& node : rt->nodes) {
    if (node.kind != TreeKind::BtNode) continue;
    auto red = reduce_to_hnf(node.state);
    REQUIRE(red.status == OutcomeStatus::Reached);
    REQUIRE(node.annotation);
    REQUIRE(node.annotation->positions.size() == red.trace.size());
    TermPtr cur = node.state;
    for (std::size_t i = 0; i < red.trace.size(); ++i) {
      CHECK(node.annotation->positions[i] == red.trace[i].position);
      cur = beta_step_at(cur, red.trace[i].position);
    }
    CHECK(alpha_eq(cur, red.term));
  }
}

TEST_CASE("product relations on rational trees") {
  auto y0 = rational_expand(Term::app(make_y0(), var("f")));
  auto y1 = rational_expand(Term::app(make_y1(), var("f")));
  REQUIRE((y0 && y1));

  // 2 > 1 on the repeating spine: > holds infinitely often
  ProductCert cert;
  CHECK(rel_infinitely_often_rational(*y1, *y0, RelKind::Gt, &cert) ==
        Tri::Holds);
  CHECK(cert.structure_ok);
  CHECK_FALSE(cert.witnesses.empty());

  // pointwise <=: Y0 f is faster everywhere
  CHECK(rel_all_rational(*y0, *y1, RelKind::Le) == Tri::Holds);
  CHECK(rel_all_rational(*y0, *y1, RelKind::Ge) == Tri::Fails);

  // a tree equals itself eventually and everywhere
  CHECK(rel_eventually_rational(*y0, *y0, RelKind::Eq) == Tri::Holds);
  CHECK(rel_infinitely_often_rational(*y0, *y0, RelKind::Ne) == Tri::Fails);

  // eventual equality ignores the differing [2] vs [1] prefix? it must not:
  // the Y0 spine stays 1 while Y1 stays 2, so equality never sets in
  CHECK(rel_eventually_rational(*y0, *y1, RelKind::Eq) == Tri::Fails);

  // structural difference: f^omega against the binder-led Boehm tree of Y0
  auto closed = rational_expand(make_y0());
  REQUIRE(closed.has_value());
  ProductCert mism;
  CHECK(rel_infinitely_often_rational(*closed, *y0, RelKind::Ne, &mism) ==
        Tri::Fails);
  CHECK_FALSE(mism.structure_ok);
}

TEST_CASE("alpha-renamed binders compare positionally") {
  // the same tree built from differently named binders
  TermPtr t1 = parse("\\u.(\\x.u (x x)) (\\x.u (x x))");  // Y0 with binder u
  auto a = rational_expand(make_y0());
  auto b = rational_expand(t1);
  REQUIRE((a && b));
  CHECK(rel_all_rational(*a, *b, RelKind::Eq) == Tri::Holds);
}

TEST_CASE("rational rendering") {
  auto y0 = rational_expand(Term::app(make_y0(), var("f")));
  REQUIRE(y0.has_value());
  std::string dot = rational_to_dot(*y0);
  CHECK(dot.find("style=dashed") != std::string::npos);  // back edge
  std::string js = rational_to_json(*y0);
  CHECK(js.find("\"root\"") != std::string::npos);
  CHECK(js.find("\"state\"") != std::string::npos);
}
