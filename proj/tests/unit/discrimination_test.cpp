#include <doctest.h>

#include "clocklam/discrimination.hpp"
#include "clocklam/fpc.hpp"

using namespace clocklam;

namespace {
TermPtr var(const char* n) { return Term::free_var(n); }
}  // namespace

TEST_CASE("is_simple_term") {
  // Y0 x: both head redexes are call-by-value
  auto y0x = is_simple_term(Term::app(make_y0(), var("x")));
  CHECK(y0x.status == SimpleStatus::Simple);
  CHECK_FALSE(y0x.states.empty());

  // eta eta delta x, the simple reduct of Y2 x
  TermPtr xi = make_omega_delta_nf();
  TermPtr y2r = apply(xi, {xi, make_delta(), var("x")});
  CHECK(is_simple_term(y2r).status == SimpleStatus::Simple);

  // terms without hnf are simple by the first clause
  CHECK(is_simple_term(parse("(\\x.x x) (\\x.x x)")).status ==
        SimpleStatus::Simple);

  // A_{Y1} = eta eta (\z.f z z) is not simple: the z-redex duplicates a
  // non-normal argument
  TermPtr a_y1 = Term::app(make_y1(), parse("\\z.f z z"));
  auto bad = is_simple_term(a_y1);
  CHECK(bad.status == SimpleStatus::NotSimple);
  CHECK(bad.witness_class == RedexClass::Neither);

  // Y0 delta^n is not simple before reduction either
  CHECK(is_simple_term(bohm_fpc(2)).status == SimpleStatus::NotSimple);
}

TEST_CASE("find_simple_reduct follows the worked examples") {
  TermPtr x = var("x");
  TermPtr xi = make_omega_delta_nf();

  // Y2 x reduces to xi xi delta x
  auto r2 = find_simple_reduct(Term::app(bohm_fpc(2), x));
  REQUIRE(r2.has_value());
  CHECK(alpha_eq(r2->term, apply(xi, {xi, make_delta(), x})));
  // the recorded path replays
  TermPtr cur = Term::app(bohm_fpc(2), x);
  for (const auto& p : r2->path) cur = beta_step_at(cur, p);
  CHECK(alpha_eq(cur, r2->term));

  // U2 x reduces to theta theta I x
  auto u2 = find_simple_reduct(Term::app(scott_fpc(2), x));
  REQUIRE(u2.has_value());
  CHECK(alpha_eq(u2->term, apply(make_theta(), {make_theta(), make_i(), x})));

  // a normal form is its own simple reduct
  auto nf = find_simple_reduct(make_delta());
  REQUIRE(nf.has_value());
  CHECK(alpha_eq(nf->term, make_delta()));
  CHECK(nf->path.empty());

  // no simple reduct for the Plotkin terms within budget
  TermPtr a_y1 = Term::app(make_y1(), parse("\\z.f z z"));
  CHECK_FALSE(find_simple_reduct(a_y1).has_value());

  // normalization of open argument subterms: A_{Y0} reduces to the simple
  // pair over \x.f (x x) (x x)
  TermPtr a_y0 = Term::app(make_y0(), parse("\\z.f z z"));
  auto r = find_simple_reduct(a_y0);
  REQUIRE(r.has_value());
  TermPtr omega_bar = parse("\\x.f (x x) (x x)");
  CHECK(alpha_eq(r->term, Term::app(omega_bar, omega_bar)));
}

TEST_CASE("discriminate: one-sided simple-vs-reduct stage") {
  // with the reduct search disabled for head steps, Y0 delta keeps no simple
  // reduct; the simple eta eta delta is strictly slower infinitely often
  DiscriminationConfig cfg;
  cfg.simple_budget.head_steps = 0;
  TermPtr m = apply_n(make_y1(), make_delta(), 1);  // eta eta delta
  TermPtr n = Term::app(make_y0(), make_delta());
  auto v = discriminate(m, n, cfg);
  CHECK(v.kind == VerdictKind::Inconvertible);
  CHECK(v.method == Method::SimpleVsReduct);
  CHECK(verify_verdict(m, n, v, cfg));
}

TEST_CASE("discriminate: the flagship pairs") {
  DiscriminationConfig cfg;

  auto v01 = discriminate(make_y0(), make_y1(), cfg);
  CHECK(v01.kind == VerdictKind::Inconvertible);
  CHECK(v01.method == Method::SimpleSimple);
  CHECK(verify_verdict(make_y0(), make_y1(), v01, cfg));

  // Y2 vs U2: count clocks agree, atomic clocks differ
  auto v2 = discriminate(bohm_fpc(2), scott_fpc(2), cfg);
  CHECK(v2.kind == VerdictKind::Inconvertible);
  CHECK(v2.method == Method::AtomicSimpleSimple);
  CHECK(verify_verdict(bohm_fpc(2), scott_fpc(2), v2, cfg));

  // without the atomic stage the pair stays unseparated
  DiscriminationConfig count_only = cfg;
  count_only.atomic = false;
  CHECK(discriminate(bohm_fpc(2), scott_fpc(2), count_only).kind ==
        VerdictKind::Inconclusive);

  // B Y0 I =beta Y0
  auto conv = discriminate(make_y0(), scott_fpc(0), cfg);
  CHECK(conv.kind == VerdictKind::Convertible);
  CHECK(verify_verdict(make_y0(), scott_fpc(0), conv, cfg));

  // identical terms are convertible immediately
  CHECK(discriminate(make_y1(), make_y1(), cfg).kind ==
        VerdictKind::Convertible);
}

TEST_CASE("discriminate: BT difference") {
  DiscriminationConfig cfg;
  // x vs \y.x differ structurally at the root
  auto v = discriminate(var("x"), parse("\\y.x"), cfg);
  CHECK(v.kind == VerdictKind::Inconvertible);
  CHECK(v.method == Method::BtDifference);
  CHECK(verify_verdict(var("x"), parse("\\y.x"), v, cfg));

  // certified bottom against a head normal form
  auto b = discriminate(parse("(\\x.x x) (\\x.x x)"), var("y"), cfg);
  CHECK(b.kind == VerdictKind::Inconvertible);
  CHECK(b.method == Method::BtDifference);
}

TEST_CASE("discriminate: Plotkin terms stay inconclusive") {
  DiscriminationConfig cfg;
  TermPtr a_y1 = Term::app(make_y1(), parse("\\z.f z z"));
  // B_{Y1} = eta eta (\x.eta eta (\y.f x y))
  TermPtr inner = Term::abs(
      "x", Term::app(make_y1(),
                     Term::abs("y", apply(var("f"),
                                          {Term::bound(1), Term::bound(0)}))));
  TermPtr b_y1 = Term::app(make_y1(), inner);
  auto v = discriminate(a_y1, b_y1, cfg);
  CHECK(v.kind == VerdictKind::Inconclusive);
}

TEST_CASE("verdict json") {
  DiscriminationConfig cfg;
  auto v = discriminate(make_y0(), make_y1(), cfg);
  std::string js = verdict_to_json(v, cfg);
  CHECK(js.find("\"verdict\":\"inconvertible\"") != std::string::npos);
  CHECK(js.find("\"method\":\"simple-simple\"") != std::string::npos);
  CHECK(js.find("reductM") != std::string::npos);
  CHECK(js.find("cycleNodes") != std::string::npos);
}

TEST_CASE("no pair is ever both convertible and inconvertible") {
  std::vector<std::pair<TermPtr, TermPtr>> pairs = {
      {make_y0(), make_y1()},
      {bohm_fpc(2), scott_fpc(2)},
      {make_y0(), scott_fpc(0)},
      {make_y1(), scott_fpc(1)},
  };
  for (const auto& [m, n] : pairs) {
    bool saw_convertible = false, saw_inconvertible = false;
    for (std::uint32_t fuel : {100u, 1000u, 10000u}) {
      DiscriminationConfig cfg;
      cfg.fuel = fuel;
      auto v = discriminate(m, n, cfg);
      saw_convertible |= v.kind == VerdictKind::Convertible;
      saw_inconvertible |= v.kind == VerdictKind::Inconvertible;
    }
    CHECK_FALSE((saw_convertible && saw_inconvertible));
  }
}
