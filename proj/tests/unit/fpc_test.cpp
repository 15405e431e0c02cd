#include <doctest.h>

#include "clocklam/fpc.hpp"
#include "clocklam/rational.hpp"

using namespace clocklam;

TEST_CASE("combinator catalog") {
  CHECK(alpha_eq(*make("delta"), parse("\\a b.b (a b)")));
  CHECK(alpha_eq(*make("δ"), *make("delta")));
  CHECK(alpha_eq(*make("Y1"), Term::app(make_eta(), make_eta())));
  CHECK(alpha_eq(*make("A"), Term::app(make_b(), make_s())));
  CHECK(alpha_eq(*make("xi"), make_omega_delta_nf()));
  CHECK(alpha_eq(*make("xi_scheme"), parse("\\n a b c.a b c (n a b c)")));
  CHECK(alpha_eq(make_q(2), parse("\\y p1 p2 x.x (y p1 p2 x)")));
  CHECK_FALSE(make("nonsense").has_value());
  // catalog names resolve inside term text; unknown names stay free
  TermPtr t = resolve_catalog_names(parse("Y1 x"));
  CHECK(alpha_eq(t, Term::app(make_y1(), Term::free_var("x"))));
}

TEST_CASE("every constructed fpc passes the BT check to depth 8") {
  std::vector<TermPtr> family;
  for (std::uint32_t n = 0; n <= 4; ++n) family.push_back(bohm_fpc(n));
  for (std::uint32_t n = 0; n <= 4; ++n) family.push_back(scott_fpc(n));
  for (std::uint32_t n = 0; n <= 2; ++n)
    family.push_back(reducing_scott_fpc(make_y1(), n));
  family.push_back(vector_fpc({2}));
  family.push_back(vector_fpc({2, 3}));
  family.push_back(pre_fpc_close(Term::app(make_b(), make_y0()), 2));
  for (const auto& y : family) {
    CAPTURE(print(y));
    CHECK(check_fpc(y, 8, 40000).bt_x_omega_depth >= 8);
  }
}

TEST_CASE("bohm sequence") {
  CHECK(alpha_eq(bohm_fpc(0), make_y0()));
  CHECK(alpha_eq(bohm_fpc(2),
                 apply(make_y0(), {make_delta(), make_delta()})));
  // Y0 delta is convertible with Turing's fpc
  auto conv = convertible_bounded(bohm_fpc(1), make_y1());
  CHECK(conv.status == ConvertOutcome::Status::Convertible);

  // the working representative of Y3 is 6-reducing
  TermPtr y3 = apply_n(make_y1(), make_delta(), 2);
  auto rep = check_fpc(y3);
  REQUIRE(rep.reducing_k.has_value());
  CHECK(*rep.reducing_k == 6);
}

TEST_CASE("scott sequence and reducingness") {
  CHECK(alpha_eq(scott_fpc(0), parse("(\\x y z.x (y z)) "
                                     "(\\f.(\\x.f (x x)) (\\x.f (x x))) "
                                     "(\\x.x)")));
  auto c0 = convertible_bounded(scott_fpc(0), make_y0());
  CHECK(c0.status == ConvertOutcome::Status::Convertible);
  auto c1 = convertible_bounded(scott_fpc(1), make_y1(), {4000, 2000});
  CHECK(c1.status == ConvertOutcome::Status::Convertible);

  // Y1 is 2-reducing; Y1 (S S) S^n I is (2+3n+7)-reducing
  CHECK(*check_fpc(make_y1()).reducing_k == 2);
  CHECK(*check_fpc(reducing_scott_fpc(make_y1(), 1)).reducing_k == 12);

  // Curry's fpc is not reducing but passes the BT check
  auto y0 = check_fpc(make_y0());
  CHECK_FALSE(y0.reducing_k.has_value());
  CHECK(y0.bt_x_omega_depth >= 8);
  CHECK(y0.convertible == Tri::Holds);
}

TEST_CASE("generation schemes build fpcs") {
  TermPtr y0 = make_y0();
  for (Scheme s : {Scheme::I, Scheme::II, Scheme::III, Scheme::IV,
                   Scheme::Epsilon, Scheme::Xi}) {
    CAPTURE(scheme_name(s));
    auto rep = check_fpc(scheme_fpc(s, y0), 8, 20000);
    CHECK(rep.bt_x_omega_depth >= 8);
  }
  // scheme v with a vector of A's
  CHECK(check_fpc(scheme_fpc(Scheme::V, y0, 2), 8, 20000).bt_x_omega_depth >=
        8);
  // scheme vi keeps arbitrary dummy arguments around
  std::vector<TermPtr> dummies{Term::free_var("p"),
                               parse("(\\x.x x) (\\x.x x)")};
  auto rep = check_fpc(scheme_fpc(Scheme::VI, y0, 0, dummies), 8, 20000);
  CHECK(rep.bt_x_omega_depth >= 8);

  // scheme iii is the Owl in disguise: A I I normalizes to delta
  auto aii = normalize(Term::app(Term::app(make_a(), make_i()), make_i()));
  REQUIRE(aii.status == OutcomeStatus::Reached);
  CHECK(alpha_eq(aii.term, make_delta()));

  // the bracketing the printed scheme (i) cannot have: Y (S (A I) I) is not
  // even a weak fpc
  TermPtr wrong = Term::app(
      y0, Term::app(Term::app(make_s(), Term::app(make_a(), make_i())),
                    make_i()));
  CHECK(check_fpc(wrong, 4, 4000).bt_x_omega_depth < 4);
}

TEST_CASE("vector fpcs") {
  CHECK(alpha_eq(vector_fpc({}), make_y0()));
  TermPtr ss = Term::app(make_s(), make_s());
  CHECK(alpha_eq(vector_fpc({0}),
                 Term::app(Term::app(make_y0(), ss), make_i())));
  auto rep = check_fpc(vector_fpc({2, 3}), 6, 40000);
  CHECK(rep.bt_x_omega_depth >= 6);
}

TEST_CASE("pre_fpc_close") {
  TermPtr n = Term::free_var("N");
  CHECK(alpha_eq(pre_fpc_close(n, 1), n));
  CHECK(alpha_eq(pre_fpc_close(apply(make_b(), {make_y0(), make_s()}), 2),
                 scott_fpc(1)));
  CHECK_THROWS_AS(pre_fpc_close(n, 0), std::invalid_argument);
  // BBBY II closes the n=3 pre-fpc
  TermPtr bbb = apply(make_b(), {make_b(), make_b()});
  TermPtr closed = pre_fpc_close(Term::app(bbb, make_y0()), 3);
  CHECK(alpha_eq(closed, apply(Term::app(bbb, make_y0()),
                               {make_i(), make_i()})));
  CHECK(check_fpc(closed, 6, 20000).bt_x_omega_depth >= 6);
}

TEST_CASE("flip-flop weak fpc") {
  auto [z, z2] = make_flipflop_wfpc();
  CHECK(check_fpc(z, 8, 60000).bt_x_omega_depth >= 8);
  CHECK(check_fpc(z2, 8, 60000).bt_x_omega_depth >= 8);
  // delta Z and Z delta are weak fpcs as well
  CHECK(check_fpc(Term::app(make_delta(), z), 6, 60000).bt_x_omega_depth >= 6);
  CHECK(check_fpc(Term::app(z, make_delta()), 6, 60000).bt_x_omega_depth >= 6);
  // neither is reducing: the generator flipflops
  CHECK_FALSE(check_fpc(z, 4, 20000).reducing_k.has_value());
}

TEST_CASE("delta terms") {
  TermPtr d = make_delta();
  TermPtr dd = Term::app(d, d);
  CHECK(is_delta_term(d));
  CHECK(is_delta_term(Term::app(dd, dd)));
  CHECK_FALSE(is_delta_term(Term::app(d, make_i())));
  CHECK_THROWS_AS(delta_length(make_i()), std::invalid_argument);

  CHECK(delta_length(Term::app(dd, dd)) == 4);
  CHECK(delta_sn_criterion(d) == DeltaSn::Trivial);
  CHECK(delta_sn_criterion(Term::app(d, dd)) == DeltaSn::Sn);
  CHECK(delta_sn_criterion(Term::app(dd, dd)) == DeltaSn::NotSn);

  CHECK(delta_sn_search(Term::app(d, dd)) == SearchSn::Sn);
  CHECK(delta_sn_search(Term::app(dd, dd)) == SearchSn::NotSn);

  // equal-length SN delta terms are convertible; different lengths are not
  TermPtr l3a = Term::app(d, dd);        // delta (delta delta)
  TermPtr l3b = Term::app(dd, d);        // (delta delta) delta
  CHECK(delta_convertible_by_length(l3a, l3b) == Tri::Holds);
  CHECK(convertible_bounded(l3a, l3b).status ==
        ConvertOutcome::Status::Convertible);
  CHECK(delta_convertible_by_length(l3a, Term::app(d, Term::app(d, dd))) ==
        Tri::Fails);
  CHECK(delta_convertible_by_length(d, dd) == Tri::Unknown);
}
