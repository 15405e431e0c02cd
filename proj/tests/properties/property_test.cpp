#include <doctest.h>

#include <functional>
#include <random>

#include "clocklam/discrimination.hpp"
#include "clocklam/fpc.hpp"
#include "clocklam/rational.hpp"

using namespace clocklam;

namespace {

TermPtr var(const char* n) { return Term::free_var(n); }

std::vector<TermPtr> catalog_terms() {
  TermPtr x = var("x");
  TermPtr xi = make_omega_delta_nf();
  std::vector<TermPtr> ts;
  ts.push_back(Term::app(make_y0(), var("f")));
  ts.push_back(Term::app(make_y1(), var("f")));
  ts.push_back(Term::app(bohm_fpc(2), x));
  ts.push_back(Term::app(bohm_fpc(3), x));
  ts.push_back(Term::app(scott_fpc(2), x));
  ts.push_back(Term::app(scott_fpc(3), x));
  ts.push_back(apply(xi, {xi, make_delta(), x}));
  ts.push_back(apply(make_theta(), {make_theta(), make_i(), x}));
  ts.push_back(Term::app(make_y1(), parse("\\z.f z z")));
  ts.push_back(Term::app(vector_fpc({2, 3}), x));
  ts.push_back(parse("(\\a b.b (a b)) ((\\a b.b (a b)) (\\a b.b (a b)))"));
  return ts;
}

// simple reducts whose rational trees certify the invariance property
std::vector<TermPtr> simple_catalog() {
  TermPtr x = var("x");
  TermPtr xi = make_omega_delta_nf();
  std::vector<TermPtr> ts;
  ts.push_back(Term::app(make_y0(), x));
  ts.push_back(Term::app(make_y1(), x));
  ts.push_back(apply(xi, {xi, make_delta(), x}));
  ts.push_back(apply(xi, {xi, make_delta(), make_delta(), x}));
  ts.push_back(apply(make_theta(), {make_theta(), make_i(), x}));
  ts.push_back(apply(make_theta(), {make_theta(), make_s(), make_i(), x}));
  return ts;
}

TermPtr random_step(const TermPtr& t, std::mt19937& rng) {
  auto redexes = redex_positions(t);
  if (redexes.empty()) return t;
  std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
  return beta_step_at(t, redexes[pick(rng)]);
}

// pointwise >= of count annotations wherever both truncations are known
bool accelerates(const TreePtr& before, const TreePtr& after) {
  if (before->kind == TreeKind::Unknown || after->kind == TreeKind::Unknown)
    return true;
  // a single beta step preserves the Boehm tree, so resolved nodes agree
  if (before->kind != after->kind) return false;
  if (before->annotation && after->annotation &&
      !annotation_related(*before->annotation, *after->annotation,
                          RelKind::Ge))
    return false;
  std::size_t n = std::min(before->children.size(), after->children.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!accelerates(before->children[i], after->children[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("clock acceleration under single beta steps") {
  auto ts = catalog_terms();
  std::mt19937 rng(0xC10CAu);
  std::uniform_int_distribution<std::size_t> pick(0, ts.size() - 1);
  TreeConfig cfg{4, 4000, ClockMode::Count};
  int violations = 0;
  for (int i = 0; i < 120; ++i) {
    TermPtr m = ts[pick(rng)];
    TermPtr n = random_step(m, rng);
    if (!accelerates(clocked_bt(m, cfg), clocked_bt(n, cfg))) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("simple terms keep their clock eventually") {
  std::mt19937 rng(0x513113u);
  RationalConfig rc{128, 10000, ClockMode::Count};
  for (const auto& m : simple_catalog()) {
    REQUIRE(is_simple_term(m).status == SimpleStatus::Simple);
    auto rm = rational_expand(m, rc);
    REQUIRE(rm.has_value());
    for (int i = 0; i < 12; ++i) {
      std::uniform_int_distribution<int> len(1, 6);
      TermPtr n = m;
      int steps = len(rng);
      for (int k = 0; k < steps; ++k) n = random_step(n, rng);
      auto rn = rational_expand(n, rc);
      REQUIRE(rn.has_value());
      ProductCert cert;
      CHECK(rel_eventually_rational(*rm, *rn, RelKind::Eq, &cert) ==
            Tri::Holds);
      CHECK(cert.complete);
    }
  }
}

TEST_CASE("random round trips through the printer") {
  std::mt19937 rng(0x9e3779b9u);
  // random closed-ish terms over a small grammar
  std::function<TermPtr(int, int)> gen = [&](int fuel, int depth) -> TermPtr {
    std::uniform_int_distribution<int> d(0, 5);
    int c = d(rng);
    if (fuel <= 0 || c <= 1) {
      std::uniform_int_distribution<int> v(0, depth > 0 ? depth + 1 : 1);
      int ix = v(rng);
      if (depth > 0 && ix <= depth - 1) return Term::bound(ix);
      static const char* names[] = {"x", "y", "f"};
      std::uniform_int_distribution<int> nm(0, 2);
      return Term::free_var(names[nm(rng)]);
    }
    if (c <= 3) {
      static const char* hints[] = {"a", "b", "x", "f"};
      std::uniform_int_distribution<int> hm(0, 3);
      return Term::abs(hints[hm(rng)], gen(fuel - 1, depth + 1));
    }
    return Term::app(gen(fuel - 2, depth), gen(fuel - 2, depth));
  };
  for (int i = 0; i < 300; ++i) {
    TermPtr t = gen(8, 0);
    CAPTURE(print(t));
    CHECK(alpha_eq(parse(print(t)), t));
    CHECK(alpha_eq(parse(print(t, PrintStyle::Unicode)), t));
  }
}

TEST_CASE("substitution preserves free-variable accounting") {
  std::mt19937 rng(0xFACADEu);
  std::function<TermPtr(int, int)> gen = [&](int fuel, int depth) -> TermPtr {
    std::uniform_int_distribution<int> d(0, 5);
    int c = d(rng);
    if (fuel <= 0 || c <= 1) {
      if (depth > 0 && c == 0) {
        std::uniform_int_distribution<int> v(0, depth - 1);
        return Term::bound(v(rng));
      }
      static const char* names[] = {"x", "y", "z"};
      std::uniform_int_distribution<int> nm(0, 2);
      return Term::free_var(names[nm(rng)]);
    }
    if (c <= 3) return Term::abs("b", gen(fuel - 1, depth + 1));
    return Term::app(gen(fuel - 2, depth), gen(fuel - 2, depth));
  };
  TermPtr value = parse("p q");
  for (int i = 0; i < 300; ++i) {
    TermPtr t = gen(8, 0);
    auto before = free_names(t);
    TermPtr after_t = substitute_free(t, "x", value);
    auto after = free_names(after_t);
    std::set<std::string> expect = before;
    if (before.count("x")) {
      expect.erase("x");
      expect.insert("p");
      expect.insert("q");
    }
    CHECK(after == expect);
  }
}

TEST_CASE("subsequence embedding agrees with a brute-force oracle") {
  // oracle: exhaustive search over index embeddings
  std::function<bool(const std::vector<Position>&, std::size_t,
                     const std::vector<Position>&, std::size_t)>
      embeds = [&](const std::vector<Position>& a, std::size_t i,
                   const std::vector<Position>& b, std::size_t j) -> bool {
    if (i == a.size()) return true;
    for (std::size_t k = j; k < b.size(); ++k)
      if (b[k] == a[i] && embeds(a, i + 1, b, k + 1)) return true;
    return false;
  };
  std::mt19937 rng(0xBEEFu);
  std::uniform_int_distribution<int> len(0, 6), digit(0, 2), posl(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    auto mk = [&]() {
      std::vector<Position> ps;
      int n = len(rng);
      for (int i = 0; i < n; ++i) {
        Position p;
        int pl = posl(rng);
        for (int k = 0; k < pl; ++k)
          p.push_back(static_cast<std::uint8_t>(digit(rng)));
        ps.push_back(p);
      }
      return ps;
    };
    auto a = mk(), b = mk();
    CHECK(subsequence_leq(a, b) == embeds(a, 0, b, 0));
  }
}
