#include <random>

#include "doctest.h"
#include "pgroup/word.hpp"

using namespace pgroup;

namespace {

Ctx G(int p, int k) { return make_context(Family::G, p, k); }
Ctx W(int p, int k) { return make_context(Family::W, p, k); }

std::vector<Ctx> small_contexts() {
  return {G(3, 1), G(3, 2), G(5, 1), G(2, 1), G(2, 2), G(2, 3), W(3, 1), W(3, 2), W(2, 2)};
}

}  // namespace

TEST_CASE("coordinate counts") {
  CHECK(G(3, 1)->ndepth() == 7);
  CHECK(G(2, 3)->ndepth() == 17);
  CHECK(W(3, 1)->ndepth() == 4);
  for (int p : {3, 5, 7})
    for (int k = 1; k <= (p == 3 ? 3 : 2); ++k) CHECK(G(p, k)->ndepth() == (3 * ipow(p, k) + 2 * k + 3) / 2);
  for (int k = 1; k <= 5; ++k) CHECK(G(2, k)->ndepth() == ipow(2, k) + ipow(2, k - 1) + k + 2);
  for (int k = 1; k <= 3; ++k) CHECK(W(3, k)->ndepth() == k + ipow(3, k));
}

TEST_CASE("bad parameters") {
  CHECK_THROWS_AS(make_context(Family::G, 4, 1), ContextError);
  CHECK_THROWS_AS(make_context(Family::G, 3, 0), ContextError);
}

TEST_CASE("multiplication examples in G_1(3)") {
  Ctx ctx = G(3, 1);
  const GroupCtx& c = *ctx;
  CHECK(c.is_identity(c.mul(c.x(), c.inv(c.x()))));
  Element y3 = c.pow(c.y(), 3);
  CHECK(y3 == c.y_p());
  CHECK(y3.a == 0);
  CHECK(y3.b[static_cast<size_t>(c.c_pos())] == 1);
  for (int i = 0; i < c.c_pos(); ++i) CHECK(y3.b[static_cast<size_t>(i)] == 0);
  // [y_0, y_2] folds to e_1^-1
  CHECK(c.comm(c.y_i(0), c.y_i(2)) == c.inv(c.e_j(1)));
  CHECK(c.comm(c.y_i(0), c.y_i(1)) == c.e_j(1));
  // x has order p^(k+1) = 9, so x^9 is trivial
  CHECK(c.is_identity(c.x_pow(9)));
  CHECK(c.order(c.x()) == 9);
}

TEST_CASE("orders and the elements w, w'") {
  for (int k = 1; k <= 3; ++k) {
    Ctx ctx = G(3, k);
    const GroupCtx& c = *ctx;
    CHECK(c.order(c.y()) == 9);
    CHECK(c.order(c.identity()) == 1);
    CHECK(c.is_identity(c.pow(c.x(), ipow(3, k + 1))));
    Element w = w_elem(c);
    CHECK(c.order(w) == 3);
    CHECK(c.is_identity(c.comm(w, c.x())));
    CHECK(c.is_identity(c.comm(w, c.y())));
    // w = y_{q-1} ... y_1 y_0
    Element prod = c.identity();
    for (int64_t i = c.q() - 1; i >= 0; --i) prod = c.mul(prod, c.y_i(i));
    CHECK(prod == w);
  }
}

TEST_CASE("[y,x] via the word parser") {
  Ctx ctx = G(3, 1);
  const GroupCtx& c = *ctx;
  Element g = eval_word(parse_word("[y, x]"), c);
  CHECK(g == c.comm(c.y(), c.x()));
  // y^-1 y_1: v_0 = -1 = 2 with the y^-1 carry in c
  CHECK(g.a == 0);
  CHECK(g.b[0] == 2);
  CHECK(g.b[1] == 1);
  CHECK(g.b[2] == 0);
  CHECK(c.order(g) == 3);
}

TEST_CASE("[y,x] has order 4 when p = 2") {
  for (int k = 1; k <= 3; ++k) {
    const GroupCtx& c = *G(2, k);
    CHECK(c.order(c.comm(c.y(), c.x())) == 4);
  }
}

TEST_CASE("relators") {
  for (const Ctx& c : small_contexts()) {
    RelationReport r = check_relations(*c);
    CHECK_MESSAGE(r.ok(), c->name());
    CHECK(!r.checked.empty());
  }
  for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 3}, {5, 2}, {7, 1}, {2, 4}, {2, 5}})
    CHECK(check_relations(*G(p, k)).ok());
}

TEST_CASE("property: group axioms on random triples") {
  std::mt19937_64 rng(11);
  for (const Ctx& ctx : small_contexts()) {
    const GroupCtx& c = *ctx;
    for (int t = 0; t < 300; ++t) {
      Element a = c.random(rng), b = c.random(rng), d = c.random(rng);
      REQUIRE(c.mul(c.mul(a, b), d) == c.mul(a, c.mul(b, d)));
      REQUIRE(c.mul(a, c.identity()) == a);
      REQUIRE(c.mul(c.identity(), a) == a);
      REQUIRE(c.is_identity(c.mul(a, c.inv(a))));
      REQUIRE(c.conj(a, b) == c.mul(c.mul(c.inv(b), a), b));
      REQUIRE(c.comm(a, b) == c.mul(c.inv(a), c.conj(a, b)));
    }
  }
}

TEST_CASE("property: central elements and the shared p-th power") {
  for (const Ctx& ctx : {G(3, 1), G(3, 2), G(5, 1)}) {
    const GroupCtx& c = *ctx;
    std::vector<Element> central{c.y_p(), c.x_pow(c.q())};
    for (int j = 1; j <= c.E(); ++j) central.push_back(c.e_j(j));
    std::vector<Element> pc{c.x(), c.y()};
    for (int64_t i = 0; i < c.q(); ++i) pc.push_back(c.y_i(i));
    for (const auto& z : central)
      for (const auto& g : pc) REQUIRE(c.is_identity(c.comm(z, g)));
    for (int64_t i = 0; i < c.q(); ++i) REQUIRE(c.pow(c.y_i(i), c.p()) == c.y_p());
  }
}

TEST_CASE("property: canonical words evaluate back") {
  std::mt19937_64 rng(5);
  for (const Ctx& ctx : small_contexts()) {
    const GroupCtx& c = *ctx;
    for (int t = 0; t < 200; ++t) {
      Element g = c.random(rng);
      Word w = canonical_word(g);
      REQUIRE(eval_word(w, c) == g);
      REQUIRE(eval_word(parse_word(w.str()), c) == g);
    }
  }
}

TEST_CASE("word grammar") {
  const GroupCtx& c = *G(3, 2);
  Element x = c.x(), y = c.y();
  CHECK(eval_word(parse_word("[y,[y,x]]"), c) == c.comm(y, c.comm(y, x)));
  CHECK(eval_word(parse_word("[y,x,x]"), c) == c.comm(c.comm(y, x), x));
  CHECK(eval_word(parse_word("(x*y)^3"), c) == c.pow(c.mul(x, y), 3));
  CHECK(eval_word(parse_word("y^x"), c) == c.conj(y, x));
  CHECK(eval_word(parse_word("x^-2"), c) == c.pow(x, -2));
  CHECK_THROWS_AS(parse_word("x**y"), ParseError);
  CHECK_THROWS_AS(parse_word("[x,y"), ParseError);
  CHECK_THROWS_AS(parse_word("z"), ParseError);
}

TEST_CASE("projections") {
  Ctx g2 = G(3, 2), g1 = G(3, 1), w2 = W(3, 2);
  const GroupCtx& c = *g2;
  CHECK(w2->is_identity(project(c.y_p(), *w2)));
  for (int j = 1; j <= c.E(); ++j) CHECK(w2->is_identity(project(c.e_j(j), *w2)));
  CHECK(!w2->is_identity(project(c.y(), *w2)));

  std::mt19937_64 rng(3);
  Ctx g3 = G(3, 3);
  for (int t = 0; t < 1000; ++t) {
    Element a = c.random(rng), b = c.random(rng);
    REQUIRE(project(c.mul(a, b), *g1) == g1->mul(project(a, *g1), project(b, *g1)));
    REQUIRE(project(c.mul(a, b), *w2) == w2->mul(project(a, *w2), project(b, *w2)));
  }
  for (int t = 0; t < 200; ++t) {
    Element a = g3->random(rng);
    REQUIRE(project(project(a, *g2), *g1) == project(a, *g1));
    REQUIRE(project_via_word(a, *g1) == project(a, *g1));
  }
}

TEST_CASE("wreath multiplication law") {
  const GroupCtx& c = *W(3, 2);
  // (a,f)(a',f') = (a+a', f(1+t)^a' + f'): y conjugated by x is y_1 = (1+t)
  Element y1 = c.conj(c.y(), c.x());
  CHECK(y1 == c.y_i(1));
  CHECK(c.is_identity(c.comm(c.y_i(0), c.y_i(4))));
  CHECK(c.order(c.x()) == 9);
  CHECK(c.order(c.y()) == 3);
}
