#include "doctest.h"
#include "pgroup/oracle.hpp"
#include "pgroup/verify.hpp"

using namespace pgroup;

TEST_CASE("enumerated group basics") {
  EnumeratedGroup g(3, 1);
  CHECK(g.size() == 2187);
  CHECK(g.log_size() == 7);
  Ctx ctx = make_context(Family::G, 3, 1);
  for (int32_t e = 0; e < g.size(); e += 37) {
    CHECK(g.from_element(g.to_element(e, *ctx)) == e);
    CHECK(g.index(g.coords(e)) == e);
    CHECK(g.mul(e, g.inv(e)) == g.identity());
  }
  CHECK(g.pow(g.x(), 9) == g.identity());
  CHECK(g.pow(g.y(), 9) == g.identity());
  CHECK(g.pow(g.y(), 3) != g.identity());
}

TEST_CASE("brute force examples") {
  EnumeratedGroup g(3, 1);
  BruteSubgroup all = brute_subgroup(g, {g.x(), g.y()});
  CHECK(all.size() == g.size());
  CHECK(brute_subgroup(g, {g.y()}).size() == 9);
  // includes y^3, so 81 rather than 27 elements
  CHECK(brute_agemo(g, all, 1).size() == 81);
  EnumeratedGroup g22(2, 2);
  CHECK(brute_series(g22, SeriesKind::LowerCentral).size() == 6);
}

TEST_CASE("associativity") {
  EnumeratedGroup g21(2, 1);
  CHECK(check_associativity_exhaustive(g21).ok());
  EnumeratedGroup g22(2, 2);
  CHECK(check_associativity_light(g22).ok());
  EnumeratedGroup g31(3, 1);
  AssocReport r = check_associativity_sampled(g31, 100000);
  CHECK(r.ok());
  CHECK(r.checked == 100000);
}

TEST_CASE("cross validation on small instances") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {2, 1}, {2, 2}}) {
    CrossReport r = cross_validate(p, k, 20, 99);
    CHECK_MESSAGE(r.ok(), r.instance << ": " << r.first_divergence);
    CHECK(r.passed.size() >= 4);
  }
}

TEST_CASE("congruences") {
  Ctx c1 = make_context(Family::G, 3, 1), c2 = make_context(Family::G, 3, 2);
  for (const Ctx& ctx : {c1, c2})
    for (CongruenceKind kind : {CongruenceKind::Power, CongruenceKind::Commutator}) {
      CongruenceResult r = check_congruence(ctx, Word::x(), Word::y(), 1, kind);
      CHECK(r.hypotheses);
      CHECK(r.holds);
    }
  CongruenceResult same = check_congruence(c2, Word::x(), Word::x(), 1, CongruenceKind::Power);
  CHECK(same.holds);
  CHECK(!check_congruence(make_context(Family::G, 2, 2), Word::x(), Word::y(), 1, CongruenceKind::Power).hypotheses);
}

TEST_CASE("oracle suite report") {
  VerifyReport r = verify_oracle({{2, 1}});
  CHECK(r.ok());
  CHECK(r.to_human().find("oracle:") != std::string::npos);
}
