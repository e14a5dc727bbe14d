#include "doctest.h"
#include "pgroup/series.hpp"

using namespace pgroup;

namespace {

Ctx G(int p, int k) { return make_context(Family::G, p, k); }
Ctx W(int p, int k) { return make_context(Family::W, p, k); }

SeriesOptions exact() {
  SeriesOptions o;
  o.agemo.mode = AgemoMode::Exact;
  return o;
}

std::vector<int> ranks(const Ctx& ctx, SeriesKind kind, const SeriesOptions& opt = exact()) {
  const FiltrationSeries& s = series(ctx, kind, opt);
  return s.layer_log;
}

const SeriesKind kAll[] = {SeriesKind::LowerCentral, SeriesKind::LowerP, SeriesKind::Frattini, SeriesKind::Jennings,
                           SeriesKind::PPower};

}  // namespace

TEST_CASE("lower central series") {
  CHECK(ranks(G(3, 1), SeriesKind::LowerCentral) == std::vector<int>{4, 1, 2});
  CHECK(series(W(3, 1), SeriesKind::LowerCentral).terms.size() == 4);
  auto w = ranks(W(3, 1), SeriesKind::LowerCentral);
  for (size_t i = 1; i < w.size(); ++i) CHECK(w[i] == 1);
  CHECK(series(G(2, 2), SeriesKind::LowerCentral).terms.size() == 6);  // class 5
  CHECK(series(G(3, 2), SeriesKind::LowerCentral).terms.size() == 10);  // class 9
}

TEST_CASE("lower p-series") {
  auto r2 = ranks(G(3, 2), SeriesKind::LowerP);
  CHECK(r2.size() == 9);
  CHECK(r2[2] == 3);  // P_3 / P_4
  CHECK(ranks(G(3, 1), SeriesKind::LowerP)[1] == 3);
  auto w = ranks(W(3, 2), SeriesKind::LowerP);
  CHECK(w == std::vector<int>{2, 2, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("Frattini series") {
  auto g2 = ranks(G(3, 2), SeriesKind::Frattini);
  CHECK(g2 == std::vector<int>{2, 6, 9});
  CHECK(ranks(W(3, 2), SeriesKind::Frattini).size() == 3);
  // the final layer of rank (p^(k+1)-3p^k-p+3)/(2(p-1)) is empty for p = 3, present for p = 5
  CHECK(ranks(G(3, 1), SeriesKind::Frattini).size() == 2);
  CHECK(ranks(G(5, 1), SeriesKind::Frattini) == std::vector<int>{2, 7, 1});
}

TEST_CASE("Jennings series") {
  auto g1 = ranks(G(3, 1), SeriesKind::Jennings);
  CHECK(g1[0] == 2);
  CHECK(g1[2] == 4);  // i = p
  Ctx ctx = G(3, 2);
  const FiltrationSeries& d = series(ctx, SeriesKind::Jennings, exact());
  const FiltrationSeries& g = series(ctx, SeriesKind::LowerCentral);
  for (int i = 4; i <= 9; ++i) CHECK(d.term(i).log_order() == g.term(i).log_order() + 1);
  CHECK(d.term(4) == join(generate(ctx, {ctx->x_pow(9)}), g.term(4)));
  // at k = 1 y^p is still outside gamma_i, so the gap is 2
  Ctx c1 = G(3, 1);
  CHECK(series(c1, SeriesKind::Jennings, exact()).term(2).log_order() ==
        series(c1, SeriesKind::LowerCentral).term(2).log_order() + 2);
  Ctx w1 = W(3, 1);
  for (int i = 2; i <= 3; ++i)
    CHECK(series(w1, SeriesKind::Jennings, exact()).term(i) == series(w1, SeriesKind::LowerCentral).term(i));
}

TEST_CASE("property: Jennings recursion equals the closed form") {
  for (const Ctx& ctx : {G(3, 1), G(3, 2), G(2, 2), W(3, 2)}) {
    SeriesOptions a = exact(), b = exact();
    a.jennings = JenningsMethod::Recursive;
    b.jennings = JenningsMethod::ClosedForm;
    CHECK(jennings(ctx, a).terms == jennings(ctx, b).terms);
  }
}

TEST_CASE("property: predicted rank tables") {
  for (const Ctx& ctx : {G(3, 1), G(3, 2), G(5, 1), W(3, 1), W(3, 2), W(5, 1)})
    for (SeriesKind kind : {SeriesKind::LowerCentral, SeriesKind::LowerP, SeriesKind::Jennings, SeriesKind::Frattini}) {
      LayerTable t = layer_table(ctx, kind, exact());
      for (const auto& r : t.rows)
        if (r.match()) CHECK_MESSAGE(*r.match(), ctx->name() << " " << series_name(kind) << " level " << r.level);
    }
}

TEST_CASE("property: series shape") {
  for (const Ctx& ctx : {G(3, 1), G(3, 2), G(2, 2), W(3, 2)})
    for (SeriesKind kind : kAll) {
      const FiltrationSeries& s = series(ctx, kind, exact());
      REQUIRE(!s.terms.empty());
      CHECK(s.terms.front() == full_group(ctx));
      CHECK(s.terms.back().is_trivial());
      int sum = 0;
      for (size_t i = 0; i + 1 < s.terms.size(); ++i) {
        CHECK(s.terms[i + 1].subset_of(s.terms[i]));
        CHECK(s.layer_log[i] >= 0);  // Jennings of G_2(2) has an empty layer
        sum += s.layer_log[i];
      }
      CHECK(sum == ctx->ndepth());
    }
}

TEST_CASE("property: [gamma_i, gamma_j] inside gamma_(i+j)") {
  Ctx ctx = G(3, 2);
  const FiltrationSeries& g = series(ctx, SeriesKind::LowerCentral);
  for (int i = 1; i <= 4; ++i)
    for (int j = i; i + j <= g.last_level(); ++j) {
      auto bi = g.term(i).basis(), bj = g.term(j).basis();
      for (size_t a = 0; a < bi.size(); a += 2)
        for (size_t b = 0; b < bj.size(); b += 2) CHECK(g.term(i + j).contains(ctx->comm(bi[a], bj[b])));
    }
}

TEST_CASE("property: quotient compatibility G_2 -> G_1") {
  Ctx c2 = G(3, 2), c1 = G(3, 1);
  Hom h = make_hom(c2, c1);
  for (SeriesKind kind : kAll) {
    const FiltrationSeries& s2 = series(c2, kind, exact());
    const FiltrationSeries& s1 = series(c1, kind, exact());
    for (int lv = s1.first(); lv <= s1.last_level(); ++lv)
      CHECK_MESSAGE(image(s2.term(lv), h) == s1.term(lv), series_name(kind) << " level " << lv);
  }
}

TEST_CASE("Frattini subgroup three ways") {
  for (const Ctx& ctx : {G(3, 1), G(3, 2), W(3, 2)}) {
    Subgroup phi = series(ctx, SeriesKind::Frattini, exact()).term(1);
    CHECK(phi == series(ctx, SeriesKind::LowerP, exact()).term(2));
    CHECK(phi == series(ctx, SeriesKind::Jennings, exact()).term(2));
  }
}

TEST_CASE("stability") {
  SeriesOptions fm;
  fm.agemo.mode = AgemoMode::Formula;
  auto l4 = stability(SeriesKind::LowerP, 3, 4, 4, fm);
  REQUIRE(l4);
  CHECK(l4->k == 3);
  CHECK(l4->rank == 2);
  auto f2 = stability(SeriesKind::Frattini, 3, 2, 4, fm);
  REQUIRE(f2);
  CHECK(f2->k == 3);
  CHECK(f2->rank == 13);
  // |G_k : gamma_2| = p^(k+3) grows with k, so the index never settles
  CHECK(!stability(SeriesKind::LowerCentral, 3, 2, 3));
  CHECK(ranks(G(3, 2), SeriesKind::LowerCentral)[1] == 1);
  CHECK(ranks(G(3, 3), SeriesKind::LowerCentral, SeriesOptions{})[1] == 1);
}

TEST_CASE("p-power tower") {
  auto t = p_power_tower(3, 2);
  REQUIRE(t.size() == 2);
  // level 1 has index 3, one below the closed form's 4
  CHECK(t[0].log_index == 3);
  CHECK(t[0].predicted == 4);
  CHECK(t[1].log_index == 14);
  CHECK(t[1].predicted == 14);
  for (const auto& r : t) {
    CHECK(r.exact);
    CHECK(r.iterated_agrees.value_or(false));
  }
}

TEST_CASE("formula mode is flagged") {
  const FiltrationSeries& s = series(G(3, 3), SeriesKind::LowerP, [] {
    SeriesOptions o;
    o.agemo.mode = AgemoMode::Formula;
    return o;
  }());
  CHECK(s.unverified);
  CHECK(s.terms.size() == 28);
}

TEST_CASE("layer table output") {
  LayerTable t = layer_table(G(3, 1), SeriesKind::LowerCentral);
  std::string csv = t.to_csv();
  CHECK(csv.rfind("level,log_index,rank,stable,predicted_rank,match", 0) == 0);
  CHECK(t.to_json().find("\"rows\"") != std::string::npos);
}
