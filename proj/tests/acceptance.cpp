// Acceptance run: one PASS/FAIL line per criterion.
// Exit status counts failures that are not listed as known deviations in the README.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "pgroup/hausdorff.hpp"
#include "pgroup/oracle.hpp"
#include "pgroup/verify.hpp"

using namespace pgroup;

namespace {

struct Outcome {
  bool pass = true;
  bool known = false;  // failure explained by a documented deviation
  std::ostringstream note;

  void require(bool ok, const std::string& what, bool documented = false) {
    if (ok) return;
    if (pass || known) known = documented && (pass || known);
    pass = false;
    note << (documented ? " [deviation] " : " [FAILED] ") << what << ";";
  }
};

int undocumented = 0;

void run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.1f s)", sec);
  std::cout << buf << o.note.str();
  if (!o.pass && o.known) std::cout << " -- documented deviation";
  std::cout << std::endl;
  if (!o.pass && !o.known) ++undocumented;
}

std::string pk(int p, int k) { return "(" + std::to_string(p) + "," + std::to_string(k) + ")"; }

const std::vector<std::pair<int, int>> kOddInstances{{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 1}};

SeriesOptions exact_opts() {
  SeriesOptions o;
  o.agemo.mode = AgemoMode::Exact;
  return o;
}

SeriesOptions formula_opts() {
  SeriesOptions o;
  o.agemo.mode = AgemoMode::Formula;
  return o;
}

// closed-form Z/H sequence with the small levels replaced by certified engine terms
DensitySequence checked_sequence(const std::string& named, SeriesKind kind, int p, int i_max, int k_max) {
  DensityOptions o;
  o.k_max = k_max;
  return density_terms(named_spec(named, Family::G, p), kind, i_max, o);
}

Rational term_at(const DensitySequence& s, int level) {
  for (const auto& t : s.terms)
    if (t.level == level) return t.value();
  throw Error("level " + std::to_string(level) + " missing");
}

std::string dec(const Rational& r) {
  std::ostringstream os;
  os.precision(6);
  os << to_double(r);
  return os.str();
}

Rational absr(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

int main() {
  run(1, "log_p|G_k| = (3p^k+2k+3)/2", [](Outcome& o) {
    for (auto [p, k] : kOddInstances) {
      auto t0 = std::chrono::steady_clock::now();
      Ctx c = make_context(Family::G, p, k);
      int want = static_cast<int>((3 * ipow(p, k) + 2 * k + 3) / 2);
      double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.require(c->ndepth() == want, pk(p, k) + " log " + std::to_string(c->ndepth()) + " != " + std::to_string(want));
      o.require(sec < 10, pk(p, k) + " took over 10 s");
    }
  });

  run(2, "log_2|G_k| = 2^k+2^(k-1)+k+2 for k=1..5", [](Outcome& o) {
    for (int k = 1; k <= 5; ++k) {
      Ctx c = make_context(Family::G, 2, k);
      int want = static_cast<int>(ipow(2, k) + ipow(2, k - 1) + k + 2);
      o.require(c->ndepth() == want, pk(2, k) + " log " + std::to_string(c->ndepth()));
    }
  });

  run(3, "relators hold; oracle associativity", [](Outcome& o) {
    for (auto [p, k] : kOddInstances) o.require(check_relations(*make_context(Family::G, p, k)).ok(), pk(p, k) + " relators");
    for (int k = 1; k <= 5; ++k) o.require(check_relations(*make_context(Family::G, 2, k)).ok(), pk(2, k) + " relators");
    for (int k = 1; k <= 3; ++k) {
      EnumeratedGroup g(2, k);
      if (g.size() > 4096) {
        // 2^17 elements: the full table test needs ~10^10 products; sample instead
        AssocReport r = check_associativity_sampled(g, 1000000);
        o.require(r.ok(), pk(2, k) + " sampled associativity");
        o.require(false, pk(2, k) + " full associativity not run, 10^6 sampled triples only", true);
      } else {
        AssocReport r = g.size() <= 128 ? check_associativity_exhaustive(g) : check_associativity_light(g);
        o.require(r.ok(), pk(2, k) + " " + r.method + " associativity");
      }
    }
    EnumeratedGroup g31(3, 1);
    o.require(check_associativity_sampled(g31, 100000).ok(), "(3,1) sampled associativity");
  });

  run(4, "agemo(G_k,k) = <x^(p^k), w, v> of order p^3", [](Outcome& o) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {2, 2}, {2, 3}}) {
      Ctx ctx = make_context(Family::G, p, k);
      const GroupCtx& c = *ctx;
      Element w = w_elem(c);
      Element third = p == 2 ? c.comm(w, c.x()) : v_elem(c);
      Subgroup target = generate(ctx, {c.x_pow(c.q()), w, third});
      Subgroup a = agemo(full_group(ctx), k, {AgemoMode::Exact, -1});
      bool ok = a == target && target.log_order() == 3;
      // at k = 1 y^p is itself a p-th power outside the target
      o.require(ok, pk(p, k) + " log|agemo| = " + std::to_string(a.log_order()), k == 1 && p != 2);
    }
  });

  run(5, "series layer tables", [](Outcome& o) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}}) {
      for (Family fam : {Family::G, Family::W}) {
        Ctx ctx = make_context(fam, p, k);
        for (SeriesKind kind :
             {SeriesKind::LowerCentral, SeriesKind::LowerP, SeriesKind::Jennings, SeriesKind::Frattini}) {
          if (fam == Family::W && kind == SeriesKind::LowerCentral) continue;
          LayerTable t = layer_table(ctx, kind, exact_opts());
          std::string mism = layer_mismatches(t);
          o.require(mism.empty(), ctx->name() + " " + series_name(kind) + " ranks");
          int len = static_cast<int>(t.rows.size());
          int64_t q = ipow(p, k);
          if (kind == SeriesKind::Frattini) {
            int want = fam == Family::G ? k + 2 : k + 1;
            // the stated last layer has rank (p^(k+1)-3p^k-p+3)/(2(p-1)) = 0 at p = 3
            bool p3 = fam == Family::G && p == 3;
            o.require(len == want, ctx->name() + " frattini length " + std::to_string(len) + " vs " + std::to_string(want),
                      p3 && len == k + 1);
          } else {
            o.require(len == q, ctx->name() + " " + series_name(kind) + " length " + std::to_string(len));
          }
        }
        if (fam == Family::G) {
          const FiltrationSeries& gam = series(ctx, SeriesKind::LowerCentral);
          const FiltrationSeries& dim = series(ctx, SeriesKind::Jennings, exact_opts());
          for (int64_t i = ipow(p, k - 1) + 1; i <= ipow(p, k); ++i) {
            int d = dim.term(static_cast<int>(i)).log_order() - gam.term(static_cast<int>(i)).log_order();
            // at k = 1, y^(p^k) = y^p survives outside gamma_i
            if (d != 1) {
              o.require(false, ctx->name() + " log|D_" + std::to_string(i) + "| - log|gamma_i| = " + std::to_string(d),
                        k == 1);
              break;
            }
          }
        }
      }
    }
    // (3,3) in formula mode, checked against the predictions and against k = 4
    for (SeriesKind kind : {SeriesKind::LowerCentral, SeriesKind::LowerP, SeriesKind::Jennings, SeriesKind::Frattini}) {
      Ctx c3 = make_context(Family::G, 3, 3), c4 = make_context(Family::G, 3, 4);
      LayerTable t3 = layer_table(c3, kind, formula_opts());
      LayerTable t4 = layer_table(c4, kind, formula_opts());
      o.require(layer_mismatches(t3).empty(), "(3,3) " + series_name(kind) + " ranks");
      int compared = 0;
      for (const auto& r : t3.rows) {
        auto p3 = predicted_rank(kind, Family::G, 3, 3, r.level), p4 = predicted_rank(kind, Family::G, 3, 4, r.level);
        if (!p3 || !p4 || *p3 != *p4) continue;
        for (const auto& r4 : t4.rows)
          if (r4.level == r.level) {
            ++compared;
            o.require(r4.rank == r.rank, "(3,3)/(3,4) " + series_name(kind) + " level " + std::to_string(r.level));
          }
      }
      o.require(compared > 0, "(3,3)/(3,4) " + series_name(kind) + " nothing compared");
    }
  });

  run(6, "Jennings recursion = closed form", [](Outcome& o) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {2, 2}}) {
      Ctx ctx = make_context(Family::G, p, k);
      SeriesOptions a = exact_opts(), b = exact_opts();
      a.jennings = JenningsMethod::Recursive;
      b.jennings = JenningsMethod::ClosedForm;
      FiltrationSeries r = jennings(ctx, a), cf = jennings(ctx, b);
      bool same = r.terms.size() == cf.terms.size();
      for (size_t i = 0; same && i < r.terms.size(); ++i) same = r.terms[i] == cf.terms[i];
      o.require(same, pk(p, k));
    }
  });

  run(7, "density endpoints", [](Outcome& o) {
    DensitySequence zp = checked_sequence("Z", SeriesKind::PPower, 3, 40, 3);
    HdimEstimate h = hdim_estimate(zp);
    o.require(absr(h.estimate - Rational(1, 3)) <= Rational(1, 100), "hdim^P(Z) = " + dec(h.estimate));
    o.require(term_at(zp, 2) == Rational(2, 7), "P d_2 = " + to_string(term_at(zp, 2)));
    // log|G : G^p| is 3, so d_1 = 0; the closed form holds from level 2
    o.require(term_at(zp, 1) == Rational(1, 4), "P d_1 = " + to_string(term_at(zp, 1)) + ", not 1/4", true);

    DensitySequence zl = checked_sequence("Z", SeriesKind::LowerP, 3, 40, 3);
    DensitySequence hl = checked_sequence("H", SeriesKind::LowerP, 3, 40, 3);
    o.require(absr(hdim_estimate(zl).estimate - Rational(1, 5)) <= Rational(1, 100), "hdim^L(Z)");
    o.require(absr(hdim_estimate(hl).estimate - Rational(3, 5)) <= Rational(1, 100), "hdim^L(H)");

    // |d_i - 1/3| decays like log(i)/i here; level 40 leaves a gap of 0.026
    DensitySequence zd = checked_sequence("Z", SeriesKind::Jennings, 3, 400, 3);
    Rational hd = hdim_estimate(zd).estimate;
    o.require(absr(hd - Rational(1, 3)) <= Rational(1, 100), "hdim^D(Z) = " + dec(hd) + " at depth 400");
    o.note << " hdim^D(Z) at depth 40 = " << dec(term_at(zd, 40)) << ", depth 400 = " << dec(hd) << ";";

    for (int p : {3, 5}) {
      DensitySequence zf = checked_sequence("Z", SeriesKind::Frattini, p, 10, p == 3 ? 3 : 2);
      Rational d10 = term_at(zf, 10);
      o.require(absr(d10 - Rational(1, p + 1)) <= Rational(1, 1000), "F d_10 at p=" + std::to_string(p) + " = " + dec(d10));
      o.require(zf.mismatches.empty(), "F engine terms vs closed form at p=" + std::to_string(p));
    }
    for (const auto* s : {&zp, &zl, &hl, &zd}) {
      o.require(s->mismatches.empty(), s->spec_id + " " + series_name(s->kind) + " engine terms vs closed form");
      int engine = 0;
      for (const auto& t : s->terms) engine += t.source == "engine";
      o.require(engine > 0, s->spec_id + " " + series_name(s->kind) + " has no engine terms");
    }
  });

  run(8, "normal spectra from computed endpoints", [](Outcome& o) {
    struct Case {
      SeriesKind kind;
      int p;
      SpectrumSet want;
    };
    std::vector<Case> cases{
        {SeriesKind::PPower, 3, SpectrumSet().add_interval(0, Rational(1, 3)).add_point(1)},
        {SeriesKind::Jennings, 3, SpectrumSet().add_interval(0, Rational(1, 3)).add_point(1)},
        {SeriesKind::Frattini, 3, SpectrumSet().add_interval(0, Rational(1, 4)).add_point(1)},
        {SeriesKind::Frattini, 5, SpectrumSet().add_interval(0, Rational(1, 6)).add_point(1)},
        {SeriesKind::LowerP, 3, SpectrumSet().add_interval(0, Rational(1, 5)).add_point(Rational(3, 5)).add_point(1)},
    };
    for (auto& cs : cases) {
      cs.want.normalize();
      DensitySequence z = checked_sequence("Z", cs.kind, cs.p, 12, 2);
      DensitySequence hh = checked_sequence("H", cs.kind, cs.p, 12, 2);
      o.require(z.registered_limit && hh.registered_limit && z.mismatches.empty() && hh.mismatches.empty(),
                series_name(cs.kind) + " endpoints not certified");
      if (!z.registered_limit || !hh.registered_limit) continue;
      SpectrumSet got = normal_spectrum(*z.registered_limit, *hh.registered_limit);
      o.require(got == cs.want, series_name(cs.kind) + " p=" + std::to_string(cs.p) + ": " + got.str());
    }
  });

  run(9, "K_{1,2} in W(3): 2/3 (P/D/F), 5/6 (L), strong", [](Outcome& o) {
    for (SeriesKind kind : {SeriesKind::PPower, SeriesKind::Jennings, SeriesKind::Frattini, SeriesKind::LowerP}) {
      Rational want = kind == SeriesKind::LowerP ? Rational(5, 6) : Rational(2, 3);
      DensityOptions opt;
      opt.k_max = 4;
      DensitySequence s = density_terms(k_nm_spec(1, 2, Family::W, 3), kind, 200, opt);
      HdimEstimate h = hdim_estimate(s);
      o.require(s.mismatches.empty(), series_name(kind) + " engine vs closed form");
      o.require(s.registered_limit && *s.registered_limit == want, series_name(kind) + " limit");
      o.require(absr(h.estimate - want) <= Rational(1, 100), series_name(kind) + " estimate " + dec(h.estimate));
      o.require(h.strong, series_name(kind) + " oscillation " + dec(h.oscillation));
    }
  });

  run(10, "section K: hdim^L(K) ~ 3/5, K∩Z density ~ 1/3", [](Outcome& o) {
    SectionDensity sd = section_K_density(1, 1, 3, 4);
    o.require(sd.cross_check_failures.empty(), "level cross-checks");
    HdimEstimate h = hdim_estimate(sd.k_seq);
    o.require(absr(h.estimate - Rational(3, 5)) <= Rational(5, 100), "hdim^L(K) = " + dec(h.estimate));
    Rational kz = sd.kz_seq.terms.back().value();
    o.require(absr(kz - Rational(1, 3)) <= Rational(5, 100), "K∩Z = " + dec(kz));
    o.note << " hdim^L(K) " << dec(h.estimate) << ", K∩Z " << to_string(kz) << " at k=4;";
  });

  run(11, "product spectra, closed form = raw union", [](Outcome& o) {
    SpectrumSet s = product_spectrum(4, Rational(1, 3));
    SpectrumSet want;
    want.add_interval(0, Rational(2, 3)).add_interval(Rational(3, 4), Rational(5, 6)).add_point(1).normalize();
    o.require(s == want && s.components() == 3, "m=4, xi=1/3: " + s.str());
    for (int n = 2; n <= 6; ++n)
      for (int m = std::max(2, n - 1); m <= 8; ++m) {
        SpectrumSet raw = product_spectrum(m, Rational(1, n)), closed = product_spectrum_closed(m, n);
        o.require(raw == closed && closed.components() == n, "n=" + std::to_string(n) + " m=" + std::to_string(m));
      }
  });

  run(12, "elementary abelian slices", [](Outcome& o) {
    auto cf = closed_form(Family::G, "Z", SeriesKind::Frattini, 3);
    if (!cf) throw Error("no closed form");
    std::vector<BigInt> d;
    for (int i = cf->from_level; i <= cf->from_level + 30; ++i) d.push_back(cf->term(i + 1).first - cf->term(i).first);
    for (Rational eta : {Rational(1, 3), Rational(37, 100), Rational(1, 2)}) {
      std::vector<BigInt> e = elem_ab_slice(eta, d);
      BigInt se = 0, sd = 0;
      for (size_t i = 0; i < d.size() && i < 30; ++i) {
        se += e[i];
        sd += d[i];
        o.require(e[i] >= 0 && e[i] <= d[i], "eta=" + to_string(eta) + " e_i outside [0,d_i]");
        if (sd == 0) continue;
        Rational r(se, sd);
        o.require(eta <= r && r <= eta + Rational(1, sd), "eta=" + to_string(eta) + " i=" + std::to_string(i));
      }
    }
  });

  run(13, "engine = brute force at (3,1),(2,2),(2,3)", [](Outcome& o) {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {2, 3}}) {
      CrossReport r = cross_validate(p, k);
      o.require(r.ok(), r.instance + ": " + r.first_divergence);
    }
  });

  run(14, "power and commutator congruences at (3,2)", [](Outcome& o) {
    Ctx ctx = make_context(Family::G, 3, 2);
    Word x = Word::x(), y = Word::y();
    std::vector<std::pair<Word, Word>> pairs{{x, y}, {parse_word("x*y"), y}, {x, parse_word("y^-1")}};
    for (const auto& [a, b] : pairs)
      for (int r = 1; r <= 2; ++r)
        for (CongruenceKind kind : {CongruenceKind::Power, CongruenceKind::Commutator}) {
          CongruenceResult c = check_congruence(ctx, a, b, r, kind);
          o.require(c.hypotheses && c.holds, "(" + a.str() + ", " + b.str() + ") r=" + std::to_string(r) +
                                                 (kind == CongruenceKind::Power ? " power" : " commutator") + " " +
                                                 c.detail);
        }
  });

  std::cout << (undocumented ? "undocumented failures: " + std::to_string(undocumented) : "no undocumented failures")
            << std::endl;
  return undocumented;
}
