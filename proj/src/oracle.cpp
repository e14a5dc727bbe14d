#include "pgroup/oracle.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

namespace pgroup {

// ---------------------------------------------------------------------------
// enumerated group

EnumeratedGroup::EnumeratedGroup(int p, int k, int64_t max_size) : p_(p), k_(k) {
  if (!is_prime(p) || k < 1) throw ContextError("oracle needs prime p and k >= 1");
  q_ = ipow(p, k);
  xmod_ = q_ * p;
  E_ = static_cast<int>(p == 2 ? q_ / 2 : (q_ - 1) / 2);
  int body = static_cast<int>(q_) + 1 + E_;
  ncoords_ = (k + 1) + body;
  double est = static_cast<double>(xmod_) * std::pow(static_cast<double>(p), body);
  if (est > static_cast<double>(max_size)) throw ContextError("instance too large to enumerate");
  n_ = xmod_ * ipow(p, body);
  radix_.assign(static_cast<size_t>(body) + 1, p);
  radix_[0] = xmod_;

  rx_.resize(static_cast<size_t>(n_));
  ry_.resize(static_cast<size_t>(n_));
  for (int64_t g = 0; g < n_; ++g) {
    std::vector<int> c = coords(static_cast<int32_t>(g));
    // g y: append y_0 to the H-part
    std::vector<int> cy = c;
    collect_letter(cy, 0);
    ry_[static_cast<size_t>(g)] = index(cy);
    // g x = x^{a+1} h^x, h^x shifts every y_i to y_{i+1}; y_q = y_0
    std::vector<int> cx(c.size(), 0);
    cx[0] = static_cast<int>((c[0] + 1) % xmod_);
    cx[1 + q_] = c[1 + q_];
    for (int j = 1; j <= E_; ++j) cx[1 + q_ + j] = c[1 + q_ + j];
    for (int64_t i = 0; i < q_; ++i)
      for (int t = 0; t < c[1 + i]; ++t) collect_letter(cx, (i + 1) % q_);
    rx_[static_cast<size_t>(g)] = index(cx);
  }
  if (n_ * xmod_ <= 40000000) {
    xp_.assign(static_cast<size_t>(xmod_), {});
    xp_[0].resize(static_cast<size_t>(n_));
    for (int64_t g = 0; g < n_; ++g) xp_[0][static_cast<size_t>(g)] = static_cast<int32_t>(g);
    for (int64_t e = 1; e < xmod_; ++e) {
      xp_[e].resize(static_cast<size_t>(n_));
      for (int64_t g = 0; g < n_; ++g) xp_[e][static_cast<size_t>(g)] = rx_[static_cast<size_t>(xp_[e - 1][g])];
    }
  }
  x_ = rx_[0];
  y_ = ry_[0];
  inv_.assign(static_cast<size_t>(n_), -1);
}

std::vector<int> EnumeratedGroup::coords(int32_t g) const {
  std::vector<int> c(radix_.size());
  int64_t v = g;
  for (size_t i = 0; i < radix_.size(); ++i) {
    c[i] = static_cast<int>(v % radix_[i]);
    v /= radix_[i];
  }
  return c;
}

int32_t EnumeratedGroup::index(const std::vector<int>& c) const {
  int64_t v = 0;
  for (size_t i = radix_.size(); i-- > 0;) v = v * radix_[i] + c[i];
  return static_cast<int32_t>(v);
}

void EnumeratedGroup::add_bracket(std::vector<int>& c, int64_t i, int64_t j, int times) const {
  int64_t d = ((j - i) % q_ + q_) % q_;
  if (d == 0) return;
  int64_t slot;
  int sign = 1;
  if (d <= E_) {
    slot = d;
  } else {
    slot = q_ - d;
    if (p_ != 2) sign = -1;
  }
  int& w = c[static_cast<size_t>(1 + q_ + slot)];
  w = ((w + sign * times) % p_ + p_) % p_;
}

void EnumeratedGroup::collect_letter(std::vector<int>& c, int64_t i) const {
  // move the new y_i left past every y_j^{v_j} with j > i
  for (int64_t j = q_ - 1; j > i; --j)
    if (int v = c[static_cast<size_t>(1 + j)]) add_bracket(c, j, i, v);
  int& vi = c[static_cast<size_t>(1 + i)];
  if (++vi == p_) {
    vi = 0;
    int& cc = c[static_cast<size_t>(1 + q_)];
    cc = (cc + 1) % p_;
  }
}

int32_t EnumeratedGroup::mul(int32_t g, int32_t h) const {
  std::vector<int> c = coords(h);
  auto X = [&](int64_t e) {
    e = ((e % xmod_) + xmod_) % xmod_;
    if (!xp_.empty()) {
      g = xp_[static_cast<size_t>(e)][static_cast<size_t>(g)];
    } else {
      for (int64_t t = 0; t < e; ++t) g = rx_[static_cast<size_t>(g)];
    }
  };
  auto Y = [&](int64_t e) {
    e = ((e % (p_ * p_)) + p_ * p_) % (p_ * p_);
    for (int64_t t = 0; t < e; ++t) g = ry_[static_cast<size_t>(g)];
  };
  X(c[0]);
  for (int64_t i = 0; i < q_; ++i) {
    if (int v = c[static_cast<size_t>(1 + i)]) {
      X(-i);
      Y(v);
      X(i);
    }
  }
  Y(int64_t(p_) * c[static_cast<size_t>(1 + q_)]);
  for (int j = 1; j <= E_; ++j) {
    // e_j = y^-1 y_j^-1 y y_j
    for (int t = 0; t < c[static_cast<size_t>(1 + q_ + j)]; ++t) {
      Y(-1);
      X(-j);
      Y(-1);
      X(j);
      Y(1);
      X(-j);
      Y(1);
      X(j);
    }
  }
  return g;
}

int32_t EnumeratedGroup::inv(int32_t g) const {
  int32_t& cached = inv_[static_cast<size_t>(g)];
  if (cached >= 0) return cached;
  int32_t prev = 0, cur = g;
  while (cur != 0) {
    prev = cur;
    cur = mul(cur, g);
  }
  // g^n = 1 with prev = g^{n-1}
  cached = g == 0 ? 0 : prev;
  return cached;
}

int32_t EnumeratedGroup::pow(int32_t g, int64_t e) const {
  if (e < 0) return pow(inv(g), -e);
  int32_t r = 0, b = g;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int32_t EnumeratedGroup::comm(int32_t g, int32_t h) const { return mul(mul(inv(g), inv(h)), mul(g, h)); }
int32_t EnumeratedGroup::conj(int32_t g, int32_t h) const { return mul(mul(inv(h), g), h); }

Element EnumeratedGroup::to_element(int32_t g, const GroupCtx& ctx) const {
  if (ctx.p() != p_ || ctx.k() != k_ || !ctx.is_G()) throw ContextError("oracle/context mismatch");
  std::vector<int> c = coords(g);
  Element e;
  e.ctx = &ctx;
  e.a = c[0];
  for (size_t i = 1; i < c.size(); ++i) e.b.push_back(static_cast<uint8_t>(c[i]));
  return e;
}

int32_t EnumeratedGroup::from_element(const Element& e) const {
  std::vector<int> c{static_cast<int>(e.a)};
  for (auto v : e.b) c.push_back(v);
  if (c.size() != radix_.size()) throw ContextError("oracle/element mismatch");
  return index(c);
}

// ---------------------------------------------------------------------------
// brute subgroups

namespace {

struct Closure {
  const EnumeratedGroup& g;
  BruteSubgroup s;

  explicit Closure(const EnumeratedGroup& grp) : g(grp) {
    s.in.assign(static_cast<size_t>(g.size()), 0);
    s.in[0] = 1;
    s.elems.push_back(0);
  }

  bool extend(int32_t t) {
    if (s.contains(t)) return false;
    s.gens.push_back(t);
    for (size_t idx = 0; idx < s.elems.size(); ++idx) {
      for (int32_t gen : s.gens) {
        int32_t m = g.mul(s.elems[idx], gen);
        if (!s.in[static_cast<size_t>(m)]) {
          s.in[static_cast<size_t>(m)] = 1;
          s.elems.push_back(m);
        }
      }
    }
    return true;
  }

  void make_normal() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < s.gens.size(); ++i)
        for (int32_t c : {g.x(), g.y()}) changed = extend(g.conj(s.gens[i], c)) || changed;
    }
  }
};

}  // namespace

BruteSubgroup brute_subgroup(const EnumeratedGroup& g, const std::vector<int32_t>& gens, bool normal) {
  Closure c(g);
  for (int32_t t : gens) c.extend(t);
  if (normal) c.make_normal();
  return std::move(c.s);
}

BruteSubgroup brute_join(const EnumeratedGroup& g, const BruteSubgroup& a, const BruteSubgroup& b) {
  std::vector<int32_t> gens = a.gens;
  gens.insert(gens.end(), b.gens.begin(), b.gens.end());
  return brute_subgroup(g, gens);
}

BruteSubgroup brute_agemo(const EnumeratedGroup& g, const BruteSubgroup& a, int m) {
  int64_t e = ipow(g.p(), m);
  std::vector<char> seen(static_cast<size_t>(g.size()), 0);
  Closure c(g);
  for (int32_t x : a.elems) {
    int32_t t = g.pow(x, e);
    if (seen[static_cast<size_t>(t)]) continue;
    seen[static_cast<size_t>(t)] = 1;
    c.extend(t);
  }
  return std::move(c.s);
}

BruteSubgroup brute_commutator(const EnumeratedGroup& g, const BruteSubgroup& a, const BruteSubgroup& b) {
  std::vector<char> seen(static_cast<size_t>(g.size()), 0);
  Closure c(g);
  for (int32_t x : a.elems)
    for (int32_t y : b.gens) {
      int32_t t = g.comm(x, y);
      if (seen[static_cast<size_t>(t)]) continue;
      seen[static_cast<size_t>(t)] = 1;
      c.extend(t);
    }
  c.make_normal();
  return std::move(c.s);
}

std::vector<BruteSubgroup> brute_series(const EnumeratedGroup& g, SeriesKind kind) {
  BruteSubgroup whole = brute_subgroup(g, {g.x(), g.y()});
  std::vector<BruteSubgroup> t{whole};
  const size_t cap = static_cast<size_t>(g.log_size()) + 4;
  while (t.back().size() > 1) {
    if (t.size() > cap) throw Error("brute series failed to terminate");
    const BruteSubgroup& cur = t.back();
    switch (kind) {
      case SeriesKind::LowerCentral:
        t.push_back(brute_commutator(g, cur, whole));
        break;
      case SeriesKind::LowerP:
        t.push_back(brute_join(g, brute_agemo(g, cur, 1), brute_commutator(g, cur, whole)));
        break;
      case SeriesKind::Frattini:
        t.push_back(brute_join(g, brute_agemo(g, cur, 1), brute_commutator(g, cur, cur)));
        break;
      case SeriesKind::PPower:
        t.push_back(brute_agemo(g, whole, static_cast<int>(t.size())));
        break;
      case SeriesKind::Jennings: {
        // t[j-1] = D_j
        int i = static_cast<int>(t.size()) + 1;
        BruteSubgroup d = brute_agemo(g, t[static_cast<size_t>((i + g.p() - 1) / g.p() - 1)], 1);
        for (int j = 1; j <= i / 2; ++j)
          d = brute_join(g, d, brute_commutator(g, t[static_cast<size_t>(j - 1)], t[static_cast<size_t>(i - j - 1)]));
        t.push_back(std::move(d));
        break;
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// associativity

AssocReport check_associativity_exhaustive(const EnumeratedGroup& g) {
  AssocReport r{"exhaustive", 0, 0};
  const int32_t n = static_cast<int32_t>(g.size());
  for (int32_t a = 0; a < n; ++a)
    for (int32_t b = 0; b < n; ++b) {
      int32_t ab = g.mul(a, b);
      for (int32_t c = 0; c < n; ++c) {
        ++r.checked;
        if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) ++r.failures;
      }
    }
  return r;
}

AssocReport check_associativity_light(const EnumeratedGroup& g) {
  AssocReport r{"light", 0, 0};
  const size_t n = static_cast<size_t>(g.size());
  std::vector<int32_t> table(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) table[a * n + b] = g.mul(static_cast<int32_t>(a), static_cast<int32_t>(b));
  auto T = [&](int32_t a, int32_t b) { return table[static_cast<size_t>(a) * n + static_cast<size_t>(b)]; };
  // the table's product must also agree with the tabulated generator actions
  for (int32_t s : {g.x(), g.y()})
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        ++r.checked;
        int32_t ai = static_cast<int32_t>(a), bi = static_cast<int32_t>(b);
        if (T(T(ai, s), bi) != T(ai, T(s, bi))) ++r.failures;
      }
  // the generators must generate the whole table's magma
  BruteSubgroup all = brute_subgroup(g, {g.x(), g.y()});
  if (all.size() != g.size()) ++r.failures;
  return r;
}

AssocReport check_associativity_sampled(const EnumeratedGroup& g, int64_t triples, uint64_t seed) {
  AssocReport r{"sampled", 0, 0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int32_t> d(0, static_cast<int32_t>(g.size() - 1));
  for (int64_t t = 0; t < triples; ++t) {
    int32_t a = d(rng), b = d(rng), c = d(rng);
    ++r.checked;
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) ++r.failures;
  }
  return r;
}

// ---------------------------------------------------------------------------
// cross validation

CrossReport cross_validate(int p, int k, int random_sets, uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  CrossReport rep;
  rep.instance = "G_" + std::to_string(k) + "(" + std::to_string(p) + ")";
  EnumeratedGroup og(p, k);
  Ctx ctx = make_context(Family::G, p, k);
  const GroupCtx& c = *ctx;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int32_t> pick(0, static_cast<int32_t>(og.size() - 1));
  const bool full_membership = og.size() <= 20000;

  auto fail = [&](const std::string& what) {
    if (rep.first_divergence.empty()) rep.first_divergence = what;
  };
  auto same = [&](const Subgroup& e, const BruteSubgroup& b, const std::string& what, bool every_element) {
    if (!rep.ok()) return;
    if (ipow(p, e.log_order()) != b.size()) {
      fail(what + ": engine order p^" + std::to_string(e.log_order()) + ", brute " + std::to_string(b.size()));
      return;
    }
    for (const auto& g : e.basis())
      if (!b.contains(og.from_element(g))) {
        fail(what + ": engine basis element " + c.to_string(g) + " outside brute set");
        return;
      }
    if (every_element)
      for (int32_t g = 0; g < og.size(); ++g)
        if (e.contains(og.to_element(g, c)) != b.contains(g)) {
          fail(what + ": membership differs at " + c.to_string(og.to_element(g, c)));
          return;
        }
  };

  if (og.to_element(og.x(), c) != c.x() || og.to_element(og.y(), c) != c.y()) fail("generator coordinates differ");
  for (int t = 0; t < 2000 && rep.ok(); ++t) {
    int32_t a = pick(rng), b = pick(rng);
    if (og.to_element(og.mul(a, b), c) != c.mul(og.to_element(a, c), og.to_element(b, c)))
      fail("product differs for " + c.to_string(og.to_element(a, c)) + " * " + c.to_string(og.to_element(b, c)));
  }
  if (rep.ok()) rep.passed.push_back("products (2000 random pairs)");

  auto brute_of = [&](const std::vector<Element>& gens, bool normal) {
    std::vector<int32_t> ids;
    for (const auto& g : gens) ids.push_back(og.from_element(g));
    return brute_subgroup(og, ids, normal);
  };

  {
    std::vector<Element> zg{c.x_pow(c.q()), c.y_p()};
    for (int j = 1; j <= c.E(); ++j) zg.push_back(c.e_j(j));
    same(z_k(ctx), brute_of(zg, false), "Z_k", true);
  }
  same(h_named(ctx), brute_of({c.y(), c.x_pow(c.q())}, true), "H_k", true);
  same(base_group(ctx), brute_of({c.y()}, true), "normal closure of y", true);
  if (rep.ok()) rep.passed.push_back("named subgroups, every element");

  for (int s = 0; s < random_sets && rep.ok(); ++s) {
    int n = 1 + s % 3;
    std::vector<Element> gens;
    for (int i = 0; i < n; ++i) gens.push_back(og.to_element(pick(rng), c));
    std::vector<Element> more{og.to_element(pick(rng), c)};
    Subgroup eg = generate(ctx, gens);
    BruteSubgroup bg = brute_of(gens, false);
    same(eg, bg, "generate set " + std::to_string(s), full_membership);
    same(normal_closure(ctx, gens), brute_of(gens, true), "normal_closure set " + std::to_string(s), full_membership);
    same(join(eg, generate(ctx, more)), brute_join(og, bg, brute_of(more, false)), "join set " + std::to_string(s),
         full_membership);
  }
  if (rep.ok()) rep.passed.push_back(std::to_string(random_sets) + " random generate/normal_closure/join");

  Subgroup eg = full_group(ctx);
  BruteSubgroup bg = brute_subgroup(og, {og.x(), og.y()});
  for (int m = 1; rep.ok(); ++m) {
    Subgroup ea = agemo(eg, m, {AgemoMode::Exact, -1});
    same(ea, brute_agemo(og, bg, m), "agemo m=" + std::to_string(m), full_membership);
    if (rep.ok() && !(agemo_enumerate_all(eg, m) == ea)) fail("agemo enumeration m=" + std::to_string(m));
    if (ea.is_trivial()) break;
  }
  {
    Subgroup eh = h_named(ctx);
    BruteSubgroup bh = brute_of(eh.basis(), false);
    same(agemo(eh, 1, {AgemoMode::Exact, -1}), brute_agemo(og, bh, 1), "agemo of H_k", full_membership);
  }
  if (rep.ok()) rep.passed.push_back("agemo, every m");

  SeriesOptions so;
  so.agemo.mode = AgemoMode::Exact;
  for (SeriesKind kind : {SeriesKind::LowerCentral, SeriesKind::LowerP, SeriesKind::Frattini, SeriesKind::Jennings,
                          SeriesKind::PPower}) {
    if (!rep.ok()) break;
    const FiltrationSeries& es = series(ctx, kind, so);
    std::vector<BruteSubgroup> bs = brute_series(og, kind);
    if (es.terms.size() != bs.size()) {
      fail(series_name(kind) + ": engine length " + std::to_string(es.terms.size()) + ", brute " +
           std::to_string(bs.size()));
      break;
    }
    for (size_t i = 0; i < bs.size(); ++i)
      same(es.terms[i], bs[i], series_name(kind) + " term " + std::to_string(i + es.first()), true);
    if (rep.ok()) rep.passed.push_back(series_name(kind) + " series, every term and element");
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// collection congruences

namespace {

// left-normed commutators in {a, b} of weight lo..hi with at least two b's
void left_normed_words(const GroupCtx& c, const Element& a, const Element& b, int lo, int hi, int min_b,
                       std::vector<Element>& out) {
  std::function<void(Element, int, int)> rec = [&](Element cur, int w, int nb) {
    if (c.is_identity(cur)) return;  // every extension stays trivial
    if (w >= lo && nb >= min_b) out.push_back(cur);
    if (w == hi) return;
    rec(c.comm(cur, a), w + 1, nb);
    rec(c.comm(cur, b), w + 1, nb + 1);
  };
  rec(a, 1, 0);
  rec(b, 1, 1);
}

}  // namespace

CongruenceResult check_congruence(const Ctx& ctx, const Word& aw, const Word& bw, int r, CongruenceKind which) {
  const GroupCtx& c = *ctx;
  CongruenceResult res;
  if (c.p() == 2) {
    res.detail = "needs odd p";
    return res;
  }
  const FiltrationSeries& gam = series(ctx, SeriesKind::LowerCentral);
  Subgroup g2 = gam.term(2);
  bool exp_p = agemo(g2, 1, {AgemoMode::Exact, -1}).is_trivial();
  bool central = true;
  for (const auto& z : commutator_subgroup(g2, g2).basis())
    central = central && c.is_identity(c.comm(z, c.x())) && c.is_identity(c.comm(z, c.y()));
  res.hypotheses = exp_p && central;
  if (!res.hypotheses) {
    res.detail = "hypotheses fail";
    return res;
  }
  const int cls = static_cast<int>(gam.terms.size()) - 1;
  const int64_t pr = ipow(c.p(), r);
  Element a = eval_word(aw, c), b = eval_word(bw, c);

  if (which == CongruenceKind::Power) {
    std::vector<Element> gens;
    left_normed_words(c, a, b, static_cast<int>(pr), std::max(cls, static_cast<int>(pr)), 2, gens);
    Subgroup L = normal_closure(ctx, gens);
    Element lhs = c.pow(c.mul(a, b), pr);
    Element tail = b;
    for (int64_t i = 0; i < pr - 1; ++i) tail = c.comm(tail, a);
    Element rhs = c.mul(c.mul(c.pow(a, pr), c.pow(b, pr)), tail);
    res.holds = L.contains(c.mul(c.inv(lhs), rhs));
    res.detail = "log|L| = " + std::to_string(L.log_order());
  } else {
    std::vector<Element> ladder{b};  // [b, a, ..i.., a]
    for (int i = 1; i <= cls; ++i) ladder.push_back(c.comm(ladder.back(), a));
    std::vector<Element> gens;
    for (int i = 0; i <= cls; ++i)
      for (int j = 0; j <= cls; ++j)
        if (i + j >= pr) gens.push_back(c.comm(ladder[static_cast<size_t>(i)], ladder[static_cast<size_t>(j)]));
    Subgroup M = normal_closure(ctx, gens);
    Element lhs = c.comm(c.pow(a, pr), b);
    Element rhs = c.comm(a, b);
    for (int64_t i = 0; i < pr - 1; ++i) rhs = c.comm(rhs, a);
    res.holds = M.contains(c.mul(c.inv(lhs), rhs));
    res.detail = "log|M| = " + std::to_string(M.log_order());
  }
  return res;
}

}  // namespace pgroup
