#include "pgroup/subgroup.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "pgroup/word.hpp"

namespace pgroup {

namespace {
int g_budget_log = -1;

int inv_mod(int a, int p) {
  for (int b = 1; b < p; ++b)
    if (a * b % p == 1) return b;
  throw Error("not invertible");
}
}  // namespace

int64_t budget_for(int p) {
  int lg = g_budget_log;
  if (lg < 0) {
    if (const char* env = std::getenv("PGROUP_BUDGET_LOG")) lg = std::atoi(env);
  }
  if (lg < 0) return 2000000;
  double v = 1;
  for (int i = 0; i < lg; ++i) v *= p;
  return v > 9e18 ? INT64_MAX : static_cast<int64_t>(v);
}

void set_budget_log(int log_p) { g_budget_log = log_p; }

Subgroup::Subgroup(Ctx ctx) : ctx_(std::move(ctx)), slot_(static_cast<size_t>(ctx_->ndepth()), -1) {}

Element Subgroup::sift(const Element& g) const {
  ctx_->check(g);
  const GroupCtx& c = *ctx_;
  Element r = g;
  while (true) {
    int d = c.depth(r);
    if (d >= c.ndepth()) return r;
    int s = slot_[d];
    if (s < 0) return r;
    r = c.mul(invpow_[s][c.lead(r, d)], r);
  }
}

bool Subgroup::contains(const Element& g) const { return ctx_->is_identity(sift(g)); }

std::vector<int> Subgroup::depths() const {
  std::vector<int> d;
  for (int i = 0; i < ctx_->ndepth(); ++i)
    if (slot_[i] >= 0) d.push_back(i);
  return d;
}

std::vector<Element> Subgroup::basis() const {
  std::vector<Element> out;
  for (int d : depths()) out.push_back(basis_[slot_[d]]);
  return out;
}

bool Subgroup::subset_of(const Subgroup& o) const {
  if (o.ctx_ != ctx_) throw ContextError("subgroups of different contexts");
  for (const auto& b : basis_)
    if (!o.contains(b)) return false;
  return true;
}

bool Subgroup::operator==(const Subgroup& o) const {
  return ctx_ == o.ctx_ && log_order() == o.log_order() && subset_of(o);
}

void Subgroup::add_normalized(const Element& r0) {
  const GroupCtx& c = *ctx_;
  int d = c.depth(r0);
  int e = c.lead(r0, d);
  Element r = e == 1 ? r0 : c.pow(r0, inv_mod(e, c.p()));
  slot_[d] = static_cast<int>(basis_.size());
  basis_.push_back(r);
  std::vector<Element> ip(static_cast<size_t>(c.p()), c.identity());
  Element ri = c.inv(r);
  for (int j = 1; j < c.p(); ++j) ip[j] = c.mul(ip[j - 1], ri);
  invpow_.push_back(std::move(ip));
}

void Subgroup::close(std::deque<Element>& queue, const std::vector<Element>& conj_by) {
  const GroupCtx& c = *ctx_;
  const bool wreath = !c.is_G();
  while (!queue.empty()) {
    Element g = sift(queue.front());
    queue.pop_front();
    if (c.is_identity(g)) continue;
    add_normalized(g);
    const Element& r = basis_.back();
    queue.push_back(c.pow(r, c.p()));
    for (size_t i = 0; i + 1 < basis_.size(); ++i) {
      const Element& b = basis_[i];
      if (wreath && r.a == 0 && b.a == 0) continue;
      queue.push_back(c.comm(r, b));
    }
    for (const auto& h : conj_by) queue.push_back(c.conj(r, h));
  }
}

void Subgroup::insert(const Element& g, const std::vector<Element>& conj_by) {
  std::deque<Element> q{g};
  close(q, conj_by);
}

void Subgroup::insert_all(const std::vector<Element>& gens, const std::vector<Element>& conj_by) {
  std::deque<Element> q(gens.begin(), gens.end());
  close(q, conj_by);
}

Subgroup trivial_subgroup(const Ctx& ctx) { return Subgroup(ctx); }

Subgroup full_group(const Ctx& ctx) { return generate(ctx, {ctx->x(), ctx->y()}); }

Subgroup generate(const Ctx& ctx, const std::vector<Element>& gens) {
  Subgroup s(ctx);
  s.insert_all(gens);
  return s;
}

Subgroup normal_closure(const Ctx& ctx, const std::vector<Element>& gens) {
  Subgroup s(ctx);
  s.insert_all(gens, {ctx->x(), ctx->y()});
  return s;
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
  if (a.ctx() != b.ctx()) throw ContextError("join of subgroups from different contexts");
  Subgroup s = a;
  s.insert_all(b.basis());
  s.unverified = a.unverified || b.unverified;
  return s;
}

Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b) {
  if (a.ctx() != b.ctx()) throw ContextError("commutator of subgroups from different contexts");
  const GroupCtx& c = a.g();
  std::vector<Element> gens;
  auto ba = a.basis(), bb = b.basis();
  for (const auto& u : ba)
    for (const auto& v : bb) {
      if (!c.is_G() && u.a == 0 && v.a == 0) continue;
      Element w = c.comm(u, v);
      if (!c.is_identity(w)) gens.push_back(std::move(w));
    }
  Subgroup s = normal_closure(a.ctx(), gens);
  s.unverified = a.unverified || b.unverified;
  return s;
}

Subgroup commutator_with_group(const Subgroup& a) {
  const GroupCtx& c = a.g();
  std::vector<Element> gens;
  for (const auto& u : a.basis()) {
    gens.push_back(c.comm(u, c.x()));
    gens.push_back(c.comm(u, c.y()));
  }
  Subgroup s = normal_closure(a.ctx(), gens);
  s.unverified = a.unverified;
  return s;
}

// ---------------------------------------------------------------------------
// homomorphisms

Element Hom::apply(const Element& g) const { return project(g, *dst); }

Hom make_hom(const Ctx& src, const Ctx& dst) {
  if (src->p() != dst->p() || dst->k() > src->k()) throw ContextError("incompatible homomorphism");
  if (src->is_G() && !dst->is_G()) {
    if (dst->k() != src->k()) throw ContextError("wreath projection must keep the level");
    return {src, dst, HomKind::WreathProjection};
  }
  if (src->is_G() != dst->is_G()) throw ContextError("incompatible homomorphism");
  return {src, dst, HomKind::LevelProjection};
}

Hom wreath_projection(const Ctx& g_ctx) {
  if (!g_ctx->is_G()) throw ContextError("wreath projection needs a G_k context");
  return make_hom(g_ctx, make_context(Family::W, g_ctx->p(), g_ctx->k()));
}

namespace {

// echelon of images that remembers a preimage for every basis element
struct Tracked {
  const GroupCtx* dst;
  const GroupCtx* src;
  std::vector<int> slot;
  std::vector<Element> img, pre;
  std::vector<std::vector<Element>> img_inv, pre_inv;

  Tracked(const GroupCtx* d, const GroupCtx* s) : dst(d), src(s), slot(static_cast<size_t>(d->ndepth()), -1) {}

  void sift(Element& i, Element& p) const {
    while (true) {
      int d = dst->depth(i);
      if (d >= dst->ndepth() || slot[d] < 0) return;
      int e = dst->lead(i, d);
      i = dst->mul(img_inv[slot[d]][e], i);
      p = src->mul(pre_inv[slot[d]][e], p);
    }
  }

  void add(Element i, Element p) {
    int d = dst->depth(i);
    int e = dst->lead(i, d);
    if (e != 1) {
      int u = inv_mod(e, dst->p());
      i = dst->pow(i, u);
      p = src->pow(p, u);
    }
    slot[d] = static_cast<int>(img.size());
    auto powers = [](const GroupCtx* c, const Element& g) {
      std::vector<Element> v(static_cast<size_t>(c->p()), c->identity());
      Element gi = c->inv(g);
      for (int j = 1; j < c->p(); ++j) v[j] = c->mul(v[j - 1], gi);
      return v;
    };
    img_inv.push_back(powers(dst, i));
    pre_inv.push_back(powers(src, p));
    img.push_back(std::move(i));
    pre.push_back(std::move(p));
  }

  // preimages sorted by image depth
  std::vector<Element> sorted_pre() const {
    std::vector<Element> out;
    for (int d = 0; d < dst->ndepth(); ++d)
      if (slot[d] >= 0) out.push_back(pre[slot[d]]);
    return out;
  }
};

// echelonize images of a's basis; residues with trivial image are returned
std::vector<Element> track_images(const Subgroup& a, const Hom& hom, Tracked& t) {
  const GroupCtx& s = *hom.src;
  const GroupCtx& d = *hom.dst;
  std::deque<std::pair<Element, Element>> queue;
  for (const auto& b : a.basis()) queue.emplace_back(hom.apply(b), b);
  std::vector<Element> kernel_gens;
  while (!queue.empty()) {
    auto [i, p] = std::move(queue.front());
    queue.pop_front();
    t.sift(i, p);
    if (d.is_identity(i)) {
      if (!s.is_identity(p)) kernel_gens.push_back(std::move(p));
      continue;
    }
    t.add(std::move(i), std::move(p));
    const Element& ri = t.img.back();
    const Element& rp = t.pre.back();
    queue.emplace_back(d.pow(ri, d.p()), s.pow(rp, s.p()));
    for (size_t j = 0; j + 1 < t.img.size(); ++j) queue.emplace_back(d.comm(ri, t.img[j]), s.comm(rp, t.pre[j]));
  }
  return kernel_gens;
}

}  // namespace

Subgroup image(const Subgroup& a, const Hom& hom) {
  if (a.ctx() != hom.src) throw ContextError("subgroup not in the homomorphism's source");
  std::vector<Element> gens;
  for (const auto& b : a.basis()) gens.push_back(hom.apply(b));
  Subgroup s = generate(hom.dst, gens);
  s.unverified = a.unverified;
  return s;
}

Subgroup kernel_restricted(const Subgroup& a, const Hom& hom) {
  if (a.ctx() != hom.src) throw ContextError("subgroup not in the homomorphism's source");
  Tracked t(hom.dst.get(), hom.src.get());
  auto kgens = track_images(a, hom, t);
  Subgroup k(hom.src);
  k.insert_all(kgens, a.basis());
  if (static_cast<int>(t.img.size()) + k.log_order() != a.log_order())
    throw Error("kernel computation inconsistent: |A| != |image||kernel|");
  k.unverified = a.unverified;
  return k;
}

Subgroup intersect_central(const Subgroup& a) { return kernel_restricted(a, wreath_projection(a.ctx())); }

// ---------------------------------------------------------------------------
// power subgroups

namespace {

Element pow_pm(const GroupCtx& c, Element g, int m) {
  for (int i = 0; i < m; ++i) g = c.pow(g, c.p());
  return g;
}

// all products prod r_i^{e_i}, each raised to p^m and collected
Subgroup powers_over(const Ctx& ctx, const std::vector<Element>& reps, int m) {
  const GroupCtx& c = *ctx;
  Subgroup out(ctx);
  std::function<void(size_t, const Element&)> rec = [&](size_t i, const Element& prefix) {
    if (i == reps.size()) {
      Element pw = pow_pm(c, prefix, m);
      if (!out.contains(pw)) out.insert(pw);
      return;
    }
    Element cur = prefix;
    for (int e = 0; e < c.p(); ++e) {
      rec(i + 1, cur);
      if (e + 1 < c.p()) cur = c.mul(cur, reps[i]);
    }
  };
  rec(0, c.identity());
  return out;
}

Subgroup agemo_wreath(const Subgroup& a, int m) {
  const GroupCtx& c = a.g();
  auto basis = a.basis();
  if (basis.empty() || basis.front().a == 0 || m == 0) return m == 0 ? a : trivial_subgroup(a.ctx());
  const Element& top = basis.front();
  Element tp = pow_pm(c, top, m);
  Element tpi = c.inv(tp);
  std::vector<Element> gens{tp};
  for (const auto& mu : basis)
    if (mu.a == 0) gens.push_back(c.mul(tpi, pow_pm(c, c.mul(top, mu), m)));
  return generate(a.ctx(), gens);
}

Subgroup agemo_formula(const Subgroup& a, int m) {
  const GroupCtx& c = a.g();
  if (c.p() == 2) throw Error("formula-mode powering is only available for odd p");
  std::vector<Element> gens;
  for (const auto& b : a.basis()) gens.push_back(pow_pm(c, b, m));
  Subgroup s = generate(a.ctx(), gens);
  // gamma_{p^m}(A), taken inside the normal closure
  int64_t target = ipow(c.p(), m);
  Subgroup gam = a;
  for (int64_t j = 1; j < target && !gam.is_trivial(); ++j) gam = commutator_subgroup(gam, a);
  Subgroup r = join(s, gam);
  r.unverified = true;
  return r;
}

}  // namespace

int agemo_transversal_log(const Subgroup& a) {
  if (!a.g().is_G()) return 0;
  Hom h = wreath_projection(a.ctx());
  Tracked t(h.dst.get(), h.src.get());
  track_images(a, h, t);
  return static_cast<int>(t.img.size());
}

Subgroup agemo(const Subgroup& a, int m, AgemoOptions opt) {
  if (m < 0) throw Error("agemo exponent must be non-negative");
  if (m == 0) return a;
  const GroupCtx& c = a.g();
  if (!c.is_G()) {
    Subgroup s = agemo_wreath(a, m);
    s.unverified = a.unverified;
    return s;
  }
  if (opt.mode == AgemoMode::Formula) return agemo_formula(a, m);
  int64_t budget = opt.budget >= 0 ? opt.budget : budget_for(c.p());
  Hom h = wreath_projection(a.ctx());
  Tracked t(h.dst.get(), h.src.get());
  track_images(a, h, t);
  double size = 1;
  for (size_t i = 0; i < t.img.size(); ++i) size *= c.p();
  if (size > static_cast<double>(budget)) {
    if (opt.mode == AgemoMode::Exact)
      throw BudgetError("exact agemo needs a transversal of " + std::to_string(c.p()) + "^" +
                        std::to_string(t.img.size()) + " elements, budget is " + std::to_string(budget));
    return agemo_formula(a, m);
  }
  Subgroup s = powers_over(a.ctx(), t.sorted_pre(), m);
  s.unverified = a.unverified;
  return s;
}

Subgroup agemo_enumerate_all(const Subgroup& a, int m) { return powers_over(a.ctx(), a.basis(), m); }

// ---------------------------------------------------------------------------
// named subgroups

Subgroup z_k(const Ctx& ctx) {
  const GroupCtx& c = *ctx;
  if (!c.is_G()) return trivial_subgroup(ctx);
  std::vector<Element> g{c.x_pow(c.q()), c.y_p()};
  for (int j = 1; j <= c.E(); ++j) g.push_back(c.e_j(j));
  return generate(ctx, g);
}

Subgroup z_named(const Ctx& ctx) {
  const GroupCtx& c = *ctx;
  if (!c.is_G()) return trivial_subgroup(ctx);
  std::vector<Element> g{c.y_p()};
  for (int j = 1; j <= c.E(); ++j) g.push_back(c.e_j(j));
  return generate(ctx, g);
}

Subgroup base_group(const Ctx& ctx) { return normal_closure(ctx, {ctx->y()}); }

Subgroup h_named(const Ctx& ctx) {
  const GroupCtx& c = *ctx;
  if (!c.is_G()) return base_group(ctx);
  return normal_closure(ctx, {c.y(), c.x_pow(c.q())});
}

}  // namespace pgroup
