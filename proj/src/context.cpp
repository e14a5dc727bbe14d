#include "pgroup/context.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <sstream>

namespace pgroup {

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int64_t ipow(int64_t base, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

size_t ElementHash::operator()(const Element& g) const noexcept {
  uint64_t h = 1469598103934665603ull ^ static_cast<uint64_t>(g.a);
  for (uint8_t c : g.b) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

Ctx GroupCtx::make(const GroupParams& params) {
  if (!is_prime(params.p)) throw ContextError("p must be prime, got " + std::to_string(params.p));
  if (params.p > 251) throw ContextError("p too large for byte coordinates");
  if (params.k < 1) throw ContextError("k must be at least 1");
  std::shared_ptr<GroupCtx> c(new GroupCtx());
  c->fam_ = params.family;
  c->p_ = params.p;
  c->k_ = params.k;
  // guard against absurd sizes
  if (static_cast<double>(params.k) * std::log2(static_cast<double>(params.p)) > 24)
    throw ContextError("level too large");
  c->q_ = ipow(params.p, params.k);
  c->E_ = params.p == 2 ? static_cast<int>(c->q_ / 2) : static_cast<int>((c->q_ - 1) / 2);
  if (c->fam_ == Family::G) {
    c->xdigits_ = params.k + 1;
    c->xmod_ = c->q_ * params.p;
    c->body_len_ = static_cast<int>(c->q_) + 1 + c->E_;
  } else {
    c->xdigits_ = params.k;
    c->xmod_ = c->q_;
    c->body_len_ = static_cast<int>(c->q_);
  }
  c->fold_.assign(static_cast<size_t>(c->q_), {0, 0});
  for (int64_t d = 1; d < c->q_; ++d) {
    if (d <= c->E_)
      c->fold_[d] = {1, static_cast<int>(d)};
    else
      c->fold_[d] = {params.p == 2 ? 1 : -1, static_cast<int>(c->q_ - d)};
  }
  return c;
}

Ctx make_context(Family fam, int p, int k) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, Ctx> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(fam == Family::G ? 0 : 1, p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Ctx c = GroupCtx::make({fam, p, k});
  cache.emplace(key, c);
  return c;
}

std::string GroupCtx::name() const {
  std::ostringstream os;
  os << (fam_ == Family::G ? "G_" : "W_") << k_ << "(" << p_ << ")";
  return os.str();
}

void GroupCtx::check(const Element& g) const {
  if (g.ctx != this) throw ContextError("element belongs to a different context");
}

Element GroupCtx::identity() const {
  Element g;
  g.ctx = this;
  g.b.assign(static_cast<size_t>(body_len_), 0);
  return g;
}

Element GroupCtx::x() const { return x_pow(1); }

Element GroupCtx::x_pow(int64_t a) const {
  Element g = identity();
  g.a = ((a % xmod_) + xmod_) % xmod_;
  return g;
}

Element GroupCtx::y() const { return y_i(0); }

Element GroupCtx::y_i(int64_t i) const {
  Element g = identity();
  int64_t s = ((i % q_) + q_) % q_;
  if (fam_ == Family::G) {
    g.b[static_cast<size_t>(s)] = 1;
  } else {
    g.b[0] = 1;
    shift_poly(g.b, s);
  }
  return g;
}

Element GroupCtx::e_j(int j) const {
  if (fam_ != Family::G) throw ContextError("e_j exists only in G_k");
  if (j < 1 || j > E_) throw ContextError("e_j index out of range");
  Element g = identity();
  g.b[static_cast<size_t>(w_pos(j))] = 1;
  return g;
}

Element GroupCtx::y_p() const {
  if (fam_ != Family::G) throw ContextError("y^p is trivial in W_k");
  Element g = identity();
  g.b[static_cast<size_t>(c_pos())] = 1;
  return g;
}

Element GroupCtx::from_coords(int64_t a, const std::vector<int>& body) const {
  if (static_cast<int>(body.size()) != body_len_) throw ContextError("coordinate vector has wrong length");
  Element g = x_pow(a);
  for (size_t i = 0; i < body.size(); ++i) g.b[i] = static_cast<uint8_t>(((body[i] % p_) + p_) % p_);
  return g;
}

// multiply f by (1+t)^a in F_p[t]/t^q, digit by digit
void GroupCtx::shift_poly(std::vector<uint8_t>& f, int64_t a) const {
  a %= q_;
  int64_t step = 1;
  std::vector<int> binom(static_cast<size_t>(p_));
  std::vector<uint8_t> out;
  while (a > 0) {
    int d = static_cast<int>(a % p_);
    a /= p_;
    if (d != 0) {
      binom[0] = 1;
      for (int l = 1; l <= d; ++l) binom[l] = binom[l - 1] * (d - l + 1) / l;
      out.assign(f.size(), 0);
      for (int64_t n = 0; n < q_; ++n) {
        if (!f[n]) continue;
        for (int l = 0; l <= d; ++l) {
          int64_t m = n + l * step;
          if (m >= q_) break;
          out[m] = static_cast<uint8_t>((out[m] + f[n] * (binom[l] % p_)) % p_);
        }
      }
      f.swap(out);
    }
    step *= p_;
  }
}

void GroupCtx::fold_into(std::vector<uint8_t>& body, const std::vector<int64_t>& acc) const {
  for (int64_t d = 1; d < q_; ++d) {
    if (acc[d] == 0) continue;
    auto [sg, j] = fold_[d];
    int64_t val = (sg * (acc[d] % p_) + p_) % p_;
    size_t pos = static_cast<size_t>(w_pos(j));
    body[pos] = static_cast<uint8_t>((body[pos] + val) % p_);
  }
}

// H-part conjugated by x^s: indices shift by s, then the wrapped block is
// moved to the front
std::vector<uint8_t> GroupCtx::conj_x(const std::vector<uint8_t>& u, int64_t s) const {
  std::vector<uint8_t> nu(u);
  for (int64_t i = 0; i < q_; ++i) nu[(i + s) % q_] = u[i];
  std::vector<int> low, high;
  for (int64_t l = 0; l < s; ++l)
    if (nu[l]) low.push_back(static_cast<int>(l));
  if (low.empty()) return nu;
  for (int64_t h = s; h < q_; ++h)
    if (nu[h]) high.push_back(static_cast<int>(h));
  if (high.empty()) return nu;
  std::vector<int64_t> acc(static_cast<size_t>(q_), 0);
  for (int h : high)
    for (int l : low) acc[((l - h) % q_ + q_) % q_] += nu[h] * nu[l];
  fold_into(nu, acc);
  return nu;
}

std::vector<uint8_t> GroupCtx::hmul(const std::vector<uint8_t>& u, const std::vector<uint8_t>& v) const {
  std::vector<uint8_t> r(u);
  std::vector<int> nu, nv;
  for (int64_t i = 0; i < q_; ++i) {
    if (u[i]) nu.push_back(static_cast<int>(i));
    if (v[i]) nv.push_back(static_cast<int>(i));
  }
  int carry = 0;
  for (int j : nv) {
    int s = r[j] + v[j];
    if (s >= p_) {
      s -= p_;
      ++carry;
    }
    r[j] = static_cast<uint8_t>(s);
  }
  for (int i = c_pos(); i < body_len_; ++i) r[i] = static_cast<uint8_t>((r[i] + v[i]) % p_);
  size_t cp = static_cast<size_t>(c_pos());
  r[cp] = static_cast<uint8_t>((r[cp] + carry) % p_);
  if (!nu.empty() && !nv.empty() && nu.back() > nv.front()) {
    std::vector<int64_t> acc(static_cast<size_t>(q_), 0);
    // y_i (left, i > j) passes y_j (right): correction [y_i, y_j]
    for (int j : nv)
      for (auto it = nu.rbegin(); it != nu.rend() && *it > j; ++it) acc[((j - *it) % q_ + q_) % q_] += u[*it] * v[j];
    fold_into(r, acc);
  }
  return r;
}

Element GroupCtx::mul(const Element& g, const Element& h) const {
  check(g);
  check(h);
  Element r;
  r.ctx = this;
  r.a = (g.a + h.a) % xmod_;
  int64_t s = h.a % q_;
  if (fam_ == Family::W) {
    r.b = g.b;
    if (s) shift_poly(r.b, s);
    for (int i = 0; i < body_len_; ++i) r.b[i] = static_cast<uint8_t>((r.b[i] + h.b[i]) % p_);
    return r;
  }
  if (s == 0)
    r.b = hmul(g.b, h.b);
  else
    r.b = hmul(conj_x(g.b, s), h.b);
  return r;
}

Element GroupCtx::inv(const Element& g) const {
  check(g);
  if (fam_ == Family::W) {
    Element r = identity();
    r.a = (xmod_ - g.a) % xmod_;
    r.b = g.b;
    for (auto& c : r.b) c = static_cast<uint8_t>((p_ - c) % p_);
    if (r.a) shift_poly(r.b, r.a);
    return r;
  }
  std::vector<uint8_t> nb(static_cast<size_t>(body_len_), 0);
  for (int64_t i = 0; i < q_; ++i) nb[i] = static_cast<uint8_t>((p_ - g.b[i]) % p_);
  std::vector<uint8_t> z = hmul(g.b, nb);  // central
  for (int i = c_pos(); i < body_len_; ++i) nb[i] = static_cast<uint8_t>((p_ - z[i]) % p_);
  Element hi;
  hi.ctx = this;
  hi.b = std::move(nb);
  if (g.a == 0) return hi;
  return mul(hi, x_pow(-g.a));
}

Element GroupCtx::pow(const Element& g, int64_t n) const {
  check(g);
  if (n < 0) return pow(inv(g), -n);
  Element result = identity();
  Element base = g;
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return result;
}

Element GroupCtx::comm(const Element& g, const Element& h) const {
  check(g);
  check(h);
  if (g.a == 0 && h.a == 0) {
    Element r = identity();
    if (fam_ == Family::W) return r;
    // class two on H: bilinear in the v-parts
    std::vector<int64_t> acc(static_cast<size_t>(q_), 0);
    bool any = false;
    for (int64_t i = 0; i < q_; ++i) {
      if (!g.b[i]) continue;
      for (int64_t j = 0; j < q_; ++j) {
        if (!h.b[j] || i == j) continue;
        acc[((j - i) % q_ + q_) % q_] += g.b[i] * h.b[j];
        any = true;
      }
    }
    if (any) fold_into(r.b, acc);
    return r;
  }
  return mul(mul(inv(g), inv(h)), mul(g, h));
}

Element GroupCtx::conj(const Element& g, const Element& h) const { return mul(mul(inv(h), g), h); }

bool GroupCtx::is_identity(const Element& g) const {
  if (g.a != 0) return false;
  for (uint8_t c : g.b)
    if (c) return false;
  return true;
}

int64_t GroupCtx::order(const Element& g) const {
  check(g);
  int64_t o = 1;
  Element h = g;
  while (!is_identity(h)) {
    h = pow(h, p_);
    o *= p_;
  }
  return o;
}

int GroupCtx::depth(const Element& g) const {
  if (g.a != 0) {
    int d = 0;
    int64_t a = g.a;
    while (a % p_ == 0) {
      a /= p_;
      ++d;
    }
    return d;
  }
  for (int i = 0; i < body_len_; ++i)
    if (g.b[i]) return xdigits_ + i;
  return ndepth();
}

int GroupCtx::lead(const Element& g, int d) const {
  if (d < xdigits_) return static_cast<int>((g.a / ipow(p_, d)) % p_);
  return g.b[static_cast<size_t>(d - xdigits_)];
}

std::string GroupCtx::to_string(const Element& g) const {
  std::ostringstream os;
  os << "(a=" << g.a;
  auto dump = [&](const char* nm, int from, int to) {
    os << "; " << nm << "=[";
    for (int i = from; i < to; ++i) os << (i > from ? "," : "") << int(g.b[i]);
    os << "]";
  };
  if (fam_ == Family::G) {
    dump("v", 0, static_cast<int>(q_));
    os << "; c=" << int(g.b[c_pos()]);
    dump("w", c_pos() + 1, body_len_);
  } else {
    dump("f", 0, body_len_);
  }
  os << ")";
  return os.str();
}

Element GroupCtx::random(std::mt19937_64& rng) const {
  Element g = identity();
  g.a = static_cast<int64_t>(rng() % static_cast<uint64_t>(xmod_));
  for (auto& c : g.b) c = static_cast<uint8_t>(rng() % static_cast<uint64_t>(p_));
  return g;
}

Element w_elem(const GroupCtx& ctx) {
  return ctx.mul(ctx.x_pow(-ctx.q()), ctx.pow(ctx.mul(ctx.x(), ctx.y()), ctx.q()));
}

Element w_prime_elem(const GroupCtx& ctx) {
  return ctx.mul(ctx.x_pow(-ctx.q()), ctx.pow(ctx.mul(ctx.x(), ctx.inv(ctx.y())), ctx.q()));
}

Element v_elem(const GroupCtx& ctx) { return ctx.mul(w_elem(ctx), w_prime_elem(ctx)); }

RelationReport check_relations(const GroupCtx& ctx) {
  RelationReport rep;
  auto need = [&](const std::string& name, const Element& g) {
    rep.checked.push_back(name);
    if (!ctx.is_identity(g)) rep.failures.push_back(name + " -> " + ctx.to_string(g));
  };
  const int p = ctx.p();
  const int64_t q = ctx.q();
  Element x = ctx.x(), y = ctx.y();
  if (ctx.family() == Family::W) {
    need("x^" + std::to_string(q), ctx.pow(x, q));
    need("y^" + std::to_string(p), ctx.pow(y, p));
    for (int64_t i = 1; i < q; ++i) need("[y_0,y_" + std::to_string(i) + "]", ctx.comm(y, ctx.conj(y, ctx.x_pow(i))));
    return rep;
  }
  need("x^" + std::to_string(q * p), ctx.pow(x, q * p));
  need("y^" + std::to_string(p * p), ctx.pow(y, p * p));
  need("[x^" + std::to_string(q) + ",y]", ctx.comm(ctx.pow(x, q), y));
  need("[y^" + std::to_string(p) + ",x]", ctx.comm(ctx.pow(y, p), x));
  for (int i = 1; i <= ctx.E(); ++i) {
    // y_i built from x and y only
    Element yi = ctx.conj(y, ctx.pow(x, i));
    Element c = ctx.comm(y, yi);
    std::string s = std::to_string(i);
    need("[y_0,y_" + s + "]^" + std::to_string(p), ctx.pow(c, p));
    need("[y_0,y_" + s + ",x]", ctx.comm(c, x));
    need("[y_0,y_" + s + ",y]", ctx.comm(c, y));
  }
  return rep;
}

}  // namespace pgroup
