#include "pgroup/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace pgroup {

using nlohmann::ordered_json;

namespace {

int first_density_level(SeriesKind kind) { return first_level(kind) + 1; }

int ceil_log(int64_t i, int p) {
  int l = 0;
  int64_t v = 1;
  while (v < i) {
    v *= p;
    ++l;
  }
  return l;
}

// G (odd p): layer j -> (rank, rank of the Z-part); j counted from the series' first level
std::pair<BigInt, BigInt> g_layer(SeriesKind kind, int p, int j) {
  switch (kind) {
    case SeriesKind::LowerP:
      if (j == 1) return {2, 0};
      if (j == 2) return {3, 1};
      return j % 2 ? std::pair<BigInt, BigInt>{3, 1} : std::pair<BigInt, BigInt>{2, 0};
    case SeriesKind::Jennings: {
      if (j == 1) return {2, 0};
      if (j == p) return {4, 2};
      int64_t v = int64_t(p) * p;
      while (v < j) v *= p;
      if (v == j) return {3, 1};
      return j % 2 ? std::pair<BigInt, BigInt>{2, 1} : std::pair<BigInt, BigInt>{1, 0};
    }
    case SeriesKind::Frattini:
      if (j == 0) return {2, 0};
      if (j == 1) return {p + 3, 2};
      return {big_pow(p, j) + big_pow(p, j - 1) + 1, big_pow(p, j - 1)};
    default:
      throw Error("no layer table");
  }
}

// x-digits of log|G : S_i| in the infinite group
int x_part(SeriesKind kind, int p, int i) {
  switch (kind) {
    case SeriesKind::LowerP:
    case SeriesKind::LowerCentral:
      return i - 1;
    case SeriesKind::PPower:
    case SeriesKind::Frattini:
      return i;
    case SeriesKind::Jennings:
      return ceil_log(i, p);
  }
  return 0;
}

// W: exponent bound N with S_i ∩ B = t^N B
BigInt w_body_bound(SeriesKind kind, int p, int i) {
  switch (kind) {
    case SeriesKind::LowerP:
    case SeriesKind::Jennings:
      return i - 1;
    case SeriesKind::PPower:
      return big_pow(p, i) - 1;
    case SeriesKind::Frattini:
      return (big_pow(p, i) - 1) / (p - 1);
    case SeriesKind::LowerCentral:
      break;
  }
  throw Error("no closed form");
}

// #{ 0 <= j < len : j mod period < m }
BigInt count_residues(const BigInt& len, const BigInt& period, const BigInt& m) {
  if (len <= 0) return 0;
  BigInt r = len % period;
  return (len / period) * m + (r < m ? r : m);
}

}  // namespace

std::optional<ClosedForm> closed_form(Family fam, const std::string& named, SeriesKind kind, int p, int n, int m) {
  if (kind == SeriesKind::LowerCentral) return std::nullopt;
  ClosedForm cf;
  cf.from_level = first_density_level(kind);
  if (fam == Family::W) {
    if (p == 2 && kind == SeriesKind::Frattini) return std::nullopt;
    // subgroup = <x^{p^xn}> ⋉ M with M = span{t^j : j mod period < mres, j >= 1 (K only)}
    bool has_x = named == "full" || named == "K";
    int xn = named == "K" ? n : 0;
    bool body_all = named == "full" || named == "H" || named == "base";
    if (!has_x && !body_all && named != "Z" && named != "trivial") return std::nullopt;
    if (named == "K" && (m < 0 || BigInt(m) > big_pow(p, n))) return std::nullopt;
    cf.term = [=](int i) {
      BigInt nb = w_body_bound(kind, p, i);
      int xd = x_part(kind, p, i);
      BigInt den = xd + nb;
      BigInt num = has_x ? BigInt(std::max(0, xd - xn)) : BigInt(0);
      if (body_all)
        num += nb;
      else if (named == "K")
        num += count_residues(nb - 1, big_pow(p, n), m);
      return std::pair<BigInt, BigInt>{num, den};
    };
    if (named == "Z" || named == "trivial")
      cf.limit = 0;
    else if (named == "K")
      cf.limit = kind == SeriesKind::LowerP ? Rational(1, 2) + Rational(m, 2 * big_pow(p, n)) : Rational(m, big_pow(p, n));
    else if (body_all && named != "full")
      cf.limit = kind == SeriesKind::LowerP ? Rational(1, 2) : Rational(1);
    else
      cf.limit = 1;
    return cf;
  }
  if (p == 2) return std::nullopt;
  if (named != "Z" && named != "H" && named != "full" && named != "trivial") return std::nullopt;
  if (kind == SeriesKind::PPower) {
    // valid from level 2; level 1 is not covered by the power structure used here
    cf.from_level = 2;
    cf.term = [=](int i) {
      BigInt pi = big_pow(p, i);
      BigInt den = (3 * pi + 2 * i - 3) / 2;
      BigInt num = named == "Z" ? (pi - 1) / 2 : named == "H" ? (3 * pi - 3) / 2 : named == "full" ? den : BigInt(0);
      return std::pair<BigInt, BigInt>{num, den};
    };
  } else {
    cf.term = [=](int i) {
      BigInt den = 0, z = 0;
      for (int j = first_level(kind); j < i; ++j) {
        auto [r, zr] = g_layer(kind, p, j);
        den += r;
        z += zr;
      }
      BigInt num = 0;
      if (named == "Z")
        num = z;
      else if (named == "H")
        num = den - x_part(kind, p, i);
      else if (named == "full")
        num = den;
      return std::pair<BigInt, BigInt>{num, den};
    };
  }
  if (named == "trivial")
    cf.limit = 0;
  else if (named == "full")
    cf.limit = 1;
  else if (named == "H")
    cf.limit = kind == SeriesKind::LowerP ? Rational(3, 5) : Rational(1);
  else
    switch (kind) {
      case SeriesKind::LowerP: cf.limit = Rational(1, 5); break;
      case SeriesKind::Frattini: cf.limit = Rational(1, p + 1); break;
      default: cf.limit = Rational(1, 3); break;
    }
  return cf;
}

std::optional<ClosedForm> closed_form(const SubgroupSpec& spec, SeriesKind kind) {
  if (spec.gens.size() != 1 || spec.gens[0].kind != GenEntry::Named) return std::nullopt;
  const NamedGen& n = spec.gens[0].named;
  return closed_form(spec.group.family, n.name, kind, spec.group.p, n.n, n.m);
}

std::pair<int, int> engine_term(const Subgroup& k, const FiltrationSeries& s, int level) {
  Subgroup t = s.term(level);
  Subgroup j = join(k, t);
  return {j.log_order() - t.log_order(), k.ctx()->ndepth() - t.log_order()};
}

DensitySequence closed_form_sequence(const SubgroupSpec& spec, SeriesKind kind, int i_max) {
  auto cf = closed_form(spec, kind);
  if (!cf) throw Error("no closed form registered for " + spec.id + " under " + series_name(kind));
  DensitySequence seq;
  seq.spec_id = spec.id;
  seq.family = spec.group.family;
  seq.kind = kind;
  seq.p = spec.group.p;
  seq.registered_limit = cf->limit;
  for (int i = cf->from_level; i <= i_max; ++i) {
    auto [num, den] = cf->term(i);
    seq.terms.push_back({i, num, den, true, "closed_form", 0, false});
  }
  return seq;
}

DensitySequence density_terms(const SubgroupSpec& spec, SeriesKind kind, int i_max, const DensityOptions& opt) {
  DensitySequence seq;
  seq.spec_id = spec.id;
  seq.family = spec.group.family;
  seq.kind = kind;
  seq.p = spec.group.p;
  auto cf = closed_form(spec, kind);
  if (cf) seq.registered_limit = cf->limit;

  struct Level {
    Ctx ctx;
    const FiltrationSeries* s = nullptr;
    std::optional<Subgroup> k;
  };
  std::map<int, Level> quot;
  auto at = [&](int k) -> Level& {
    auto it = quot.find(k);
    if (it != quot.end()) return it->second;
    Level l;
    l.ctx = make_context(spec.group.family, spec.group.p, k);
    l.s = &series(l.ctx, kind, opt.series);
    l.k = instantiate_subgroup(spec, l.ctx);
    return quot.emplace(k, std::move(l)).first->second;
  };

  int k_lo = std::max(opt.k_start, spec.min_k());
  bool engine = k_lo < opt.k_max;
  for (int i = first_density_level(kind); i <= i_max; ++i) {
    std::optional<DensityTerm> term;
    while (engine && k_lo < opt.k_max) {
      try {
        Level& a = at(k_lo);
        Level& b = at(k_lo + 1);
        auto ta = engine_term(*a.k, *a.s, i);
        auto tb = engine_term(*b.k, *b.s, i);
        if (ta == tb) {
          term = DensityTerm{i, ta.first, ta.second, true, "engine", k_lo, a.s->unverified || b.s->unverified};
          break;
        }
      } catch (const BudgetError& e) {
        engine = false;
        seq.cutoff_reason = e.what();
        break;
      }
      ++k_lo;
    }
    if (!term) engine = false;
    if (term && cf && i >= cf->from_level) {
      auto [num, den] = cf->term(i);
      if (num != term->num || den != term->den)
        seq.mismatches.push_back("level " + std::to_string(i) + ": engine " + term->num.str() + "/" +
                                 term->den.str() + " vs closed form " + num.str() + "/" + den.str());
    }
    if (!term && cf && opt.extend_closed_form && i >= cf->from_level) {
      auto [num, den] = cf->term(i);
      term = DensityTerm{i, num, den, true, "closed_form", 0, false};
    }
    if (!term) {
      seq.cutoff = i;
      if (seq.cutoff_reason.empty())
        seq.cutoff_reason = "no two consecutive quotients up to k=" + std::to_string(opt.k_max) + " agree";
      break;
    }
    seq.terms.push_back(*term);
  }
  return seq;
}

HdimEstimate hdim_estimate(const DensitySequence& seq, int tail_window, double tol) {
  std::vector<const DensityTerm*> st;
  for (const auto& t : seq.terms)
    if (t.stable && t.den > 0) st.push_back(&t);
  if (st.empty()) throw Error("no stable terms to estimate from");
  if (tail_window < 1) throw Error("tail window must be positive");
  HdimEstimate h;
  h.window = std::min<int>(tail_window, static_cast<int>(st.size()));
  Rational lo = st.back()->value(), hi = lo;
  for (size_t i = st.size() - h.window; i < st.size(); ++i) {
    Rational v = st[i]->value();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  h.estimate = lo;
  h.oscillation = hi - lo;
  h.strong = to_double(h.oscillation) <= tol;
  h.limit = seq.registered_limit;
  if (h.limit) {
    double c = 0;
    for (size_t i = st.size() - h.window; i < st.size(); ++i)
      c = std::max(c, st[i]->level * std::abs(to_double(st[i]->value() - *h.limit)));
    h.rate_constant = c;
  }
  return h;
}

std::string DensitySequence::to_csv() const {
  std::ostringstream os;
  os << "level,numerator,denominator,value,stable\n";
  for (const auto& t : terms)
    os << t.level << "," << t.num << "," << t.den << "," << to_string(t.value()) << "," << (t.stable ? "true" : "false")
       << "\n";
  return os.str();
}

std::string DensitySequence::to_json() const {
  ordered_json j;
  j["subgroup"] = spec_id;
  j["family"] = family == Family::G ? "G" : "W";
  j["p"] = p;
  j["series"] = series_name(kind);
  j["registered_limit"] = registered_limit ? ordered_json(to_string(*registered_limit)) : ordered_json();
  j["terms"] = ordered_json::array();
  for (const auto& t : terms) {
    ordered_json r;
    r["level"] = t.level;
    r["numerator"] = t.num.str();
    r["denominator"] = t.den.str();
    r["value"] = to_string(t.value());
    r["stable"] = t.stable;
    r["source"] = t.source;
    if (t.k) r["k"] = t.k;
    if (t.unverified) r["unverified"] = true;
    j["terms"].push_back(r);
  }
  j["cutoff"] = cutoff ? ordered_json(*cutoff) : ordered_json();
  if (cutoff) j["cutoff_reason"] = cutoff_reason;
  j["mismatches"] = mismatches;
  return j.dump(2);
}

std::string DensitySequence::to_human() const {
  std::ostringstream os;
  os << spec_id << " in " << (family == Family::G ? "G" : "W") << "(p=" << p << "), " << series_name(kind) << "\n";
  for (const auto& t : terms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", to_double(t.value()));
    os << "  d_" << t.level << " = " << t.num << "/" << t.den << " = " << buf << "  [" << t.source;
    if (t.k) os << " k=" << t.k;
    if (t.unverified) os << ", unverified";
    os << "]\n";
  }
  if (cutoff) os << "  cutoff at level " << *cutoff << ": " << cutoff_reason << "\n";
  for (const auto& m : mismatches) os << "  MISMATCH " << m << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// spectra

SpectrumSet& SpectrumSet::add_interval(const Rational& lo, const Rational& hi, bool closed_right) {
  if (lo > hi) throw Error("interval with lo > hi");
  if (lo < 0 || hi > 1) throw Error("spectrum values must lie in [0,1]");
  iv_.push_back({lo, hi, closed_right});
  normalize();
  return *this;
}

SpectrumSet& SpectrumSet::add_point(const Rational& r) {
  if (r < 0 || r > 1) throw Error("spectrum values must lie in [0,1]");
  pts_.push_back(r);
  normalize();
  return *this;
}

SpectrumSet& SpectrumSet::unite(const SpectrumSet& o) {
  iv_.insert(iv_.end(), o.iv_.begin(), o.iv_.end());
  pts_.insert(pts_.end(), o.pts_.begin(), o.pts_.end());
  normalize();
  return *this;
}

void SpectrumSet::normalize() {
  std::vector<Interval> in;
  for (const auto& i : iv_) {
    if (i.lo == i.hi) {
      if (i.closed_right) pts_.push_back(i.lo);
    } else {
      in.push_back(i);
    }
  }
  std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& i : in) {
    if (!out.empty() && i.lo <= out.back().hi) {
      Interval& c = out.back();
      if (i.hi > c.hi) {
        c.hi = i.hi;
        c.closed_right = i.closed_right;
      } else if (i.hi == c.hi) {
        c.closed_right = c.closed_right || i.closed_right;
      }
    } else {
      out.push_back(i);
    }
  }
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  std::vector<Rational> rest;
  for (const auto& r : pts_) {
    bool absorbed = false;
    for (auto& i : out) {
      if (i.lo <= r && (r < i.hi || (r == i.hi && i.closed_right))) absorbed = true;
      if (r == i.hi && !i.closed_right) {
        i.closed_right = true;
        absorbed = true;
      }
      if (absorbed) break;
    }
    if (!absorbed) rest.push_back(r);
  }
  iv_ = std::move(out);
  pts_ = std::move(rest);
}

bool SpectrumSet::contains(const Rational& r) const {
  for (const auto& i : iv_)
    if (i.lo <= r && (r < i.hi || (r == i.hi && i.closed_right))) return true;
  return std::binary_search(pts_.begin(), pts_.end(), r);
}

bool SpectrumSet::operator==(const SpectrumSet& o) const {
  if (iv_.size() != o.iv_.size() || pts_ != o.pts_) return false;
  for (size_t i = 0; i < iv_.size(); ++i)
    if (iv_[i].lo != o.iv_[i].lo || iv_[i].hi != o.iv_[i].hi || iv_[i].closed_right != o.iv_[i].closed_right)
      return false;
  return true;
}

std::string SpectrumSet::str() const {
  if (iv_.empty() && pts_.empty()) return "∅";
  std::string s;
  size_t a = 0, b = 0;
  while (a < iv_.size() || b < pts_.size()) {
    if (!s.empty()) s += " ∪ ";
    if (b < pts_.size() && (a == iv_.size() || pts_[b] < iv_[a].lo)) {
      s += "{" + to_string(pts_[b++]) + "}";
    } else {
      const Interval& i = iv_[a++];
      s += "[" + to_string(i.lo) + "," + to_string(i.hi) + (i.closed_right ? "]" : ")");
    }
  }
  return s;
}

std::string SpectrumSet::to_json() const {
  ordered_json j;
  j["intervals"] = ordered_json::array();
  for (const auto& i : iv_) j["intervals"].push_back({to_string(i.lo), to_string(i.hi), i.closed_right});
  j["points"] = ordered_json::array();
  for (const auto& r : pts_) j["points"].push_back(to_string(r));
  j["components"] = components();
  j["text"] = str();
  return j.dump(2);
}

SpectrumSet unite(SpectrumSet a, const SpectrumSet& b) { return a.unite(b); }

SpectrumSet normal_spectrum(const Rational& xi, const Rational& eta) {
  if (!(0 <= xi && xi <= eta && eta <= 1)) throw Error("need 0 <= xi <= eta <= 1");
  SpectrumSet s;
  s.add_interval(0, xi).add_point(eta).add_point(1);
  return s;
}

SpectrumSet product_spectrum(int m, const Rational& xi) {
  if (m < 1) throw Error("m must be positive");
  if (xi < 0 || xi > 1) throw Error("xi must lie in [0,1]");
  SpectrumSet s;
  s.add_interval(0, xi);
  for (int l = 1; l < m; ++l) s.add_interval(Rational(l, m), (l + (m - l) * xi) / m);
  s.add_point(1);
  return s;
}

SpectrumSet product_spectrum_closed(int m, int n) {
  if (n < 2 || m < std::max(2, n - 1)) throw Error("closed form needs n >= 2 and m >= max(2, n-1)");
  SpectrumSet s;
  s.add_interval(0, Rational(m * n - (n - 1) * (n - 1), m * n));
  for (int l = m - n + 2; l <= m - 1; ++l) s.add_interval(Rational(l, m), Rational(m + l * (n - 1), m * n));
  s.add_point(1);
  return s;
}

SpectrumSet fg_spectrum_W(SeriesKind kind, int p, int n_max) {
  if (kind == SeriesKind::LowerCentral) throw Error("no finitely generated spectrum registered for this series");
  SpectrumSet s;
  if (kind == SeriesKind::LowerP) s.add_point(0);
  for (int n = 0; n <= n_max; ++n) {
    BigInt q = big_pow(p, n);
    for (BigInt m = 0; m <= q; ++m) {
      if (kind == SeriesKind::LowerP)
        s.add_point(Rational(1, 2) + Rational(m, 2 * q));
      else
        s.add_point(Rational(m, q));
    }
  }
  return s;
}

SpectrumSet full_L_spectrum_W(int p, int n_max) {
  SpectrumSet s;
  s.add_interval(0, Rational(1, 2));
  for (int n = 0; n <= n_max; ++n) {
    BigInt q = big_pow(p, n);
    for (BigInt m = 1; m < q; ++m) s.add_point(Rational(1, 2) + Rational(m, 2 * q));
  }
  s.add_point(1);
  return s;
}

bool LSpectrumG::contains(const Rational& r) const {
  if (r >= 0 && r < Rational(4, 5)) return true;
  Rational s = (5 * r - 3) / 2;
  if (!(s > Rational(1, 2) && s <= 1)) return false;
  BigInt d = denominator(s);
  while (d % p == 0) d /= p;
  return d == 1;
}

LSpectrumG L_spectrum_G(int p, int n_max) {
  LSpectrumG g;
  g.p = p;
  g.truncated.add_interval(0, Rational(4, 5), false);
  for (int n = 0; n <= n_max; ++n) {
    BigInt q = big_pow(p, n);
    for (BigInt m = q / 2 + 1; m <= q; ++m) g.truncated.add_point(Rational(3, 5) + Rational(2 * m, 5 * q));
  }
  return g;
}

std::vector<BigInt> elem_ab_slice(const Rational& eta, const std::vector<BigInt>& d) {
  if (eta < 0 || eta > 1) throw Error("eta must lie in [0,1]");
  std::vector<BigInt> e;
  BigInt cum = 0, prev = 0;
  for (const auto& di : d) {
    if (di < 0) throw Error("negative layer rank");
    cum += di;
    BigInt c = ceil(eta * cum);
    e.push_back(c - prev);
    prev = c;
  }
  return e;
}

// ---------------------------------------------------------------------------

namespace {

Subgroup strip_x(const Subgroup& central) {
  std::vector<Element> keep;
  for (const auto& b : central.basis())
    if (b.a == 0) keep.push_back(b);
  return generate(central.ctx(), keep);
}

}  // namespace

SectionDensity section_K_density(int n, int m, int p, int k_max, const SeriesOptions& opt) {
  if (m < 1 || 2 * m >= ipow(p, n)) throw Error("section density needs 1 <= m < p^n/2");
  SectionDensity sd;
  SubgroupSpec spec = section_spec(n, m, p);
  BigInt pn = big_pow(p, n);
  sd.predicted_k = (2 + Rational(4 * m - 1, pn)) / 5;
  sd.predicted_kz = Rational(2 * m - 1, pn);

  for (DensitySequence* s : {&sd.k_seq, &sd.kz_seq}) {
    s->family = Family::G;
    s->kind = SeriesKind::LowerP;
    s->p = p;
  }
  sd.k_seq.spec_id = spec.id;
  sd.kz_seq.spec_id = spec.id + " ∩ Z";
  sd.k_seq.registered_limit = sd.predicted_k;
  sd.kz_seq.registered_limit = sd.predicted_kz;

  int k_lo = std::max(n, 1);
  // x^{p^k} must not be hit by the K generator for the extension to apply
  std::map<int, std::vector<DensityTerm>> ext;
  for (int k = k_lo; k <= k_max; ++k) {
    Ctx ctx = make_context(Family::G, p, k);
    Subgroup K = instantiate_subgroup(spec, ctx);
    Subgroup kz = strip_x(intersect_central(K));
    Subgroup z = z_named(ctx);
    if (!kz.subset_of(z)) sd.cross_check_failures.push_back("K ∩ Z not inside Z at k=" + std::to_string(k));
    int lvl = static_cast<int>(ipow(p, k)) + 1;
    sd.kz_seq.terms.push_back({lvl, kz.log_order(), z.log_order(), true, "engine", k, false});

    const FiltrationSeries& s = series(ctx, SeriesKind::LowerP, opt);
    auto& v = ext[k];
    for (int i = 2; i <= lvl; ++i) {
      auto [num, den] = engine_term(K, s, i);
      int add = std::max(0, i - 2 - k);
      v.push_back({i, num + add, den + add, true, add ? "extended" : "engine", k, s.unverified});
    }
  }
  for (int k = k_lo; k < k_max; ++k) {
    const auto& a = ext[k];
    const auto& b = ext[k + 1];
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].num != b[i].num || a[i].den != b[i].den)
        sd.cross_check_failures.push_back("level " + std::to_string(a[i].level) + ": k=" + std::to_string(k) + " gives " +
                                          a[i].num.str() + "/" + a[i].den.str() + ", k=" + std::to_string(k + 1) +
                                          " gives " + b[i].num.str() + "/" + b[i].den.str());
  }
  if (!ext.empty()) sd.k_seq.terms = ext.rbegin()->second;
  return sd;
}

}  // namespace pgroup
