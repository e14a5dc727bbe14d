#include "pgroup/series.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace pgroup {

SeriesKind parse_series_kind(const std::string& s) {
  if (s == "P" || s == "p_power") return SeriesKind::PPower;
  if (s == "L" || s == "lower_p") return SeriesKind::LowerP;
  if (s == "F" || s == "frattini") return SeriesKind::Frattini;
  if (s == "D" || s == "jennings") return SeriesKind::Jennings;
  if (s == "C" || s == "lower_central") return SeriesKind::LowerCentral;
  throw Error("unknown series '" + s + "' (expected P, L, F, D or C)");
}

std::string series_code(SeriesKind k) {
  switch (k) {
    case SeriesKind::PPower: return "P";
    case SeriesKind::LowerP: return "L";
    case SeriesKind::Frattini: return "F";
    case SeriesKind::Jennings: return "D";
    case SeriesKind::LowerCentral: return "C";
  }
  return "?";
}

std::string series_name(SeriesKind k) {
  switch (k) {
    case SeriesKind::PPower: return "p_power";
    case SeriesKind::LowerP: return "lower_p";
    case SeriesKind::Frattini: return "frattini";
    case SeriesKind::Jennings: return "jennings";
    case SeriesKind::LowerCentral: return "lower_central";
  }
  return "?";
}

int first_level(SeriesKind k) { return (k == SeriesKind::Frattini || k == SeriesKind::PPower) ? 0 : 1; }

Subgroup FiltrationSeries::term(int level) const {
  int idx = level - first();
  if (idx < 0) return terms.front();
  if (idx >= static_cast<int>(terms.size())) return trivial_subgroup(ctx);
  return terms[idx];
}

int FiltrationSeries::log_index(int level) const {
  int idx = level - first();
  int total = ctx->ndepth();
  if (idx < 0) return 0;
  if (idx >= static_cast<int>(terms.size())) return total;
  return total - terms[idx].log_order();
}

namespace {

FiltrationSeries finish(const Ctx& ctx, SeriesKind kind, std::vector<Subgroup> terms) {
  FiltrationSeries s{ctx, kind, std::move(terms), {}, false};
  for (size_t i = 0; i + 1 < s.terms.size(); ++i) {
    if (!s.terms[i + 1].subset_of(s.terms[i])) throw Error(series_name(kind) + " series is not descending");
    s.layer_log.push_back(s.terms[i].log_order() - s.terms[i + 1].log_order());
  }
  for (const auto& t : s.terms) s.unverified = s.unverified || t.unverified;
  return s;
}

// iterate next() until the trivial group appears
template <class Next>
std::vector<Subgroup> run(const Ctx& ctx, Next next) {
  std::vector<Subgroup> terms{full_group(ctx)};
  while (!terms.back().is_trivial()) {
    if (terms.size() > static_cast<size_t>(ctx->ndepth()) + 4) throw Error("series failed to terminate");
    terms.push_back(next(terms));
  }
  return terms;
}

int ceil_log(int64_t i, int p) {
  int l = 0;
  int64_t v = 1;
  while (v < i) {
    v *= p;
    ++l;
  }
  return l;
}

}  // namespace

FiltrationSeries lower_central(const Ctx& ctx) {
  return finish(ctx, SeriesKind::LowerCentral,
                run(ctx, [](const std::vector<Subgroup>& t) { return commutator_with_group(t.back()); }));
}

FiltrationSeries lower_p(const Ctx& ctx, const SeriesOptions& opt) {
  return finish(ctx, SeriesKind::LowerP, run(ctx, [&](const std::vector<Subgroup>& t) {
                  return join(agemo(t.back(), 1, opt.agemo), commutator_with_group(t.back()));
                }));
}

FiltrationSeries frattini(const Ctx& ctx, const SeriesOptions& opt) {
  return finish(ctx, SeriesKind::Frattini, run(ctx, [&](const std::vector<Subgroup>& t) {
                  return join(agemo(t.back(), 1, opt.agemo), commutator_subgroup(t.back(), t.back()));
                }));
}

FiltrationSeries p_power(const Ctx& ctx, const SeriesOptions& opt) {
  Subgroup g = full_group(ctx);
  return finish(ctx, SeriesKind::PPower, run(ctx, [&](const std::vector<Subgroup>& t) {
                  return agemo(g, static_cast<int>(t.size()), opt.agemo);
                }));
}

namespace {

FiltrationSeries jennings_recursive(const Ctx& ctx, const SeriesOptions& opt) {
  const int p = ctx->p();
  // t[j-1] = D_j
  return finish(ctx, SeriesKind::Jennings, run(ctx, [&](const std::vector<Subgroup>& t) {
                  int i = static_cast<int>(t.size()) + 1;
                  Subgroup d = agemo(t[(i + p - 1) / p - 1], 1, opt.agemo);
                  for (int j = 1; j <= i / 2; ++j) d = join(d, commutator_subgroup(t[j - 1], t[i - j - 1]));
                  return d;
                }));
}

FiltrationSeries jennings_closed(const Ctx& ctx, const SeriesOptions& opt) {
  const int p = ctx->p();
  const FiltrationSeries& gam = series(ctx, SeriesKind::LowerCentral, opt);
  Subgroup g = full_group(ctx);
  std::map<int, Subgroup> pw;
  auto power = [&](int l) -> const Subgroup& {
    auto it = pw.find(l);
    if (it == pw.end()) it = pw.emplace(l, agemo(g, l, opt.agemo)).first;
    return it->second;
  };
  return finish(ctx, SeriesKind::Jennings, run(ctx, [&](const std::vector<Subgroup>& t) {
                  int i = static_cast<int>(t.size()) + 1;
                  Subgroup d = join(power(ceil_log(i, p)), gam.term(i));
                  // p = 2 carries an extra squared commutator layer
                  if (p == 2) d = join(d, agemo(gam.term((i + 1) / 2), 1, opt.agemo));
                  return d;
                }));
}

}  // namespace

FiltrationSeries jennings(const Ctx& ctx, const SeriesOptions& opt) {
  switch (opt.jennings) {
    case JenningsMethod::Recursive:
      return jennings_recursive(ctx, opt);
    case JenningsMethod::ClosedForm:
      return jennings_closed(ctx, opt);
    case JenningsMethod::Both: {
      FiltrationSeries a = jennings_recursive(ctx, opt);
      FiltrationSeries b = jennings_closed(ctx, opt);
      if (a.terms.size() != b.terms.size()) throw Error("jennings methods disagree on length");
      for (size_t i = 0; i < a.terms.size(); ++i)
        if (!(a.terms[i] == b.terms[i])) throw Error("jennings methods disagree at level " + std::to_string(i + 1));
      return a;
    }
  }
  return jennings_closed(ctx, opt);
}

const FiltrationSeries& series(const Ctx& ctx, SeriesKind kind, const SeriesOptions& opt) {
  using Key = std::tuple<const GroupCtx*, int, int, int, int64_t>;
  static std::recursive_mutex mu;
  static std::map<Key, std::unique_ptr<FiltrationSeries>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  Key key{ctx.get(), static_cast<int>(kind), static_cast<int>(opt.agemo.mode),
          kind == SeriesKind::Jennings ? static_cast<int>(opt.jennings) : 0, opt.agemo.budget};
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  FiltrationSeries s = [&] {
    switch (kind) {
      case SeriesKind::LowerCentral: return lower_central(ctx);
      case SeriesKind::LowerP: return lower_p(ctx, opt);
      case SeriesKind::Frattini: return frattini(ctx, opt);
      case SeriesKind::Jennings: return jennings(ctx, opt);
      case SeriesKind::PPower: return p_power(ctx, opt);
    }
    return lower_central(ctx);
  }();
  auto res = cache.emplace(key, std::make_unique<FiltrationSeries>(std::move(s)));
  return *res.first->second;
}

// ---------------------------------------------------------------------------

std::optional<int> predicted_rank(SeriesKind kind, Family fam, int p, int k, int i) {
  const int64_t q = ipow(p, k);
  if (fam == Family::W) {
    switch (kind) {
      case SeriesKind::LowerCentral:
        if (i == 1) return k + 1;
        if (i >= 2 && i <= q) return 1;
        return std::nullopt;
      case SeriesKind::LowerP:
        if (i >= 1 && i <= k) return 2;
        if (i > k && i <= q) return 1;
        return std::nullopt;
      case SeriesKind::Frattini:
        if (i >= 0 && i < k) return static_cast<int>(ipow(p, i) + 1);
        if (i == k) return static_cast<int>((ipow(p, k + 1) - 2 * q + 1) / (p - 1));
        return std::nullopt;
      case SeriesKind::Jennings:
        if (i >= ipow(p, k - 1) + 1 && i <= q) return 1;
        return std::nullopt;
      case SeriesKind::PPower:
        return std::nullopt;
    }
  }
  if (p == 2) {
    switch (kind) {
      case SeriesKind::LowerCentral:
        if (i == 1) return k + 3;
        if (i >= 2 && i <= q + 1) {
          if (i % 2 == 0) return 1;
          return (i - 1) / 2 == q / 2 ? 1 : 2;
        }
        return std::nullopt;
      case SeriesKind::Jennings: {
        if (i == 1) return 2;
        if (i == 2) return 3;
        bool pow2 = (i & (i - 1)) == 0;
        if (pow2 && i <= q) return 3;
        if (i < q) return i % 2 ? 1 : 2;
        if (i == q + 1) return 0;
        if (i == q + 2) return 1;
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }
  switch (kind) {
    case SeriesKind::LowerCentral:
      if (i == 1) return k + 3;
      if (i >= 2 && i <= q) return i % 2 == 0 ? 1 : 2;
      return std::nullopt;
    case SeriesKind::LowerP:
      if (i == 1) return 2;
      if (i == 2) return 3;
      if (i >= 3 && i <= q) {
        if (i <= k + 1) return i % 2 == 0 ? 2 : 3;
        return i % 2 == 0 ? 1 : 2;
      }
      return std::nullopt;
    case SeriesKind::Jennings: {
      if (i == 1) return 2;
      if (i == p) return 4;
      if (i < 1 || i > q) return std::nullopt;
      int64_t v = p * p;
      while (v < i) v *= p;
      if (v == i) return 3;
      return i % 2 == 0 ? 1 : 2;
    }
    case SeriesKind::Frattini:
      // the stated table needs k >= 2 (level 1 clashes with the i = k row otherwise)
      if (k < 2) return std::nullopt;
      if (i == 0) return 2;
      if (i == 1) return p + 3;
      if (i >= 2 && i < k) return static_cast<int>(ipow(p, i) + ipow(p, i - 1) + 1);
      if (i == k) return static_cast<int>(q + 1 - (ipow(p, k - 1) - 1) / (p - 1));
      if (i == k + 1) return static_cast<int>((ipow(p, k + 1) - 3 * q - p + 3) / (2 * (p - 1)));
      return std::nullopt;
    case SeriesKind::PPower:
      return std::nullopt;
  }
  return std::nullopt;
}

LayerTable layer_table(const Ctx& ctx, SeriesKind kind, const SeriesOptions& opt, bool with_stability) {
  const FiltrationSeries& s = series(ctx, kind, opt);
  LayerTable t;
  t.group = ctx->name();
  t.kind = kind;
  t.unverified = s.unverified;
  const FiltrationSeries* next = nullptr;
  if (with_stability) next = &series(make_context(ctx->family(), ctx->p(), ctx->k() + 1), kind, opt);
  for (int lv = s.first(); lv < s.last_level(); ++lv) {
    LayerRow r;
    r.level = lv;
    r.log_index = s.log_index(lv);
    r.rank = s.layer_log[lv - s.first()];
    if (next) r.stable = next->log_index(lv) == r.log_index;
    r.predicted = predicted_rank(kind, ctx->family(), ctx->p(), ctx->k(), lv);
    t.rows.push_back(r);
  }
  if (next) t.unverified = t.unverified || next->unverified;
  return t;
}

namespace {
std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }
std::string opt_str(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }
}  // namespace

std::string LayerTable::to_csv() const {
  std::ostringstream os;
  os << "level,log_index,rank,stable,predicted_rank,match\n";
  for (const auto& r : rows)
    os << r.level << "," << r.log_index << "," << r.rank << "," << opt_str(r.stable) << "," << opt_str(r.predicted)
       << "," << opt_str(r.match()) << "\n";
  return os.str();
}

std::string LayerTable::to_json() const {
  nlohmann::ordered_json j;
  j["group"] = group;
  j["series"] = series_name(kind);
  j["unverified"] = unverified;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["level"] = r.level;
    row["log_index"] = r.log_index;
    row["rank"] = r.rank;
    row["stable"] = r.stable ? nlohmann::ordered_json(*r.stable) : nlohmann::ordered_json();
    row["predicted_rank"] = r.predicted ? nlohmann::ordered_json(*r.predicted) : nlohmann::ordered_json();
    row["match"] = r.match() ? nlohmann::ordered_json(*r.match()) : nlohmann::ordered_json();
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

std::string LayerTable::to_human() const {
  std::ostringstream os;
  os << group << " " << series_name(kind) << " series" << (unverified ? " (formula-mode powers)" : "") << "\n";
  os << "level  log_index  rank  stable  predicted  match\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%5d  %9d  %4d  %6s  %9s  %5s\n", r.level, r.log_index, r.rank,
                  opt_str(r.stable).c_str(), opt_str(r.predicted).c_str(), opt_str(r.match()).c_str());
    os << buf;
  }
  return os.str();
}

std::optional<StableValue> stability(SeriesKind kind, int p, int level, int k_max, const SeriesOptions& opt,
                                     int k_start) {
  for (int k = k_start; k < k_max; ++k) {
    const FiltrationSeries& a = series(make_context(Family::G, p, k), kind, opt);
    const FiltrationSeries& b = series(make_context(Family::G, p, k + 1), kind, opt);
    if (a.log_index(level) == b.log_index(level) && a.log_index(level + 1) == b.log_index(level + 1))
      return StableValue{level, k, a.log_index(level), a.log_index(level + 1) - a.log_index(level)};
  }
  return std::nullopt;
}

std::vector<TowerRow> p_power_tower(int p, int i_max, const SeriesOptions& opt) {
  std::vector<TowerRow> out;
  for (int i = 1; i <= i_max; ++i) {
    Ctx c = make_context(Family::G, p, i);
    Subgroup g = full_group(c);
    Subgroup a = agemo(g, i, opt.agemo);
    TowerRow r;
    r.level = i;
    r.log_index = c->ndepth() - a.log_order();
    r.exact = !a.unverified;
    if (p == 2)
      r.predicted = static_cast<int>(ipow(2, i) + ipow(2, i - 1) + i - 1);
    else
      r.predicted = static_cast<int>((3 * ipow(p, i) + 2 * i - 3) / 2);
    if (r.exact) {
      Subgroup it = g;
      bool ok = true;
      try {
        for (int j = 0; j < i; ++j) it = agemo(it, 1, {AgemoMode::Exact, opt.agemo.budget});
      } catch (const BudgetError&) {
        ok = false;
      }
      if (ok) r.iterated_agrees = it == a;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace pgroup
