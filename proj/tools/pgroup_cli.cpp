#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgroup/hausdorff.hpp"
#include "pgroup/series.hpp"
#include "pgroup/spec.hpp"
#include "pgroup/verify.hpp"

using namespace pgroup;

namespace {

struct Common {
  std::string family = "G";
  int p = 3;
  int k = 1;
  int kmax = 3;
  std::string series = "L";
  std::string subgroup_file;
  std::string named;
  std::string format = "human";
  int budget_log = -1;
  int tail_window = 8;
  std::string mode = "auto";
  int imax = 20;
};

Family parse_family(const std::string& s) {
  if (s == "G") return Family::G;
  if (s == "W") return Family::W;
  throw CLI::ValidationError("--family", "must be G or W");
}

SeriesOptions series_options(const Common& c) {
  SeriesOptions o;
  if (c.mode == "exact")
    o.agemo.mode = AgemoMode::Exact;
  else if (c.mode == "formula")
    o.agemo.mode = AgemoMode::Formula;
  return o;
}

SubgroupSpec load_spec(const Common& c) {
  if (!c.subgroup_file.empty()) {
    std::ifstream in(c.subgroup_file);
    if (!in) throw SpecError("cannot read " + c.subgroup_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
  }
  if (c.named.empty()) throw SpecError("give --subgroup FILE or --named NAME");
  nlohmann::json j;
  j["group"] = {{"family", c.family}, {"p", c.p}};
  j["generators"] = nlohmann::json::array({{{"named", c.named}}});
  SubgroupSpec s = parse_spec(j.dump());
  s.id = c.named;
  return s;
}

void add_common(CLI::App* sub, Common& c, bool group, bool ser) {
  if (group) {
    sub->add_option("--family", c.family, "G or W")->check(CLI::IsMember({"G", "W"}));
    sub->add_option("--p", c.p, "prime");
    sub->add_option("--k", c.k, "level");
  }
  if (ser) sub->add_option("--series", c.series, "P, L, F, D or C")->check(CLI::IsMember({"P", "L", "F", "D", "C"}));
  sub->add_option("--format", c.format, "human, json or csv")->check(CLI::IsMember({"human", "json", "csv"}));
  sub->add_option("--budget-log", c.budget_log, "agemo transversal budget as log_p");
  sub->add_option("--mode", c.mode, "exact, formula or auto")->check(CLI::IsMember({"exact", "formula", "auto"}));
}

int cmd_info(const Common& c) {
  Ctx ctx = make_context(parse_family(c.family), c.p, c.k);
  const FiltrationSeries& gam = series(ctx, SeriesKind::LowerCentral);
  int cls = static_cast<int>(gam.terms.size()) - 1;
  RelationReport rr = check_relations(*ctx);
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["group"] = ctx->name();
    j["p"] = c.p;
    j["k"] = c.k;
    j["log_order"] = ctx->ndepth();
    j["order"] = std::to_string(c.p) + "^" + std::to_string(ctx->ndepth());
    j["class"] = cls;
    j["relators_checked"] = rr.checked.size();
    j["relators_ok"] = rr.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << ctx->name() << "\n  order " << c.p << "^" << ctx->ndepth() << "\n  class " << cls << "\n  relators "
              << (rr.ok() ? "ok" : "FAILED") << " (" << rr.checked.size() << ")\n";
  }
  return rr.ok() ? 0 : 3;
}

int cmd_series(const Common& c, bool stab) {
  Ctx ctx = make_context(parse_family(c.family), c.p, c.k);
  LayerTable t = layer_table(ctx, parse_series_kind(c.series), series_options(c), stab);
  if (c.format == "json")
    std::cout << t.to_json() << "\n";
  else if (c.format == "csv")
    std::cout << t.to_csv();
  else
    std::cout << t.to_human();
  return 0;
}

DensitySequence compute_density(const Common& c) {
  SubgroupSpec spec = load_spec(c);
  SeriesKind kind = parse_series_kind(c.series);
  if (spec.group.k) {
    // fixed quotient: raw terms, not certified
    Ctx ctx = make_context(spec.group.family, spec.group.p, *spec.group.k);
    const FiltrationSeries& s = series(ctx, kind, series_options(c));
    Subgroup k = instantiate_subgroup(spec, ctx);
    DensitySequence seq;
    seq.spec_id = spec.id;
    seq.family = spec.group.family;
    seq.kind = kind;
    seq.p = spec.group.p;
    for (int i = first_level(kind) + 1; i <= std::min(c.imax, s.last_level()); ++i) {
      auto [num, den] = engine_term(k, s, i);
      seq.terms.push_back({i, num, den, false, "engine", *spec.group.k, s.unverified});
    }
    return seq;
  }
  DensityOptions o;
  o.k_max = c.kmax;
  o.series = series_options(c);
  return density_terms(spec, kind, c.imax, o);
}

int cmd_density(const Common& c) {
  DensitySequence seq = compute_density(c);
  if (c.format == "json")
    std::cout << seq.to_json() << "\n";
  else if (c.format == "csv")
    std::cout << seq.to_csv();
  else
    std::cout << seq.to_human();
  return 0;
}

int cmd_hdim(const Common& c) {
  DensitySequence seq = compute_density(c);
  HdimEstimate h = hdim_estimate(seq, c.tail_window);
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["subgroup"] = seq.spec_id;
    j["series"] = series_name(seq.kind);
    j["estimate"] = to_string(h.estimate);
    j["estimate_decimal"] = to_double(h.estimate);
    j["oscillation"] = to_string(h.oscillation);
    j["window"] = h.window;
    j["strong"] = h.strong;
    j["registered_limit"] = h.limit ? nlohmann::ordered_json(to_string(*h.limit)) : nlohmann::ordered_json();
    j["rate_constant"] = h.rate_constant ? nlohmann::ordered_json(*h.rate_constant) : nlohmann::ordered_json();
    j["terms"] = seq.terms.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << seq.spec_id << " under " << series_name(seq.kind) << ": estimate " << to_string(h.estimate) << " ≈ "
              << to_double(h.estimate) << " (tail " << h.window << ", oscillation " << to_double(h.oscillation)
              << (h.strong ? ", strong" : "") << ")\n";
    if (h.limit) std::cout << "  registered limit " << to_string(*h.limit) << "\n";
  }
  return 0;
}

struct SpecArgs {
  std::string which = "normal";
  int m = 2, n = 2, nmax = 1;
  std::string xi, eta, member;
};

int cmd_spectrum(const Common& c, const SpecArgs& a) {
  SpectrumSet s;
  std::optional<LSpectrumG> lg;
  if (a.which == "normal") {
    Rational xi, eta;
    if (!a.xi.empty()) {
      xi = parse_rational(a.xi);
      eta = a.eta.empty() ? Rational(1) : parse_rational(a.eta);
    } else {
      SeriesKind kind = parse_series_kind(c.series);
      auto z = closed_form(Family::G, "Z", kind, c.p);
      auto h = closed_form(Family::G, "H", kind, c.p);
      if (!z || !h) throw SpecError("no registered densities for this series and prime; pass --xi/--eta");
      xi = z->limit;
      eta = h->limit;
    }
    s = normal_spectrum(xi, eta);
  } else if (a.which == "product") {
    s = product_spectrum(a.m, a.xi.empty() ? Rational(1, a.n) : parse_rational(a.xi));
  } else if (a.which == "product-closed") {
    s = product_spectrum_closed(a.m, a.n);
  } else if (a.which == "fg") {
    s = fg_spectrum_W(parse_series_kind(c.series), c.p, a.nmax);
  } else if (a.which == "W-L") {
    s = full_L_spectrum_W(c.p, a.nmax);
  } else if (a.which == "L") {
    lg = L_spectrum_G(c.p, a.nmax);
    s = lg->truncated;
  }
  if (!a.member.empty()) {
    Rational r = parse_rational(a.member);
    bool in = lg ? lg->contains(r) : s.contains(r);
    if (c.format == "json")
      std::cout << nlohmann::ordered_json{{"query", to_string(r)}, {"member", in}}.dump(2) << "\n";
    else
      std::cout << to_string(r) << (in ? " ∈ " : " ∉ ") << "set\n";
    return 0;
  }
  if (c.format == "json")
    std::cout << s.to_json() << "\n";
  else
    std::cout << s.str() << "\n";
  return 0;
}

int cmd_verify(const Common& c, const std::string& suite) {
  VerifyReport r;
  if (suite == "paper") {
    r = verify_paper(c.p, c.kmax, series_options(c));
  } else {
    std::vector<std::pair<int, int>> inst;
    if (c.p == 3)
      inst = {{3, 1}};
    else if (c.p == 2)
      inst = {{2, 1}, {2, 2}, {2, 3}};
    else
      inst = {{c.p, 1}};
    if (c.p == 3 && c.kmax >= 2) inst = {{3, 1}, {2, 1}, {2, 2}, {2, 3}};
    r = verify_oracle(inst);
  }
  std::cout << (c.format == "json" ? r.to_json() + "\n" : r.to_human());
  return r.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in the p-groups G_k and the wreath products W_k"};
  app.require_subcommand(1);
  Common c;
  SpecArgs sa;
  std::string suite = "paper";
  bool stab = false;

  auto* info = app.add_subcommand("info", "order, class and relator check");
  add_common(info, c, true, false);
  auto* ser = app.add_subcommand("series", "layer table of a filtration series");
  add_common(ser, c, true, true);
  ser->add_flag("--stability", stab, "compare each level with the next quotient");
  for (auto* sub : {app.add_subcommand("density", "density terms of a subgroup"),
                    app.add_subcommand("hdim", "Hausdorff dimension estimate")}) {
    add_common(sub, c, true, true);
    sub->add_option("--kmax", c.kmax, "largest quotient level");
    sub->add_option("--imax", c.imax, "last series level");
    sub->add_option("--subgroup", c.subgroup_file, "JSON subgroup spec");
    sub->add_option("--named", c.named, "Z, H, base, full, trivial or K_{n,m}");
    sub->add_option("--tail-window", c.tail_window, "terms in the liminf window");
  }
  auto* sp = app.add_subcommand("spectrum", "spectrum sets");
  add_common(sp, c, true, true);
  sp->add_option("--which", sa.which, "normal, product, product-closed, fg, W-L or L")
      ->check(CLI::IsMember({"normal", "product", "product-closed", "fg", "W-L", "L"}));
  sp->add_option("--m", sa.m, "number of factors / m");
  sp->add_option("--n", sa.n, "n (xi = 1/n)");
  sp->add_option("--nmax", sa.nmax, "truncation of point sets");
  sp->add_option("--xi", sa.xi, "rational");
  sp->add_option("--eta", sa.eta, "rational");
  sp->add_option("--member", sa.member, "membership query");
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver, c, true, false);
  ver->add_option("--suite", suite, "paper or oracle")->check(CLI::IsMember({"paper", "oracle"}));
  ver->add_option("--kmax", c.kmax, "largest level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c.budget_log >= 0) set_budget_log(c.budget_log);
    if (!is_prime(c.p)) throw ContextError("p must be prime");
    if (info->parsed()) return cmd_info(c);
    if (ser->parsed()) return cmd_series(c, stab);
    if (app.got_subcommand("density")) return cmd_density(c);
    if (app.got_subcommand("hdim")) return cmd_hdim(c);
    if (sp->parsed()) return cmd_spectrum(c, sa);
    if (ver->parsed()) return cmd_verify(c, suite);
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 1;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ContextError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
