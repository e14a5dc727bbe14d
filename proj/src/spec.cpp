#include "pgroup/spec.hpp"

#include <regex>

#include "json.hpp"

namespace pgroup {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SpecError(where + ": missing '" + key + "'");
  if (!j[key].is_number_integer()) throw SpecError(where + ": '" + key + "' must be an integer");
  return j[key].get<int>();
}

NamedGen parse_named(const json& g, const std::string& where) {
  if (!g["named"].is_string()) throw SpecError(where + ": 'named' must be a string");
  std::string s = g["named"].get<std::string>();
  NamedGen n;
  static const std::regex kre(R"(K_?\{?(\d+),\s*(\d+)\}?)");
  std::smatch m;
  if (s == "Z" || s == "H" || s == "base" || s == "full" || s == "trivial") {
    n.name = s;
  } else if (s == "K") {
    n.name = "K";
    n.n = get_int(g, "n", where);
    n.m = get_int(g, "m", where);
  } else if (std::regex_match(s, m, kre)) {
    n.name = "K";
    n.n = std::stoi(m[1]);
    n.m = std::stoi(m[2]);
  } else {
    throw SpecError(where + ": unknown named subgroup '" + s + "'");
  }
  if (n.name == "K" && (n.n < 0 || n.m < 0)) throw SpecError(where + ": K_{n,m} needs n, m >= 0");
  return n;
}

PatternGen parse_pattern(const json& g, const std::string& where) {
  if (!g["pattern"].is_string()) throw SpecError(where + ": 'pattern' must be a string");
  std::string s = g["pattern"].get<std::string>();
  PatternGen pg;
  if (s == "y_j") {
    pg.kind = PatternGen::Y;
  } else if (s == "e_j") {
    pg.kind = PatternGen::E;
    pg.lo = 1;
  } else if (s == "x^(p^n)") {
    pg.kind = PatternGen::XPow;
    pg.n = get_int(g, "n", where);
    if (pg.n < 0) throw SpecError(where + ": n must be >= 0");
    return pg;
  } else {
    throw SpecError(where + ": unknown pattern '" + s + "'");
  }
  if (g.contains("mod") || g.contains("residues")) {
    int mod = get_int(g, "mod", where);
    if (mod < 1) throw SpecError(where + ": mod must be positive");
    pg.mod = mod;
    if (!g.contains("residues") || !g["residues"].is_array() || g["residues"].empty())
      throw SpecError(where + ": pattern with empty residue set");
    for (const auto& r : g["residues"]) {
      if (!r.is_number_integer()) throw SpecError(where + ": residues must be integers");
      pg.residues.push_back(((r.get<int>() % mod) + mod) % mod);
    }
  }
  if (g.contains("range")) {
    const json& r = g["range"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !(r[1].is_number_integer() || r[1] == "q"))
      throw SpecError(where + ": range must be [lo, hi] with hi an integer or \"q\"");
    pg.lo = r[0].get<int>();
    if (r[1].is_number_integer()) pg.hi = r[1].get<int>();
  }
  return pg;
}

bool residue_ok(const PatternGen& pg, int64_t j) {
  if (!pg.mod) return true;
  int64_t r = j % *pg.mod;
  for (int x : pg.residues)
    if (x == r) return true;
  return false;
}

}  // namespace

int SubgroupSpec::min_k() const {
  int k0 = 1;
  for (const auto& g : gens) {
    if (g.kind == GenEntry::Pattern && g.pattern.kind == PatternGen::XPow) k0 = std::max(k0, g.pattern.n);
    if (g.kind == GenEntry::Named && g.named.name == "K") k0 = std::max(k0, g.named.n);
  }
  return k0;
}

SubgroupSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("invalid JSON at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw SpecError("spec must be a JSON object");
  SubgroupSpec spec;
  if (doc.contains("id")) spec.id = doc["id"].get<std::string>();
  if (doc.contains("group")) {
    const json& g = doc["group"];
    if (!g.is_object()) throw SpecError("'group' must be an object");
    if (g.contains("family")) {
      std::string f = g["family"].get<std::string>();
      if (f == "G")
        spec.group.family = Family::G;
      else if (f == "W")
        spec.group.family = Family::W;
      else
        throw SpecError("unknown family '" + f + "'");
    }
    if (g.contains("p")) spec.group.p = get_int(g, "p", "group");
    if (!is_prime(spec.group.p)) throw SpecError("p must be prime");
    if (g.contains("k")) {
      if (g["k"] == "auto")
        spec.group.k.reset();
      else
        spec.group.k = get_int(g, "k", "group");
    }
  }
  if (doc.contains("normal")) spec.normal = doc["normal"].get<bool>();
  if (!doc.contains("generators") || !doc["generators"].is_array()) throw SpecError("missing 'generators' array");
  int idx = 0;
  for (const auto& g : doc["generators"]) {
    std::string where = "generator " + std::to_string(idx++);
    if (!g.is_object()) throw SpecError(where + ": must be an object");
    GenEntry e;
    if (g.contains("word")) {
      e.kind = GenEntry::WordGen;
      e.text = g["word"].get<std::string>();
      try {
        e.word = parse_word(e.text);
      } catch (const ParseError& pe) {
        throw SpecError(where + ": malformed word '" + e.text + "': " + pe.what());
      }
    } else if (g.contains("pattern")) {
      e.kind = GenEntry::Pattern;
      e.pattern = parse_pattern(g, where);
    } else if (g.contains("named")) {
      e.kind = GenEntry::Named;
      e.named = parse_named(g, where);
    } else {
      throw SpecError(where + ": expected one of word, pattern, named");
    }
    spec.gens.push_back(std::move(e));
  }
  if (spec.id.empty()) spec.id = "spec";
  return spec;
}

SubgroupSpec named_spec(const std::string& name, Family fam, int p) {
  SubgroupSpec s;
  s.id = name;
  s.group = {fam, p, std::nullopt};
  GenEntry e;
  e.kind = GenEntry::Named;
  e.named.name = name;
  s.gens.push_back(e);
  return s;
}

SubgroupSpec k_nm_spec(int n, int m, Family fam, int p) {
  SubgroupSpec s = named_spec("K", fam, p);
  s.id = "K_{" + std::to_string(n) + "," + std::to_string(m) + "}";
  s.gens[0].named.n = n;
  s.gens[0].named.m = m;
  return s;
}

SubgroupSpec section_spec(int n, int m, int p) {
  SubgroupSpec s;
  s.id = "<x^(p^" + std::to_string(n) + "), y_0..y_" + std::to_string(m - 1) + ">";
  s.group = {Family::G, p, std::nullopt};
  GenEntry x;
  x.kind = GenEntry::Pattern;
  x.pattern.kind = PatternGen::XPow;
  x.pattern.n = n;
  GenEntry y;
  y.kind = GenEntry::Pattern;
  y.pattern.kind = PatternGen::Y;
  y.pattern.hi = m;
  s.gens = {x, y};
  return s;
}

std::vector<Element> instantiate(const SubgroupSpec& spec, const GroupCtx& c) {
  if (c.p() != spec.group.p || c.family() != spec.group.family)
    throw SpecError("spec " + spec.id + " does not match context " + c.name());
  std::vector<Element> out;
  auto add_sub = [&](const Subgroup& s) {
    for (const auto& b : s.basis()) out.push_back(b);
  };
  // named subgroups need a shared pointer; contexts are cached so this is cheap
  Ctx ctx = make_context(c.family(), c.p(), c.k());
  for (const auto& g : spec.gens) {
    switch (g.kind) {
      case GenEntry::WordGen:
        out.push_back(eval_word(g.word, c));
        break;
      case GenEntry::Pattern: {
        const PatternGen& pg = g.pattern;
        if (pg.kind == PatternGen::XPow) {
          out.push_back(c.x_pow(ipow(c.p(), pg.n)));
          break;
        }
        if (pg.kind == PatternGen::E && !c.is_G()) break;
        int64_t hi = pg.hi ? *pg.hi : (pg.kind == PatternGen::Y ? c.q() : c.E() + 1);
        if (pg.kind == PatternGen::Y) hi = std::min<int64_t>(hi, c.q());
        if (pg.kind == PatternGen::E) hi = std::min<int64_t>(hi, c.E() + 1);
        for (int64_t j = std::max(pg.lo, pg.kind == PatternGen::E ? 1 : 0); j < hi; ++j)
          if (residue_ok(pg, j)) out.push_back(pg.kind == PatternGen::Y ? c.y_i(j) : c.e_j(static_cast<int>(j)));
        break;
      }
      case GenEntry::Named: {
        const std::string& n = g.named.name;
        if (n == "Z")
          add_sub(z_named(ctx));
        else if (n == "H")
          add_sub(h_named(ctx));
        else if (n == "base")
          add_sub(base_group(ctx));
        else if (n == "full")
          out.insert(out.end(), {c.x(), c.y()});
        else if (n == "K") {
          out.push_back(c.x_pow(ipow(c.p(), g.named.n)));
          Element cm = c.y();
          for (int i = 1; i <= g.named.m; ++i) {
            cm = c.comm(cm, c.x());
            out.push_back(cm);
          }
        }
        break;
      }
    }
  }
  return out;
}

Subgroup instantiate_subgroup(const SubgroupSpec& spec, const Ctx& ctx) {
  std::vector<Element> gens = instantiate(spec, *ctx);
  return spec.normal ? normal_closure(ctx, gens) : generate(ctx, gens);
}

}  // namespace pgroup
