#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgroup/subgroup.hpp"
#include "pgroup/word.hpp"

namespace pgroup {

class SpecError : public Error {
 public:
  using Error::Error;
};

struct GroupSelector {
  Family family = Family::G;
  int p = 3;
  std::optional<int> k;  // empty: auto
};

// "y_j" / "e_j" / "x^(p^n)" with optional residue filter and range.
// Ranges are half-open [lo, hi); hi defaults to q for y_j, E+1 for e_j.
struct PatternGen {
  enum Kind { Y, E, XPow } kind = Y;
  std::optional<int> mod;
  std::vector<int> residues;
  int lo = 0;
  std::optional<int> hi;
  int n = 0;  // XPow
};

struct NamedGen {
  std::string name;  // Z, H, base, K, full, trivial
  int n = 0, m = 0;  // K_{n,m}
};

struct GenEntry {
  enum Kind { WordGen, Pattern, Named } kind = WordGen;
  Word word;
  std::string text;
  PatternGen pattern;
  NamedGen named;
};

struct SubgroupSpec {
  std::string id;
  GroupSelector group;
  std::vector<GenEntry> gens;
  bool normal = false;  // take the normal closure

  // smallest k at which every generator makes sense
  int min_k() const;
};

SubgroupSpec parse_spec(const std::string& json_text);
SubgroupSpec named_spec(const std::string& name, Family fam = Family::G, int p = 3);
SubgroupSpec k_nm_spec(int n, int m, Family fam = Family::W, int p = 3);
// <x^{p^n}, y_0, ..., y_{m-1}>
SubgroupSpec section_spec(int n, int m, int p = 3);

std::vector<Element> instantiate(const SubgroupSpec& spec, const GroupCtx& ctx);
Subgroup instantiate_subgroup(const SubgroupSpec& spec, const Ctx& ctx);

}  // namespace pgroup
