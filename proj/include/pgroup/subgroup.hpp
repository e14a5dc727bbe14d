#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "pgroup/context.hpp"

namespace pgroup {

class BudgetError : public Error {
 public:
  using Error::Error;
};

enum class AgemoMode { Exact, Formula, Auto };

// transversal budget as an element count for prime p: 2*10^6 unless
// PGROUP_BUDGET_LOG (or set_budget_log) gives it as a power of p
int64_t budget_for(int p);
void set_budget_log(int log_p);  // negative: back to default

// Induced generating sequence: at most one basis element per depth, with
// leading exponent 1.
class Subgroup {
 public:
  explicit Subgroup(Ctx ctx);

  const Ctx& ctx() const { return ctx_; }
  const GroupCtx& g() const { return *ctx_; }
  int log_order() const { return static_cast<int>(basis_.size()); }
  bool is_trivial() const { return basis_.empty(); }
  bool contains(const Element& g) const;
  Element sift(const Element& g) const;
  std::vector<Element> basis() const;  // sorted by depth
  std::vector<int> depths() const;
  bool subset_of(const Subgroup& o) const;
  bool operator==(const Subgroup& o) const;

  // add g and close; conj_by lists elements whose conjugation must preserve
  // the subgroup (empty for plain generation)
  void insert(const Element& g, const std::vector<Element>& conj_by = {});
  void insert_all(const std::vector<Element>& gens, const std::vector<Element>& conj_by = {});

  // set when some ingredient came from formula-mode powering
  bool unverified = false;

 private:
  void add_normalized(const Element& r);
  void close(std::deque<Element>& queue, const std::vector<Element>& conj_by);

  Ctx ctx_;
  std::vector<int> slot_;
  std::vector<Element> basis_;
  std::vector<std::vector<Element>> invpow_;  // invpow_[slot][e] = b^-e
};

Subgroup trivial_subgroup(const Ctx& ctx);
Subgroup full_group(const Ctx& ctx);
Subgroup generate(const Ctx& ctx, const std::vector<Element>& gens);
Subgroup normal_closure(const Ctx& ctx, const std::vector<Element>& gens);
Subgroup join(const Subgroup& a, const Subgroup& b);
// [A,B] as a normal subgroup of the whole group
Subgroup commutator_subgroup(const Subgroup& a, const Subgroup& b);
// [A,G] using the generators x, y
Subgroup commutator_with_group(const Subgroup& a);

struct AgemoOptions {
  AgemoMode mode = AgemoMode::Auto;
  int64_t budget = -1;  // -1: budget_for(p)
};

Subgroup agemo(const Subgroup& a, int m, AgemoOptions opt = {});
// literal enumeration of every element's p^m-th power (small groups only)
Subgroup agemo_enumerate_all(const Subgroup& a, int m);
// size of the transversal that exact agemo would enumerate (log_p)
int agemo_transversal_log(const Subgroup& a);

enum class HomKind { LevelProjection, WreathProjection };

struct Hom {
  Ctx src, dst;
  HomKind kind;
  Element apply(const Element& g) const;
};

Hom make_hom(const Ctx& src, const Ctx& dst);
Hom wreath_projection(const Ctx& g_ctx);

Subgroup image(const Subgroup& a, const Hom& hom);
Subgroup kernel_restricted(const Subgroup& a, const Hom& hom);
Subgroup intersect_central(const Subgroup& a);

// named subgroups
Subgroup z_k(const Ctx& ctx);      // <x^{p^k}, y^p, e_j>
Subgroup z_named(const Ctx& ctx);  // <y^p, e_j>, image of Z
Subgroup h_named(const Ctx& ctx);  // H_k = <y_i, Z_k>; base group in W_k
Subgroup base_group(const Ctx& ctx);

}  // namespace pgroup
