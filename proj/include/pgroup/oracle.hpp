#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgroup/series.hpp"
#include "pgroup/word.hpp"

namespace pgroup {

// Fully enumerated G_k(p,k).  Right multiplication by x and y is tabulated by
// letter-by-letter collection; general products follow the normal-form word
// of the right factor through those tables.
class EnumeratedGroup {
 public:
  EnumeratedGroup(int p, int k, int64_t max_size = 10000000);

  int p() const { return p_; }
  int k() const { return k_; }
  int64_t size() const { return n_; }
  int log_size() const { return ncoords_; }

  int32_t identity() const { return 0; }
  int32_t x() const { return x_; }
  int32_t y() const { return y_; }
  int32_t mul(int32_t g, int32_t h) const;
  int32_t inv(int32_t g) const;
  int32_t pow(int32_t g, int64_t e) const;
  int32_t comm(int32_t g, int32_t h) const;
  int32_t conj(int32_t g, int32_t h) const;  // h^-1 g h

  Element to_element(int32_t g, const GroupCtx& ctx) const;
  int32_t from_element(const Element& e) const;

  // coordinates: a, then body [v_0..v_{q-1}, c, w_1..w_E]
  std::vector<int> coords(int32_t g) const;
  int32_t index(const std::vector<int>& c) const;

 private:
  void collect_letter(std::vector<int>& c, int64_t i) const;  // append y_i
  void add_bracket(std::vector<int>& c, int64_t i, int64_t j, int times) const;  // [y_i, y_j]^times

  int p_, k_;
  int64_t q_, xmod_;
  int E_, ncoords_;
  int64_t n_;
  std::vector<int64_t> radix_;
  std::vector<int32_t> rx_, ry_;
  std::vector<std::vector<int32_t>> xp_;  // xp_[e][g] = g x^e
  int32_t x_ = 0, y_ = 0;
  mutable std::vector<int32_t> inv_;
};

// subgroup as an element set plus a short generating list
struct BruteSubgroup {
  std::vector<char> in;
  std::vector<int32_t> elems;
  std::vector<int32_t> gens;
  int64_t size() const { return static_cast<int64_t>(elems.size()); }
  bool contains(int32_t g) const { return in[static_cast<size_t>(g)] != 0; }
};

BruteSubgroup brute_subgroup(const EnumeratedGroup& g, const std::vector<int32_t>& gens, bool normal = false);
BruteSubgroup brute_join(const EnumeratedGroup& g, const BruteSubgroup& a, const BruteSubgroup& b);
BruteSubgroup brute_agemo(const EnumeratedGroup& g, const BruteSubgroup& a, int m);
// [A,B] for normal A, B
BruteSubgroup brute_commutator(const EnumeratedGroup& g, const BruteSubgroup& a, const BruteSubgroup& b);
std::vector<BruteSubgroup> brute_series(const EnumeratedGroup& g, SeriesKind kind);

struct AssocReport {
  std::string method;
  int64_t checked = 0;
  int64_t failures = 0;
  bool ok() const { return failures == 0 && checked > 0; }
};
AssocReport check_associativity_exhaustive(const EnumeratedGroup& g);
// Light's test against the generators, over the full product table
AssocReport check_associativity_light(const EnumeratedGroup& g);
AssocReport check_associativity_sampled(const EnumeratedGroup& g, int64_t triples, uint64_t seed = 1);

struct CrossReport {
  std::string instance;
  std::vector<std::string> passed;
  std::string first_divergence;  // empty when everything agreed
  double seconds = 0;
  bool ok() const { return first_divergence.empty(); }
};
CrossReport cross_validate(int p, int k, int random_sets = 50, uint64_t seed = 7);

enum class CongruenceKind { Power, Commutator };
struct CongruenceResult {
  bool hypotheses = false;
  bool holds = false;
  std::string detail;
};
CongruenceResult check_congruence(const Ctx& ctx, const Word& a, const Word& b, int r, CongruenceKind which);

}  // namespace pgroup
