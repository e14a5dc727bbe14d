#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pgroup {

enum class Family { G, W };

struct GroupParams {
  Family family = Family::G;
  int p = 3;
  int k = 1;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContextError : public Error {
 public:
  using Error::Error;
};

class GroupCtx;

// Collected normal form.  For G_k the body is [v_0..v_{q-1}, c, w_1..w_E];
// for W_k it is the coefficient vector f_0..f_{q-1} of the base polynomial.
struct Element {
  const GroupCtx* ctx = nullptr;
  int64_t a = 0;
  std::vector<uint8_t> b;

  bool operator==(const Element& o) const { return ctx == o.ctx && a == o.a && b == o.b; }
  bool operator!=(const Element& o) const { return !(*this == o); }
};

struct ElementHash {
  size_t operator()(const Element& g) const noexcept;
};

struct RelationReport {
  std::vector<std::string> checked;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

bool is_prime(int64_t n);
int64_t ipow(int64_t base, int e);

class GroupCtx {
 public:
  static std::shared_ptr<const GroupCtx> make(const GroupParams& params);

  Family family() const { return fam_; }
  bool is_G() const { return fam_ == Family::G; }
  int p() const { return p_; }
  int k() const { return k_; }
  int64_t q() const { return q_; }
  int E() const { return E_; }
  int64_t xmod() const { return xmod_; }
  int xdigits() const { return xdigits_; }
  int body_len() const { return body_len_; }
  // log_p of the group order == number of pc coordinates
  int ndepth() const { return xdigits_ + body_len_; }
  int c_pos() const { return static_cast<int>(q_); }
  int w_pos(int j) const { return static_cast<int>(q_) + j; }
  std::string name() const;

  Element identity() const;
  Element x() const;
  Element y() const;
  Element x_pow(int64_t a) const;
  Element y_i(int64_t i) const;
  Element e_j(int j) const;  // G only
  Element y_p() const;       // G only
  Element from_coords(int64_t a, const std::vector<int>& body) const;

  Element mul(const Element& g, const Element& h) const;
  Element inv(const Element& g) const;
  Element pow(const Element& g, int64_t n) const;
  Element comm(const Element& g, const Element& h) const;
  Element conj(const Element& g, const Element& h) const;  // h^-1 g h
  int64_t order(const Element& g) const;
  bool is_identity(const Element& g) const;

  // pc ladder
  int depth(const Element& g) const;
  int lead(const Element& g, int d) const;
  // central sub-ladder of G_k: x^{p^k}, y^p, e_j (depth test)
  bool in_H(const Element& g) const { return g.a == 0; }

  std::pair<int, int> fold(int64_t d) const { return fold_[static_cast<size_t>(d)]; }
  std::string to_string(const Element& g) const;
  Element random(std::mt19937_64& rng) const;
  void check(const Element& g) const;

 private:
  GroupCtx() = default;
  std::vector<uint8_t> conj_x(const std::vector<uint8_t>& u, int64_t s) const;
  std::vector<uint8_t> hmul(const std::vector<uint8_t>& u, const std::vector<uint8_t>& v) const;
  void fold_into(std::vector<uint8_t>& body, const std::vector<int64_t>& acc) const;
  void shift_poly(std::vector<uint8_t>& f, int64_t a) const;

  Family fam_ = Family::G;
  int p_ = 3, k_ = 1;
  int64_t q_ = 3;
  int E_ = 1;
  int64_t xmod_ = 9;
  int xdigits_ = 2;
  int body_len_ = 0;
  std::vector<std::pair<int, int>> fold_;
};

using Ctx = std::shared_ptr<const GroupCtx>;

Ctx make_context(Family fam, int p, int k);

RelationReport check_relations(const GroupCtx& ctx);

// special elements used throughout the checks
Element w_elem(const GroupCtx& ctx);        // x^{-q} (xy)^q
Element w_prime_elem(const GroupCtx& ctx);  // x^{-q} (xy^{-1})^q
Element v_elem(const GroupCtx& ctx);        // w w'

}  // namespace pgroup
