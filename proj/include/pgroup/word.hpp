#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pgroup/context.hpp"

namespace pgroup {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};

struct WordNode;
using WordPtr = std::shared_ptr<const WordNode>;

struct WordNode {
  enum Kind { X, Y, Mul, Pow, Conj, Comm } kind;
  std::vector<WordPtr> kids;
  int64_t exp = 1;  // Pow only
};

// Abstract word over {x, y}; [u,v,w] is read left-normed.
class Word {
 public:
  Word() = default;
  explicit Word(WordPtr root) : root_(std::move(root)) {}

  static Word x();
  static Word y();
  static Word product(const std::vector<Word>& factors);
  static Word power(const Word& w, int64_t e);
  static Word conjugate(const Word& w, const Word& by);
  static Word commutator(const Word& u, const Word& v);
  // [u, v, v, ..., v] with n copies of v
  static Word left_normed(const Word& u, const Word& v, int n);

  const WordPtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }
  std::string str() const;

 private:
  WordPtr root_;
};

Word parse_word(const std::string& text);
Element eval_word(const Word& w, const GroupCtx& ctx);
Word canonical_word(const Element& g);

// reference projection through the canonical word
Element project_via_word(const Element& g, const GroupCtx& target);
// direct projection (G_k -> G_k', G_k -> W_k, W_k -> W_k')
Element project(const Element& g, const GroupCtx& target);

}  // namespace pgroup
