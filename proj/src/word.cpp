#include "pgroup/word.hpp"

#include <cctype>

namespace pgroup {

namespace {

WordPtr node(WordNode::Kind k, std::vector<WordPtr> kids = {}, int64_t e = 1) {
  auto n = std::make_shared<WordNode>();
  n->kind = k;
  n->kids = std::move(kids);
  n->exp = e;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  WordPtr run() {
    WordPtr w = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return w;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  bool peek_int() {
    skip();
    if (pos_ >= s_.size()) return false;
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) return true;
    return s_[pos_] == '-' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
  }
  int64_t integer() {
    skip();
    bool neg = false;
    if (s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    int64_t v = 0;
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (int64_t(1) << 40)) throw ParseError("exponent too large", start);
      ++pos_;
    }
    return neg ? -v : v;
  }
  WordPtr expr() {
    std::vector<WordPtr> f{term()};
    while (peek('*')) {
      ++pos_;
      f.push_back(term());
    }
    return f.size() == 1 ? f[0] : node(WordNode::Mul, std::move(f));
  }
  WordPtr term() {
    WordPtr a = atom();
    if (peek('^')) {
      ++pos_;
      if (peek_int()) return node(WordNode::Pow, {a}, integer());
      return node(WordNode::Conj, {a, term()});
    }
    return a;
  }
  WordPtr atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of word", pos_);
    char c = s_[pos_];
    if (c == 'x' || c == 'y') {
      ++pos_;
      return node(c == 'x' ? WordNode::X : WordNode::Y);
    }
    if (c == '(') {
      ++pos_;
      WordPtr w = expr();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      WordPtr w = expr();
      expect(',');
      w = node(WordNode::Comm, {w, expr()});
      while (peek(',')) {
        ++pos_;
        w = node(WordNode::Comm, {w, expr()});
      }
      expect(']');
      return w;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  const std::string& s_;
  size_t pos_ = 0;
};

std::string print(const WordPtr& n, bool top);

std::string print_atom(const WordPtr& n) {
  switch (n->kind) {
    case WordNode::X:
    case WordNode::Y:
    case WordNode::Comm:
      return print(n, false);
    default:
      return "(" + print(n, false) + ")";
  }
}

std::string print_term(const WordPtr& n) {
  if (n->kind == WordNode::Pow || n->kind == WordNode::Conj) return print(n, false);
  return print_atom(n);
}

std::string print(const WordPtr& n, bool top) {
  switch (n->kind) {
    case WordNode::X:
      return "x";
    case WordNode::Y:
      return "y";
    case WordNode::Pow:
      return print_atom(n->kids[0]) + "^" + std::to_string(n->exp);
    case WordNode::Conj:
      return print_atom(n->kids[0]) + "^" + print_term(n->kids[1]);
    case WordNode::Mul: {
      std::string s;
      for (size_t i = 0; i < n->kids.size(); ++i) {
        if (i) s += top ? " * " : "*";
        s += print_term(n->kids[i]);
      }
      return s;
    }
    case WordNode::Comm: {
      std::vector<WordPtr> parts;
      WordPtr cur = n;
      while (cur->kind == WordNode::Comm) {
        parts.push_back(cur->kids[1]);
        cur = cur->kids[0];
      }
      std::string s = "[" + print(cur, false);
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) s += ", " + print(*it, false);
      return s + "]";
    }
  }
  return "";
}

Element eval(const WordPtr& n, const GroupCtx& ctx) {
  switch (n->kind) {
    case WordNode::X:
      return ctx.x();
    case WordNode::Y:
      return ctx.y();
    case WordNode::Pow:
      return ctx.pow(eval(n->kids[0], ctx), n->exp);
    case WordNode::Conj:
      return ctx.conj(eval(n->kids[0], ctx), eval(n->kids[1], ctx));
    case WordNode::Comm:
      return ctx.comm(eval(n->kids[0], ctx), eval(n->kids[1], ctx));
    case WordNode::Mul: {
      Element r = ctx.identity();
      for (const auto& k : n->kids) r = ctx.mul(r, eval(k, ctx));
      return r;
    }
  }
  return ctx.identity();
}

Word y_conj(int64_t i) {
  if (i == 0) return Word::y();
  return Word::product({Word::power(Word::x(), -i), Word::y(), Word::power(Word::x(), i)});
}

}  // namespace

Word Word::x() { return Word(node(WordNode::X)); }
Word Word::y() { return Word(node(WordNode::Y)); }

Word Word::product(const std::vector<Word>& factors) {
  std::vector<WordPtr> k;
  for (const auto& f : factors)
    if (!f.empty()) k.push_back(f.root());
  if (k.empty()) return power(x(), 0);
  if (k.size() == 1) return Word(k[0]);
  return Word(node(WordNode::Mul, std::move(k)));
}

Word Word::power(const Word& w, int64_t e) {
  if (e == 1) return w;
  return Word(node(WordNode::Pow, {w.root()}, e));
}

Word Word::conjugate(const Word& w, const Word& by) { return Word(node(WordNode::Conj, {w.root(), by.root()})); }

Word Word::commutator(const Word& u, const Word& v) { return Word(node(WordNode::Comm, {u.root(), v.root()})); }

Word Word::left_normed(const Word& u, const Word& v, int n) {
  Word r = u;
  for (int i = 0; i < n; ++i) r = commutator(r, v);
  return r;
}

std::string Word::str() const { return root_ ? print(root_, true) : "x^0"; }

Word parse_word(const std::string& text) { return Word(Parser(text).run()); }

Element eval_word(const Word& w, const GroupCtx& ctx) {
  if (w.empty()) return ctx.identity();
  return eval(w.root(), ctx);
}

Word canonical_word(const Element& g) {
  const GroupCtx& ctx = *g.ctx;
  std::vector<Word> f;
  if (g.a) f.push_back(Word::power(Word::x(), g.a));
  if (ctx.is_G()) {
    for (int64_t i = 0; i < ctx.q(); ++i)
      if (g.b[i]) f.push_back(Word::power(y_conj(i), g.b[i]));
    if (int c = g.b[ctx.c_pos()]) f.push_back(Word::power(Word::y(), int64_t(c) * ctx.p()));
    for (int j = 1; j <= ctx.E(); ++j)
      if (int e = g.b[ctx.w_pos(j)]) f.push_back(Word::power(Word::commutator(Word::y(), y_conj(j)), e));
  } else {
    for (int64_t j = 0; j < ctx.q(); ++j)
      if (g.b[j]) f.push_back(Word::power(Word::left_normed(Word::y(), Word::x(), static_cast<int>(j)), g.b[j]));
  }
  return Word::product(f);
}

namespace {
void check_projectable(const GroupCtx& s, const GroupCtx& t) {
  if (s.p() != t.p()) throw ContextError("projection between different primes");
  if (t.k() > s.k()) throw ContextError("projection must go to a lower or equal level");
  if (!s.is_G() && t.is_G()) throw ContextError("no projection from W_k onto G_k'");
}
}  // namespace

Element project_via_word(const Element& g, const GroupCtx& target) {
  check_projectable(*g.ctx, target);
  return eval_word(canonical_word(g), target);
}

Element project(const Element& g, const GroupCtx& t) {
  const GroupCtx& s = *g.ctx;
  check_projectable(s, t);
  if (!t.is_G()) {
    Element r = t.x_pow(g.a);
    if (s.is_G()) {
      for (int64_t i = 0; i < s.q(); ++i) {
        if (!g.b[i]) continue;
        Element yi = t.y_i(i);
        for (int j = 0; j < t.body_len(); ++j) r.b[j] = static_cast<uint8_t>((r.b[j] + g.b[i] * yi.b[j]) % t.p());
      }
    } else {
      for (int j = 0; j < t.body_len(); ++j) r.b[j] = g.b[j];
    }
    return r;
  }
  Element h = t.identity();
  for (int64_t i = 0; i < s.q(); ++i)
    if (g.b[i]) h = t.mul(h, t.pow(t.y_i(i), g.b[i]));
  if (int c = g.b[s.c_pos()]) h = t.mul(h, t.pow(t.y_p(), c));
  for (int j = 1; j <= s.E(); ++j)
    if (int e = g.b[s.w_pos(j)]) h = t.mul(h, t.pow(t.comm(t.y(), t.y_i(j)), e));
  return t.mul(t.x_pow(g.a), h);
}

}  // namespace pgroup
