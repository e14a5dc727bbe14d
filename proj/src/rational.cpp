#include "pgroup/rational.hpp"

#include "pgroup/context.hpp"

namespace pgroup {

Rational rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("zero denominator");
  return Rational(num, den);
}

std::string to_string(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("malformed rational '" + s + "'");
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b, r = a % b;
  if (r != 0 && ((r > 0) == (b > 0))) ++q;
  return q;
}

BigInt ceil(const Rational& r) {
  return ceil_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigInt big_pow(int base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace pgroup
