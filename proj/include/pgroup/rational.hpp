#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pgroup {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational rat(const BigInt& num, const BigInt& den = 1);
std::string to_string(const Rational& r);  // "n/d", or "n" for integers
Rational parse_rational(const std::string& s);
double to_double(const Rational& r);
BigInt ceil_div(const BigInt& a, const BigInt& b);
BigInt ceil(const Rational& r);
BigInt big_pow(int base, int e);

}  // namespace pgroup
