#include "eulerlab/rational.hpp"

#include <cctype>

#include "eulerlab/errors.hpp"

namespace eulerlab {

namespace {
BigInt parse_int(const std::string& s, const std::string& whole) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i == s.size()) throw SchemaError("malformed rational \"" + whole + "\"");
  BigInt r = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw SchemaError("malformed rational \"" + whole + "\"");
    r = r * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-r) : r;
}
}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text, text));
  BigInt num = parse_int(text.substr(0, slash), text);
  BigInt den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw SchemaError("zero denominator in \"" + text + "\"");
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace eulerlab
