#include "fieldnorm/rational.hpp"

#include "fieldnorm/error.hpp"

namespace fieldnorm {

std::string to_fixed(const Rational& value, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));

  const bool negative = sgn(value) < 0;
  const Rational magnitude = abs(value);
  // floor(|v| * 10^d + 1/2)
  const Rational shifted = magnitude * scale + Rational(1, 2);
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());

  std::string body = scaled.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits))
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && scaled != 0) body.insert(0, "-");
  return body;
}

std::string to_exact(const Rational& value) {
  Rational reduced = value;
  reduced.canonicalize();
  return reduced.get_str();
}

Rational parse_exact(std::string_view text) {
  const auto slash = text.find('/');
  auto integer = [&](std::string_view s) {
    const auto digits = !s.empty() && s.front() == '-' ? s.substr(1) : s;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw Error("malformed number", std::string(text));
    return mpz_class(std::string(s), 10);
  };
  if (slash == std::string_view::npos) return Rational(integer(text));
  mpz_class den = integer(text.substr(slash + 1));
  if (den <= 0) throw Error("malformed number", std::string(text));
  Rational q(integer(text.substr(0, slash)), den);
  q.canonicalize();
  return q;
}

Rational parse_decimal(std::string_view text) {
  const std::string_view original = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  auto digits_only = [](std::string_view s) {
    return s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  if ((whole.empty() && frac.empty()) || !digits_only(whole) || !digits_only(frac))
    throw Error("malformed number", std::string(original));

  std::string digits = std::string(whole) + std::string(frac);
  if (digits.empty()) digits = "0";
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational q(mpz_class(digits, 10), den);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace fieldnorm
