#include "densitylab/numeric.hpp"

#include <cctype>
#include <stdexcept>

namespace densitylab {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer pow2(unsigned long exponent) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exponent);
  return r;
}

Integer double_exp(unsigned long i) {
  if (i >= 8 * sizeof(unsigned long)) {
    throw std::overflow_error("double-exponential index too large");
  }
  return pow2(1UL << i);
}

Integer from_u64(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

std::optional<std::uint64_t> to_u64(const Integer& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    return std::nullopt;
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

std::uint64_t require_u64(const Integer& v, const char* what) {
  auto r = to_u64(v);
  if (!r) {
    throw std::overflow_error(std::string(what) + " does not fit in 64 bits: " + v.get_str());
  }
  return *r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

std::optional<Integer> parse_integer(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) {
    return std::nullopt;
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      return std::nullopt;
    }
  }
  return Integer(text[0] == '+' ? text.substr(1) : text, 10);
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) {
      return std::nullopt;
    }
    return make_rational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) {
      return std::nullopt;
    }
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") {
      whole += "0";
    }
    auto w = parse_integer(whole);
    if (!w) {
      return std::nullopt;
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer f(frac, 10);
    Integer num = abs(*w) * scale + f;
    return make_rational(negative ? Integer(-num) : num, scale);
  }
  auto v = parse_integer(text);
  if (!v) {
    return std::nullopt;
  }
  return Rational(*v);
}

std::string decimal_shadow(const Rational& q, int digits) {
  if (q == 0) {
    return "0";
  }
  bool negative = sgn(q) < 0;
  Integer num = abs(q.get_num());
  const Integer& den = q.get_den();

  // Find the decimal exponent e with 10^e <= |q| < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto pow10 = [](long k) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return r;
  };
  auto at_least = [&](long k) {  // |q| >= 10^k
    return k >= 0 ? num >= den * pow10(k) : num * pow10(-k) >= den;
  };
  while (!at_least(e)) --e;
  while (at_least(e + 1)) ++e;

  // Scaled mantissa: round(|q| * 10^(digits-1-e)), half away from zero.
  long shift = digits - 1 - e;
  Integer scaled_num = shift >= 0 ? Integer(num * pow10(shift)) : num;
  Integer scaled_den = shift >= 0 ? den : Integer(den * pow10(-shift));
  Integer mantissa, rem;
  mpz_fdiv_qr(mantissa.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(),
              scaled_den.get_mpz_t());
  if (2 * rem >= scaled_den) {
    mantissa += 1;
  }
  if (mantissa == pow10(digits)) {  // rounding carried into a new digit
    mantissa = pow10(digits - 1);
    ++e;
  }
  std::string m = mantissa.get_str();
  while (m.size() > 1 && m.back() == '0') {
    m.pop_back();
  }

  std::string out = negative ? "-" : "";
  if (e >= -6 && e < digits) {
    if (e >= 0) {
      std::string int_part = m.substr(0, std::min<std::size_t>(m.size(), e + 1));
      while (static_cast<long>(int_part.size()) < e + 1) int_part += '0';
      std::string frac = m.size() > static_cast<std::size_t>(e + 1) ? m.substr(e + 1) : "";
      out += int_part;
      if (!frac.empty()) out += "." + frac;
    } else {
      out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + m;
    }
  } else {
    out += m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    out += "e" + std::to_string(e);
  }
  return out;
}

double decimal_value(const Rational& q, int digits) { return std::stod(decimal_shadow(q, digits)); }

std::string to_string(const Integer& v) { return v.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace densitylab
