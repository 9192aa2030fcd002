#include "oq/rational.hpp"

#include <cctype>
#include <cmath>

#include "oq/error.hpp"

namespace oq {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ParseError("empty fraction string");
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  bool digits = false, slash = false, denom_digits = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      (slash ? denom_digits : digits) = true;
    } else if (s[i] == '/' && !slash && digits) {
      slash = true;
    } else {
      throw ParseError("malformed fraction string: '" + s + "'");
    }
  }
  if (!digits || (slash && !denom_digits))
    throw ParseError("malformed fraction string: '" + s + "'");
  Rat q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed fraction string: '" + s + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

std::string rat_decimal(const Rat& q, int digits) {
  if (digits < 0) digits = 0;
  const bool neg = q < 0;
  mpz_class num = abs(q.get_num());
  const mpz_class& den = q.get_den();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // round half away from zero: floor((2*num*scale + den) / (2*den))
  mpz_class rounded = (2 * num * scale + den) / (2 * den);
  mpz_class ipart = rounded / scale;
  mpz_class fpart = rounded % scale;
  std::string out = neg && rounded != 0 ? "-" : "";
  out += ipart.get_str();
  if (digits > 0) {
    std::string frac = fpart.get_str();
    out += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return out;
}

double to_double(const Rat& q) { return q.get_d(); }

std::optional<Rat> exact_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rat(rn, rd);
}

bool one_minus_sqrt_factor_leq(const Rat& eps, const Rat& a, const Rat& b) {
  if (eps < 0 || eps > 1) throw PreconditionError("eps must lie in [0,1]");
  if (a < 0) throw PreconditionError("a must be nonnegative");
  if (a <= b) return true;
  Rat d = a - b;
  return d * d <= a * a * eps;
}

long ceil_mean_plus_sqrt(const Rat& mean, const Rat& radicand) {
  if (radicand < 0) throw PreconditionError("radicand must be nonnegative");
  double approx = to_double(mean) + std::sqrt(to_double(radicand));
  long k = static_cast<long>(std::floor(approx)) - 2;
  auto ok = [&](long v) {
    Rat d = Rat(v) - mean;
    return d >= 0 && d * d >= radicand;
  };
  while (!ok(k)) ++k;
  while (k > 0 && ok(k - 1)) --k;  // guard against a high float estimate
  return k;
}

}  // namespace oq
