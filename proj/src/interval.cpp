#include "redorb/interval.hpp"

#include <algorithm>

namespace redorb {

namespace {

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}
mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class pow2(int bits) {
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return s;
}

mpz_class pow10(int digits) {
  mpz_class s;
  mpz_ui_pow_ui(s.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return s;
}

std::string fixed(const mpz_class& scaled, int digits) {
  // scaled / 10^digits as a decimal string
  bool neg = scaled < 0;
  std::string s = mpz_class(abs(scaled)).get_str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits - s.size() + 1, '0') + s;
  std::string out = s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
  return (neg ? "-" : "") + out;
}

}  // namespace

mpq_class round_down(const mpq_class& q, int bits) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) <= static_cast<size_t>(bits)) return q;
  mpz_class s = pow2(bits);
  return mpq_class(floor_q(q * s), s);
}

mpq_class round_up(const mpq_class& q, int bits) {
  if (mpz_sizeinbase(q.get_den_mpz_t(), 2) <= static_cast<size_t>(bits)) return q;
  mpz_class s = pow2(bits);
  return mpq_class(ceil_q(q * s), s);
}

std::string decimal_down(const mpq_class& q, int digits) { return fixed(floor_q(q * pow10(digits)), digits); }
std::string decimal_up(const mpq_class& q, int digits) { return fixed(ceil_q(q * pow10(digits)), digits); }
std::string decimal_near(const mpq_class& q, int digits) {
  return fixed(floor_q(q * pow10(digits) + mpq_class(1, 2)), digits);
}

Interval Interval::rounded(int bits) const {
  Interval r{round_down(lo, bits), round_up(hi, bits)};
  r.lo.canonicalize();
  r.hi.canonicalize();
  return r;
}

std::string Interval::lo_str(int digits) const { return decimal_down(lo, digits); }
std::string Interval::hi_str(int digits) const { return decimal_up(hi, digits); }

Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo + b.lo, a.hi + b.hi).rounded(); }
Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo - b.hi, a.hi - b.lo).rounded(); }
Interval operator*(const Interval& a, const Interval& b) {
  mpq_class c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return Interval(*std::min_element(c, c + 4), *std::max_element(c, c + 4)).rounded();
}
Interval hull(const Interval& a, const Interval& b) { return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi)); }

}  // namespace redorb
