#pragma once

#include <string>

#include <gmpxx.h>

namespace redorb {

// closed rational interval with outward dyadic rounding
struct Interval {
  mpq_class lo, hi;

  Interval() = default;
  Interval(const mpq_class& v) : lo(v), hi(v) {}
  Interval(const mpq_class& l, const mpq_class& h) : lo(l), hi(h) {}

  mpq_class width() const { return hi - lo; }
  mpq_class mid() const { return (lo + hi) / 2; }
  bool contains(const mpq_class& x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  Interval rounded(int bits = 192) const;
  std::string lo_str(int digits = 17) const;
  std::string hi_str(int digits = 17) const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

mpq_class round_down(const mpq_class& q, int bits);
mpq_class round_up(const mpq_class& q, int bits);
// decimal string rounded toward -inf / +inf
std::string decimal_down(const mpq_class& q, int digits);
std::string decimal_up(const mpq_class& q, int digits);
std::string decimal_near(const mpq_class& q, int digits);

}  // namespace redorb
