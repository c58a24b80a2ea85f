#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "redorb/errors.hpp"

namespace redorb {

enum class RingKind { Integers, Rationals, IntegersMod, PadicTrunc, Reals };

struct RingTag {
  RingKind kind = RingKind::Integers;
  int64_t m = 0;  // modulus for IntegersMod / PadicTrunc (= p^k)
  int64_t p = 0;
  int k = 0;

  static RingTag integers() { return {RingKind::Integers}; }
  static RingTag rationals() { return {RingKind::Rationals}; }
  static RingTag reals() { return {RingKind::Reals}; }
  static RingTag mod(int64_t m);
  static RingTag padic(int64_t p, int k);

  bool finite() const { return kind == RingKind::IntegersMod || kind == RingKind::PadicTrunc; }
  bool is_field() const;
  std::string str() const;
  static RingTag parse(const std::string& s);

  bool operator==(const RingTag& o) const { return kind == o.kind && m == o.m; }
};

int64_t ipow(int64_t b, int e);
int64_t mod_inverse(int64_t a, int64_t m);  // returns 0 if a is not a unit
bool is_prime(int64_t n);

// element of Z/m with the modulus carried along
struct Zm {
  int64_t v = 0;
  int64_t m = 1;

  Zm() = default;
  Zm(int64_t value, int64_t modulus) : v(value % modulus), m(modulus) {
    if (v < 0) v += m;
  }
  Zm operator+(const Zm& o) const { return Zm(v + o.v >= m ? v + o.v - m : v + o.v, m, 0); }
  Zm operator-(const Zm& o) const { return Zm(v >= o.v ? v - o.v : v - o.v + m, m, 0); }
  Zm operator-() const { return Zm(v == 0 ? 0 : m - v, m, 0); }
  Zm operator*(const Zm& o) const {
    return Zm(static_cast<int64_t>(static_cast<__int128>(v) * o.v % m), m, 0);
  }
  Zm& operator+=(const Zm& o) { return *this = *this + o; }
  Zm& operator-=(const Zm& o) { return *this = *this - o; }
  Zm& operator*=(const Zm& o) { return *this = *this * o; }
  bool operator==(const Zm& o) const { return v == o.v; }
  bool operator!=(const Zm& o) const { return v != o.v; }

 private:
  Zm(int64_t value, int64_t modulus, int) : v(value), m(modulus) {}
};

// Scalar helpers; `like` supplies the modulus for Zm and is ignored otherwise.
inline mpz_class cst(const mpz_class&, long v) { return mpz_class(v); }
inline mpq_class cst(const mpq_class&, long v) { return mpq_class(v); }
inline double cst(const double&, long v) { return static_cast<double>(v); }
inline Zm cst(const Zm& like, long v) { return Zm(v, like.m); }

inline bool is_zero(const mpz_class& a) { return sgn(a) == 0; }
inline bool is_zero(const mpq_class& a) { return sgn(a) == 0; }
inline bool is_zero(const double& a) { return a == 0.0; }
inline bool is_zero(const Zm& a) { return a.v == 0; }

bool try_inv(const mpz_class& a, mpz_class& out);
bool try_inv(const mpq_class& a, mpq_class& out);
bool try_inv(const double& a, double& out);
bool try_inv(const Zm& a, Zm& out);

bool try_half(const mpz_class& a, mpz_class& out);
bool try_half(const mpq_class& a, mpq_class& out);
bool try_half(const double& a, double& out);
bool try_half(const Zm& a, Zm& out);

template <class T>
T inv_or_throw(const T& a) {
  T out;
  if (!try_inv(a, out)) throw Error("element is not invertible");
  return out;
}

template <class T>
T half_or_throw(const T& a) {
  T out;
  if (!try_half(a, out)) throw HalvingError("division by 2 fails in this ring");
  return out;
}

std::string to_str(const mpz_class& a);
std::string to_str(const mpq_class& a);
std::string to_str(const double& a);
std::string to_str(const Zm& a);

// parse a decimal / "p/q" string into the scalar type selected by ring
void from_str(const std::string& s, const RingTag& ring, mpz_class& out);
void from_str(const std::string& s, const RingTag& ring, mpq_class& out);
void from_str(const std::string& s, const RingTag& ring, double& out);
void from_str(const std::string& s, const RingTag& ring, Zm& out);

// exact rational value of an integer-like scalar (Zm lifts to [0, m))
mpq_class to_mpq(const mpz_class& a);
mpq_class to_mpq(const mpq_class& a);
mpq_class to_mpq(const double& a);  // exact dyadic
mpq_class to_mpq(const Zm& a);

// the default element "zero" for a ring
template <class T>
T ring_zero(const RingTag& ring);
template <>
mpz_class ring_zero<mpz_class>(const RingTag&);
template <>
mpq_class ring_zero<mpq_class>(const RingTag&);
template <>
double ring_zero<double>(const RingTag&);
template <>
Zm ring_zero<Zm>(const RingTag&);

}  // namespace redorb
