#include "redorb/ring.hpp"

#include <cmath>
#include <regex>

namespace redorb {

RingTag RingTag::mod(int64_t m) {
  if (m < 1) throw Error("IntegersMod needs m >= 1");
  RingTag r{RingKind::IntegersMod};
  r.m = m;
  return r;
}

RingTag RingTag::padic(int64_t p, int k) {
  if (!is_prime(p) || k < 1) throw Error("PadicTrunc needs prime p and k >= 1");
  RingTag r{RingKind::PadicTrunc};
  r.p = p;
  r.k = k;
  r.m = ipow(p, k);
  return r;
}

bool RingTag::is_field() const {
  switch (kind) {
    case RingKind::Rationals:
    case RingKind::Reals:
      return true;
    case RingKind::IntegersMod:
      return is_prime(m);
    case RingKind::PadicTrunc:
      return k == 1;
    default:
      return false;
  }
}

std::string RingTag::str() const {
  switch (kind) {
    case RingKind::Integers: return "Integers";
    case RingKind::Rationals: return "Rationals";
    case RingKind::Reals: return "Reals";
    case RingKind::IntegersMod: return "IntegersMod(" + std::to_string(m) + ")";
    case RingKind::PadicTrunc:
      return "PadicTrunc(" + std::to_string(p) + "," + std::to_string(k) + ")";
  }
  return "?";
}

RingTag RingTag::parse(const std::string& s) {
  if (s == "Integers" || s == "ZZ") return integers();
  if (s == "Rationals" || s == "QQ") return rationals();
  if (s == "Reals" || s == "RR") return reals();
  std::smatch mt;
  static const std::regex mod_re(R"(IntegersMod\((\d+)\))");
  static const std::regex pad_re(R"(PadicTrunc\((\d+),\s*(\d+)\))");
  if (std::regex_match(s, mt, mod_re)) return mod(std::stoll(mt[1]));
  if (std::regex_match(s, mt, pad_re)) return padic(std::stoll(mt[1]), std::stoi(mt[2]));
  throw ParseError("unknown ring: " + s);
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int64_t mod_inverse(int64_t a, int64_t m) {
  if (m == 1) return 0;
  int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    int64_t q = g / a1;
    int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) return 0;
  return ((x % m) + m) % m;
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool try_inv(const mpz_class& a, mpz_class& out) {
  if (a == 1 || a == -1) {
    out = a;
    return true;
  }
  return false;
}
bool try_inv(const mpq_class& a, mpq_class& out) {
  if (sgn(a) == 0) return false;
  out = 1 / a;
  return true;
}
bool try_inv(const double& a, double& out) {
  if (a == 0.0) return false;
  out = 1.0 / a;
  return true;
}
bool try_inv(const Zm& a, Zm& out) {
  if (a.m == 1) {
    out = a;
    return true;
  }
  int64_t i = mod_inverse(a.v, a.m);
  if (i == 0) return false;
  out = Zm(i, a.m);
  return true;
}

bool try_half(const mpz_class& a, mpz_class& out) {
  if (mpz_odd_p(a.get_mpz_t())) return false;
  out = a / 2;
  return true;
}
bool try_half(const mpq_class& a, mpq_class& out) {
  out = a / 2;
  return true;
}
bool try_half(const double& a, double& out) {
  out = a / 2;
  return true;
}
bool try_half(const Zm& a, Zm& out) {
  if (a.m % 2 == 0) return false;
  out = a * Zm((a.m + 1) / 2, a.m);
  return true;
}

std::string to_str(const mpz_class& a) { return a.get_str(); }
std::string to_str(const mpq_class& a) { return a.get_str(); }
std::string to_str(const double& a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}
std::string to_str(const Zm& a) { return std::to_string(a.v); }

namespace {
mpq_class parse_q(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("bad number: " + s);
  q.canonicalize();
  return q;
}
}  // namespace

void from_str(const std::string& s, const RingTag&, mpz_class& out) {
  if (out.set_str(s, 10) != 0) throw ParseError("bad integer: " + s);
}
void from_str(const std::string& s, const RingTag&, mpq_class& out) { out = parse_q(s); }
void from_str(const std::string& s, const RingTag&, double& out) {
  try {
    out = std::stod(s);
  } catch (const std::exception&) {
    out = parse_q(s).get_d();
  }
}
void from_str(const std::string& s, const RingTag& ring, Zm& out) {
  mpz_class z;
  if (z.set_str(s, 10) != 0) throw ParseError("bad residue: " + s);
  mpz_class r = z % ring.m;
  if (r < 0) r += ring.m;
  out = Zm(r.get_si(), ring.m);
}

mpq_class to_mpq(const mpz_class& a) { return mpq_class(a); }
mpq_class to_mpq(const mpq_class& a) { return a; }
mpq_class to_mpq(const double& a) {
  if (!std::isfinite(a)) throw DegenerateInput("non-finite real");
  return mpq_class(a);  // exact for binary doubles
}
mpq_class to_mpq(const Zm& a) { return mpq_class(static_cast<long>(a.v)); }

template <>
mpz_class ring_zero<mpz_class>(const RingTag&) { return 0; }
template <>
mpq_class ring_zero<mpq_class>(const RingTag&) { return 0; }
template <>
double ring_zero<double>(const RingTag&) { return 0.0; }
template <>
Zm ring_zero<Zm>(const RingTag& r) { return Zm(0, r.m); }

}  // namespace redorb
