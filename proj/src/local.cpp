#include "redorb/local.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

#include "redorb/group.hpp"
#include "redorb/intact.hpp"
#include "redorb/reduction.hpp"

namespace redorb {

namespace {

mpq_class qpow(int64_t p, int e) {
  mpz_class a;
  mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  return e >= 0 ? mpq_class(a) : mpq_class(mpz_class(1), a);
}

int64_t mod_norm(__int128 x, int64_t m) {
  x %= m;
  if (x < 0) x += m;
  return static_cast<int64_t>(x);
}

// coordinate layout of W0: slice, swept (with step) and pivot coordinates
struct Layout {
  int n = 0;
  std::vector<std::pair<int, int>> coords;  // w0_coords
  std::vector<int> slice;                   // coord index of b_{i,n-i}
  struct Swept {
    int coord;
    int slice_idx;  // 0-based index into slice
    bool middle;
  };
  std::vector<Swept> swept;
  std::vector<int> pivot;  // coord index carrying f_k, k = 1..n
  std::vector<int> free_coords;  // everything except pivots
  int coord_of(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (size_t c = 0; c < coords.size(); ++c)
      if (coords[c].first == i && coords[c].second == j) return static_cast<int>(c);
    return -1;
  }
};

const Layout& layout(int n) {
  static std::map<int, Layout> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Layout L;
  L.n = n;
  L.coords = w0_coords(n);
  for (int i = 1; i <= n / 2; ++i) L.slice.push_back(L.coord_of(i, n - i));
  for (const auto& st : sweep_steps(n)) {
    int si = std::min(st.row, n - st.row) - 1;
    L.swept.push_back({L.coord_of(st.row, st.col), si, is_middle_row(n, st.gi)});
  }
  for (auto [i, j] : sigma0_positions(n)) L.pivot.push_back(L.coord_of(i, j));
  std::vector<int> seen(L.coords.size(), 0);
  for (int c : L.slice) seen[c]++;
  for (auto& s : L.swept) seen[s.coord]++;
  for (int c : L.pivot) seen[c]++;
  for (int v : seen)
    if (v != 1) throw Error("W0 layout: slice, swept and pivot coordinates do not partition W0");
  for (size_t c = 0; c < L.coords.size(); ++c)
    if (std::find(L.pivot.begin(), L.pivot.end(), static_cast<int>(c)) == L.pivot.end())
      L.free_coords.push_back(static_cast<int>(c));
  return cache.emplace(n, std::move(L)).first->second;
}

void set_coord(std::vector<int64_t>& B, int n, const std::pair<int, int>& ij, int64_t v) {
  B[(ij.first - 1) * n + (ij.second - 1)] = v;
  B[(ij.second - 1) * n + (ij.first - 1)] = v;
}
int64_t get_coord(const std::vector<int64_t>& B, int n, const std::pair<int, int>& ij) {
  return B[(ij.first - 1) * n + (ij.second - 1)];
}

std::vector<int64_t> inv_of(const std::vector<int64_t>& B, int n) {
  std::vector<int64_t> f(n);
  inv_i64(B.data(), n, f.data());
  return f;
}

// inv over Z of entries of size < bound must stay inside int64
void guard_inv_size(int n, int64_t bound) {
  long double est = std::tgamma(n + 1.0L) * std::pow(static_cast<long double>(bound) + n, n) * std::pow(2.0L, n);
  if (est > 4e18L) throw InstanceTooLarge("entries too large for the machine-integer invariant path");
}


struct Compiled {
  int64_t p = 0;
  int j = 0;
  int64_t q = 1;
  CondKind kind = CondKind::Full;
  std::set<std::vector<int64_t>> set;
};

std::vector<Compiled> compile(const FamilySpec& fam, int64_t p) {
  std::vector<Compiled> out;
  for (const auto& c : fam.at(p)) {
    Compiled k;
    k.p = c.p;
    k.j = c.j;
    k.q = ipow(c.p, c.j);
    k.kind = c.kind;
    for (auto r : c.residues) {
      for (auto& v : r) v = mod_norm(v, k.q);
      k.set.insert(r);
    }
    out.push_back(std::move(k));
  }
  return out;
}

bool admits_compiled(const std::vector<Compiled>& cs, int n, const std::vector<int64_t>& B) {
  const Layout& L = layout(n);
  std::vector<int64_t> f;
  for (const auto& c : cs) {
    switch (c.kind) {
      case CondKind::Full:
        break;
      case CondKind::UnitLambda:
        for (int s : L.slice)
          if (mod_norm(get_coord(B, n, L.coords[s]), c.p) == 0) return false;
        break;
      case CondKind::InvIn: {
        if (f.empty()) f = inv_of(B, n);
        std::vector<int64_t> r;
        for (auto v : f) r.push_back(mod_norm(v, c.q));
        if (!c.set.count(r)) return false;
        break;
      }
      case CondKind::Residues: {
        std::vector<int64_t> r;
        for (const auto& ij : L.coords) r.push_back(mod_norm(get_coord(B, n, ij), c.q));
        if (!c.set.count(r)) return false;
        break;
      }
    }
  }
  return true;
}

struct DSU {
  std::vector<int64_t> parent;
  explicit DSU(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int64_t find(int64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int64_t a, int64_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

using Key = unsigned __int128;
struct KeyHash {
  size_t operator()(const Key& k) const {
    uint64_t lo = static_cast<uint64_t>(k), hi = static_cast<uint64_t>(k >> 64);
    return std::hash<uint64_t>()(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

Key point_key(const std::vector<int64_t>& B, const Layout& L, int64_t q) {
  Key k = 0;
  for (const auto& ij : L.coords) k = k * static_cast<Key>(q) + static_cast<Key>(get_coord(B, L.n, ij));
  return k;
}

void check_key_room(const Layout& L, int64_t q) {
  long double bits = L.coords.size() * std::log2(static_cast<long double>(q));
  if (bits > 126) throw InstanceTooLarge("fiber key does not fit: modulus too large for this n");
}

std::vector<IntGen> int_generators(int n, int64_t p, int k) {
  std::vector<IntGen> gens;
  for (auto& e : P_generators_mod(n, p, k)) gens.push_back(to_int_gen(e));
  return gens;
}

// solutions of J x = r mod a prime p as particular solution + kernel basis; false if none
bool affine_solutions_mod_p(std::vector<std::vector<int64_t>> J, std::vector<int64_t> r, int64_t p,
                            std::vector<int64_t>& part, std::vector<std::vector<int64_t>>& kernel) {
  const size_t rows = J.size(), cols = rows ? J[0].size() : 0;
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t c = 0; c < cols && row < rows; ++c) {
    size_t piv = row;
    while (piv < rows && mod_norm(J[piv][c], p) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(J[piv], J[row]);
    std::swap(r[piv], r[row]);
    int64_t iv = mod_inverse(mod_norm(J[row][c], p), p);
    for (size_t cc = 0; cc < cols; ++cc) J[row][cc] = mod_norm(static_cast<__int128>(J[row][cc]) * iv, p);
    r[row] = mod_norm(static_cast<__int128>(r[row]) * iv, p);
    for (size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      int64_t fct = mod_norm(J[i][c], p);
      if (!fct) continue;
      for (size_t cc = 0; cc < cols; ++cc) J[i][cc] = mod_norm(J[i][cc] - static_cast<__int128>(fct) * J[row][cc], p);
      r[i] = mod_norm(r[i] - static_cast<__int128>(fct) * r[row], p);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  for (size_t i = row; i < rows; ++i)
    if (mod_norm(r[i], p) != 0) return false;
  part.assign(cols, 0);
  for (size_t i = 0; i < pivot_col.size(); ++i) part[pivot_col[i]] = r[i];
  kernel.clear();
  for (size_t c = 0; c < cols; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) continue;
    std::vector<int64_t> kv(cols, 0);
    kv[c] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) kv[pivot_col[i]] = mod_norm(-J[i][c], p);
    kernel.push_back(std::move(kv));
  }
  return true;
}

// does the fiber point B (inv(B) = f mod q) lift through `depth` further levels;
// each step enumerates the affine solution space of the linearized fiber equations
bool lifts(const std::vector<int64_t>& B, const std::vector<int64_t>& f, const Layout& L, int64_t p, int64_t q, int depth) {
  if (depth == 0) return true;
  const int n = L.n;
  auto base = inv_of(B, n);
  std::vector<int64_t> r(n);
  for (int i = 0; i < n; ++i) {
    __int128 d = static_cast<__int128>(f[i]) - base[i];
    if (d % q != 0) throw Error("lift check: point is not in the fiber");
    r[i] = mod_norm(d / q, p);
  }
  const size_t dim = L.coords.size();
  std::vector<std::vector<int64_t>> J(n, std::vector<int64_t>(dim));
  for (size_t c = 0; c < dim; ++c) {
    auto B2 = B;
    set_coord(B2, n, L.coords[c], get_coord(B, n, L.coords[c]) + q);
    auto f2 = inv_of(B2, n);
    for (int i = 0; i < n; ++i) J[i][c] = mod_norm((static_cast<__int128>(f2[i]) - base[i]) / q, p);
  }
  std::vector<int64_t> part;
  std::vector<std::vector<int64_t>> ker;
  if (!affine_solutions_mod_p(J, r, p, part, ker)) return false;
  std::vector<int64_t> coef(ker.size(), 0);
  while (true) {
    auto B2 = B;
    for (size_t c = 0; c < dim; ++c) {
      __int128 x = part[c];
      for (size_t t = 0; t < ker.size(); ++t) x += static_cast<__int128>(coef[t]) * ker[t][c];
      int64_t d = mod_norm(x, p);
      if (d) set_coord(B2, n, L.coords[c], get_coord(B, n, L.coords[c]) + q * d);
    }
    if (lifts(B2, f, L, p, q * p, depth - 1)) return true;
    size_t t = 0;
    while (t < coef.size() && ++coef[t] == p) coef[t++] = 0;
    if (t == coef.size()) break;
  }
  return false;
}

std::vector<int64_t> zpoly_i64(const ZPoly& f) {
  std::vector<int64_t> c;
  for (const auto& v : f.c) {
    if (!v.fits_slong_p()) throw InstanceTooLarge("coefficient does not fit a machine integer");
    c.push_back(v.get_si());
  }
  return c;
}

void require_local_input(const ZPoly& f, int64_t p) {
  if (!is_prime(p)) throw Error("p must be prime");
  if (f.n < 3) throw Error("n must be at least 3");
  if (sgn(poly_disc(f)) == 0) throw DegenerateInput("disc(f) = 0");
  if (f.n % 2 == 0)
    for (int i = 1; i <= f.n; i += 2)
      if (mpz_odd_p(f.f(i).get_mpz_t())) throw InvalidParity("even n: odd-index coefficients of f must be even");
}

// value of a p-integral rational mod p^j
int64_t padic_residue(const mpq_class& x, int64_t q) {
  mpz_class den = x.get_den();
  mpz_class qq(static_cast<long>(q));
  mpz_class di;
  if (!mpz_invert(di.get_mpz_t(), den.get_mpz_t(), qq.get_mpz_t())) throw Error("residue of a non-integral element");
  mpz_class r = (x.get_num() * di) % qq;
  if (r < 0) r += qq;
  return r.get_si();
}

}  // namespace

// ---------------------------------------------------------------- FamilySpec

std::string cond_kind_str(CondKind k) {
  switch (k) {
    case CondKind::Full: return "full";
    case CondKind::UnitLambda: return "unit-lambda";
    case CondKind::InvIn: return "inv-in";
    case CondKind::Residues: return "residues";
  }
  return "full";
}

CondKind parse_cond_kind(const std::string& s) {
  if (s == "full") return CondKind::Full;
  if (s == "unit-lambda") return CondKind::UnitLambda;
  if (s == "inv-in") return CondKind::InvIn;
  if (s == "residues") return CondKind::Residues;
  throw ParseError("unknown family condition kind '" + s + "'");
}

FamilySpec FamilySpec::full(int n) {
  FamilySpec f;
  f.n = n;
  f.name = "full";
  return f;
}

std::vector<int64_t> FamilySpec::primes() const {
  std::set<int64_t> ps;
  for (const auto& c : conditions)
    if (c.kind != CondKind::Full) ps.insert(c.p);
  return {ps.begin(), ps.end()};
}

std::vector<FamilyCondition> FamilySpec::at(int64_t p) const {
  std::vector<FamilyCondition> out;
  for (const auto& c : conditions)
    if (c.p == p && c.kind != CondKind::Full) out.push_back(c);
  return out;
}

bool FamilySpec::admits(int64_t p, const std::vector<int64_t>& B) const { return admits_compiled(compile(*this, p), n, B); }

bool FamilySpec::admits_inv(int64_t p, const std::vector<int64_t>& f) const {
  for (const auto& c : compile(*this, p)) {
    if (c.kind == CondKind::Full) continue;
    if (c.kind != CondKind::InvIn) throw Error("admits_inv: condition is not a condition on inv");
    std::vector<int64_t> r;
    for (auto v : f) r.push_back(mod_norm(v, c.q));
    if (!c.set.count(r)) return false;
  }
  return true;
}

void FamilySpec::validate() const {
  if (n < 3) throw Error("family: n must be at least 3");
  const Layout& L = layout(n);
  for (const auto& c : conditions) {
    if (!is_prime(c.p)) throw Error("family: condition prime " + std::to_string(c.p) + " is not prime");
    if (c.j < 1) throw Error("family: level j must be positive");
    const int64_t q = ipow(c.p, c.j);
    if (c.kind == CondKind::InvIn) {
      for (const auto& r : c.residues)
        if (static_cast<int>(r.size()) != n) throw LengthMismatch("family: inv-in residue needs n coefficients");
      if (n % 2 == 0 && c.p == 2)
        for (const auto& r : c.residues)
          for (int i = 0; i < n; i += 2)
            if (mod_norm(r[i], 2) != 0) throw InvalidParity("family: inv-in residue violates the even-n parity condition");
    }
    if (c.kind == CondKind::Residues) {
      std::set<std::vector<int64_t>> set;
      for (auto r : c.residues) {
        if (r.size() != L.coords.size()) throw LengthMismatch("family: residue needs dim W0 coordinates");
        for (auto& v : r) v = mod_norm(v, q);
        set.insert(r);
      }
      auto gens = int_generators(n, c.p, c.j);
      for (const auto& r : set) {
        std::vector<int64_t> B(n * n, 0);
        for (size_t t = 0; t < r.size(); ++t) set_coord(B, n, L.coords[t], r[t]);
        for (const auto& G : gens) {
          auto B2 = act_int(G, B, n, q);
          std::vector<int64_t> r2;
          for (const auto& ij : L.coords) r2.push_back(get_coord(B2, n, ij));
          if (!set.count(r2)) throw Error("family: residue set at p = " + std::to_string(c.p) + " is not P-invariant");
        }
      }
    }
  }
}

nlohmann::json FamilySpec::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["name"] = name;
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : conditions) {
    nlohmann::json cj;
    cj["p"] = c.p;
    cj["j"] = c.j;
    cj["kind"] = cond_kind_str(c.kind);
    if (c.kind == CondKind::InvIn || c.kind == CondKind::Residues) cj["residues"] = c.residues;
    j["conditions"].push_back(cj);
  }
  return j;
}

FamilySpec FamilySpec::from_json(const nlohmann::json& j) {
  FamilySpec f;
  try {
    f.n = j.at("n").get<int>();
    f.name = j.value("name", std::string("family"));
    if (j.contains("conditions"))
      for (const auto& cj : j.at("conditions")) {
        FamilyCondition c;
        c.p = cj.at("p").get<int64_t>();
        c.j = cj.value("j", 1);
        c.kind = parse_cond_kind(cj.at("kind").get<std::string>());
        if (cj.contains("residues")) c.residues = cj.at("residues").get<std::vector<std::vector<int64_t>>>();
        f.conditions.push_back(std::move(c));
      }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("family json: ") + e.what());
  }
  f.validate();
  return f;
}

uint64_t FamilySpec::hash() const {
  std::string s = to_json().dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string factor_kind_str(FactorKind k) {
  switch (k) {
    case FactorKind::LambdaDensity: return "lambda_density";
    case FactorKind::OrbitCountAvg: return "orbit_count_avg";
    case FactorKind::EulerZeta: return "euler_zeta";
  }
  return "";
}

nlohmann::json LocalFactor::to_json() const {
  return {{"n", n}, {"p", p}, {"value", value.get_str()}, {"kind", factor_kind_str(kind)}};
}

// ---------------------------------------------------------------- densities

LocalFactor local_lambda_integral(int n, int64_t p, const FamilySpec& fam, int64_t cap) {
  if (!is_prime(p)) throw Error("local_lambda_integral: p must be prime");
  const auto e = lambda_exponents(n);
  LocalFactor out{n, p, 1, FactorKind::LambdaDensity};
  auto conds = compile(fam, p);
  bool only_unit = std::all_of(conds.begin(), conds.end(), [](const Compiled& c) { return c.kind == CondKind::UnitLambda; });
  if (conds.empty() || only_unit) {
    for (int ei : e) {
      if (conds.empty()) out.value *= (1 - qpow(p, -1)) / (1 - qpow(p, -(ei + 1)));
      else if (ei > 0) out.value *= 1 - qpow(p, -1);
    }
    return out;
  }
  const Layout& L = layout(n);
  int J = 0;
  for (const auto& c : conds) J = std::max(J, c.j);
  const int64_t q = ipow(p, J);
  const int dim = static_cast<int>(L.coords.size());
  if (std::pow(static_cast<long double>(q), dim) > cap)
    throw LevelTooDeep("local_lambda_integral: p^(j dim W0) exceeds the enumeration cap");
  guard_inv_size(n, q);
  // weight of a slice residue x mod q for exponent ei
  std::vector<std::vector<mpq_class>> w(L.slice.size(), std::vector<mpq_class>(q));
  for (size_t s = 0; s < L.slice.size(); ++s) {
    const int ei = e[s];
    for (int64_t x = 0; x < q; ++x) {
      if (x == 0) w[s][x] = qpow(p, -J * ei) * (1 - qpow(p, -1)) / (1 - qpow(p, -(ei + 1)));
      else w[s][x] = qpow(p, -ei * padic_val(x, p));
    }
  }
  std::vector<int64_t> digits(dim, 0), B(n * n, 0);
  mpq_class total = 0;
  while (true) {
    for (int t = 0; t < dim; ++t) set_coord(B, n, L.coords[t], digits[t]);
    if (admits_compiled(conds, n, B)) {
      mpq_class term = 1;
      for (size_t s = 0; s < L.slice.size(); ++s) term *= w[s][digits[L.slice[s]]];
      total += term;
    }
    int t = 0;
    while (t < dim && ++digits[t] == q) digits[t++] = 0;
    if (t == dim) break;
  }
  out.value = total * qpow(p, -J * dim);
  return out;
}

LocalFactor local_orbit_integral(int n, int64_t p, const FamilySpec& fam) {
  if (n != 3) throw Error("local_orbit_integral: only n = 3 is implemented");
  if (!is_prime(p)) throw Error("local_orbit_integral: p must be prime");
  bool unit_only = false;
  int K = 0;
  std::vector<Compiled> invs;
  for (auto& c : compile(fam, p)) {
    if (c.kind == CondKind::UnitLambda) unit_only = true;
    else if (c.kind == CondKind::InvIn) {
      K = std::max(K, c.j);
      invs.push_back(c);
    } else if (c.kind == CondKind::Residues) {
      throw Error("local_orbit_integral: residue conditions on W0 are not supported");
    }
  }
  const int64_t q = ipow(p, K);
  // residue set R of (f1, f2, f3) mod q
  std::vector<std::array<int64_t, 3>> R;
  for (int64_t a = 0; a < q; ++a)
    for (int64_t b = 0; b < q; ++b)
      for (int64_t c = 0; c < q; ++c) {
        bool ok = true;
        for (const auto& ic : invs)
          if (!ic.set.count({a % ic.q, b % ic.q, c % ic.q})) ok = false;
        if (ok) R.push_back({a, b, c});
      }
  auto T = [&](int j) {
    const int me = p == 2 ? j + 1 : j;  // exponent of M_j and of M'_j
    const int64_t fe = std::min(2 * j, K), de = std::min(me, K);
    const int64_t fm = ipow(p, static_cast<int>(fe)), dm = ipow(p, static_cast<int>(de));
    const int64_t span = me > K ? q : ipow(p, me);
    int64_t count = 0;
    for (int64_t beta = 0; beta < span; ++beta)
      for (const auto& r : R) {
        __int128 fb = ((static_cast<__int128>(beta) + r[0]) * beta + r[1]) * beta + r[2];
        __int128 db = (3 * static_cast<__int128>(beta) + 2 * r[0]) * beta + r[1];
        if (mod_norm(fb, fm) == 0 && mod_norm(db, dm) == 0) ++count;
      }
    mpq_class t = mpq_class(count) * qpow(p, -3 * K);
    if (me > K) t *= qpow(p, me - K);
    t *= qpow(p, -std::max(2 * j - K, 0));
    t *= qpow(p, -std::max(me - K, 0));
    return t;
  };
  LocalFactor out{n, p, 0, FactorKind::OrbitCountAvg};
  if (unit_only) {
    out.value = T(0);
    return out;
  }
  mpq_class last;
  for (int j = 0; j <= K; ++j) {
    last = T(j);
    out.value += last;
  }
  out.value += last * qpow(p, -2) / (1 - qpow(p, -2));
  return out;
}

mpq_class euler_local_term(int n, int64_t p, const FamilySpec& fam) {
  mpq_class v = local_lambda_integral(n, p, fam).value;
  for (int i = 0; i < n / 2; ++i) v /= 1 - qpow(p, -1);
  return v;
}

std::vector<int> zeta_exponents(int n) {
  std::vector<int> a;
  if (n % 2 == 0) a.push_back(n / 2);
  for (int i = 1; i <= (n - 1) / 2; ++i) a.push_back(2 * i);
  return a;
}

mpq_class zeta_euler_factor(int n, int64_t p) {
  mpq_class v = 1;
  for (int a : zeta_exponents(n)) v /= 1 - qpow(p, -a);
  return v;
}

EulerIdentity euler_factor_identity(int n, int64_t p) {
  EulerIdentity r;
  r.lhs = euler_local_term(n, p, FamilySpec::full(n));
  r.rhs = zeta_euler_factor(n, p);
  r.equal = r.lhs == r.rhs;
  return r;
}

std::vector<int64_t> primes_upto(int64_t N) {
  std::vector<int64_t> out;
  if (N < 2) return out;
  std::vector<bool> comp(N + 1, false);
  for (int64_t i = 2; i <= N; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (int64_t j = i * i; j <= N; j += i) comp[j] = true;
  }
  return out;
}

Interval euler_product(int n, const std::map<int64_t, mpq_class>& overrides, int64_t P_max, int64_t Q) {
  if (P_max < 2) throw Error("euler_product: P_max must be at least 2");
  for (const auto& [p, v] : overrides) {
    if (!is_prime(p)) throw Error("euler_product: override key " + std::to_string(p) + " is not prime");
    if (p > P_max) throw Error("euler_product: override above P_max");
    if (sgn(v) < 0) throw Error("euler_product: negative local factor");
  }
  if (Q <= 0) Q = std::max<int64_t>(20 * P_max, 1000);
  const int bits = 256;
  mpz_class one;
  mpz_ui_pow_ui(one.get_mpz_t(), 2, bits);
  mpz_class lo = one, hi = one;
  const auto exps = zeta_exponents(n);
  const auto ps = primes_upto(Q);
  for (int64_t p : ps) {
    mpz_class num = 1, den = 1;
    auto it = overrides.find(p);
    if (it != overrides.end()) {
      num = it->second.get_num();
      den = it->second.get_den();
    } else {
      for (int a : exps) {
        mpz_class pa;
        mpz_ui_pow_ui(pa.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a));
        num *= pa;
        den *= pa - 1;
      }
    }
    lo *= num;
    mpz_fdiv_q(lo.get_mpz_t(), lo.get_mpz_t(), den.get_mpz_t());
    hi *= num;
    mpz_cdiv_q(hi.get_mpz_t(), hi.get_mpz_t(), den.get_mpz_t());
  }
  // primes above Q: sum_{p>Q} p^-2 <= 2(1 + 1.2762/L)/(L Q) - pi(Q)/Q^2, L <= ln Q
  mpq_class L(static_cast<long>(std::floor((std::log(static_cast<double>(Q)) - 1e-9) * 1073741824.0)), 1073741824L);
  L.canonicalize();
  mpq_class Qq(static_cast<long>(Q));
  mpq_class s2 = 2 * (1 + mpq_class(12762, 10000) / L) / (L * Qq) - mpq_class(static_cast<long>(ps.size())) / (Qq * Qq);
  if (s2 < 0) s2 = 0;
  mpq_class T = 0;
  for (int a : exps) T += s2 * qpow(Q, 2 - a);
  T /= 1 - qpow(Q, -2);
  if (T >= 1) throw Error("euler_product: tail bound too weak; increase Q");
  Interval r(mpq_class(lo, one), mpq_class(hi, one) / (1 - T));
  r.lo.canonicalize();
  r.hi.canonicalize();
  return r.rounded();
}

// ---------------------------------------------------------------- local counts

namespace {

// multiple roots of the cubic mod an odd prime p via gcd(f, f')
std::vector<int64_t> multiple_roots_mod_p(int64_t f1, int64_t f2, int64_t f3, int64_t p) {
  using P = std::vector<int64_t>;  // low degree first
  auto trim = [&](P a) {
    for (auto& v : a) v = mod_norm(v, p);
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  };
  P a = trim({f3, f2, f1, 1});
  P b = trim({f2, 2 * f1, 3});
  while (!b.empty()) {
    // a mod b
    int64_t lead_inv = mod_inverse(b.back(), p);
    while (a.size() >= b.size() && !a.empty()) {
      int64_t c = mod_norm(static_cast<__int128>(a.back()) * lead_inv, p);
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] = mod_norm(a[i + shift] - static_cast<__int128>(c) * b[i], p);
      a = trim(a);
    }
    std::swap(a, b);
  }
  if (a.size() == 2) return {mod_norm(static_cast<__int128>(p - a[0]) * mod_inverse(a[1], p), p)};
  if (a.size() == 3) return {mod_norm(static_cast<__int128>(p - a[1]) * mod_inverse(mod_norm(2 * a[2], p), p), p)};
  return {};
}

int64_t eval_mod(int64_t f1, int64_t f2, int64_t f3, int64_t x, int64_t m) {
  __int128 r = mod_norm(x + static_cast<__int128>(f1), m);
  r = mod_norm(r * x + f2, m);
  r = mod_norm(r * x + f3, m);
  return static_cast<int64_t>(r);
}
int64_t deriv_mod(int64_t f1, int64_t f2, int64_t x, int64_t m) {
  __int128 r = mod_norm(3 * static_cast<__int128>(x) + 2 * static_cast<__int128>(f1), m);
  r = mod_norm(r * x + f2, m);
  return static_cast<int64_t>(r);
}

int64_t safe_pow(int64_t p, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= p;
    if (r > static_cast<__int128>(1) << 62) throw InstanceTooLarge("cubic_local_count: modulus overflow");
  }
  return static_cast<int64_t>(r);
}

}  // namespace

int64_t cubic_local_count(int64_t f1, int64_t f2, int64_t f3, int64_t p, bool unit_only) {
  // level j: beta mod M_j, M_j = M'_j = p^j (odd p) or 2^{j+1} (p = 2)
  auto mexp = [&](int j) { return p == 2 ? j + 1 : j; };
  std::vector<int64_t> cand;
  if (p == 2) {
    for (int64_t b = 0; b < 2; ++b)
      if (deriv_mod(f1, f2, b, 2) == 0) cand.push_back(b);
  } else {
    cand.push_back(0);
  }
  int64_t count = static_cast<int64_t>(cand.size());
  if (unit_only) return count;
  for (int j = 1; !cand.empty(); ++j) {
    const int64_t fm = safe_pow(p, 2 * j), dm = safe_pow(p, mexp(j));
    const int64_t prev = safe_pow(p, mexp(j - 1));
    std::vector<int64_t> next;
    if (p > 1000 && j == 1) {
      for (int64_t b : multiple_roots_mod_p(f1, f2, f3, p))
        if (eval_mod(f1, f2, f3, b, fm) == 0 && deriv_mod(f1, f2, b, dm) == 0) next.push_back(b);
    } else {
      for (int64_t b : cand)
        for (int64_t t = 0; t < p; ++t) {
          int64_t x = b + prev * t;
          if (eval_mod(f1, f2, f3, x, fm) == 0 && deriv_mod(f1, f2, x, dm) == 0) next.push_back(x);
        }
    }
    count += static_cast<int64_t>(next.size());
    cand = std::move(next);
  }
  return count;
}

std::vector<SymMatrix<mpq_class>> local_canonical_reps(const ZPoly& f, int64_t p, size_t cap) {
  require_local_input(f, p);
  const int n = f.n;
  const Layout& L = layout(n);
  const int v = padic_val(poly_disc(f), p);
  const auto z = zpoly_exponents(n);
  const size_t g = L.slice.size();
  const RingTag Q = RingTag::rationals();
  std::vector<SymMatrix<mpq_class>> out;
  size_t work = 0;
  std::vector<int> e(g, 0);
  while (true) {
    int weight = 0;
    for (size_t i = 0; i < g; ++i) weight += z[i] * e[i];
    if (weight <= v) {
      std::vector<int64_t> range;
      for (const auto& sw : L.swept) {
        int64_t r = safe_pow(p, e[sw.slice_idx]);
        if (sw.middle && p == 2) r *= 2;
        range.push_back(r);
      }
      std::vector<int64_t> digit(range.size(), 0);
      while (true) {
        if (++work > cap) throw InstanceTooLarge("local_canonical_reps: enumeration exceeds cap");
        SymMatrix<mpq_class> B(n, Q);
        for (size_t i = 0; i < g; ++i) B.set(L.coords[L.slice[i]].first, L.coords[L.slice[i]].second, qpow(p, e[i]));
        for (size_t s = 0; s < L.swept.size(); ++s) {
          const auto& ij = L.coords[L.swept[s].coord];
          B.set(ij.first, ij.second, mpq_class(static_cast<long>(digit[s])));
        }
        bool ok = true;
        for (int t = 0; t < n && ok; ++t) {
          const auto& ij = L.coords[L.pivot[t]];
          B.set(ij.first, ij.second, 0);
          mpq_class f0 = inv(B).f(t + 1);
          B.set(ij.first, ij.second, 1);
          mpq_class a = inv(B).f(t + 1) - f0;
          if (sgn(a) == 0) throw Error("local_canonical_reps: pivot coefficient vanished");
          mpq_class P = (mpq_class(f.f(t + 1)) - f0) / a;
          if (padic_val(P, p) < 0) ok = false;
          B.set(ij.first, ij.second, P);
        }
        if (ok) {
          auto check = inv(B);
          for (int t = 1; t <= n; ++t)
            if (check.f(t) != mpq_class(f.f(t))) throw Error("local_canonical_reps: pivot solve failed");
          out.push_back(B);
        }
        size_t t = 0;
        while (t < digit.size() && ++digit[t] == range[t]) digit[t++] = 0;
        if (t == digit.size()) break;
      }
    }
    size_t i = 0;
    while (i < g && ++e[i] > v) e[i++] = 0;
    if (i == g) break;
  }
  return out;
}

int64_t orbit_count_local(const ZPoly& f, int64_t p) {
  require_local_input(f, p);
  if (padic_val(poly_disc(f), p) <= 1) return 1;
  if (f.n == 3 && f.f(1).fits_slong_p() && f.f(2).fits_slong_p() && f.f(3).fits_slong_p())
    return cubic_local_count(f.f(1).get_si(), f.f(2).get_si(), f.f(3).get_si(), p);
  return static_cast<int64_t>(local_canonical_reps(f, p).size());
}

int64_t orbit_count_local_family(const ZPoly& f, int64_t p, const FamilySpec& fam) {
  if (fam.n != f.n) throw Error("orbit_count_local_family: family degree differs from f");
  auto conds = compile(fam, p);
  if (conds.empty()) return orbit_count_local(f, p);
  bool unit = false, residues = false;
  for (const auto& c : conds) {
    if (c.kind == CondKind::InvIn) {
      std::vector<int64_t> r;
      for (const auto& v : f.c) {
        mpz_class t = v % c.q;
        if (t < 0) t += c.q;
        r.push_back(t.get_si());
      }
      if (!c.set.count(r)) return 0;
    }
    if (c.kind == CondKind::UnitLambda) unit = true;
    if (c.kind == CondKind::Residues) residues = true;
  }
  if (!unit && !residues) return orbit_count_local(f, p);
  if (!residues && f.n == 3) {
    require_local_input(f, p);
    auto c = zpoly_i64(f);
    return cubic_local_count(c[0], c[1], c[2], p, true);
  }
  int J = 0;
  for (const auto& c : conds) J = std::max(J, c.j);
  const int64_t q = ipow(p, J);
  int64_t count = 0;
  for (const auto& B : local_canonical_reps(f, p)) {
    std::vector<int64_t> Bi(f.n * f.n);
    for (int i = 0; i < f.n * f.n; ++i) Bi[i] = padic_residue(B.m.a[i], q);
    if (admits_compiled(conds, f.n, Bi)) ++count;
  }
  return count;
}

std::vector<std::vector<int64_t>> fiber_mod(const ZPoly& f, int64_t p, int k, size_t cap) {
  const int n = f.n;
  const Layout& L = layout(n);
  const int64_t q = ipow(p, k);
  guard_inv_size(n, q);
  std::vector<int64_t> target;
  for (const auto& v : f.c) {
    mpz_class t = v % q;
    if (t < 0) t += q;
    target.push_back(t.get_si());
  }
  const size_t nf = L.free_coords.size();
  if (std::pow(static_cast<long double>(q), nf) > cap) throw InstanceTooLarge("fiber_mod: enumeration exceeds cap");
  auto centered = [&](std::vector<int64_t> B) {
    for (auto& x : B)
      if (x > q / 2) x -= q;
    return B;
  };
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> digit(nf, 0), B(n * n, 0);
  std::function<void(int)> solve = [&](int t) {
    if (t == n) {
      out.push_back(B);
      if (out.size() > cap) throw InstanceTooLarge("fiber_mod: fiber exceeds cap");
      return;
    }
    const auto& ij = L.coords[L.pivot[t]];
    set_coord(B, n, ij, 0);
    int64_t f0 = mod_norm(inv_of(centered(B), n)[t], q);
    set_coord(B, n, ij, 1);
    int64_t a = mod_norm(inv_of(centered(B), n)[t] - static_cast<__int128>(f0), q);
    int64_t rhs = mod_norm(static_cast<__int128>(target[t]) - f0, q);
    int64_t gg = std::gcd(a, q);
    if (rhs % gg != 0) {
      set_coord(B, n, ij, 0);
      return;
    }
    const int64_t qq = q / gg;
    int64_t base = qq == 1 ? 0 : mod_norm(static_cast<__int128>(rhs / gg) * mod_inverse((a / gg) % qq, qq), qq);
    for (int64_t s = 0; s < gg; ++s) {
      set_coord(B, n, ij, base + s * qq);
      solve(t + 1);
    }
    set_coord(B, n, ij, 0);
  };
  while (true) {
    for (size_t i = 0; i < nf; ++i) set_coord(B, n, L.coords[L.free_coords[i]], digit[i]);
    solve(0);
    size_t i = 0;
    while (i < nf && ++digit[i] == q) digit[i++] = 0;
    if (i == nf) break;
  }
  return out;
}

UFCount orbit_count_local_uf(const ZPoly& f, int64_t p, int k, size_t cap) {
  require_local_input(f, p);
  const int n = f.n;
  const Layout& L = layout(n);
  const int64_t q = ipow(p, k);
  check_key_room(L, q);
  const int v = padic_val(poly_disc(f), p);
  const int depth = v + 1;
  guard_inv_size(n, 2 * q * ipow(p, depth));
  auto pts = fiber_mod(f, p, k, cap);
  std::unordered_map<Key, int64_t, KeyHash> index;
  index.reserve(pts.size() * 2);
  for (size_t i = 0; i < pts.size(); ++i) index.emplace(point_key(pts[i], L, q), static_cast<int64_t>(i));
  DSU dsu(pts.size());
  const auto gens = int_generators(n, p, k);
  for (size_t i = 0; i < pts.size(); ++i)
    for (const auto& G : gens) {
      auto it = index.find(point_key(act_int(G, pts[i], n, q), L, q));
      if (it == index.end()) throw Error("orbit_count_local_uf: generator left the fiber");
      dsu.unite(static_cast<int64_t>(i), it->second);
    }
  std::vector<int64_t> fz;
  for (const auto& v : f.c) fz.push_back(v.get_si());
  // Z(slice) divides disc on Z_p points: orbits whose slice valuations exceed that cannot lift
  const auto z = zpoly_exponents(n);
  auto slice_ok = [&](const std::vector<int64_t>& B) {
    int w = 0;
    for (size_t s = 0; s < L.slice.size(); ++s) {
      int64_t x = get_coord(B, n, L.coords[L.slice[s]]);
      w += z[s] * (x == 0 ? k : padic_val(x, p));
    }
    return w <= v;
  };
  UFCount r;
  r.k = k;
  r.fiber_size = static_cast<int64_t>(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    if (dsu.find(static_cast<int64_t>(i)) != static_cast<int64_t>(i)) continue;
    ++r.orbits;
    if (slice_ok(pts[i]) && lifts(pts[i], fz, L, p, q, depth)) ++r.lifting_orbits;
  }
  return r;
}

int64_t orbit_count_local_stabilized(const ZPoly& f, int64_t p, size_t cap) {
  require_local_input(f, p);
  const int v = padic_val(poly_disc(f), p);
  const int k0 = 2 * v + 2;
  int64_t c0 = orbit_count_local_uf(f, p, k0, cap).lifting_orbits;
  for (int k = k0 + 1; k <= k0 + 2; ++k) {
    int64_t c = orbit_count_local_uf(f, p, k, cap).lifting_orbits;
    if (c != c0)
      throw StabilizationFailure("orbit counts differ between levels " + std::to_string(k0) + " and " + std::to_string(k) +
                                 " (" + std::to_string(c0) + " vs " + std::to_string(c) + ")");
  }
  return c0;
}

JacobianResult jacobian_verify(int n, int64_t p, int m) {
  if (!is_prime(p)) throw Error("jacobian_verify: p must be prime");
  if (m < 1) throw Error("jacobian_verify: m must be positive");
  if (p == 2 && (n > 4 || m > 3)) throw InstanceTooLarge("jacobian_verify: p = 2 needs n <= 4 and m <= 3");
  if (p != 2 && (n > 5 || m != 1)) throw InstanceTooLarge("jacobian_verify: odd p needs n <= 5 and m = 1");
  const Layout& L = layout(n);
  const int64_t q = ipow(p, m);
  ZPoly f;
  if (p == 2) {
    f = ZPoly(std::vector<mpz_class>(n, mpz_class(0)), RingTag::integers());
  } else {
    // first f (odometer order) with disc a unit mod p
    std::vector<int64_t> c(n, 0);
    while (true) {
      std::vector<mpz_class> cz(c.begin(), c.end());
      ZPoly g(cz, RingTag::integers());
      if (padic_val(poly_disc(g), p) == 0) {
        f = g;
        break;
      }
      int i = n - 1;
      while (i >= 0 && ++c[i] == p) c[i--] = 0;
      if (i < 0) throw Error("jacobian_verify: no nondegenerate f mod p");
    }
  }
  auto pts = fiber_mod(f, p, m);
  if (p == 2) {
    std::erase_if(pts, [&](const std::vector<int64_t>& B) {
      for (int s : L.slice)
        if (get_coord(B, n, L.coords[s]) % 2 == 0) return true;
      return false;
    });
  }
  JacobianResult r;
  r.n = n;
  r.p = p;
  r.m = m;
  r.sigma_count = static_cast<int64_t>(pts.size());
  r.group_count = static_cast<int64_t>(P_image_mod(n, p, m).size());
  std::unordered_map<Key, int64_t, KeyHash> index;
  for (size_t i = 0; i < pts.size(); ++i) index.emplace(point_key(pts[i], L, q), static_cast<int64_t>(i));
  DSU dsu(pts.size());
  for (const auto& G : int_generators(n, p, m))
    for (size_t i = 0; i < pts.size(); ++i) {
      auto it = index.find(point_key(act_int(G, pts[i], n, q), L, q));
      if (it == index.end()) throw Error("jacobian_verify: generator left Sigma");
      dsu.unite(static_cast<int64_t>(i), it->second);
    }
  for (size_t i = 0; i < pts.size(); ++i)
    if (dsu.find(static_cast<int64_t>(i)) == static_cast<int64_t>(i)) ++r.orbits;
  const int dimW = dim_w0(n), dimP = dimW - n;
  const mpq_class c = (p == 2 && n % 2 == 1) ? qpow(2, n / 2) : mpq_class(1);
  r.vol_sigma = mpq_class(r.sigma_count) * qpow(q, -dimW);
  r.vol_P = c * mpq_class(r.group_count) * qpow(q, -dimP);
  r.measured = r.vol_sigma * qpow(q, n) / r.vol_P;
  r.expected = (p == 2 && n % 2 == 0) ? qpow(2, n / 2) : mpq_class(1);
  return r;
}

}  // namespace redorb
