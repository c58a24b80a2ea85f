#include "redorb/reduction.hpp"

#include "redorb/intact.hpp"

#include <deque>

namespace redorb {

std::vector<SweepStep> sweep_steps(int n) {
  std::vector<SweepStep> out;
  for (int k = 1; k <= n - 2; ++k)
    for (int jp = std::min(k, n - k - 1); jp >= 1; --jp) out.push_back({k, k + 1, jp, n + 1 - jp});
  return out;
}

namespace {

template <class T>
bool is_unit(const T& x) {
  T t;
  return try_inv(x, t);
}

template <class T>
GroupElem<T> torus_from_slice(const SymMatrix<T>& B) {
  const int n = B.n, h = n / 2;
  const T z = B.m.a[0];
  const T one = cst(z, 1);
  Mat<T> g(n, cst(z, 0));
  T mult = one;
  if (n % 2 == 1) {
    T t = one;
    g(h, h) = one;
    for (int i = h; i >= 1; --i) {
      t = t * inv_or_throw(B.b(i, n - i));
      g(i - 1, i - 1) = t;
      g(n - i, n - i) = inv_or_throw(t);
    }
  } else {
    mult = B.b(h, h);
    T t = one;
    for (int i = h; i >= 1; --i) {
      if (i < h) t = t * inv_or_throw(B.b(i, n - i));
      g(i - 1, i - 1) = t;
      g(n - i, n - i) = mult * inv_or_throw(t);
    }
  }
  return make_elem(std::move(g), mult, B.ring);
}

template <class T>
bool even_modulus(const T& x) {
  if constexpr (std::is_same_v<T, Zm>) return x.m % 2 == 0;
  else return false;
}

template <class T>
ReductionResult<T> reduce_once(const SymMatrix<T>& B) {
  require_W0(B);
  const int n = B.n;
  auto f = inv(B);
  if (!is_unit(poly_disc(f))) throw NonUnitDiscriminant("reduce_over_field: disc(inv B) is not a unit");
  for (int i = 1; i <= n / 2; ++i)
    if (!is_unit(B.b(i, n - i))) throw NonUnitDiscriminant("reduce_over_field: slice entry is not a unit");
  ReductionResult<T> res;
  res.g = torus_from_slice(B);
  res.target = act(res.g, B);
  const bool two_adic = even_modulus(B.m.a[0]);
  for (const auto& st : sweep_steps(n)) {
    T v = res.target.b(st.row, st.col);  // slice entry of the row is 1 now
    if (two_adic && is_middle_row(n, st.gi)) {
      res.has_pattern = true;
      int bit = 0;
      if constexpr (std::is_same_v<T, Zm>) bit = static_cast<int>(v.v & 1);
      if (bit) v = v - cst(v, 1);
      res.mod2_pattern.push_back(bit);
      res.pattern_columns.push_back(st.col);
    }
    if (is_zero(v)) continue;
    auto u = unipotent_gen(n, st.gi, st.gj, v, B.ring);
    res.target = act(u, res.target);
    res.g = compose(u, res.g);
  }
  if (!res.has_pattern) {
    auto s0 = sigma0(f);
    if constexpr (std::is_same_v<T, double>) {
      (void)s0;
    } else {
      if (s0 != res.target) throw Error("reduce_over_field: sweep did not reach sigma0(f)");
    }
  }
  return res;
}

}  // namespace

template <class T>
ReductionResult<T> reduce_over_field(const SymMatrix<T>& B) {
  auto res = reduce_once(B);
  if constexpr (std::is_same_v<T, Zm>) {
    if (B.ring.kind == RingKind::PadicTrunc) {
      RingTag up = RingTag::padic(B.ring.p, B.ring.k + 1);
      SymMatrix<Zm> B2(B.n, up);
      for (int i = 1; i <= B.n; ++i)
        for (int j = i; j <= B.n; ++j) B2.set(i, j, Zm(B.b(i, j).v, up.m));
      auto res2 = reduce_once(B2);
      for (size_t t = 0; t < res.g.g.a.size(); ++t)
        if (res2.g.g.a[t].v % B.ring.m != res.g.g.a[t].v)
          throw StabilizationFailure("reduce_over_field: witness changes between levels k and k+1");
    }
  }
  return res;
}

template ReductionResult<mpq_class> reduce_over_field(const SymMatrix<mpq_class>&);
template ReductionResult<Zm> reduce_over_field(const SymMatrix<Zm>&);
template ReductionResult<double> reduce_over_field(const SymMatrix<double>&);

namespace {

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

CanonicalOrbitRep canonical_form_Z(const SymMatrix<mpz_class>& B) {
  require_W0(B);
  const int n = B.n, h = n / 2;
  for (int i = 1; i <= h; ++i)
    if (sgn(B.b(i, n - i)) == 0) throw ZeroSliceEntry("canonical_form_Z: zero slice entry");
  // sign normalization
  Mat<mpz_class> g(n, mpz_class(0));
  mpz_class mult = 1;
  if (n % 2 == 1) {
    int t = 1;
    g(h, h) = 1;
    for (int i = h; i >= 1; --i) {
      t *= sgn(B.b(i, n - i));
      g(i - 1, i - 1) = t;
      g(n - i, n - i) = t;
    }
  } else {
    mult = sgn(B.b(h, h));
    int t = 1;
    for (int i = h; i >= 1; --i) {
      if (i < h) t *= sgn(B.b(i, n - i));
      g(i - 1, i - 1) = t;
      g(n - i, n - i) = mult * t;
    }
  }
  CanonicalOrbitRep rep;
  rep.g = make_elem(std::move(g), mult, RingTag::integers());
  rep.B = act(rep.g, B);
  for (const auto& st : sweep_steps(n)) {
    const mpz_class D = rep.B.b(st.row, n - st.row);
    const long step = is_middle_row(n, st.gi) ? 2 : 1;
    mpz_class v = floor_div(rep.B.b(st.row, st.col), D * step) * step;
    if (sgn(v) == 0) continue;
    auto u = unipotent_gen(n, st.gi, st.gj, v, RingTag::integers());
    rep.B = act(u, rep.B);
    rep.g = compose(u, rep.g);
  }
  rep.slice = slice_entries(rep.B);
  return rep;
}

bool equivalent_Z(const SymMatrix<mpz_class>& B1, const SymMatrix<mpz_class>& B2) {
  if (B1.n != B2.n) return false;
  return canonical_form_Z(B1).B == canonical_form_Z(B2).B;
}

bool is_canonical_Z(const SymMatrix<mpz_class>& B) {
  const int n = B.n;
  if (!B.in_W0()) return false;
  for (int i = 1; i <= n / 2; ++i)
    if (sgn(B.b(i, n - i)) <= 0) return false;
  for (const auto& st : sweep_steps(n)) {
    const mpz_class D = B.b(st.row, n - st.row) * (is_middle_row(n, st.gi) ? 2 : 1);
    const mpz_class& x = B.b(st.row, st.col);
    if (sgn(x) < 0 || x >= D) return false;
  }
  return true;
}

IntKey key_of(const SymMatrix<mpz_class>& B) {
  IntKey k;
  for (const auto& v : B.m.a) k.push_back(v.get_si());
  return k;
}

SymMatrix<mpz_class> from_key(const IntKey& k, int n) {
  SymMatrix<mpz_class> B(n, RingTag::integers());
  for (int i = 0; i < n * n; ++i) B.m.a[i] = static_cast<long>(k[i]);
  return B;
}

std::set<IntKey> orbit_bfs_oracle(const SymMatrix<mpz_class>& B, int64_t entry_bound, size_t cap) {
  require_W0(B);
  const int n = B.n;
  if (sgn(lambda(B)) == 0) throw ZeroSliceEntry("orbit_bfs_oracle: lambda(B) = 0");
  std::vector<IntGen> gens;
  const RingTag Z = RingTag::integers();
  for (auto [i, j] : unipotent_indices(n)) {
    long v = is_middle_row(n, i) ? 2 : 1;
    gens.push_back(to_int_gen(unipotent_gen(n, i, j, mpz_class(v), Z)));
    gens.push_back(to_int_gen(unipotent_gen(n, i, j, mpz_class(-v), Z)));
  }
  for (auto& e : gamma_group(n)) gens.push_back(to_int_gen(e));
  for (auto& e : gamma_negative(n)) gens.push_back(to_int_gen(e));
  std::set<IntKey> seen;
  std::deque<IntKey> work;
  IntKey start = key_of(B);
  for (auto v : start)
    if (std::llabs(v) > entry_bound) throw BoxTooLarge("orbit_bfs_oracle: start point outside the box");
  seen.insert(start);
  work.push_back(start);
  while (!work.empty()) {
    IntKey cur = work.front();
    work.pop_front();
    for (const auto& G : gens) {
      IntKey nx = act_int(G, cur, n, 0);
      bool inside = true;
      for (auto v : nx)
        if (std::llabs(v) > entry_bound) inside = false;
      if (!inside) continue;
      if (seen.insert(nx).second) {
        if (seen.size() > cap) throw BoxTooLarge("orbit_bfs_oracle: orbit exceeds cap");
        work.push_back(std::move(nx));
      }
    }
  }
  return seen;
}

std::set<IntKey> orbit_bfs_oracle_mod(const SymMatrix<Zm>& B, size_t cap) {
  require_W0(B);
  const int n = B.n;
  const int64_t m = B.ring.m;
  int64_t p = 0;
  for (int64_t d = 2; d <= m; ++d)
    if (m % d == 0) {
      p = d;
      break;
    }
  int k = 0;
  for (int64_t t = m; t > 1; t /= p) ++k;
  if (ipow(p, k) != m) throw Error("orbit_bfs_oracle_mod: modulus must be a prime power");
  if (is_zero(lambda(B))) throw ZeroSliceEntry("orbit_bfs_oracle_mod: lambda(B) = 0");
  std::vector<IntGen> gens;
  for (auto& e : P_image_mod(n, p, k)) gens.push_back(to_int_gen(e));
  std::set<IntKey> seen;
  IntKey start;
  for (const auto& v : B.m.a) start.push_back(v.v);
  for (const auto& G : gens) {
    seen.insert(act_int(G, start, n, m));
    if (seen.size() > cap) throw BoxTooLarge("orbit_bfs_oracle_mod: orbit exceeds cap");
  }
  return seen;
}

std::vector<GroupElem<Zm>> stabilizer_fp(const SymMatrix<Zm>& B) {
  require_W0(B);
  if (is_zero(lambda(B))) throw ZeroSliceEntry("stabilizer_fp: lambda(B) = 0");
  const int64_t p = B.ring.m;
  if (!is_prime(p)) throw Error("stabilizer_fp: ring must be F_p");
  if (B.n > 5 || p > 7) throw InstanceTooLarge("stabilizer_fp: only n <= 5, p <= 7");
  std::vector<GroupElem<Zm>> out;
  for (auto& g : enumerate_P_fp(B.n, p))
    if (act(g, B) == B) out.push_back(g);
  return out;
}

}  // namespace redorb
