#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "redorb/errors.hpp"
#include "redorb/group.hpp"
#include "redorb/reduction.hpp"

using namespace redorb;

namespace {

const RingTag QQ = RingTag::rationals();
const RingTag ZZ = RingTag::integers();

QPoly random_qpoly(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 6);
  std::vector<mpq_class> c;
  for (int i = 0; i < n; ++i) {
    mpq_class q(num(rng), den(rng));
    if (n % 2 == 0 && i % 2 == 0) q *= 2;
    q.canonicalize();
    c.push_back(q);
  }
  return {c, QQ};
}

SymMatrix<mpz_class> random_Z(int n, std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> u(-bound, bound), pos(1, bound);
  SymMatrix<mpz_class> B(n, ZZ);
  for (auto [i, j] : w0_coords(n)) B.set(i, j, mpz_class(u(rng)));
  for (int i = 1; i <= n / 2; ++i) B.set(i, n - i, mpz_class(pos(rng) * (u(rng) < 0 ? -1 : 1)));
  if (n % 2 == 0) B.set(n / 2, n / 2, mpz_class(pos(rng)));
  return B;
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("section point reduces with the identity") {
    std::mt19937_64 rng(1);
    for (int n = 3; n <= 6; ++n) {
      QPoly f = random_qpoly(n, rng);
      if (poly_disc(f) == 0) continue;
      auto res = reduce_over_field(sigma0(f));
      CHECK(res.g == identity_elem<mpq_class>(n, QQ));
      CHECK(res.target == sigma0(f));
    }
  }

  TEST_CASE("round trip recovers the inverse witness") {
    std::mt19937_64 rng(2);
    for (int n = 3; n <= 5; ++n) {
      int done = 0;
      while (done < 100) {
        QPoly f = random_qpoly(n, rng);
        if (poly_disc(f) == 0) continue;
        auto h = random_P<mpq_class>(n, QQ, 5, rng());
        auto B = act(h, sigma0(f));
        auto res = reduce_over_field(B);
        REQUIRE(res.target == sigma0(f));
        REQUIRE(compose(res.g, h) == identity_elem<mpq_class>(n, QQ));
        ++done;
      }
    }
  }

  TEST_CASE("F_5 fiber of a separable cubic reduces to one point") {
    const int64_t p = 5;
    const RingTag F = RingTag::mod(p);
    // f = x^3 + x + 1 mod 5 has disc -31 = 4 mod 5
    std::vector<int64_t> want{0, 1, 1};
    int64_t fiber = 0;
    std::set<IntKey> targets;
    for (int64_t b = 1; b < p; ++b)
      for (int64_t t = 0; t < p; ++t)
        for (int64_t c = 0; c < p; ++c)
          for (int64_t d = 0; d < p; ++d)
            for (int64_t e = 0; e < p; ++e) {
              SymMatrix<Zm> B(3, F);
              B.set(1, 2, Zm(b, p));
              B.set(1, 3, Zm(t, p));
              B.set(2, 2, Zm(c, p));
              B.set(2, 3, Zm(d, p));
              B.set(3, 3, Zm(e, p));
              auto f = inv(B);
              if (f.c[0].v != want[0] || f.c[1].v != want[1] || f.c[2].v != want[2]) continue;
              ++fiber;
              auto res = reduce_over_field(B);
              CHECK(act(res.g, B) == res.target);
              IntKey k;
              for (const auto& v : res.target.m.a) k.push_back(v.v);
              targets.insert(k);
            }
    CHECK(fiber == 20);
    CHECK(targets.size() == 1);
  }

  TEST_CASE("non-unit discriminant is rejected") {
    SymMatrix<Zm> B(3, RingTag::mod(3));
    B.set(1, 2, Zm(1, 3));
    CHECK_THROWS_AS(reduce_over_field(B), NonUnitDiscriminant);
  }

  TEST_CASE("2-adic pattern is read off odd-degree coefficient parities") {
    for (int n : {3, 5}) {
      const RingTag R = RingTag::padic(2, 3);
      std::vector<long> c(n, 0);
      std::vector<std::pair<std::vector<long>, std::vector<int>>> seen;
      std::mt19937_64 rng(17);
      std::uniform_int_distribution<long> u(0, 7);
      while (true) {
        std::vector<Zm> cm;
        for (auto v : c) cm.emplace_back(v, 8);
        MonicPoly<Zm> f(cm, R);
        if (poly_disc(f).v % 2 == 1) {
          // a fiber point by random completion of the non-slice entries
          SymMatrix<Zm> B(n, R);
          for (int i = 1; i <= n / 2; ++i) B.set(i, n - i, Zm(1, 8));
          bool found = false;
          for (int tries = 0; tries < 2000000 && !found; ++tries) {
            for (auto [i, j] : w0_coords(n))
              if (i + j > n) B.set(i, j, Zm(u(rng), 8));
            found = inv(B) == f;
          }
          REQUIRE(found);
          auto res = reduce_over_field(B);
          REQUIRE(res.has_pattern);
          seen.emplace_back(c, res.mod2_pattern);
        }
        int i = 0;
        while (i < n && ++c[i] > 1) c[i++] = 0;
        if (i == n) break;
      }
      REQUIRE(!seen.empty());
      const size_t bits = seen[0].second.size();
      CHECK(bits == static_cast<size_t>(n / 2));
      for (size_t t = 0; t < bits; ++t) {
        // some coefficient of odd degree determines bit t on every sample
        bool matched = false;
        for (int idx = 1; idx <= n && !matched; ++idx) {
          if ((n - idx) % 2 == 0) continue;
          bool all = true;
          for (const auto& [cc, pat] : seen) all = all && pat[t] == static_cast<int>(cc[idx - 1] & 1);
          matched = all;
        }
        CHECK(matched);
      }
    }
  }

  TEST_CASE("canonical form is idempotent and invariant") {
    std::mt19937_64 rng(3);
    for (int n : {3, 4}) {
      for (int t = 0; t < 500; ++t) {
        auto B = random_Z(n, rng, 6);
        if (poly_disc(inv(B)) == 0) continue;
        auto c = canonical_form_Z(B);
        REQUIRE(act(c.g, B) == c.B);
        REQUIRE(is_canonical_Z(c.B));
        REQUIRE(canonical_form_Z(c.B).B == c.B);
        auto p = random_P<mpz_class>(n, ZZ, 3, rng());
        REQUIRE(canonical_form_Z(act(p, B)).B == c.B);
        REQUIRE(equivalent_Z(B, act(p, B)));
        for (const auto& s : c.slice) CHECK(s >= 1);
      }
    }
    SymMatrix<mpz_class> Z(3, ZZ);
    Z.set(2, 2, 1);
    CHECK_THROWS_AS(canonical_form_Z(Z), ZeroSliceEntry);
  }

  TEST_CASE("inequivalent pairs") {
    SymMatrix<mpz_class> A(3, ZZ), B(3, ZZ);
    A.set(1, 2, 1);
    A.set(3, 3, 5);
    B.set(1, 2, 2);
    B.set(3, 3, 5);
    CHECK_FALSE(equivalent_Z(A, B));
    // same inv, c_2 > 1: x^3 + 4 has orbits with slice 1 and slice 2
    SymMatrix<mpz_class> C(3, ZZ), D(3, ZZ);
    C.set(1, 2, 1);
    C.set(3, 3, 4);
    D.set(1, 2, 2);
    D.set(3, 3, 1);
    REQUIRE(inv(C) == inv(D));
    CHECK_FALSE(equivalent_Z(C, D));
  }

  TEST_CASE("canonical forms agree with BFS orbit classes in a small box") {
    const int64_t bound = 3;
    std::vector<SymMatrix<mpz_class>> pts;
    for (int64_t b = -bound; b <= bound; ++b)
      for (int64_t t = -bound; t <= bound; ++t)
        for (int64_t c = -bound; c <= bound; ++c)
          for (int64_t d = -bound; d <= bound; ++d)
            for (int64_t e = -bound; e <= bound; ++e) {
              if (b == 0) continue;
              SymMatrix<mpz_class> B(3, ZZ);
              B.set(1, 2, b);
              B.set(1, 3, t);
              B.set(2, 2, c);
              B.set(2, 3, d);
              B.set(3, 3, e);
              if (poly_disc(inv(B)) == 0) continue;
              pts.push_back(B);
            }
    std::map<IntKey, IntKey> canon;
    for (const auto& B : pts) canon[key_of(B)] = key_of(canonical_form_Z(B).B);
    // every BFS class is contained in one canonical class, and merges across the box are explained by canonical equality
    std::set<IntKey> visited;
    int64_t bfs_classes = 0;
    std::set<IntKey> canon_classes;
    for (const auto& B : pts) {
      if (visited.count(key_of(B))) continue;
      auto orbit = orbit_bfs_oracle(B, bound);
      ++bfs_classes;
      for (const auto& k : orbit) {
        visited.insert(k);
        REQUIRE(canon.at(k) == canon.at(key_of(B)));
      }
      canon_classes.insert(canon.at(key_of(B)));
    }
    CHECK(canon_classes.size() <= static_cast<size_t>(bfs_classes));
    // pairs with equal canonical form inside the box: BFS with a wider box connects them
    std::map<IntKey, std::vector<IntKey>> by_canon;
    for (const auto& [k, c] : canon) by_canon[c].push_back(k);
    int64_t spot = 0;
    for (const auto& [c, members] : by_canon) {
      if (members.size() < 2 || spot > 40) continue;
      auto wide = orbit_bfs_oracle(from_key(members[0], 3), 12);
      for (const auto& m : members) CHECK(wide.count(m));
      ++spot;
    }
  }

  TEST_CASE("finite-field orbit and stabilizer") {
    // F_3, n = 3: orbit of size #P(F_3) = 6 and trivial stabilizer
    const RingTag F3 = RingTag::mod(3);
    auto f = MonicPoly<Zm>({Zm(0, 3), Zm(2, 3), Zm(1, 3)}, F3);  // x^3 + 2x + 1, disc = -32 - 27 = 1 mod 3
    REQUIRE(poly_disc(f).v != 0);
    auto B = sigma0(f);
    CHECK(orbit_bfs_oracle_mod(B).size() == 6);
    CHECK(stabilizer_fp(B).size() == 1);
    // F_5, n = 4: orbit is the whole fiber, stabilizer trivial
    const RingTag F5 = RingTag::mod(5);
    auto g = MonicPoly<Zm>({Zm(1, 5), Zm(0, 5), Zm(2, 5), Zm(1, 5)}, F5);
    REQUIRE(poly_disc(g).v != 0);
    auto C = sigma0(g);
    const auto orbit = orbit_bfs_oracle_mod(C);
    CHECK(orbit.size() == enumerate_P_fp(4, 5).size());
    CHECK(stabilizer_fp(C).size() == 1);
    SymMatrix<Zm> D(3, F3);
    CHECK_THROWS_AS(orbit_bfs_oracle_mod(D), ZeroSliceEntry);
  }
}
