#pragma once

// int64 action of group elements on row-major matrices (plain or mod m)

#include <cstdint>
#include <type_traits>
#include <vector>

#include "redorb/group.hpp"

namespace redorb {

struct IntGen {
  std::vector<int64_t> g;
  int64_t mult;  // +-1 over Z, unit mod m otherwise
  int64_t mult_inv;
};

// mult^{-1} g B g^t, reduced into [0, modulus) when modulus != 0
inline std::vector<int64_t> act_int(const IntGen& G, const std::vector<int64_t>& B, int n, int64_t modulus) {
  std::vector<__int128> tmp(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (G.g[i * n + k] == 0) continue;
      for (int j = 0; j < n; ++j) tmp[i * n + j] += static_cast<__int128>(G.g[i * n + k]) * B[k * n + j];
    }
  if (modulus)
    for (auto& v : tmp) v %= modulus;
  std::vector<int64_t> out(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      __int128 s = 0;
      for (int k = 0; k < n; ++k) s += tmp[i * n + k] * G.g[j * n + k];
      s *= G.mult_inv;
      if (modulus) {
        s %= modulus;
        if (s < 0) s += modulus;
      }
      out[i * n + j] = out[j * n + i] = static_cast<int64_t>(s);
    }
  return out;
}

template <class T>
IntGen to_int_gen(const GroupElem<T>& e) {
  IntGen G;
  for (const auto& v : e.g.a) {
    if constexpr (std::is_same_v<T, Zm>) G.g.push_back(v.v);
    else G.g.push_back(v.get_si());
  }
  if constexpr (std::is_same_v<T, Zm>) {
    G.mult = e.mult.v;
    G.mult_inv = inv_or_throw(e.mult).v;
  } else {
    G.mult = e.mult.get_si();
    G.mult_inv = G.mult;
  }
  return G;
}

}  // namespace redorb
