#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "redorb/archimedean.hpp"
#include "redorb/census.hpp"
#include "redorb/errors.hpp"
#include "redorb/local.hpp"
#include "redorb/reduction.hpp"
#include "redorb/repcore.hpp"

namespace py = pybind11;
using namespace redorb;

namespace {

// rows of decimal strings or ints, read as integers
SymMatrix<mpz_class> z_matrix(const std::vector<std::vector<std::string>>& rows) {
  const int n = static_cast<int>(rows.size());
  Mat<mpz_class> m(n, mpz_class(0));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw LengthMismatch("matrix must be square");
    for (int j = 0; j < n; ++j) m(i, j) = mpz_class(rows[i][j]);
  }
  SymMatrix<mpz_class> B(std::move(m), RingTag::integers());
  if (!B.symmetric()) throw Error("matrix must be symmetric");
  return B;
}

std::vector<std::string> strs(const std::vector<mpz_class>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

}  // namespace

PYBIND11_MODULE(redorb_py, m) {
  py::register_exception<Error>(m, "RedorbError", PyExc_ValueError);

  m.def("disc", [](const std::vector<long>& c) { return poly_disc(zpoly_of(c)).get_str(); }, py::arg("coeffs"));
  m.def("real_roots", [](const std::vector<long>& c) { return sturm_real_roots(zpoly_of(c)); }, py::arg("coeffs"));
  m.def(
      "inv", [](const std::vector<std::vector<std::string>>& rows) { return strs(inv(z_matrix(rows)).c); }, py::arg("matrix"));
  m.def(
      "canonical_form",
      [](const std::vector<std::vector<std::string>>& rows) {
        auto c = canonical_form_Z(z_matrix(rows));
        std::vector<std::vector<std::string>> out(c.B.n);
        for (int i = 1; i <= c.B.n; ++i)
          for (int j = 1; j <= c.B.n; ++j) out[i - 1].push_back(c.B.b(i, j).get_str());
        return out;
      },
      py::arg("matrix"));
  m.def("local_count", [](const std::vector<long>& c, int64_t p) { return orbit_count_local(zpoly_of(c), p); }, py::arg("coeffs"),
        py::arg("p"));
  m.def("orbit_count", [](const std::vector<long>& c) { return orbit_count_global(zpoly_of(c)); }, py::arg("coeffs"));
  m.def(
      "euler_local_term", [](int n, int64_t p) { return euler_local_term(n, p, FamilySpec::full(n)).get_str(); }, py::arg("n"),
      py::arg("p"));
  m.def(
      "cfin",
      [](int n) {
        auto I = constant_Cfin(n);
        return std::make_pair(I.lo_str(17), I.hi_str(17));
      },
      py::arg("n"));
  m.def(
      "census",
      [](int n, int64_t X, int r, int64_t samples, uint64_t seed) {
        CensusConfig cfg;
        cfg.n = n;
        cfg.r = r;
        cfg.sweep = {X};
        cfg.family = FamilySpec::full(n);
        cfg.samples = samples;
        cfg.seed = seed;
        py::gil_scoped_release nogil;
        return census(cfg).to_json().dump();
      },
      py::arg("n"), py::arg("X"), py::arg("r") = -1, py::arg("samples") = 2000000, py::arg("seed") = 1);
}
