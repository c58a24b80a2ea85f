// redorb command-line front end
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "redorb/archimedean.hpp"
#include "redorb/census.hpp"
#include "redorb/errors.hpp"
#include "redorb/group.hpp"
#include "redorb/local.hpp"
#include "redorb/reduction.hpp"
#include "redorb/repcore.hpp"

using namespace redorb;
using json = nlohmann::json;

namespace {

json interval_json(const Interval& I) { return {I.lo_str(), I.hi_str()}; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << text;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void emit(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_file(out, j.dump(2) + "\n");
}

FamilySpec load_family(const std::string& path, int n) {
  if (path.empty()) return FamilySpec::full(n);
  FamilySpec fam = FamilySpec::from_json(json::parse(read_file(path)));
  if (fam.n != n) throw Error("family file is for n = " + std::to_string(fam.n));
  fam.validate();
  return fam;
}

std::vector<long> parse_coeffs(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
  return out;
}

template <class T>
json matrix_json(const Mat<T>& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(to_str(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class T>
SymMatrix<T> parse_matrix(const json& j, const RingTag& ring) {
  const int n = static_cast<int>(j.size());
  SymMatrix<T> B(n, ring);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(j[i].size()) != n) throw LengthMismatch("matrix is not square");
    for (int k = 0; k < n; ++k) {
      T v;
      from_str(j[i][k].is_string() ? j[i][k].get<std::string>() : j[i][k].dump(), ring, v);
      B.m(i, k) = v;
    }
  }
  if (!B.symmetric()) throw Error("matrix is not symmetric");
  return B;
}

template <class T>
json poly_json(const MonicPoly<T>& f) {
  json a = json::array();
  for (const auto& c : f.c) a.push_back(to_str(c));
  return a;
}

int run_constants(int n, int r, int64_t samples, uint64_t seed, int64_t pmax, int threads, const std::string& out) {
  json j;
  j["n"] = n;
  j["Cfin"] = interval_json(constant_Cfin(n));
  j["Cfin_euler"] = interval_json(constant_Cfin_euler(n, pmax));
  json vr = json::object(), cinf = json::object();
  std::vector<int> rs;
  if (r >= 0) {
    require_valid_r(n, r);
    rs.push_back(r);
  } else {
    for (int k = 0; k <= n; ++k)
      if (valid_r(n, k)) rs.push_back(k);
  }
  for (int k : rs) {
    auto V = volume_Vr(n, k, samples, seed, threads);
    vr[std::to_string(k)] = V.to_json();
    cinf[std::to_string(k)] = interval_json(constant_Cinf(n, V));
  }
  j["Vr"] = vr;
  j["Cinf"] = rs.size() == 1 ? cinf[std::to_string(rs[0])] : cinf;
  std::cerr << "n=" << n << "  Cfin in [" << j["Cfin"][0].get<std::string>() << ", " << j["Cfin"][1].get<std::string>() << "]\n";
  for (int k : rs)
    std::cerr << "  r=" << k << "  V=" << vr[std::to_string(k)]["estimate_mc"] << " +- " << vr[std::to_string(k)]["half_width_99_mc"] << "\n";
  emit(j, out);
  return 0;
}

int run_local(int n, int64_t p, const std::string& fam_path, const std::string& f_str, const std::string& out) {
  if (!is_prime(p)) throw Error("p must be prime");
  const FamilySpec fam = load_family(fam_path, n);
  json j;
  j["n"] = n;
  j["p"] = p;
  j["family"] = fam.to_json();
  j["lambda_integral"] = local_lambda_integral(n, p, fam).to_json();
  if (n == 3) j["orbit_integral"] = local_orbit_integral(n, p, fam).to_json();
  j["euler_term"] = euler_local_term(n, p, fam).get_str();
  j["zeta_factor"] = zeta_euler_factor(n, p).get_str();
  if (!f_str.empty()) {
    auto c = parse_coeffs(f_str);
    if (static_cast<int>(c.size()) != n) throw LengthMismatch("--f needs n coefficients");
    const ZPoly f = zpoly_of(c);
    j["f"] = poly_json(f);
    j["c_p"] = orbit_count_local_family(f, p, fam);
  }
  emit(j, out);
  return 0;
}

int run_reduce(const std::string& matrix, const std::string& ring_s, const std::string& out) {
  const json mj = json::parse(matrix);
  const RingTag ring = RingTag::parse(ring_s);
  json j;
  j["ring"] = ring.str();
  if (ring.kind == RingKind::Integers) {
    auto B = parse_matrix<mpz_class>(mj, ring);
    auto c = canonical_form_Z(B);
    if (act(c.g, B) != c.B) throw Error("reduce: internal check act(g, B) = canonical form failed");
    j["inv"] = poly_json(inv(B));
    j["canonical"] = matrix_json(c.B.m);
    json sl = json::array();
    for (const auto& s : c.slice) sl.push_back(s.get_str());
    j["slice"] = sl;
    j["g"] = matrix_json(c.g.g);
    j["mult"] = to_str(c.g.mult);
  } else if (ring.kind == RingKind::Rationals) {
    auto B = parse_matrix<mpq_class>(mj, ring);
    auto res = reduce_over_field(B);
    if (act(res.g, B) != res.target) throw Error("reduce: internal check act(g, B) = target failed");
    j["inv"] = poly_json(inv(B));
    j["target"] = matrix_json(res.target.m);
    j["g"] = matrix_json(res.g.g);
    j["mult"] = to_str(res.g.mult);
  } else if (ring.finite()) {
    auto B = parse_matrix<Zm>(mj, ring);
    auto res = reduce_over_field(B);
    if (act(res.g, B) != res.target) throw Error("reduce: internal check act(g, B) = target failed");
    j["inv"] = poly_json(inv(B));
    j["target"] = matrix_json(res.target.m);
    j["g"] = matrix_json(res.g.g);
    j["mult"] = to_str(res.g.mult);
    if (res.has_pattern) j["mod2_pattern"] = res.mod2_pattern;
  } else {
    throw Error("reduce: ring must be ZZ, QQ, IntegersMod(m) or PadicTrunc(p, k)");
  }
  emit(j, out);
  return 0;
}

int run_census(CensusConfig cfg, const std::string& fam_path, const std::string& out, const std::string& csv) {
  cfg.family = load_family(fam_path, cfg.n);
  CensusReport rep = census(cfg);
  std::cout << std::left << std::setw(6) << "X" << std::setw(6) << "r" << std::setw(14) << "empirical" << std::setw(34) << "predicted"
            << std::setw(10) << "ratio" << "anomalies\n";
  for (const auto& s : rep.sweep) {
    std::cout << std::setw(6) << s.X << std::setw(6) << (s.r < 0 ? std::string("all") : std::to_string(s.r)) << std::setw(14) << s.empirical
              << std::setw(34) << ("[" + decimal_down(s.predicted.lo, 2) + ", " + decimal_up(s.predicted.hi, 2) + "]") << std::setw(10)
              << std::fixed << std::setprecision(4) << s.ratio << s.anomalies << "\n";
  }
  std::cout << "polynomials " << rep.polynomials << ", degenerate " << rep.degenerate << ", anomalies " << rep.anomalies.size()
            << ", wall " << std::setprecision(2) << rep.wall_time << " s\n";
  if (!out.empty()) write_file(out, rep.to_json().dump(2) + "\n");
  if (!csv.empty()) write_file(csv, rep.to_csv());
  return rep.anomalies.empty() ? 0 : 1;
}

int run_verify_euler(int n, int64_t pmax, const std::string& csv) {
  std::ostringstream os;
  os << "p,lhs,rhs,equal\n";
  bool all = true;
  int count = 0;
  for (int64_t p : primes_upto(pmax)) {
    auto e = euler_factor_identity(n, p);
    os << p << ',' << e.lhs.get_str() << ',' << e.rhs.get_str() << ',' << (e.equal ? "true" : "false") << '\n';
    all = all && e.equal;
    ++count;
  }
  if (csv.empty())
    std::cout << os.str();
  else
    write_file(csv, os.str());
  std::cerr << count << " primes, " << (all ? "all equal" : "MISMATCH") << "\n";
  return all ? 0 : 1;
}

int run_verify_crosscheck(int64_t X) {
  auto c = cross_check_direct(3, X);
  std::cout << "X=" << X << "  method2=" << c.method2 << "  direct=" << c.direct << "  max slice entry=" << c.max_slice << "\n";
  return c.method2 == c.direct ? 0 : 1;
}

int run_verify_jacobian(int n, int64_t p, int m) {
  auto J = jacobian_verify(n, p, m);
  std::cout << "n=" << n << " p=" << p << " m=" << m << "  #Sigma=" << J.sigma_count << "  #P=" << J.group_count << "  orbits=" << J.orbits
            << "  measured=" << J.measured.get_str() << "  expected=" << J.expected.get_str() << "\n";
  return J.measured == J.expected ? 0 : 1;
}

int run_verify_section(int n, int trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12);
  int bad = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<mpq_class> c;
    for (int i = 0; i < n; ++i) {
      mpq_class q(num(rng), den(rng));
      q.canonicalize();
      c.push_back(q);
    }
    QPoly f(c, RingTag::rationals());
    if (inv(sigma0(f)) != f) ++bad;
  }
  std::cout << "n=" << n << "  trials=" << trials << "  failures=" << bad << "\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redorb: reducible integral orbits of the split orthogonal group on symmetric matrices"};
  app.require_subcommand(1);
  const int default_thr = default_threads();

  int n = 3, r = -1, threads = default_thr, m = 1, trials = 1000;
  int64_t samples = 1000000, pmax = 100000, p = 2, x = 0;
  uint64_t seed = 1;
  std::string out, csv, family, f_str, matrix, ring = "QQ";
  std::vector<int64_t> sweep;

  auto* c_const = app.add_subcommand("constants", "C_n^fin, V^(r)(1) and C_n^inf");
  c_const->add_option("--n", n, "degree")->required()->check(CLI::Range(3, 9));
  c_const->add_option("--r", r, "number of real roots (default: all)");
  c_const->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::Range(int64_t{10000}, int64_t{1000000000000}));
  c_const->add_option("--seed", seed, "RNG seed")->required();
  c_const->add_option("--pmax", pmax, "Euler product cutoff")->check(CLI::Range(int64_t{100}, int64_t{10000000}));
  c_const->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  c_const->add_option("--out", out, "JSON output path (default stdout)");

  auto* c_local = app.add_subcommand("local-density", "local factors at one prime");
  c_local->add_option("--n", n, "degree")->required()->check(CLI::Range(3, 9));
  c_local->add_option("--p", p, "prime")->required()->check(CLI::PositiveNumber);
  c_local->add_option("--family", family, "family JSON file")->check(CLI::ExistingFile);
  c_local->add_option("--f", f_str, "also compute c_p(f) for f = x^n + f1 x^(n-1) + ... given as f1,...,fn");
  c_local->add_option("--out", out, "JSON output path (default stdout)");

  auto* c_reduce = app.add_subcommand("reduce", "reduce B in W0 to the section or to its integral canonical form");
  c_reduce->add_option("--matrix", matrix, "JSON array of rows, e.g. [[0,1,2],[1,3,4],[2,4,5]]")->required();
  c_reduce->add_option("--ring", ring, "QQ, ZZ, IntegersMod(m), PadicTrunc(p, k)");
  c_reduce->add_option("--out", out, "JSON output path (default stdout)");

  auto* c_census = app.add_subcommand("census", "Method-II orbit census with predicted asymptotic");
  c_census->add_option("--n", n, "degree (3 or 4)")->required()->check(CLI::Range(3, 4));
  auto* opt_x = c_census->add_option("--x", x, "height bound X")->check(CLI::PositiveNumber);
  auto* opt_sweep = c_census->add_option("--sweep", sweep, "X values, e.g. --sweep 4 6 8 10 12")->check(CLI::PositiveNumber);
  opt_x->excludes(opt_sweep);
  c_census->add_option("--r", r, "number of real roots (default: all)");
  c_census->add_option("--family", family, "family JSON file")->check(CLI::ExistingFile);
  c_census->add_option("--samples", samples, "Monte Carlo samples for V^(r)(1)")->check(CLI::Range(int64_t{10000}, int64_t{1000000000000}));
  c_census->add_option("--seed", seed, "RNG seed");
  c_census->add_option("--pmax", pmax, "Euler product cutoff for families")->check(CLI::Range(int64_t{100}, int64_t{10000000}));
  c_census->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  c_census->add_option("--out", out, "JSON report path");
  c_census->add_option("--csv", csv, "CSV sweep path");

  auto* c_verify = app.add_subcommand("verify", "self-checks");
  c_verify->require_subcommand(1);
  auto* v_euler = c_verify->add_subcommand("euler", "Euler factor identity for all p <= pmax");
  v_euler->add_option("--n", n, "degree")->required()->check(CLI::Range(3, 12));
  v_euler->add_option("--pmax", pmax, "largest prime")->required()->check(CLI::Range(int64_t{2}, int64_t{100000}));
  v_euler->add_option("--csv", csv, "CSV output path (default stdout)");
  auto* v_cross = c_verify->add_subcommand("crosscheck", "Method II against direct canonical-form enumeration, n = 3");
  v_cross->add_option("--x", x, "height bound, at most 4")->required()->check(CLI::Range(int64_t{1}, int64_t{4}));
  auto* v_jac = c_verify->add_subcommand("jacobian", "point-count Jacobian constant");
  v_jac->add_option("--n", n, "degree")->required()->check(CLI::Range(3, 5));
  v_jac->add_option("--p", p, "prime")->required()->check(CLI::PositiveNumber);
  v_jac->add_option("--m", m, "level")->check(CLI::Range(1, 3));
  auto* v_sec = c_verify->add_subcommand("section", "inv(sigma0(f)) = f on random rational f");
  v_sec->add_option("--n", n, "degree")->required()->check(CLI::Range(3, 8));
  v_sec->add_option("--trials", trials, "number of random f")->check(CLI::PositiveNumber);
  v_sec->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_const->parsed()) return run_constants(n, r, samples, seed, pmax, threads, out);
    if (c_local->parsed()) return run_local(n, p, family, f_str, out);
    if (c_reduce->parsed()) return run_reduce(matrix, ring, out);
    if (c_census->parsed()) {
      if (x == 0 && sweep.empty()) {
        std::cerr << "census: give --x or --sweep\n";
        return 2;
      }
      CensusConfig cfg;
      cfg.n = n;
      cfg.r = r;
      cfg.sweep = sweep.empty() ? std::vector<int64_t>{x} : sweep;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.P_max = pmax;
      cfg.threads = threads;
      return run_census(cfg, family, out, csv);
    }
    if (v_euler->parsed()) return run_verify_euler(n, pmax, csv);
    if (v_cross->parsed()) return run_verify_crosscheck(x);
    if (v_jac->parsed()) return run_verify_jacobian(n, p, m);
    if (v_sec->parsed()) return run_verify_section(n, trials, seed);
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
