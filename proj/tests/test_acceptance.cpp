// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runtime limits are part of the criteria.

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "legendre/analysis.hpp"
#include "legendre/bsd.hpp"
#include "legendre/errors.hpp"
#include "legendre/jacobi.hpp"
#include "legendre/lfunction.hpp"
#include "legendre/orbits.hpp"
#include "oracle/brute.hpp"
#include "oracle/point_count.hpp"

using namespace legendre;
using u64 = std::uint64_t;

namespace {

constexpr double kRootTol = 1e-9;
constexpr double kRatioTol = 1e-12;
constexpr double kBandEps = 0.125;

struct Case {
  u64 q = 0, d = 0;
  jacobi::JacobiSet set;
  lfunction::LPolynomial l;
  lfunction::SpecialValue sv;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every admissible d in [3, 40] for q in {3, 5}, skipping fields above the cap.
struct Corpus {
  ff::FieldCache cache;
  std::vector<Case> cases;
  std::vector<std::pair<u64, u64>> skipped;

  Corpus() {
    for (u64 q : {3ULL, 5ULL}) {
      for (u64 d = 3; d <= 40; ++d) {
        if (oracle::gcd(q, d) != 1) continue;
        if (!jacobi::oversized_lengths(q, d, cache).empty()) {
          skipped.emplace_back(q, d);
          continue;
        }
        Case c;
        c.q = q;
        c.d = d;
        c.set = jacobi::jacobi_all(q, d, cache);
        c.l = lfunction::l_polynomial(c.set);
        c.sv = lfunction::special_value(c.set, c.l);
        cases.push_back(std::move(c));
      }
    }
  }
};

std::string at(u64 q, u64 d) { return "q=" + std::to_string(q) + " d=" + std::to_string(d); }

Outcome supersingular_family(ff::FieldCache& cache) {
  Outcome o;
  std::ostringstream msg;
  for (auto [q, d] : std::vector<std::pair<u64, u64>>{{3, 4}, {3, 10}, {3, 28}, {5, 6}, {5, 26}}) {
    const auto set = jacobi::jacobi_all(q, d, cache);
    const auto l = lfunction::l_polynomial(set);
    const auto sv = lfunction::special_value(set, l);
    const auto split = lfunction::split_vs(set);
    mpz_class product = 1;
    bool all_v = split.s_orbits.empty();
    for (const auto& j : set.sums) {
      all_v = all_v && jacobi::is_supersingular(j);
      product *= static_cast<unsigned long>(j.orbit_len);
    }
    const std::size_t orbits = set.decomposition.orbits.size();
    const bool ok = all_v && sv.rho == orbits && lfunction::rank(set, l) == orbits && sv.value == mpq_class(product);
    if (!ok) o.pass = false;
    msg << ' ' << at(q, d) << " rank=" << sv.rho << " L*=" << sv.value.get_str();
  }
  o.detail = msg.str();
  return o;
}

Outcome degree_law(const Corpus& corpus) {
  Outcome o;
  for (const auto& c : corpus.cases) {
    const u64 want = c.d % 2 == 0 ? c.d - 2 : c.d - 1;
    if (c.l.degree() != want) {
      o.pass = false;
      o.detail += " " + at(c.q, c.d) + " deg=" + std::to_string(c.l.degree());
    }
  }
  if (o.pass) o.detail = " " + std::to_string(corpus.cases.size()) + " cases";
  return o;
}

Outcome euler_oracle(ff::FieldCache& cache) {
  Outcome o;
  for (auto [q, d] : std::vector<std::pair<u64, u64>>{{3, 4}, {3, 5}, {3, 7}, {3, 8}, {5, 4}}) {
    const auto l = lfunction::l_polynomial(q, d, cache);
    const unsigned top = static_cast<unsigned>(std::min<std::size_t>(l.degree(), 4));
    const auto check = lfunction::euler_oracle(l, top, cache);
    std::vector<long long> c;
    for (unsigned n = 1; n <= top; ++n) c.push_back(oracle::naive_power_sum(q, d, n));
    const auto brute = oracle::from_power_sums(c);
    bool ok = check.pass && check.D == top;
    for (unsigned n = 0; n <= top; ++n) ok = ok && brute[n] == mpq_class(l.coeffs[n]);
    if (!ok) o.pass = false;
    o.detail += " " + at(q, d) + " to T^" + std::to_string(top) + (ok ? "" : " MISMATCH");
  }
  return o;
}

Outcome weil(const Corpus& corpus) {
  Outcome o;
  std::size_t orbits = 0;
  for (const auto& c : corpus.cases) {
    for (const auto& j : c.set.sums) {
      ++orbits;
      if (!jacobi::weil_exact(j)) {
        o.pass = false;
        o.detail += " " + at(c.q, c.d) + " m=" + std::to_string(j.m);
      }
    }
  }
  if (o.pass) o.detail = " " + std::to_string(orbits) + " orbits";
  return o;
}

Outcome riemann(const Corpus& corpus) {
  Outcome o;
  double worst = 0;
  std::size_t roots = 0;
  for (const auto& c : corpus.cases) {
    const auto rh = lfunction::check_rh(c.l, kRootTol);
    double dev = 0;
    for (const auto& r : rh.roots) dev = std::max(dev, std::abs(std::abs(r) - 1.0 / static_cast<double>(c.q)));
    worst = std::max({worst, dev, rh.max_deviation});
    roots += rh.roots.size();
    if (!rh.pass || !rh.certified || rh.roots.size() != c.l.degree() || dev > kRootTol) {
      o.pass = false;
      o.detail += " " + at(c.q, c.d);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, " %zu roots, max ||T|-1/q| = %.3g", roots, worst);
  o.detail += buf;
  return o;
}

Outcome stickelberger(ff::FieldCache& cache) {
  Outcome o;
  std::size_t rows = 0;
  for (u64 q : {3ULL, 5ULL}) {
    for (u64 d = 3; d <= 24; ++d) {
      if (oracle::gcd(q, d) != 1 || !jacobi::oversized_lengths(q, d, cache).empty()) continue;
      const auto r = analysis::stickelberger_check(q, d, cache);
      rows += r.rows.size();
      if (r.rows.size() != orbits::zd_size(d) || !r.all_match()) {
        o.pass = false;
        o.detail += " " + at(q, d);
      }
    }
  }
  o.detail += " " + std::to_string(rows) + " values of n";
  return o;
}

Outcome double_entry(const Corpus& corpus) {
  Outcome o;
  std::size_t coprime_fail = 0;
  for (const auto& c : corpus.cases) {
    const auto split = lfunction::split_vs(c.set);
    const mpq_class product = lfunction::special_value_product(c.set, split);
    const auto [mult, quotient] = lfunction::divide_out(c.l);
    mpq_class division = 0;
    mpq_class power = 1;
    for (const auto& coeff : quotient.coeffs) {
      division += mpq_class(coeff) * power;
      power /= static_cast<unsigned long>(c.q);
    }
    if (division != product || mult != split.v_orbits.size()) {
      o.pass = false;
      o.detail += " " + at(c.q, c.d) + " routes differ";
    }
    const u64 p = c.q;  // q is prime here
    if (mpz_divisible_ui_p(division.get_num().get_mpz_t(), p)) {
      o.pass = false;
      ++coprime_fail;
      o.detail += " " + at(c.q, c.d) + " L*=" + division.get_str() + " numerator divisible by p=" + std::to_string(p);
    }
  }
  o.detail = " " + std::to_string(corpus.cases.size()) + " cases, " + std::to_string(coprime_fail) +
             " with p | numerator;" + o.detail;
  return o;
}

Outcome band(const Corpus& corpus) {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& c : corpus.cases) {
    if (c.d < 16) continue;
    ++checked;
    const double p = static_cast<double>(c.q);
    const double d = static_cast<double>(c.d);
    const double ll = std::log(std::log(d));
    const double b = 2.0 * (32.0 + 4.0 / (std::pow(3.0 * std::numbers::pi, 3) * kBandEps * kBandEps)) *
                     std::pow(4.0 * std::log(p), 0.25 - kBandEps);
    const double lower = -b * std::pow(ll / std::log(d), 0.25 - kBandEps);
    const double upper = 48.0 * ll / std::log(d);
    const double value = bsd::natural_log(c.sv.value) /
                         (static_cast<double>((c.d + 1) / 2) * std::log(static_cast<double>(c.q)));
    const auto report = analysis::bounds_report(c.q, c.d, c.sv.value, kBandEps);
    const bool inside = lower <= value && value <= upper;
    if (!inside || !report.applicable || report.inside != inside) {
      o.pass = false;
      char buf[128];
      std::snprintf(buf, sizeof buf, " %s value=%.6g band=[%.6g, %.6g]", at(c.q, c.d).c_str(), value, lower, upper);
      o.detail += buf;
    }
  }
  o.detail = " " + std::to_string(checked) + " cases with d >= 16" + o.detail;
  return o;
}

Outcome invariants(const Corpus& corpus, ff::FieldCache& cache) {
  Outcome o;
  auto fail = [&](const Case& c, const std::string& what) {
    o.pass = false;
    o.detail += " " + at(c.q, c.d) + " " + what;
  };
  for (const auto& c : corpus.cases) {
    const auto places = bsd::reduction_table(c.q, c.d);
    u64 delta = 0, conductor = 0;
    mpz_class tau = 1;
    for (const auto& v : places) {
      delta += static_cast<u64>(v.degree) * v.ord_delta;
      conductor += static_cast<u64>(v.degree) * v.ord_conductor;
      tau *= v.tamagawa;
    }
    const u64 theta = orbits::theta(c.q, c.d);
    mpz_class tau_max;
    mpz_ui_pow_ui(tau_max.get_mpz_t(), 2, theta);
    tau_max *= static_cast<unsigned long>(4 * c.d * c.d);
    if (tau < 1 || tau > tau_max) fail(c, "tau out of range");
    if (delta != (c.d % 2 == 0 ? 6 * c.d : 6 * (c.d + 1))) fail(c, "deg Delta");
    if (conductor != (c.d % 2 == 0 ? c.d + 2 : c.d + 3)) fail(c, "deg N");

    try {
      const auto t = bsd::torsion_bound(c.q, c.d, cache);
      if (t.lower < 4 || t.upper == 0 || t.upper > 8 || t.lower > t.upper) {
        fail(c, "torsion [" + std::to_string(t.lower) + ", " + std::to_string(t.upper) + "]");
      }
    } catch (const ResourceError& e) {
      fail(c, std::string("torsion: ") + e.what());
    }

    const auto ob = orbits::orbit_bounds_report(c.q, c.d);
    if (orbits::OrbitBoundsReport::kConstant != 4.0 || !ob.pass_a) fail(c, "divisor sum bound");

    const auto me = analysis::mean_e_bound_check(c.q, c.d, c.sv.value);
    if (!me.pass) fail(c, "mean defect inequality");
  }
  if (o.pass) o.detail = " " + std::to_string(corpus.cases.size()) + " cases";
  return o;
}

Outcome micro_case() {
  Outcome o;
  ff::FieldCache cache;
  const auto r = bsd::bsd_report(3, 4, cache, 4);
  const auto l = lfunction::l_polynomial(3, 4, cache);
  std::vector<long long> c;
  for (unsigned n = 1; n <= 2; ++n) c.push_back(oracle::naive_power_sum(3, 4, n));
  const auto brute = oracle::from_power_sums(c);
  const bool l_ok = l.coeffs == std::vector<mpz_class>{1, 0, -9} && brute[0] == 1 && brute[1] == 0 && brute[2] == -9;
  const double expected_ratio = std::log(0.75) / std::log(9.0);
  const bool ok = l_ok && r.sv.rho == 1 && r.sv.value == 2 && r.inv.height == 9 && r.inv.tau == 128 &&
                  r.sha == mpq_class(3, 4) && std::abs(r.ratio.ratio - expected_ratio) <= kRatioTol;
  o.pass = ok;
  char buf[160];
  std::snprintf(buf, sizeof buf, " L=1-9T^2 rho=%u L*=%s H=%s tau=%s sha_reg=%s bs_ratio=%.15f", r.sv.rho,
                r.sv.value.get_str().c_str(), r.inv.height.get_str().c_str(), r.inv.tau.get_str().c_str(),
                r.sha.get_str().c_str(), r.ratio.ratio);
  o.detail = buf;
  return o;
}

struct Gate {
  int failures = 0;

  void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string(" exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0 && secs > limit_s) {
      o.pass = false;
      o.detail += " (over time limit)";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s (%.2fs%s):%s\n", o.pass ? "PASS" : "FAIL", id, name, secs,
                limit_s > 0 ? (" <= " + std::to_string(static_cast<int>(limit_s)) + "s").c_str() : "",
                o.detail.c_str());
    std::fflush(stdout);
  }
};

}  // namespace

int main() {
  Gate gate;
  ff::FieldCache shared;

  gate.run(1, "supersingular family", 60.0, [&] { return supersingular_family(shared); });

  const auto start = std::chrono::steady_clock::now();
  const Corpus corpus;
  std::printf("corpus: %zu cases for q in {3, 5}, d <= 40 in %.2fs; over the size cap:", corpus.cases.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  for (auto [q, d] : corpus.skipped) {
    std::printf(" (%llu,%llu)", static_cast<unsigned long long>(q), static_cast<unsigned long long>(d));
  }
  std::printf("\n");

  gate.run(2, "degree law", 0, [&] { return degree_law(corpus); });
  gate.run(3, "Euler product vs point counts", 300.0, [&] { return euler_oracle(shared); });
  gate.run(4, "Weil identity", 0, [&] { return weil(corpus); });
  gate.run(5, "roots on |T| = 1/q", 0, [&] { return riemann(corpus); });
  gate.run(6, "Stickelberger valuations", 300.0, [&] { return stickelberger(shared); });
  gate.run(7, "special value double entry", 0, [&] { return double_entry(corpus); });
  gate.run(8, "band at eps = 1/8", 0, [&] { return band(corpus); });
  gate.run(9, "invariant suite", 0, [&] { return invariants(corpus, shared); });
  gate.run(10, "worked case q=3 d=4", 1.0, micro_case);

  std::printf("%s: %d criteria failed\n", gate.failures == 0 ? "ACCEPTED" : "REJECTED", gate.failures);
  return gate.failures == 0 ? 0 : 1;
}
