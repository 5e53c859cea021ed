#pragma once

// p-adic valuations of Jacobi sums, the equidistribution defect E_p(m, d),
// discrepancy averages of step functions, and the explicit two-sided band for
// log L* / log H.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "legendre/ff.hpp"
#include "legendre/jacobi.hpp"

namespace legendre::analysis {

using u64 = std::uint64_t;

/// Characteristic function of (0, 1/2]. ValidationError outside [0, 1].
int ind(const mpq_class& x);

/// x - floor(x).
mpq_class frac(const mpq_class& x);

/// The subgroup <p> of (Z/dZ)^x, ascending.
std::vector<u64> subgroup(u64 p, u64 d);

/// (1/|<p>|) sum_{pi in <p>} ind({pi n / d}).
mpq_class stickelberger_rhs(u64 p, u64 d, u64 n);

struct StickelbergerRow {
  u64 n = 0;
  u64 orbit_len = 0;
  unsigned ord = 0;  // valuation of J(n) at the prime fixed by the field generator
  mpq_class lhs;     // ord / ord_p(q^|n|)
  mpq_class rhs;
  bool match = false;
};

struct StickelbergerReport {
  u64 q = 0, d = 0, p = 0;
  std::vector<StickelbergerRow> rows;  // every n in Z_d, ascending

  bool all_match() const;
  /// First n with lhs != rhs.
  std::optional<u64> first_mismatch() const;
};

/// lhs from the local ring of Z[zeta_{d_n}] attached to F_{q^|n|}, with J(n)
/// contracted to its field of definition; rhs from stickelberger_rhs.
StickelbergerReport stickelberger_check(const jacobi::JacobiSet& set, ff::FieldCache& cache);
StickelbergerReport stickelberger_check(u64 q, u64 d, ff::FieldCache& cache);

/// (1/phi(d)) sum_{g unit} max(0, 1/2 - stickelberger_rhs(p, d, g m)).
/// ValidationError unless m is in Z_d and gcd(p, d) = 1.
mpq_class e_p(u64 m, u64 d, u64 p);

struct MeanEReport {
  u64 q = 0, d = 0;
  mpq_class e_sum;  // sum over Z_d of E_p(m, d)
  double lhs = 0;   // log L* / (d log q)
  double rhs = 0;   // -2 e_sum / d
  bool pass = false;
};

/// log L* / (d log q) >= -(2/d) sum_{m in Z_d} E_p(m, d). Decided exactly
/// when L* >= 1, otherwise in double precision with slack 1e-12.
MeanEReport mean_e_bound_check(u64 q, u64 d, const mpq_class& lstar);

/// A real function on [0, 1] constant on the open intervals between
/// breakpoints, with its own value at each breakpoint.
class StepFunction {
 public:
  /// `breaks` strictly increasing inside (0, 1); `open_values` has one entry
  /// per open interval, `point_values` one per point of {0, breaks..., 1}.
  StepFunction(std::vector<mpq_class> breaks, std::vector<mpq_class> open_values,
               std::vector<mpq_class> point_values);

  static StepFunction constant(const mpq_class& c);
  /// The indicator of (0, 1/2].
  static StepFunction half_indicator();

  mpq_class operator()(const mpq_class& x) const;
  mpq_class integral() const;
  /// Sum of |jumps| along 0, (0, x_1), x_1, ..., 1.
  mpq_class total_variation() const;
  StepFunction scaled(const mpq_class& c) const;

 private:
  std::vector<mpq_class> breaks_, open_, point_;
};

struct EquidistReport {
  u64 modulus = 0, n = 0;
  std::vector<u64> h;
  std::vector<u64> units;
  std::vector<mpq_class> deviations;  // per unit g, |integral - average over h|
  mpq_class average;
  mpq_class variation;
  double epsilon = 0.125;
  /// variation * (loglog d' / |H|)^{1/4 - eps}; absent when loglog d' <= 0.
  std::optional<double> bound;
};

/// (1/phi(d')) sum_g |int F - (1/|H|) sum_h F({h g n / d'})|.
/// ValidationError unless gcd(n, d') = 1, H is a nonempty set of units.
EquidistReport discrepancy_average(u64 modulus, u64 n, const std::vector<u64>& h, const StepFunction& f,
                                   double epsilon = 0.125);

/// Psi_eps(x) = (loglog x / log x)^{1/4 - eps}.
double psi(double x, double epsilon);

struct BoundsReport {
  u64 q = 0, d = 0, p = 0;
  double epsilon = 0.125;
  mpq_class lstar;
  double log_lstar = 0, log_h = 0;
  double value = 0;  // log L* / log H
  double a = 48;
  double b = 0;
  double psi = 0;
  double lower = 0, upper = 0;
  bool applicable = false;  // d >= 16
  bool inside = false;      // meaningful only when applicable
};

/// Band [-B Psi_eps(d), A loglog d / log d] with A = 48 and
/// B = 2 (32 + 4 (3 pi)^{-3} eps^{-2}) (4 log p)^{1/4 - eps}.
/// ValidationError unless 0 < eps < 1/4 and d >= 3.
BoundsReport bounds_report(u64 q, u64 d, const mpq_class& lstar, double epsilon = 0.125);
BoundsReport bounds_report(u64 q, u64 d, ff::FieldCache& cache, double epsilon = 0.125);

std::string stickelberger_csv_header();
std::vector<std::string> stickelberger_csv_rows(const StickelbergerReport& r);
std::string bounds_csv_header();
std::string bounds_csv_row(const BoundsReport& r);

nlohmann::json to_json(const StickelbergerReport& r);
nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const MeanEReport& r);

}  // namespace legendre::analysis
