#include "legendre/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "legendre/bsd.hpp"
#include "legendre/cyclo.hpp"
#include "legendre/errors.hpp"
#include "legendre/lfunction.hpp"
#include "legendre/numtheory.hpp"
#include "legendre/orbits.hpp"

namespace legendre::analysis {

namespace {

mpq_class ratio(u64 num, u64 den) {
  mpq_class out(mpz_class(static_cast<unsigned long>(num)), mpz_class(static_cast<unsigned long>(den)));
  out.canonicalize();
  return out;
}

std::vector<u64> units(u64 d) {
  std::vector<u64> out;
  for (u64 g = 1; g < d; ++g) {
    if (nt::gcd(g, d) == 1) out.push_back(g);
  }
  return out;
}

std::string q_str(const mpq_class& x) { return x.get_num().get_str() + "," + x.get_den().get_str(); }

nlohmann::json q_json(const mpq_class& x) {
  return {{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}};
}

}  // namespace

int ind(const mpq_class& x) {
  if (x < 0 || x > 1) throw ValidationError("ind: argument " + x.get_str() + " outside [0, 1]");
  return (x > 0 && x <= mpq_class(1, 2)) ? 1 : 0;
}

mpq_class frac(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return x - fl;
}

std::vector<u64> subgroup(u64 p, u64 d) {
  if (d == 0 || nt::gcd(p, d) != 1) throw ValidationError("subgroup: p must be a unit mod d");
  std::vector<u64> out;
  u64 x = 1 % d;
  do {
    out.push_back(x);
    x = nt::mulmod(x, p, d);
  } while (x != 1 % d);
  std::sort(out.begin(), out.end());
  return out;
}

mpq_class stickelberger_rhs(u64 p, u64 d, u64 n) {
  const auto group = subgroup(p, d);
  u64 hits = 0;
  for (u64 pi : group) hits += ind(ratio(nt::mulmod(pi, n % d, d), d));
  return ratio(hits, group.size());
}

bool StickelbergerReport::all_match() const {
  return std::all_of(rows.begin(), rows.end(), [](const StickelbergerRow& r) { return r.match; });
}

std::optional<u64> StickelbergerReport::first_mismatch() const {
  for (const auto& r : rows) {
    if (!r.match) return r.n;
  }
  return std::nullopt;
}

StickelbergerReport stickelberger_check(const jacobi::JacobiSet& set, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(set.q);
  StickelbergerReport out;
  out.q = set.q;
  out.d = set.d;
  out.p = p;
  std::vector<std::optional<unsigned>> ord_by_orbit(set.sums.size());
  for (u64 n = 1; n < set.d; ++n) {
    if (!orbits::in_zd(n, set.d)) continue;
    const int id = set.decomposition.orbit_of(n);
    const auto& j = set.sums.at(static_cast<std::size_t>(id));
    auto& ord = ord_by_orbit[static_cast<std::size_t>(id)];
    const u64 v = static_cast<u64>(a) * j.orbit_len;
    if (!ord) {
      // J(n) is fixed by n -> qn, so one valuation serves the whole orbit.
      const auto d_n = static_cast<unsigned>(orbits::d_sub_m(j.m, set.d));
      const auto table = cache.get(static_cast<std::uint32_t>(p), static_cast<unsigned>(v));
      const auto ring = cyclo::local_ring(*table, d_n, static_cast<unsigned>(v + 2));
      ord = cyclo::ord_p_adaptive(ring, cyclo::contract(j.value, d_n));
    }
    StickelbergerRow row;
    row.n = n;
    row.orbit_len = j.orbit_len;
    row.ord = *ord;
    row.lhs = ratio(*ord, v);
    row.rhs = stickelberger_rhs(p, set.d, n);
    row.match = row.lhs == row.rhs;
    out.rows.push_back(std::move(row));
  }
  return out;
}

StickelbergerReport stickelberger_check(u64 q, u64 d, ff::FieldCache& cache) {
  return stickelberger_check(jacobi::jacobi_all(q, d, cache), cache);
}

mpq_class e_p(u64 m, u64 d, u64 p) {
  if (d < 3 || !orbits::in_zd(m, d)) throw ValidationError("e_p: m must lie in Z_d");
  if (nt::gcd(p, d) != 1) throw ValidationError("e_p: gcd(p, d) must be 1");
  const auto group = subgroup(p, d);
  const auto us = units(d);
  mpq_class total = 0;
  const mpq_class half(1, 2);
  for (u64 g : us) {
    const u64 gm = nt::mulmod(g, m % d, d);
    u64 hits = 0;
    for (u64 pi : group) hits += ind(ratio(nt::mulmod(pi, gm, d), d));
    const mpq_class gap = half - ratio(hits, group.size());
    if (gap > 0) total += gap;
  }
  total /= static_cast<unsigned long>(us.size());
  return total;
}

MeanEReport mean_e_bound_check(u64 q, u64 d, const mpq_class& lstar) {
  if (lstar <= 0) throw ValidationError("mean_e_bound_check: L* must be positive");
  const auto [p, a] = nt::prime_power(q);
  MeanEReport out;
  out.q = q;
  out.d = d;
  out.e_sum = 0;
  for (u64 m = 1; m < d; ++m) {
    if (orbits::in_zd(m, d)) out.e_sum += e_p(m, d, p);
  }
  out.lhs = bsd::natural_log(lstar) / (static_cast<double>(d) * std::log(static_cast<double>(q)));
  out.rhs = -2.0 * out.e_sum.get_d() / static_cast<double>(d);
  out.pass = lstar >= 1 || out.lhs >= out.rhs - 1e-12;
  return out;
}

StepFunction::StepFunction(std::vector<mpq_class> breaks, std::vector<mpq_class> open_values,
                           std::vector<mpq_class> point_values)
    : breaks_(std::move(breaks)), open_(std::move(open_values)), point_(std::move(point_values)) {
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (breaks_[i] <= 0 || breaks_[i] >= 1 || (i > 0 && breaks_[i] <= breaks_[i - 1])) {
      throw ValidationError("StepFunction: breakpoints must increase strictly inside (0, 1)");
    }
  }
  if (open_.size() != breaks_.size() + 1 || point_.size() != breaks_.size() + 2) {
    throw ValidationError("StepFunction: value counts do not match the breakpoints");
  }
}

StepFunction StepFunction::constant(const mpq_class& c) { return StepFunction({}, {c}, {c, c}); }

StepFunction StepFunction::half_indicator() {
  return StepFunction({mpq_class(1, 2)}, {1, 0}, {0, 1, 0});
}

mpq_class StepFunction::operator()(const mpq_class& x) const {
  if (x < 0 || x > 1) throw ValidationError("StepFunction: argument outside [0, 1]");
  if (x == 0) return point_.front();
  if (x == 1) return point_.back();
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  const auto i = static_cast<std::size_t>(it - breaks_.begin());
  if (it != breaks_.end() && *it == x) return point_[i + 1];
  return open_[i];
}

mpq_class StepFunction::integral() const {
  mpq_class out = 0, left = 0;
  for (std::size_t i = 0; i < open_.size(); ++i) {
    const mpq_class right = i < breaks_.size() ? breaks_[i] : mpq_class(1);
    out += (right - left) * open_[i];
    left = right;
  }
  return out;
}

mpq_class StepFunction::total_variation() const {
  mpq_class out = 0;
  for (std::size_t i = 0; i < open_.size(); ++i) {
    out += abs(open_[i] - point_[i]);
    out += abs(point_[i + 1] - open_[i]);
  }
  return out;
}

StepFunction StepFunction::scaled(const mpq_class& c) const {
  auto o = open_, pt = point_;
  for (auto& v : o) v *= c;
  for (auto& v : pt) v *= c;
  return StepFunction(breaks_, std::move(o), std::move(pt));
}

EquidistReport discrepancy_average(u64 modulus, u64 n, const std::vector<u64>& h, const StepFunction& f,
                                   double epsilon) {
  if (modulus < 2) throw ValidationError("discrepancy_average: modulus must be >= 2");
  if (nt::gcd(n % modulus, modulus) != 1) throw ValidationError("discrepancy_average: n must be a unit");
  if (h.empty()) throw ValidationError("discrepancy_average: H must be nonempty");
  for (u64 x : h) {
    if (nt::gcd(x % modulus, modulus) != 1) throw ValidationError("discrepancy_average: H must consist of units");
  }
  EquidistReport out;
  out.modulus = modulus;
  out.n = n % modulus;
  out.h = h;
  out.units = units(modulus);
  out.epsilon = epsilon;
  const mpq_class mean = f.integral();
  out.average = 0;
  for (u64 g : out.units) {
    const u64 gn = nt::mulmod(g, out.n, modulus);
    mpq_class sum = 0;
    for (u64 x : h) sum += f(ratio(nt::mulmod(x % modulus, gn, modulus), modulus));
    sum /= static_cast<unsigned long>(h.size());
    out.deviations.push_back(abs(mean - sum));
    out.average += out.deviations.back();
  }
  out.average /= static_cast<unsigned long>(out.units.size());
  out.variation = f.total_variation();
  const double ll = std::log(std::log(static_cast<double>(modulus)));
  if (ll > 0) out.bound = out.variation.get_d() * std::pow(ll / static_cast<double>(h.size()), 0.25 - epsilon);
  return out;
}

double psi(double x, double epsilon) {
  return std::pow(std::log(std::log(x)) / std::log(x), 0.25 - epsilon);
}

BoundsReport bounds_report(u64 q, u64 d, const mpq_class& lstar, double epsilon) {
  if (!(epsilon > 0 && epsilon < 0.25)) throw ValidationError("bounds_report: eps must lie in (0, 1/4)");
  if (d < 3) throw ValidationError("bounds_report: d must be >= 3");
  if (lstar <= 0) throw ValidationError("bounds_report: L* must be positive");
  const auto [p, a] = nt::prime_power(q);
  BoundsReport r;
  r.q = q;
  r.d = d;
  r.p = p;
  r.epsilon = epsilon;
  r.lstar = lstar;
  r.log_lstar = bsd::natural_log(lstar);
  r.log_h = static_cast<double>((d + 1) / 2) * std::log(static_cast<double>(q));
  r.value = r.log_lstar / r.log_h;
  const double pi3 = std::pow(3.0 * std::numbers::pi, -3.0);
  r.b = 2.0 * (32.0 + 4.0 * pi3 / (epsilon * epsilon)) *
        std::pow(4.0 * std::log(static_cast<double>(p)), 0.25 - epsilon);
  r.applicable = d >= 16;
  if (r.applicable) {
    const double x = static_cast<double>(d);
    r.psi = psi(x, epsilon);
    r.lower = -r.b * r.psi;
    r.upper = r.a * std::log(std::log(x)) / std::log(x);
    r.inside = r.lower <= r.value && r.value <= r.upper;
  }
  return r;
}

BoundsReport bounds_report(u64 q, u64 d, ff::FieldCache& cache, double epsilon) {
  const auto set = jacobi::jacobi_all(q, d, cache);
  const auto l = lfunction::l_polynomial(set);
  return bounds_report(q, d, lfunction::special_value(set, l).value, epsilon);
}

std::string stickelberger_csv_header() { return "q,d,n,lhs_num,lhs_den,rhs_num,rhs_den,match"; }

std::vector<std::string> stickelberger_csv_rows(const StickelbergerReport& r) {
  std::vector<std::string> out;
  for (const auto& row : r.rows) {
    std::ostringstream line;
    line << r.q << ',' << r.d << ',' << row.n << ',' << q_str(row.lhs) << ',' << q_str(row.rhs) << ','
         << (row.match ? 1 : 0);
    out.push_back(line.str());
  }
  return out;
}

std::string bounds_csv_header() { return "q,d,eps,value,lower,upper,inside"; }

std::string bounds_csv_row(const BoundsReport& r) {
  char buf[256];
  if (r.applicable) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.17g,%.17g,%.17g,%.17g,%d", static_cast<unsigned long long>(r.q),
                  static_cast<unsigned long long>(r.d), r.epsilon, r.value, r.lower, r.upper, r.inside ? 1 : 0);
  } else {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.17g,%.17g,,,na", static_cast<unsigned long long>(r.q),
                  static_cast<unsigned long long>(r.d), r.epsilon, r.value);
  }
  return buf;
}

nlohmann::json to_json(const StickelbergerReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"orbit_len", row.orbit_len},
                    {"ord", row.ord},
                    {"lhs", q_json(row.lhs)},
                    {"rhs", q_json(row.rhs)},
                    {"match", row.match}});
  }
  return {{"q", r.q}, {"d", r.d}, {"p", r.p}, {"all_match", r.all_match()}, {"rows", rows}};
}

nlohmann::json to_json(const BoundsReport& r) {
  nlohmann::json out = {{"q", r.q},
                        {"d", r.d},
                        {"p", r.p},
                        {"eps", r.epsilon},
                        {"Lstar", q_json(r.lstar)},
                        {"log_Lstar", r.log_lstar},
                        {"log_H", r.log_h},
                        {"value", r.value},
                        {"A", r.a},
                        {"B", r.b},
                        {"applicable", r.applicable}};
  if (r.applicable) {
    out["psi"] = r.psi;
    out["lower"] = r.lower;
    out["upper"] = r.upper;
    out["inside"] = r.inside;
  } else {
    out["band"] = "not applicable (d < 16)";
  }
  return out;
}

nlohmann::json to_json(const MeanEReport& r) {
  return {{"q", r.q}, {"d", r.d}, {"e_sum", q_json(r.e_sum)}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}};
}

}  // namespace legendre::analysis
