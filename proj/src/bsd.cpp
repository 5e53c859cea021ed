#include "legendre/bsd.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"
#include "legendre/orbits.hpp"

namespace legendre::bsd {

namespace {

mpz_class power(u64 base, u64 exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

ff::Elem frobenius(const ff::DlogTable& table, ff::Elem x, u64 q) {
  if (x == 0) return 0;
  return table.antilog(nt::mulmod(table.dlog(x), q, table.group_order()));
}

PlaceKind classify(const ff::DlogTable& table, ff::Elem t0, u64 d) {
  if (t0 == 0) return PlaceKind::Zero;
  return table.pow(t0, d) == 1 ? PlaceKind::RootOfUnity : PlaceKind::Good;
}

std::vector<Place> places_of_degree(u64 q, u64 d, unsigned f, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(q);
  const auto table = cache.get(static_cast<std::uint32_t>(p), a * f);
  const u64 Q = table->size();
  std::vector<bool> seen(Q, false);
  std::vector<Place> out;
  for (u64 x = 0; x < Q; ++x) {
    if (seen[x]) continue;
    unsigned size = 0;
    ff::Elem y = static_cast<ff::Elem>(x);
    do {
      seen[y] = true;
      ++size;
      y = frobenius(*table, y, q);
    } while (y != x);
    if (size == f) out.push_back(Place{classify(*table, static_cast<ff::Elem>(x), d), f, static_cast<ff::Elem>(x)});
  }
  return out;
}

}  // namespace

double natural_log(const mpz_class& n) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double natural_log(const mpq_class& x) { return natural_log(x.get_num()) - natural_log(x.get_den()); }

std::vector<Place> places_up_to(u64 q, u64 d, unsigned max_degree, ff::FieldCache& cache) {
  std::vector<Place> out{Place{PlaceKind::Infinity, 1, 0}};
  for (unsigned f = 1; f <= max_degree; ++f) {
    const auto batch = places_of_degree(q, d, f, cache);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

std::int64_t fibre_trace(const ff::DlogTable& table, u64 d, ff::Elem t0) {
  const auto& field = table.field();
  const ff::Elem c = table.pow(t0, d);
  std::int64_t sum = 0;
  for (u64 x = 0; x < table.size(); ++x) {
    const auto e = static_cast<ff::Elem>(x);
    sum += table.legendre(e) * table.legendre(field.add(e, 1)) * table.legendre(field.add(e, c));
  }
  return -sum;
}

std::int64_t infinity_trace(u64 d) { return d % 2 == 0 ? 1 : 0; }

PointCount count_points_reduction(u64 q, u64 d, const Place& place, ff::FieldCache& cache,
                                  unsigned extension) {
  if (place.kind != PlaceKind::Good) throw ValidationError("count_points_reduction: place has bad reduction");
  if (extension == 0) throw ValidationError("count_points_reduction: extension degree must be >= 1");
  const auto [p, a] = nt::prime_power(q);
  const auto table = cache.get(static_cast<std::uint32_t>(p), a * place.degree);
  const std::int64_t trace = fibre_trace(*table, d, place.root);
  const mpz_class qf = power(q, place.degree);
  // s_k = alpha^k + beta^k with alpha + beta = trace, alpha beta = q^f.
  mpz_class s_prev = 2, s_cur = trace;
  for (unsigned k = 1; k < extension; ++k) {
    mpz_class s_next = trace * s_cur - qf * s_prev;
    s_prev = s_cur;
    s_cur = s_next;
  }
  PointCount out;
  out.a = s_cur.get_si();
  out.points = power(q, static_cast<u64>(place.degree) * extension) + 1 - s_cur;
  return out;
}

std::vector<PlaceReduction> reduction_table(u64 q, u64 d) {
  if (nt::gcd(q, d) != 1) throw ValidationError("reduction_table: gcd(q, d) != 1");
  const auto dd = static_cast<unsigned>(d);
  std::vector<PlaceReduction> out;
  out.push_back({"0", PlaceKind::Zero, 1, 0, "I_" + std::to_string(2 * dd), 2 * dd, 1, 2 * dd});
  if (d % 2 == 0) {
    out.push_back({"inf", PlaceKind::Infinity, 1, 0, "I_" + std::to_string(2 * dd), 2 * dd, 1, 2 * dd});
  } else {
    out.push_back({"inf", PlaceKind::Infinity, 1, 0, "I*_" + std::to_string(2 * dd), 2 * dd + 6, 2, 4});
  }
  for (u64 e : nt::divisors(d)) {
    const u64 f = nt::mult_order(q, e);
    const u64 count = nt::euler_phi(e) / f;
    const unsigned c = nt::powmod(q, f, 4) == 1 ? 2 : 1;
    for (u64 i = 0; i < count; ++i) {
      out.push_back({"mu" + std::to_string(e) + "#" + std::to_string(i), PlaceKind::RootOfUnity,
                     static_cast<unsigned>(f), e, "I_2", 2, 1, c});
    }
  }
  return out;
}

bool is_square(const ff::DlogTable& fq, std::vector<ff::Elem> poly) {
  const auto& field = fq.field();
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
  if (poly.empty()) return true;
  const std::size_t deg = poly.size() - 1;
  if (deg % 2 != 0 || fq.legendre(poly.back()) != 1) return false;
  const ff::Elem inv_lead = field.inv(poly.back());
  for (auto& c : poly) c = field.mul(c, inv_lead);
  // Monic square root g of degree n, solved from the top coefficients down.
  const std::size_t n = deg / 2;
  const ff::Elem inv_two = field.inv(field.from_int(2));
  std::vector<ff::Elem> g(n + 1, 0);
  g[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    // t^{2n-k} coefficient of g^2: 2 g_{n-k} plus g_i g_j over n-k < i, j < n.
    ff::Elem rest = 0;
    for (std::size_t i = n - k + 1; i < n; ++i) {
      const std::size_t j = 2 * n - k - i;
      if (j > n - k && j < n) rest = field.add(rest, field.mul(g[i], g[j]));
    }
    g[n - k] = field.mul(field.sub(poly[2 * n - k], rest), inv_two);
  }
  std::vector<ff::Elem> square(deg + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) square[i + j] = field.add(square[i + j], field.mul(g[i], g[j]));
  }
  return square == poly;
}

namespace {

// Sparse polynomial in t over F_q from (exponent, integer coefficient) terms.
std::vector<ff::Elem> sparse(const ff::DlogTable& fq, std::initializer_list<std::pair<u64, int>> terms) {
  u64 deg = 0;
  for (const auto& [e, c] : terms) deg = std::max(deg, e);
  std::vector<ff::Elem> out(deg + 1, 0);
  for (const auto& [e, c] : terms) out[e] = fq.field().add(out[e], fq.field().from_int(c));
  return out;
}

bool all_squares(const ff::DlogTable& fq, const std::vector<std::vector<ff::Elem>>& polys) {
  for (const auto& f : polys) {
    if (!is_square(fq, f)) return false;
  }
  return true;
}

// True when no element of the known 2-group outside its double is halvable.
bool two_part_is_known(u64 q, u64 d, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(q);
  const auto fq = cache.get(static_cast<std::uint32_t>(p), a);
  const auto& F = *fq;
  // (-1, 0): -1 - 0 and -1 + t^d; (-t^d, 0): -t^d and 1 - t^d.
  std::vector<std::vector<std::vector<ff::Elem>>> tests = {
      {sparse(F, {{0, -1}}), sparse(F, {{0, -1}, {d, 1}})},
      {sparse(F, {{d, -1}}), sparse(F, {{0, 1}, {d, -1}})},
  };
  if (d % 2 == 0) {
    // x0 = +-s with s = t^{d/2}: x0, x0 + 1, x0 + t^d.
    const u64 h = d / 2;
    tests.push_back({sparse(F, {{h, 1}}), sparse(F, {{h, 1}, {0, 1}}), sparse(F, {{h, 1}, {d, 1}})});
    tests.push_back({sparse(F, {{h, -1}}), sparse(F, {{h, -1}, {0, 1}}), sparse(F, {{h, -1}, {d, 1}})});
  } else {
    // (0, 0): 0 + 1 and 0 + t^d.
    tests.push_back({sparse(F, {{0, 1}}), sparse(F, {{d, 1}})});
  }
  for (const auto& t : tests) {
    if (all_squares(F, t)) return false;
  }
  return true;
}

mpz_class odd_part(mpz_class n) {
  if (n == 0) return 0;
  while (mpz_even_p(n.get_mpz_t())) n /= 2;
  return n;
}

}  // namespace

TorsionBound torsion_bound(u64 q, u64 d, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(q);
  TorsionBound out;
  out.lower = d % 2 == 0 ? 8 : 4;
  out.two_part_exact = two_part_is_known(q, d, cache);
  mpz_class g = 0;
  constexpr unsigned kMaxDegree = 16;
  for (unsigned f = 1; f <= kMaxDegree && cache.fits(static_cast<std::uint32_t>(p), a * f); ++f) {
    for (const auto& place : places_of_degree(q, d, f, cache)) {
      if (place.kind != PlaceKind::Good) continue;
      const auto count = count_points_reduction(q, d, place, cache);
      if (count.points % out.lower != 0) {
        throw InternalError("rational torsion of order " + std::to_string(out.lower) +
                            " does not divide a good reduction count");
      }
      g = gcd(g, count.points);
      out.samples.emplace_back(place, count.points);
    }
    if (out.samples.size() >= 3 && odd_part(g) == 1) break;
  }
  if (out.samples.size() < 3) {
    throw ResourceError("torsion_bound: fewer than 3 good places fit under the size cap");
  }
  out.gcd_orders = g;
  const mpz_class upper = out.two_part_exact ? mpz_class(out.lower * odd_part(g)) : g;
  out.upper = static_cast<unsigned>(upper.get_ui());
  if (out.upper == out.lower) out.exact = out.lower;
  return out;
}

BsdInvariants invariants(u64 q, u64 d) {
  BsdInvariants inv;
  inv.q = q;
  inv.d = d;
  inv.places = reduction_table(q, d);
  inv.theta = orbits::theta(q, d);
  inv.tau = 1;
  u64 mu_places = 0;
  for (const auto& v : inv.places) {
    inv.deg_delta += static_cast<u64>(v.degree) * v.ord_delta;
    inv.deg_conductor += static_cast<u64>(v.degree) * v.ord_conductor;
    inv.tau *= v.tamagawa;
    if (v.kind == PlaceKind::RootOfUnity) ++mu_places;
  }
  const u64 closed_delta = d % 2 == 0 ? 6 * d : 6 * (d + 1);
  const u64 closed_conductor = d % 2 == 0 ? d + 2 : d + 3;
  if (inv.deg_delta != closed_delta || inv.deg_conductor != closed_conductor) {
    throw InternalError("local orders do not add up to the discriminant/conductor degrees");
  }
  if (mu_places != inv.theta) throw InternalError("places over mu_d differ from theta");
  const mpz_class tau_bound = mpz_class(static_cast<unsigned long>(4 * d * d)) * power(2, inv.theta);
  if (inv.tau < 1 || inv.tau > tau_bound) throw InternalError("Tamagawa product outside [1, (2d)^2 2^theta]");
  inv.height = power(q, (d + 1) / 2);
  if (inv.deg_delta != 12 * ((d + 1) / 2)) throw InternalError("height exponent mismatch");
  return inv;
}

mpq_class sha_reg(const mpq_class& lstar, const mpz_class& height, const mpz_class& tau, u64 q,
                  unsigned torsion) {
  if (torsion == 0) throw ValidationError("sha_reg: torsion must be positive");
  mpq_class out = lstar * mpq_class(height * torsion * torsion, tau * static_cast<unsigned long>(q));
  out.canonicalize();
  return out;
}

BsRatio bs_ratio(const mpq_class& sha, const mpq_class& lstar, const mpz_class& height, const mpz_class& tau,
                 u64 q, unsigned torsion) {
  BsRatio r;
  const double log_h = natural_log(height);
  r.ratio = natural_log(sha) / log_h;
  r.term_one = 1.0;
  r.term_lstar = natural_log(lstar) / log_h;
  r.term_correction = (2.0 * std::log(static_cast<double>(torsion)) - natural_log(tau) - std::log(static_cast<double>(q))) / log_h;
  r.consistent = std::abs(r.term_one + r.term_lstar + r.term_correction - r.ratio) <= 1e-12;
  return r;
}

BsdReport bsd_report(u64 q, u64 d, ff::FieldCache& cache, std::optional<unsigned> torsion) {
  if (d < 3) throw ValidationError("bsd_report: d must be >= 3");
  BsdReport r;
  r.inv = invariants(q, d);
  const auto set = jacobi::jacobi_all(q, d, cache);
  r.l = lfunction::l_polynomial(set);
  r.sv = lfunction::special_value(set, r.l);
  try {
    r.torsion = torsion_bound(q, d, cache);
  } catch (const ResourceError&) {
    r.torsion = TorsionBound{};
    r.torsion.lower = d % 2 == 0 ? 8 : 4;
    r.torsion.upper = 0;  // unknown
  }
  r.torsion_used = torsion ? *torsion : (r.torsion.exact ? *r.torsion.exact : r.torsion.lower);
  r.sha = sha_reg(r.sv.value, r.inv.height, r.inv.tau, q, r.torsion_used);
  r.ratio = bs_ratio(r.sha, r.sv.value, r.inv.height, r.inv.tau, q, r.torsion_used);
  return r;
}

std::string csv_header() {
  return "q,d,H,degN,tau,theta,torsion_lo,torsion_hi,rho,Lstar_num,Lstar_den,sha_reg_num,sha_reg_den,bs_ratio";
}

std::string csv_row(const BsdReport& r) {
  char ratio[64];
  std::snprintf(ratio, sizeof ratio, "%.17g", r.ratio.ratio);
  std::ostringstream out;
  out << r.inv.q << ',' << r.inv.d << ',' << r.inv.height.get_str() << ',' << r.inv.deg_conductor << ','
      << r.inv.tau.get_str() << ',' << r.inv.theta << ',' << r.torsion.lower << ',' << r.torsion.upper << ','
      << r.sv.rho << ',' << r.sv.value.get_num().get_str() << ',' << r.sv.value.get_den().get_str() << ','
      << r.sha.get_num().get_str() << ',' << r.sha.get_den().get_str() << ',' << ratio;
  return out.str();
}

nlohmann::json to_json(const BsdReport& r) {
  nlohmann::json places = nlohmann::json::array();
  for (const auto& v : r.inv.places) {
    places.push_back({{"id", v.id},
                      {"degree", v.degree},
                      {"kodaira", v.kodaira},
                      {"ord_delta", v.ord_delta},
                      {"ord_conductor", v.ord_conductor},
                      {"tamagawa", v.tamagawa}});
  }
  nlohmann::json torsion = {{"lower", r.torsion.lower}, {"upper", r.torsion.upper}, {"used", r.torsion_used}};
  torsion["exact"] = r.torsion.exact ? nlohmann::json(*r.torsion.exact) : nlohmann::json(nullptr);
  return {{"q", r.inv.q},
          {"d", r.inv.d},
          {"H", r.inv.height.get_str()},
          {"deg_delta", r.inv.deg_delta},
          {"deg_conductor", r.inv.deg_conductor},
          {"tau", r.inv.tau.get_str()},
          {"theta", r.inv.theta},
          {"places", places},
          {"torsion", torsion},
          {"l_function", lfunction::to_json(r.l, r.sv)},
          {"sha_reg", {{"num", r.sha.get_num().get_str()}, {"den", r.sha.get_den().get_str()}}},
          {"bs_ratio",
           {{"value", r.ratio.ratio},
            {"term_one", r.ratio.term_one},
            {"term_lstar", r.ratio.term_lstar},
            {"term_correction", r.ratio.term_correction}}}};
}

}  // namespace legendre::bsd
