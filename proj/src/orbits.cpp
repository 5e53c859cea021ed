#include "legendre/orbits.hpp"

#include <cmath>
#include <string>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::orbits {

namespace {

void require_coprime(u64 q, u64 d) {
  if (nt::gcd(q, d) != 1) {
    throw ValidationError("gcd(q, d) != 1 for q = " + std::to_string(q) +
                          ", d = " + std::to_string(d));
  }
}

}  // namespace

u64 mult_order(u64 q, u64 n) { return nt::mult_order(q, n); }

u64 d_sub_m(u64 m, u64 d) { return d / nt::gcd(d, m % d); }

bool in_zd(u64 m, u64 d) {
  m %= d;
  return m != 0 && !(d % 2 == 0 && m == d / 2);
}

u64 zd_size(u64 d) { return d % 2 == 0 ? d - 2 : d - 1; }

OrbitDecomposition orbit_decompose(u64 q, u64 d) {
  if (d < 2) throw ValidationError("orbit_decompose: d must be >= 2");
  require_coprime(q, d);
  OrbitDecomposition out;
  out.q = q;
  out.d = d;
  out.index.assign(d, -1);
  const u64 qd = q % d;
  for (u64 m = 1; m < d; ++m) {
    if (!in_zd(m, d) || out.index[m] != -1) continue;
    Orbit orbit;
    orbit.rep = m;
    orbit.d_m = d_sub_m(m, d);
    u64 x = m;
    do {
      out.index[x] = static_cast<int>(out.orbits.size());
      orbit.members.push_back(x);
      x = nt::mulmod(x, qd, d);
    } while (x != m);
    orbit.len = orbit.members.size();
    if (orbit.len != mult_order(q, orbit.d_m)) {
      throw InternalError("orbit length differs from o_q(d_m) at m = " + std::to_string(m));
    }
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

u64 theta(u64 q, u64 d) {
  require_coprime(q, d);
  u64 total = 0;
  for (u64 e : nt::divisors(d)) {
    const u64 phi = nt::euler_phi(e), ord = mult_order(q, e);
    if (phi % ord != 0) {
      throw InternalError("phi(" + std::to_string(e) + ") not divisible by o_q(" +
                          std::to_string(e) + ")");
    }
    total += phi / ord;
  }
  return total;
}

OrbitBoundsReport orbit_bounds_report(u64 q, u64 d) {
  if (d < 3) throw ValidationError("orbit_bounds_report: d must be >= 3");
  require_coprime(q, d);
  OrbitBoundsReport r;
  r.q = q;
  r.d = d;
  const double logd = std::log(static_cast<double>(d));
  const double logq = std::log(static_cast<double>(q));
  const double c0 = OrbitBoundsReport::kConstant;

  for (u64 e : nt::divisors(d)) {
    if (e >= 2) r.sum_a += static_cast<double>(nt::euler_phi(e)) / std::log(static_cast<double>(e));
  }
  r.bound_a = c0 * static_cast<double>(d) / logd;

  const auto decomposition = orbit_decompose(q, d);
  r.count_orbits = decomposition.orbits.size();
  for (const auto& orbit : decomposition.orbits) {
    r.sum_lengths += orbit.len;
    r.sum_log_lengths += std::log(static_cast<double>(orbit.len));
  }
  r.zd_size = zd_size(d);
  r.bound_c = c0 * logq * static_cast<double>(d) / logd;
  r.bound_d = 2.0 * c0 * logq * static_cast<double>(d) * std::log(logd) / logd;

  r.pass_a = r.sum_a <= r.bound_a + OrbitBoundsReport::kSlack;
  r.pass_b = r.sum_lengths == r.zd_size && r.zd_size <= d;
  r.pass_c = static_cast<double>(r.count_orbits) <= r.bound_c + OrbitBoundsReport::kSlack;
  r.pass_d = r.sum_log_lengths <= r.bound_d + OrbitBoundsReport::kSlack;
  return r;
}

nlohmann::json to_json(const OrbitDecomposition& decomposition) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : decomposition.orbits) {
    orbits.push_back({{"rep", o.rep}, {"len", o.len}, {"d_m", o.d_m}, {"members", o.members}});
  }
  return {{"d", decomposition.d}, {"q", decomposition.q}, {"orbits", orbits}};
}

}  // namespace legendre::orbits
