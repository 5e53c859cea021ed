#include "legendre/jacobi.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <string>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::jacobi {

namespace {

u64 mod_of_q(u64 q, unsigned& a) {
  const auto [p, e] = nt::prime_power(q);
  if (p == 2) throw ValidationError("q must be odd");
  a = e;
  return p;
}

mpz_class power_of(u64 q, u64 len) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), q, len);
  return out;
}

}  // namespace

cyclo::CycVec jacobi_sum(const ff::DlogTable& table, u64 d, u64 m) {
  if (!orbits::in_zd(m, d)) {
    throw ValidationError("jacobi_sum: m = " + std::to_string(m) + " is not in Z_" + std::to_string(d));
  }
  const u64 order = table.group_order();
  const u64 dm = orbits::d_sub_m(m, d);
  if (order % dm != 0) {
    throw ValidationError("jacobi_sum: d_m = " + std::to_string(dm) + " does not divide Q - 1 = " +
                          std::to_string(order));
  }
  cyclo::CycVec out = cyclo::CycVec::zero(static_cast<unsigned>(d));
  for (u64 e = 1; e < order; ++e) {  // e = 0 is x = 1, where lambda(0) = 0
    const ff::Elem x = table.antilog(e);
    const ff::Elem one_minus_x = table.field().sub(1, x);
    out.coeffs[nt::mulmod(e % d, m % d, d)] += table.legendre(one_minus_x);
  }
  return out;
}

Histogram histogram(const ff::DlogTable& table, u64 d) {
  Histogram hist;
  hist.d = d;
  hist.field_size = table.size();
  hist.weight.assign(d, 0);
  // lambda(1 - x) = lambda(-1) lambda(x - 1), and x - 1 is a cheap re-encoding.
  const auto dlogs = table.dlog_entries();  // dlogs[x - 1] = dlog(x)
  const std::int64_t lambda_minus_one = ((table.group_order() / 2) % 2 == 0) ? 1 : -1;
  const u64 Q = table.size();
  for (u64 x = 2; x < Q; ++x) {
    const ff::Elem y = table.minus_one(static_cast<ff::Elem>(x));
    const std::int64_t sign = (dlogs[y - 1] & 1u) ? -lambda_minus_one : lambda_minus_one;
    hist.weight[dlogs[x - 1] % d] += sign;
  }
  return hist;
}

cyclo::CycVec assemble(const Histogram& hist, u64 m) {
  const u64 d = hist.d;
  if (!orbits::in_zd(m, d)) {
    throw ValidationError("assemble: m = " + std::to_string(m) + " is not in Z_" + std::to_string(d));
  }
  if ((hist.field_size - 1) % orbits::d_sub_m(m, d) != 0) {
    throw ValidationError("assemble: d_m does not divide Q - 1");
  }
  cyclo::CycVec out = cyclo::CycVec::zero(static_cast<unsigned>(d));
  for (u64 r = 0; r < d; ++r) {
    if (hist.weight[r] != 0) out.coeffs[nt::mulmod(r, m % d, d)] += static_cast<long>(hist.weight[r]);
  }
  return out;
}

std::vector<u64> oversized_lengths(u64 q, u64 d, const ff::FieldCache& cache) {
  unsigned a = 0;
  const u64 p = mod_of_q(q, a);
  std::vector<u64> out;
  std::map<u64, bool> seen;
  for (const auto& orbit : orbits::orbit_decompose(q, d).orbits) {
    if (seen.count(orbit.len)) continue;
    const bool fits = orbit.len * a <= 64 && cache.fits(static_cast<std::uint32_t>(p),
                                                        static_cast<unsigned>(orbit.len * a));
    seen[orbit.len] = fits;
    if (!fits) out.push_back(orbit.len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

JacobiSet jacobi_all(u64 q, u64 d, ff::FieldCache& cache, unsigned jobs) {
  unsigned a = 0;
  const u64 p = mod_of_q(q, a);
  JacobiSet set;
  set.q = q;
  set.d = d;
  set.decomposition = orbits::orbit_decompose(q, d);
  if (const auto big = oversized_lengths(q, d, cache); !big.empty()) {
    throw ResourceError("field F_" + std::to_string(q) + "^" + std::to_string(big.front()) +
                        " needed for orbit length " + std::to_string(big.front()) +
                        " exceeds the size cap " + std::to_string(cache.size_cap()));
  }
  std::vector<u64> lengths;
  for (const auto& orbit : set.decomposition.orbits) {
    if (std::find(lengths.begin(), lengths.end(), orbit.len) == lengths.end()) lengths.push_back(orbit.len);
  }
  std::sort(lengths.begin(), lengths.end());

  auto build = [&](u64 len) {
    const auto table = cache.get(static_cast<std::uint32_t>(p), static_cast<unsigned>(len * a));
    return histogram(*table, d);
  };
  std::map<u64, Histogram> hists;
  if (jobs <= 1 || lengths.size() <= 1) {
    for (u64 len : lengths) hists.emplace(len, build(len));
  } else {
    std::vector<std::future<Histogram>> pending;
    std::size_t next = 0;
    while (next < lengths.size()) {
      const std::size_t batch_end = std::min(lengths.size(), next + jobs);
      pending.clear();
      for (std::size_t i = next; i < batch_end; ++i) {
        pending.push_back(std::async(std::launch::async, build, lengths[i]));
      }
      for (std::size_t i = next; i < batch_end; ++i) hists.emplace(lengths[i], pending[i - next].get());
      next = batch_end;
    }
  }

  for (std::size_t id = 0; id < set.decomposition.orbits.size(); ++id) {
    const auto& orbit = set.decomposition.orbits[id];
    JacobiSum j;
    j.q = q;
    j.d = d;
    j.m = orbit.rep;
    j.orbit_len = orbit.len;
    j.orbit_id = static_cast<int>(id);
    j.value = assemble(hists.at(orbit.len), orbit.rep);
    set.sums.push_back(std::move(j));
  }
  return set;
}

bool is_supersingular(const JacobiSum& j) {
  const auto square = cyclo::is_rational_integer(j.value * j.value);
  return square.has_value() && *square == power_of(j.q, j.orbit_len);
}

bool weil_exact(const JacobiSum& j) {
  const auto norm = cyclo::is_rational_integer(j.value * cyclo::conjugate(j.value));
  return norm.has_value() && *norm == power_of(j.q, j.orbit_len);
}

nlohmann::json to_json(const JacobiSet& set, std::size_t elide_above) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& j : set.sums) {
    nlohmann::json coeffs = nullptr;
    if (elide_above == 0 || j.value.coeffs.size() <= elide_above) coeffs = cyclo::to_json(j.value);
    rows.push_back({{"m", j.m}, {"len", j.orbit_len}, {"supersingular", is_supersingular(j)}, {"coeffs", coeffs}});
  }
  return {{"q", set.q}, {"d", set.d}, {"orbits", rows}};
}

}  // namespace legendre::jacobi
