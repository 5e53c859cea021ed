#include <string>
#include <utility>

#include "legendre/cyclo.hpp"
#include "legendre/errors.hpp"
#include "legendre/ff.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::cyclo {

namespace {

// Polynomials are coefficient vectors, constant term first.
using PolyP = std::vector<u64>;
using PolyZ = std::vector<mpz_class>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

void trim(PolyZ& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 inv_mod(u64 a, u64 p) { return nt::powmod(a % p, p - 2, p); }

PolyP mul_p(const PolyP& a, const PolyP& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  PolyP out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + nt::mulmod(a[i], b[j], p)) % p;
    }
  }
  trim(out);
  return out;
}

PolyP sub_p(const PolyP& a, const PolyP& b, u64 p) {
  PolyP out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const u64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

std::pair<PolyP, PolyP> divrem_p(PolyP a, const PolyP& b, u64 p) {
  if (b.empty()) throw InternalError("polynomial division by zero");
  trim(a);
  if (a.size() < b.size()) return {PolyP{}, a};
  const u64 lead_inv = inv_mod(b.back(), p);
  PolyP quot(a.size() - b.size() + 1, 0);
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const u64 c = nt::mulmod(a[i], lead_inv, p);
    quot[i - b.size() + 1] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t k = i - (b.size() - 1) + j;
      a[k] = (a[k] + p - nt::mulmod(c, b[j], p)) % p;
    }
    if (i == 0) break;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(quot);
  return {quot, a};
}

// s g + t h = 1 over F_p with deg s < deg h, deg t < deg g.
std::pair<PolyP, PolyP> bezout_p(const PolyP& g, const PolyP& h, u64 p) {
  PolyP r0 = g, r1 = h, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divrem_p(r0, r1, p);
    r0 = std::exchange(r1, r);
    s0 = std::exchange(s1, sub_p(s0, mul_p(q, s1, p), p));
    t0 = std::exchange(t1, sub_p(t0, mul_p(q, t1, p), p));
  }
  if (r0.size() != 1) throw InternalError("factors of Phi_d mod p are not coprime");
  const u64 c = inv_mod(r0[0], p);
  for (auto& x : s0) x = nt::mulmod(x, c, p);
  for (auto& x : t0) x = nt::mulmod(x, c, p);
  return {s0, t0};
}

PolyZ to_z(const PolyP& a) {
  PolyZ out;
  for (u64 x : a) out.emplace_back(static_cast<unsigned long>(x));
  return out;
}

void mod_all(PolyZ& a, const mpz_class& m) {
  for (auto& x : a) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  trim(a);
}

PolyZ mul_z(const PolyZ& a, const PolyZ& b, const mpz_class& m) {
  if (a.empty() || b.empty()) return {};
  PolyZ out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  mod_all(out, m);
  return out;
}

PolyZ add_z(const PolyZ& a, const PolyZ& b, const mpz_class& m, int sign = 1) {
  PolyZ out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] = a[i];
    if (i < b.size()) out[i] += sign * b[i];
  }
  mod_all(out, m);
  return out;
}

// Division by a monic polynomial modulo m.
std::pair<PolyZ, PolyZ> divrem_monic(PolyZ a, const PolyZ& b, const mpz_class& m) {
  trim(a);
  if (a.size() < b.size()) return {PolyZ{}, a};
  PolyZ quot(a.size() - b.size() + 1);
  for (std::size_t i = a.size(); i-- > b.size() - 1;) {
    mpz_class c = a[i];
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    quot[i - b.size() + 1] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_submul(a[i - (b.size() - 1) + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
  }
  a.resize(b.size() - 1);
  mod_all(a, m);
  mod_all(quot, m);
  return {quot, a};
}

// One quadratic Hensel step: f = g h mod m, s g + t h = 1 mod m, h monic,
// becomes the same data modulo m^2.
void hensel_step(const PolyZ& f, PolyZ& g, PolyZ& h, PolyZ& s, PolyZ& t, mpz_class& m) {
  const mpz_class m2 = m * m;
  const PolyZ e = add_z(f, mul_z(g, h, m2), m2, -1);
  auto [q, r] = divrem_monic(mul_z(s, e, m2), h, m2);
  PolyZ g2 = add_z(add_z(g, mul_z(t, e, m2), m2), mul_z(q, g, m2), m2);
  PolyZ h2 = add_z(h, r, m2);
  PolyZ b = add_z(add_z(mul_z(s, g2, m2), mul_z(t, h2, m2), m2), PolyZ{mpz_class(1)}, m2, -1);
  auto [c, dd] = divrem_monic(mul_z(s, b, m2), h2, m2);
  PolyZ s2 = add_z(s, dd, m2, -1);
  PolyZ t2 = add_z(add_z(t, mul_z(t, b, m2), m2, -1), mul_z(c, g2, m2), m2, -1);
  g = std::move(g2);
  h = std::move(h2);
  s = std::move(s2);
  t = std::move(t2);
  m = m2;
}

unsigned min_valuation(const std::vector<mpz_class>& coords, u64 p) {
  unsigned best = ~0u;
  const mpz_class pz(static_cast<unsigned long>(p));
  for (const auto& c : coords) {
    if (c == 0) continue;
    mpz_class tmp;
    const auto v = static_cast<unsigned>(mpz_remove(tmp.get_mpz_t(), c.get_mpz_t(), pz.get_mpz_t()));
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

std::vector<std::uint32_t> minimal_polynomial(const ff::Field& field, std::uint32_t element) {
  const u64 p = field.p();
  const unsigned k = field.k();
  // Echelon rows: (coordinates, combination of powers), pivot entry 1.
  struct Row {
    unsigned pivot;
    PolyP vec, combo;
  };
  std::vector<Row> rows;
  ff::Elem power = 1;
  for (unsigned j = 0; j <= k; ++j) {
    PolyP vec(k, 0), combo(j + 1, 0);
    const auto digits = field.digits(power);
    for (unsigned i = 0; i < k; ++i) vec[i] = digits[i];
    combo[j] = 1;
    for (const auto& row : rows) {
      const u64 c = vec[row.pivot];
      if (c == 0) continue;
      for (unsigned i = 0; i < k; ++i) vec[i] = (vec[i] + p - nt::mulmod(c, row.vec[i], p)) % p;
      for (std::size_t i = 0; i < row.combo.size(); ++i) {
        combo[i] = (combo[i] + p - nt::mulmod(c, row.combo[i], p)) % p;
      }
    }
    unsigned pivot = k;
    for (unsigned i = 0; i < k; ++i) {
      if (vec[i] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == k) {
      // combo[j] is still 1: a monic relation of least degree.
      return std::vector<std::uint32_t>(combo.begin(), combo.end());
    }
    const u64 inv = inv_mod(vec[pivot], p);
    for (auto& x : vec) x = nt::mulmod(x, inv, p);
    for (auto& x : combo) x = nt::mulmod(x, inv, p);
    rows.push_back(Row{pivot, std::move(vec), std::move(combo)});
    power = field.mul(power, element);
  }
  throw InternalError("minimal polynomial degree exceeds field degree");
}

LocalRing local_ring_from_factor(u64 p, unsigned d, std::span<const std::uint32_t> h, unsigned kappa) {
  if (p < 3 || !nt::is_prime(p)) throw ValidationError("local_ring: p must be an odd prime");
  if (d == 0 || d % p == 0) throw ValidationError("local_ring: p must not divide d");
  if (kappa == 0) throw ValidationError("local_ring: precision must be >= 1");
  if (h.size() < 2 || h.back() != 1) throw ValidationError("local_ring: factor must be monic of degree >= 1");
  for (auto c : h) {
    if (c >= p) throw ValidationError("local_ring: factor coefficients must be reduced mod p");
  }
  if (!ff::is_irreducible(h, static_cast<std::uint32_t>(p))) {
    throw ValidationError("local_ring: factor is not irreducible mod p");
  }
  const auto& phi = cyclotomic_poly(d);
  PolyP phi_p;
  for (const auto& c : phi) {
    mpz_class r;
    mpz_mod_ui(r.get_mpz_t(), c.get_mpz_t(), p);
    phi_p.push_back(r.get_ui());
  }
  const PolyP h_p(h.begin(), h.end());
  auto [g_p, rem] = divrem_p(phi_p, h_p, p);
  if (!rem.empty()) throw ValidationError("local_ring: factor does not divide Phi_d mod p");
  auto [s_p, t_p] = bezout_p(g_p, h_p, p);

  LocalRing ring;
  ring.p_ = p;
  ring.d_ = d;
  ring.kappa_ = kappa;
  ring.h_.assign(h.begin(), h.end());
  mpz_ui_pow_ui(ring.modulus_.get_mpz_t(), p, kappa);

  PolyZ f(phi.begin(), phi.end()), g = to_z(g_p), hz = to_z(h_p), s = to_z(s_p), t = to_z(t_p);
  mpz_class m(static_cast<unsigned long>(p));
  while (m < ring.modulus_) hensel_step(f, g, hz, s, t, m);
  mod_all(hz, ring.modulus_);
  hz.resize(h.size());  // monic, so the top coefficient survives reduction
  ring.h_lift_ = hz;

  auto [quot, check] = divrem_monic(f, hz, ring.modulus_);
  if (!check.empty()) throw InternalError("Hensel lift does not divide Phi_d");

  const std::size_t f_deg = h.size() - 1;
  ring.powers_.assign(d, std::vector<mpz_class>(f_deg));
  std::vector<mpz_class> cur(f_deg);
  cur[0] = 1;
  if (f_deg == 1) {
    // x = -h_lift[0] in the quotient.
    mpz_class root = -hz[0];
    mpz_mod(root.get_mpz_t(), root.get_mpz_t(), ring.modulus_.get_mpz_t());
    mpz_class acc = 1;
    for (unsigned k = 0; k < d; ++k) {
      ring.powers_[k][0] = acc;
      acc = acc * root % ring.modulus_;
    }
    return ring;
  }
  for (unsigned k = 0; k < d; ++k) {
    ring.powers_[k] = cur;
    // cur *= x, then eliminate x^f with the monic lift.
    mpz_class top = cur[f_deg - 1];
    for (std::size_t i = f_deg - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (std::size_t i = 0; i < f_deg; ++i) {
      mpz_submul(cur[i].get_mpz_t(), top.get_mpz_t(), hz[i].get_mpz_t());
      mpz_mod(cur[i].get_mpz_t(), cur[i].get_mpz_t(), ring.modulus_.get_mpz_t());
    }
  }
  return ring;
}

LocalRing LocalRing::with_precision(unsigned kappa) const {
  return local_ring_from_factor(p_, d_, h_, kappa);
}

LocalRing local_ring(const ff::DlogTable& field, unsigned d, unsigned kappa) {
  const u64 order = field.group_order();
  if (d == 0 || order % d != 0) {
    throw ValidationError("local_ring: d = " + std::to_string(d) + " does not divide Q - 1");
  }
  const ff::Elem eta = field.antilog(order / d);
  const auto h = minimal_polynomial(field.field(), eta);
  return local_ring_from_factor(field.spec().p, d, h, kappa);
}

LocalRing local_ring(u64 p, unsigned d, unsigned kappa) {
  if (p < 3 || !nt::is_prime(p)) throw ValidationError("local_ring: p must be an odd prime");
  const auto f = static_cast<unsigned>(nt::mult_order(p, d));
  const ff::Field field(ff::build_field(static_cast<std::uint32_t>(p), f, ff::kMaxSizeCap));
  const ff::Elem eta = field.pow(field.spec().generator, (field.size() - 1) / d);
  return local_ring_from_factor(p, d, minimal_polynomial(field, eta), kappa);
}

unsigned ord_p_local(const LocalRing& ring, const CycVec& a) {
  if (a.d != ring.d_) {
    throw ValidationError("ord_p_local: element lives in Z[zeta_" + std::to_string(a.d) +
                          "], ring is for zeta_" + std::to_string(ring.d_));
  }
  if (reduce_mod_phi(a).is_zero()) throw DomainError("ord_p_local: valuation of zero");
  const std::size_t f_deg = ring.h_.size() - 1;
  std::vector<mpz_class> image(f_deg);
  for (unsigned k = 0; k < a.d; ++k) {
    if (a.coeffs[k] == 0) continue;
    for (std::size_t i = 0; i < f_deg; ++i) {
      mpz_addmul(image[i].get_mpz_t(), a.coeffs[k].get_mpz_t(), ring.powers_[k][i].get_mpz_t());
    }
  }
  for (auto& c : image) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), ring.modulus_.get_mpz_t());
  const unsigned v = min_valuation(image, ring.p_);
  if (v == ~0u) {
    throw PrecisionError("ord_p_local: image vanishes modulo p^" + std::to_string(ring.kappa_));
  }
  return v;
}

unsigned ord_p_adaptive(const LocalRing& ring, const CycVec& a) {
  constexpr unsigned kMaxKappa = 1u << 14;
  try {
    return ord_p_local(ring, a);
  } catch (const PrecisionError&) {
    if (ring.kappa() >= kMaxKappa) throw;
  }
  LocalRing wider = ring.with_precision(2 * ring.kappa());
  return ord_p_adaptive(wider, a);
}

}  // namespace legendre::cyclo
