#include "legendre/lfunction.hpp"

#include <sstream>

#include "legendre/bsd.hpp"
#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::lfunction {

namespace {

mpz_class power(u64 base, u64 exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

}  // namespace

u64 expected_degree(u64 d) { return d % 2 == 0 ? d - 2 : d - 1; }

LPolynomial l_polynomial(const jacobi::JacobiSet& set) {
  const auto d = static_cast<unsigned>(set.d);
  std::vector<cyclo::CycVec> poly{cyclo::CycVec::constant(d, 1)};
  for (const auto& j : set.sums) {
    const cyclo::CycVec square = cyclo::normalize(j.value * j.value);
    const std::size_t len = j.orbit_len;
    std::vector<cyclo::CycVec> next(poly.size() + len, cyclo::CycVec::zero(d));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] = next[k] + poly[k];
      next[k + len] = cyclo::normalize(next[k + len] - square * poly[k]);
    }
    poly = std::move(next);
  }
  LPolynomial out;
  out.q = set.q;
  out.d = set.d;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto c = cyclo::is_rational_integer(poly[k]);
    if (!c) {
      throw InternalError("coefficient of T^" + std::to_string(k) + " of L is not a rational integer (q = " +
                          std::to_string(set.q) + ", d = " + std::to_string(set.d) + ")");
    }
    out.coeffs.push_back(*c);
  }
  return out;
}

LPolynomial l_polynomial(u64 q, u64 d, ff::FieldCache& cache) {
  return l_polynomial(jacobi::jacobi_all(q, d, cache));
}

Split split_vs(const jacobi::JacobiSet& set) {
  Split out;
  for (const auto& j : set.sums) {
    (jacobi::is_supersingular(j) ? out.v_orbits : out.s_orbits).push_back(j.orbit_id);
  }
  return out;
}

std::pair<unsigned, LPolynomial> divide_out(const LPolynomial& l) {
  LPolynomial cur = l;
  unsigned count = 0;
  const mpz_class q(static_cast<unsigned long>(l.q));
  while (cur.coeffs.size() > 1) {
    // cur = (1 - qT) quot: quot_k = cur_k + q quot_{k-1}; the top term must cancel.
    std::vector<mpz_class> quot(cur.coeffs.size() - 1);
    mpz_class carry = 0;
    for (std::size_t k = 0; k + 1 < cur.coeffs.size(); ++k) {
      quot[k] = cur.coeffs[k] + q * carry;
      carry = quot[k];
    }
    if (cur.coeffs.back() != -q * carry) break;
    cur.coeffs = std::move(quot);
    ++count;
  }
  return {count, cur};
}

unsigned rank(const jacobi::JacobiSet& set, const LPolynomial& l) {
  const auto v = static_cast<unsigned>(split_vs(set).v_orbits.size());
  const auto [mult, quot] = divide_out(l);
  if (mult != v) {
    throw InternalError("vanishing order " + std::to_string(mult) + " at 1/q differs from |V_d| = " +
                        std::to_string(v));
  }
  return v;
}

mpq_class special_value_product(const jacobi::JacobiSet& set, const Split& split) {
  const auto d = static_cast<unsigned>(set.d);
  mpz_class v_part = 1;
  for (int id : split.v_orbits) v_part *= static_cast<unsigned long>(set.sums[id].orbit_len);
  cyclo::CycVec n = cyclo::CycVec::constant(d, 1);
  u64 s_len = 0;
  for (int id : split.s_orbits) {
    const auto& j = set.sums[id];
    const cyclo::CycVec factor = cyclo::CycVec::constant(d, power(set.q, j.orbit_len)) - j.value * j.value;
    n = cyclo::normalize(n * factor);
    s_len += j.orbit_len;
  }
  const auto n_int = cyclo::is_rational_integer(n);
  if (!n_int) throw InternalError("product over S_d is not a rational integer");
  mpq_class out(v_part * *n_int, power(set.q, s_len));
  out.canonicalize();
  return out;
}

SpecialValue special_value(const jacobi::JacobiSet& set, const LPolynomial& l) {
  SpecialValue sv;
  const Split split = split_vs(set);
  sv.v_orbits = split.v_orbits;
  sv.s_orbits = split.s_orbits;
  sv.rho = rank(set, l);
  const auto [mult, quot] = divide_out(l);
  // quot(1/q) = sum_k c_k / q^k, summed over the common denominator q^deg.
  const std::size_t deg = quot.coeffs.size() - 1;
  mpz_class num = 0;
  for (std::size_t k = 0; k <= deg; ++k) num += quot.coeffs[k] * power(l.q, deg - k);
  sv.value = mpq_class(num, power(l.q, deg));
  sv.value.canonicalize();
  sv.product_form = special_value_product(set, split);
  if (sv.value != sv.product_form) {
    throw InternalError("special value mismatch: division gives " + sv.value.get_str() +
                        ", orbit product gives " + sv.product_form.get_str());
  }
  if (sv.value <= 0) throw InternalError("special value is not positive: " + sv.value.get_str());
  return sv;
}

int functional_equation_sign(const LPolynomial& l) {
  const std::size_t n = l.degree();
  if (l.coeffs.empty() || l.coeffs[0] != 1) return 0;
  const mpz_class top = power(l.q, n);
  int eps = 0;
  if (l.coeffs[n] == top) {
    eps = 1;
  } else if (l.coeffs[n] == -top) {
    eps = -1;
  } else {
    return 0;
  }
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    // c_{n-k} q^{2k} = eps q^n c_k
    if (l.coeffs[n - k] * power(l.q, 2 * k) != eps * power(l.q, n) * l.coeffs[k]) return 0;
  }
  return eps;
}

std::vector<mpz_class> euler_power_sums(u64 q, u64 d, unsigned D, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(q);
  std::vector<mpz_class> c(D + 1, 0);
  for (const auto& place : bsd::places_up_to(q, d, D, cache)) {
    const unsigned f = place.degree;
    std::int64_t trace = 0;
    if (place.kind == bsd::PlaceKind::Infinity) {
      trace = bsd::infinity_trace(d);
    } else {
      const auto table = cache.get(static_cast<std::uint32_t>(p), a * f);
      trace = bsd::fibre_trace(*table, d, place.root);
    }
    const bool good = place.kind == bsd::PlaceKind::Good;
    const mpz_class qf = power(q, f);
    // s_k = alpha^k + beta^k (good) or trace^k (bad).
    mpz_class s_prev = 2, s_cur = trace;
    if (!good) s_prev = 1;
    for (unsigned k = 1; k * f <= D; ++k) {
      c[k * f] += static_cast<unsigned long>(f) * s_cur;
      mpz_class s_next = good ? mpz_class(trace * s_cur - qf * s_prev) : mpz_class(trace * s_cur);
      s_prev = s_cur;
      s_cur = s_next;
    }
  }
  c.erase(c.begin());
  return c;
}

std::vector<mpz_class> l_power_sums(const LPolynomial& l, unsigned D) {
  auto coeff = [&](std::size_t k) { return k < l.coeffs.size() ? l.coeffs[k] : mpz_class(0); };
  std::vector<mpz_class> p(D + 1, 0);
  for (unsigned n = 1; n <= D; ++n) {
    mpz_class v = -static_cast<long>(n) * coeff(n);
    for (unsigned j = 1; j < n; ++j) v -= p[j] * coeff(n - j);
    p[n] = v;
  }
  std::vector<mpz_class> out;
  for (unsigned n = 1; n <= D; ++n) out.push_back(-p[n]);
  return out;
}

std::vector<mpq_class> coefficients_from_power_sums(const std::vector<mpz_class>& c, unsigned D) {
  std::vector<mpq_class> l(D + 1, 0);
  l[0] = 1;
  for (unsigned n = 1; n <= D && n <= c.size(); ++n) {
    mpq_class acc = 0;
    for (unsigned j = 1; j <= n; ++j) acc += mpq_class(c[j - 1]) * l[n - j];
    l[n] = acc / n;
  }
  return l;
}

EulerCheck euler_oracle(const LPolynomial& l, unsigned D, ff::FieldCache& cache) {
  const auto [p, a] = nt::prime_power(l.q);
  if (!cache.fits(static_cast<std::uint32_t>(p), a * D)) {
    throw ResourceError("euler_oracle: q^" + std::to_string(D) + " exceeds the size cap");
  }
  EulerCheck out;
  out.D = D;
  out.from_places = euler_power_sums(l.q, l.d, D, cache);
  out.from_l = l_power_sums(l, D);
  out.pass = out.from_places == out.from_l;
  const auto rebuilt = coefficients_from_power_sums(out.from_places, D);
  for (unsigned n = 0; n <= D; ++n) {
    const mpz_class expected = n < l.coeffs.size() ? l.coeffs[n] : mpz_class(0);
    if (rebuilt[n] != expected) out.pass = false;
  }
  return out;
}

nlohmann::json to_json(const LPolynomial& l, const SpecialValue& sv) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : l.coeffs) coeffs.push_back(c.get_str());
  return {{"q", l.q},
          {"d", l.d},
          {"degree", l.degree()},
          {"coeffs", coeffs},
          {"rho", sv.rho},
          {"special_value", {{"num", sv.value.get_num().get_str()}, {"den", sv.value.get_den().get_str()}}},
          {"v_orbits", sv.v_orbits},
          {"s_orbits", sv.s_orbits}};
}

std::string csv_header() { return "q,d,degree,rho,Lstar_num,Lstar_den,supersingular"; }

std::string csv_row(const LPolynomial& l, const SpecialValue& sv) {
  std::ostringstream out;
  out << l.q << ',' << l.d << ',' << l.degree() << ',' << sv.rho << ',' << sv.value.get_num().get_str() << ','
      << sv.value.get_den().get_str() << ',' << (sv.s_orbits.empty() ? 1 : 0);
  return out.str();
}

}  // namespace legendre::lfunction
