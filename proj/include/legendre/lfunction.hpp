#pragma once

// L(E_d/K, T) = prod over q-orbits of Z_d of (1 - J(m)^2 T^|m|), its vanishing
// order at T = 1/q and the leading value there.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "legendre/ff.hpp"
#include "legendre/jacobi.hpp"

namespace legendre::lfunction {

using u64 = std::uint64_t;

struct LPolynomial {
  u64 q = 0, d = 0;
  std::vector<mpz_class> coeffs;  // constant term first

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// Expands the orbit product. InternalError if a coefficient is not rational.
LPolynomial l_polynomial(const jacobi::JacobiSet& set);
LPolynomial l_polynomial(u64 q, u64 d, ff::FieldCache& cache);

/// Expected degree: d - 2 for even d, d - 1 for odd d.
u64 expected_degree(u64 d);

struct Split {
  std::vector<int> v_orbits;  // J(m)^2 = q^|m|
  std::vector<int> s_orbits;
};

Split split_vs(const jacobi::JacobiSet& set);

/// Number of exact divisions of L by (1 - qT), with the quotient.
std::pair<unsigned, LPolynomial> divide_out(const LPolynomial& l);

struct SpecialValue {
  unsigned rho = 0;
  mpq_class value;  // L(T)/(1 - qT)^rho at T = 1/q
  std::vector<int> v_orbits, s_orbits;
  mpq_class product_form;  // same value via the orbit product formula
};

/// Rank: |V_d|, cross-checked against the division multiplicity.
unsigned rank(const jacobi::JacobiSet& set, const LPolynomial& l);

/// Both evaluation paths; InternalError when they differ or a division is inexact.
SpecialValue special_value(const jacobi::JacobiSet& set, const LPolynomial& l);

/// The orbit product path alone: prod_V |m| * N / q^{sum_S |m|}, with
/// N = prod_S (q^|m| - J(m)^2) as a rational integer.
mpq_class special_value_product(const jacobi::JacobiSet& set, const Split& split);

/// Exact functional equation c_{N-k} = eps q^{N-2k} c_k; eps in {-1, 1}, or 0
/// when it fails.
int functional_equation_sign(const LPolynomial& l);

struct RootCheck {
  bool pass = true;
  bool certified = true;             // every root isolated in a disjoint disk
  double max_deviation = 0;          // max over roots of ||T| - 1/q| + radius/q
  std::vector<std::complex<double>> roots;  // in T, with multiplicity
};

/// Roots of L with certified inclusion radii; pass iff every root satisfies
/// ||T| - 1/q| <= tol.
RootCheck check_rh(const LPolynomial& l, double tol = 1e-9);

/// Power sums c_n = sum over places v with deg v | n of deg v * s_{n/deg v}(v),
/// n = 1..D, from point counts at every place of degree <= D.
std::vector<mpz_class> euler_power_sums(u64 q, u64 d, unsigned D, ff::FieldCache& cache);

/// -p_n for the inverse roots of L, n = 1..D (p_n the power sums).
std::vector<mpz_class> l_power_sums(const LPolynomial& l, unsigned D);

/// Rebuilds the first D coefficients of L from power sums c_n.
std::vector<mpq_class> coefficients_from_power_sums(const std::vector<mpz_class>& c, unsigned D);

struct EulerCheck {
  bool pass = false;
  unsigned D = 0;
  std::vector<mpz_class> from_places, from_l;
};

/// Exact comparison up to T^D. ResourceError when q^D exceeds the cap.
EulerCheck euler_oracle(const LPolynomial& l, unsigned D, ff::FieldCache& cache);

nlohmann::json to_json(const LPolynomial& l, const SpecialValue& sv);
std::string csv_header();
std::string csv_row(const LPolynomial& l, const SpecialValue& sv);

}  // namespace legendre::lfunction
