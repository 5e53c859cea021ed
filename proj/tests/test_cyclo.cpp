#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "legendre/cyclo.hpp"
#include "legendre/errors.hpp"
#include "legendre/ff.hpp"
#include "oracle/brute.hpp"

using namespace legendre;
using cyclo::CycVec;

namespace {

CycVec random_vec(unsigned d, std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> pick(-span, span);
  CycVec a = CycVec::zero(d);
  for (auto& c : a.coeffs) c = pick(rng);
  return a;
}

// Direct double-precision evaluation at exp(2 pi i j / d).
std::complex<double> eval(const CycVec& a, unsigned j) {
  std::complex<double> z = 0;
  for (unsigned k = 0; k < a.d; ++k) {
    z += a.coeffs[k].get_d() * std::polar(1.0, 2 * M_PI * double((std::uint64_t(j) * k) % a.d) / a.d);
  }
  return z;
}

mpz_class norm(const CycVec& a) {
  CycVec prod = CycVec::constant(a.d, 1);
  for (unsigned g = 1; g < a.d; ++g)
    if (oracle::gcd(g, a.d) == 1) prod = cyclo::normalize(prod * cyclo::galois_apply(g, a));
  auto n = cyclo::is_rational_integer(prod);
  REQUIRE(n.has_value());
  return *n;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  for (unsigned d = 1; d <= 120; ++d) {
    const auto& phi = cyclo::cyclotomic_poly(d);
    const auto expected = oracle::cyclotomic(d);
    REQUIRE(phi.size() == expected.size());
    for (std::size_t i = 0; i < phi.size(); ++i) CHECK(phi[i] == mpz_class(static_cast<long>(expected[i])));
    CHECK(phi.size() - 1 == oracle::phi(d));
  }
  const auto& p12 = cyclo::cyclotomic_poly(12);
  CHECK(p12 == std::vector<mpz_class>{1, 0, -1, 0, 1});
  CHECK(cyclo::cyclotomic_poly(105)[7] == -2);
}

TEST_CASE("reduction preserves every complex embedding") {
  std::mt19937 rng(1);
  for (unsigned d : {3u, 4u, 8u, 12u, 15u, 28u, 35u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const CycVec a = random_vec(d, rng);
      const CycVec r = cyclo::normalize(a);
      for (unsigned j = 1; j < d; ++j) {
        if (oracle::gcd(j, d) != 1) continue;
        CHECK(std::abs(eval(a, j) - eval(r, j)) < 1e-9);
      }
    }
  }
}

TEST_CASE("ring operations commute with embeddings") {
  std::mt19937 rng(2);
  for (unsigned d : {5u, 9u, 20u, 33u}) {
    const CycVec a = random_vec(d, rng), b = random_vec(d, rng);
    for (unsigned j = 1; j < d; ++j) {
      if (oracle::gcd(j, d) != 1) continue;
      CHECK(std::abs(eval(a * b, j) - eval(a, j) * eval(b, j)) < 1e-8);
      CHECK(std::abs(eval(a + b, j) - (eval(a, j) + eval(b, j))) < 1e-9);
      CHECK(std::abs(eval(cyclo::conjugate(a), j) - std::conj(eval(a, j))) < 1e-9);
      CHECK(std::abs(eval(cyclo::galois_apply(j, a), 1) - eval(a, j)) < 1e-9);
    }
    CHECK_THROWS_AS(cyclo::galois_apply(d, a), ValidationError);
  }
}

TEST_CASE("equality modulo the cyclotomic relation") {
  // 1 + z + z^2 = 0 in Z[zeta_3]; z^2 = -1 - z.
  CycVec s = CycVec::zero(3);
  s.coeffs = {1, 1, 1};
  CHECK(cyclo::reduce_mod_phi(s).is_zero());
  CHECK(cyclo::is_rational_integer(s) == mpz_class(0));
  CycVec a = CycVec::monomial(3, 2), b = CycVec::zero(3);
  b.coeffs = {-1, -1, 0};
  CHECK(cyclo::equal(a, b));
  // |1 + i|^2 = 2 in Z[i].
  CycVec w = CycVec::zero(4);
  w.coeffs = {1, 1, 0, 0};
  CHECK(cyclo::is_rational_integer(w * cyclo::conjugate(w)) == mpz_class(2));
  CHECK_FALSE(cyclo::is_rational_integer(w).has_value());
}

TEST_CASE("contraction to a subfield") {
  CycVec a = CycVec::zero(12);
  a.coeffs[4] = 3;
  a.coeffs[8] = -1;
  const CycVec c = cyclo::contract(a, 3);
  CHECK(c.d == 3);
  CHECK(c.coeffs[1] == 3);
  CHECK(c.coeffs[2] == -1);
  CHECK(std::abs(eval(a, 1) - eval(c, 1)) < 1e-12);
  a.coeffs[1] = 1;
  CHECK_THROWS_AS(cyclo::contract(a, 3), ValidationError);
}

TEST_CASE("certified complex embedding") {
  std::mt19937 rng(3);
  for (unsigned d : {7u, 16u, 45u}) {
    const CycVec a = random_vec(d, rng, 1000);
    const auto ball = cyclo::complex_embed(a, 1, 100);
    const auto ref = eval(a, 1);
    CHECK(std::abs(ball.real() - ref.real()) < 1e-6);
    CHECK(std::abs(ball.imag() - ref.imag()) < 1e-6);
    CHECK(ball.radius > 0);
    CHECK(ball.radius < mpq_class(1, 1000000));
  }
  // Exact value: zeta_4 = i.
  const auto i_ball = cyclo::complex_embed(CycVec::monomial(4, 1), 1, 64);
  CHECK(abs(i_ball.re) <= i_ball.radius);
  CHECK(abs(i_ball.im - 1) <= i_ball.radius);
}

TEST_CASE("local valuations in Z[i] at the two primes above 5") {
  // x^2 + 1 = (x - 2)(x - 3) mod 5, and 5 = (2 + i)(2 - i).
  const std::vector<std::uint32_t> h2{3, 1}, h3{2, 1};  // x - 2, x - 3
  const auto r2 = cyclo::local_ring_from_factor(5, 4, h2, 6);
  const auto r3 = cyclo::local_ring_from_factor(5, 4, h3, 6);
  // h_lift = x - r with r^2 = -1 mod 5^6.
  const mpz_class m = 15625;
  mpz_class root = (m - r2.h_lift()[0]) % m;
  CHECK((root * root + 1) % m == 0);

  CycVec a = CycVec::zero(4);
  a.coeffs = {2, 1, 0, 0};  // 2 + i
  CHECK(cyclo::ord_p_local(r2, a) == 0);
  CHECK(cyclo::ord_p_local(r3, a) == 1);
  CHECK(cyclo::ord_p_local(r3, a * a * a) == 3);
  CHECK(cyclo::ord_p_local(r2, CycVec::constant(4, 25)) == 2);
  CHECK_THROWS_AS(cyclo::ord_p_local(r3, CycVec::constant(4, 5 * 15625)), PrecisionError);
  CHECK(cyclo::ord_p_adaptive(r3, CycVec::constant(4, 5 * 15625)) == 7);
  CycVec zero = CycVec::zero(4);
  zero.coeffs = {1, 0, 1, 0};  // 1 + i^2
  CHECK_THROWS_AS(cyclo::ord_p_local(r2, zero), DomainError);
  CHECK_THROWS_AS(cyclo::local_ring_from_factor(5, 4, std::vector<std::uint32_t>{1, 1}, 3),
                  ValidationError);
}

TEST_CASE("valuations at all primes above p add up to the norm valuation") {
  std::mt19937 rng(4);
  const std::vector<std::pair<unsigned, unsigned>> cases = {{3, 8}, {7, 9}, {11, 5}, {13, 12}, {5, 7}};
  for (auto [p, d] : cases) {
    const unsigned f = static_cast<unsigned>(oracle::order(p, d));
    auto phi = oracle::cyclotomic(d);
    oracle::Poly phi_p;
    for (auto c : phi) phi_p.push_back(((c % long(p)) + p) % p);
    std::vector<std::vector<std::uint32_t>> factors;
    for (const auto& g : oracle::monic_of_degree(p, f))
      if (oracle::irreducible(g, p) && oracle::rem(phi_p, g, p).empty())
        factors.emplace_back(g.begin(), g.end());
    REQUIRE(factors.size() * f == oracle::phi(d));
    for (int trial = 0; trial < 6; ++trial) {
      CycVec a = random_vec(d, rng, 3);
      a = a * CycVec::constant(d, p);  // force some positive valuation
      if (trial % 2) a = a * random_vec(d, rng, 2);
      if (cyclo::reduce_mod_phi(a).is_zero()) continue;
      const mpz_class n = norm(a);
      mpz_class tmp;
      const auto vn = mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t());
      unsigned total = 0;
      for (const auto& h : factors) {
        const auto ring = cyclo::local_ring_from_factor(p, d, h, 4);
        total += f * cyclo::ord_p_adaptive(ring, a);
      }
      CAPTURE(p);
      CAPTURE(d);
      CHECK(total == vn);
    }
  }
}

TEST_CASE("prime selected by a field generator") {
  const ff::DlogTable table(ff::build_field(3, 2));
  const auto ring = cyclo::local_ring(table, 8, 5);
  CHECK(ring.residue_degree() == 2);
  // eta = g^{(Q-1)/8} is a root of the chosen factor.
  const auto& field = table.field();
  const ff::Elem eta = table.antilog(1);
  const auto& h = ring.factor_mod_p();
  ff::Elem acc = 0, pw = 1;
  for (auto c : h) {
    acc = field.add(acc, field.mul(field.from_int(c), pw));
    pw = field.mul(pw, eta);
  }
  CHECK(acc == 0);
  const auto mp = cyclo::minimal_polynomial(field, field.from_int(2));
  CHECK(mp == std::vector<std::uint32_t>{1, 1});  // x + 1 kills -1
  CHECK(cyclo::local_ring(3, 8, 3).residue_degree() == 2);
  CHECK_THROWS_AS(cyclo::local_ring(table, 5, 3), ValidationError);
}
