#include <doctest.h>

#include "legendre/errors.hpp"
#include "legendre/jacobi.hpp"
#include "legendre/numtheory.hpp"
#include "oracle/brute.hpp"
#include "oracle/naive_field.hpp"

using namespace legendre;
using cyclo::CycVec;

namespace {

// sum_{e} lambda(1 - g^e) zeta_d^{e m} over the naive field.
CycVec naive_jacobi(const oracle::NaiveField& f, unsigned d, oracle::u64 m) {
  CycVec out = CycVec::zero(d);
  for (oracle::u64 e = 0; e + 1 < f.size; ++e) {
    const oracle::u64 x = f.powers[e];
    const int s = f.lambda(f.sub(1, x));
    if (s != 0) out.coeffs[(e % d) * m % d] += s;
  }
  return out;
}

const std::vector<std::pair<oracle::u64, oracle::u64>> kCases = {
    {3, 4}, {3, 5}, {3, 7}, {3, 8}, {3, 10}, {5, 3}, {5, 4}, {5, 6}, {5, 8}, {7, 3}, {7, 4}, {9, 4}, {9, 5}};

}  // namespace

TEST_CASE("Jacobi sums agree with a naive-field oracle") {
  ff::FieldCache cache;
  for (auto [q, d] : kCases) {
    const auto [p, a] = nt::prime_power(q);
    const auto set = jacobi::jacobi_all(q, d, cache);
    for (const auto& j : set.sums) {
      CAPTURE(q);
      CAPTURE(d);
      CAPTURE(j.m);
      const oracle::NaiveField field(p, static_cast<unsigned>(a * j.orbit_len));
      const CycVec expected = naive_jacobi(field, static_cast<unsigned>(d), j.m);
      CHECK(cyclo::equal(j.value, expected));
      const auto table = cache.get(static_cast<std::uint32_t>(p), static_cast<unsigned>(a * j.orbit_len));
      CHECK(cyclo::equal(jacobi::jacobi_sum(*table, d, j.m), expected));
    }
  }
}

TEST_CASE("Weil relation holds exactly") {
  ff::FieldCache cache;
  for (oracle::u64 q : {3ULL, 5ULL, 7ULL, 9ULL}) {
    for (oracle::u64 d = 3; d <= 20; ++d) {
      if (oracle::gcd(q, d) != 1 || !jacobi::oversized_lengths(q, d, cache).empty()) continue;
      const auto set = jacobi::jacobi_all(q, d, cache);
      for (const auto& j : set.sums) {
        CAPTURE(q);
        CAPTURE(d);
        CAPTURE(j.m);
        CHECK(jacobi::weil_exact(j));
        mpz_class qn;
        mpz_ui_pow_ui(qn.get_mpz_t(), q, j.orbit_len);
        const auto norm = cyclo::is_rational_integer(j.value * cyclo::conjugate(j.value));
        REQUIRE(norm.has_value());
        CHECK(*norm == qn);
      }
    }
  }
}

TEST_CASE("Galois action permutes the sums along Z_d") {
  ff::FieldCache cache;
  for (oracle::u64 q : {3ULL, 5ULL}) {
    for (oracle::u64 d = 3; d <= 20; ++d) {
      if (oracle::gcd(q, d) != 1 || !jacobi::oversized_lengths(q, d, cache).empty()) continue;
      const auto set = jacobi::jacobi_all(q, d, cache);
      for (const auto& j : set.sums) {
        for (oracle::u64 g = 1; g < d; ++g) {
          if (oracle::gcd(g, d) != 1) continue;
          const int target = set.decomposition.orbit_of(g * j.m % d);
          REQUIRE(target >= 0);
          CAPTURE(q);
          CAPTURE(d);
          CAPTURE(j.m);
          CAPTURE(g);
          CHECK(cyclo::equal(cyclo::galois_apply(g, j.value), set.sums[target].value));
        }
      }
    }
  }
}

TEST_CASE("orbit members share one value") {
  ff::FieldCache cache;
  for (auto [q, d] : kCases) {
    const auto [p, a] = nt::prime_power(q);
    const auto set = jacobi::jacobi_all(q, d, cache);
    for (const auto& orbit : set.decomposition.orbits) {
      const auto table = cache.get(static_cast<std::uint32_t>(p), static_cast<unsigned>(a * orbit.len));
      const CycVec first = jacobi::jacobi_sum(*table, d, orbit.rep);
      for (auto m : orbit.members) CHECK(cyclo::equal(jacobi::jacobi_sum(*table, d, m), first));
    }
  }
}

TEST_CASE("small worked values") {
  ff::FieldCache cache;
  SUBCASE("q = 3, d = 4: one orbit of length 2, J^2 = 9") {
    const auto set = jacobi::jacobi_all(3, 4, cache);
    REQUIRE(set.sums.size() == 1);
    CHECK(set.sums[0].orbit_len == 2);
    CHECK(cyclo::is_rational_integer(set.sums[0].value * set.sums[0].value) == mpz_class(9));
    CHECK(jacobi::is_supersingular(set.sums[0]));
  }
  SUBCASE("q = 3, d = 5: one orbit of length 4, J conj(J) = 81; 3^2 = -1 mod 5 makes it supersingular") {
    const auto set = jacobi::jacobi_all(3, 5, cache);
    REQUIRE(set.sums.size() == 1);
    CHECK(set.sums[0].orbit_len == 4);
    CHECK(cyclo::is_rational_integer(set.sums[0].value * cyclo::conjugate(set.sums[0].value)) == mpz_class(81));
    CHECK(jacobi::is_supersingular(set.sums[0]));
  }
  SUBCASE("no power of 3 is -1 mod 8: some orbit is not supersingular") {
    const auto set = jacobi::jacobi_all(3, 8, cache);
    bool any_ordinary = false;
    for (const auto& j : set.sums) any_ordinary = any_ordinary || !jacobi::is_supersingular(j);
    CHECK(any_ordinary);
  }
  SUBCASE("d = q^k + 1 is supersingular throughout") {
    for (auto [q, d] : std::vector<std::pair<oracle::u64, oracle::u64>>{{3, 4}, {3, 10}, {5, 6}, {7, 8}}) {
      for (const auto& j : jacobi::jacobi_all(q, d, cache).sums) CHECK(jacobi::is_supersingular(j));
    }
  }
}

TEST_CASE("batch histogram matches direct summation") {
  ff::FieldCache cache;
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, unsigned>>{{3, 2}, {3, 4}, {5, 2}, {7, 2}}) {
    const auto table = cache.get(p, k);
    const oracle::u64 order = table->group_order();
    for (oracle::u64 d = 3; d <= order; ++d) {
      if (order % d != 0) continue;
      const auto hist = jacobi::histogram(*table, d);
      for (oracle::u64 m = 1; m < d; ++m) {
        if (!orbits::in_zd(m, d)) continue;
        CHECK(cyclo::equal(jacobi::assemble(hist, m), jacobi::jacobi_sum(*table, d, m)));
      }
    }
  }
}

TEST_CASE("parallel assembly is deterministic") {
  ff::FieldCache a, b;
  for (oracle::u64 d : {7ULL, 13ULL, 16ULL}) {
    const auto s1 = jacobi::jacobi_all(3, d, a, 1);
    const auto s4 = jacobi::jacobi_all(3, d, b, 4);
    REQUIRE(s1.sums.size() == s4.sums.size());
    for (std::size_t i = 0; i < s1.sums.size(); ++i) CHECK(s1.sums[i].value.coeffs == s4.sums[i].value.coeffs);
    CHECK(jacobi::to_json(s1).dump() == jacobi::to_json(s4).dump());
  }
}

TEST_CASE("resource and validation errors") {
  ff::FieldCache small(100);
  CHECK(jacobi::oversized_lengths(3, 7, small) == std::vector<jacobi::u64>{6});
  CHECK_THROWS_AS(jacobi::jacobi_all(3, 7, small), ResourceError);
  CHECK_NOTHROW(jacobi::jacobi_all(3, 5, small));
  CHECK_THROWS_AS(jacobi::jacobi_all(3, 6, small), ValidationError);

  ff::FieldCache cache;
  const auto table = cache.get(3, 2);
  CHECK_THROWS_AS(jacobi::jacobi_sum(*table, 4, 2), ValidationError);  // d/2
  CHECK_THROWS_AS(jacobi::jacobi_sum(*table, 4, 0), ValidationError);
  CHECK_THROWS_AS(jacobi::jacobi_sum(*table, 5, 1), ValidationError);  // 5 does not divide 8
}

TEST_CASE("json export") {
  ff::FieldCache cache;
  const auto set = jacobi::jacobi_all(3, 8, cache);
  const auto full = jacobi::to_json(set);
  CHECK(full["q"] == 3);
  CHECK(full["d"] == 8);
  CHECK(full["orbits"].size() == set.sums.size());
  const auto elided = jacobi::to_json(set, 4);
  for (const auto& o : elided["orbits"]) CHECK(o["coeffs"].is_null());
}
