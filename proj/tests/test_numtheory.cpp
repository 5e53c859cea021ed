#include <doctest.h>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"
#include "oracle/brute.hpp"

using namespace legendre;

TEST_CASE("primality and totient agree with trial division") {
  for (nt::u64 n = 0; n < 2000; ++n) {
    CHECK(nt::is_prime(n) == oracle::is_prime(n));
    if (n >= 1) CHECK(nt::euler_phi(n) == oracle::phi(n));
  }
  CHECK(nt::is_prime(4294967291ULL));
  CHECK_FALSE(nt::is_prime(4294967297ULL));  // 641 * 6700417
  CHECK(nt::is_prime(18446744073709551557ULL));
}

TEST_CASE("divisors and factorization") {
  for (nt::u64 n = 1; n < 500; ++n) {
    std::vector<nt::u64> expected;
    for (nt::u64 k = 1; k <= n; ++k)
      if (n % k == 0) expected.push_back(k);
    CHECK(nt::divisors(n) == expected);
    nt::u64 prod = 1;
    for (auto [p, e] : nt::factorize(n)) {
      CHECK(oracle::is_prime(p));
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("multiplicative order") {
  for (nt::u64 n = 1; n < 200; ++n)
    for (nt::u64 a = 1; a < 40; ++a)
      if (oracle::gcd(a, n) == 1) CHECK(nt::mult_order(a, n) == oracle::order(a, n));
  CHECK_THROWS_AS(nt::mult_order(6, 9), ValidationError);
}

TEST_CASE("prime powers") {
  CHECK(nt::prime_power(3) == std::pair<nt::u64, unsigned>{3, 1});
  CHECK(nt::prime_power(125) == std::pair<nt::u64, unsigned>{5, 3});
  CHECK_THROWS_AS(nt::prime_power(12), ValidationError);
  CHECK_THROWS_AS(nt::prime_power(1), ValidationError);
  CHECK(nt::valuation(162, 3) == 4);
  CHECK_THROWS_AS(nt::ipow(3, 41), ResourceError);
  CHECK(nt::ipow(3, 40) == 12157665459056928801ULL);
}
