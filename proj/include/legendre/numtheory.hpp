#pragma once

// Small-integer number theory shared by every module.

#include <cstdint>
#include <utility>
#include <vector>

namespace legendre::nt {

using u64 = std::uint64_t;

u64 gcd(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

/// Checked integer power; throws ResourceError on 64-bit overflow.
u64 ipow(u64 base, unsigned exp);

bool is_prime(u64 n);

/// Prime factorization by trial division, as (prime, exponent) pairs ascending.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);
std::vector<u64> prime_divisors(u64 n);
std::vector<u64> divisors(u64 n);
u64 euler_phi(u64 n);

/// Splits q = p^a with p prime; nullopt-like failure is reported as ValidationError.
std::pair<u64, unsigned> prime_power(u64 q);

/// Multiplicative order of a modulo n (n >= 1, gcd(a, n) = 1).
u64 mult_order(u64 a, u64 n);

/// Exponent of p in n (n > 0).
unsigned valuation(u64 n, u64 p);

}  // namespace legendre::nt
