#include "legendre/numtheory.hpp"

#include <algorithm>
#include <string>

#include "legendre/errors.hpp"

namespace legendre::nt {

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 ipow(u64 base, unsigned exp) {
  u64 result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) {
      throw ResourceError("integer power " + std::to_string(base) + "^" + std::to_string(exp) +
                          " overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
    if (n % f != 0) continue;
    unsigned e = 0;
    while (n % f == 0) {
      n /= f;
      ++e;
    }
    out.emplace_back(f, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto [prime, e] : factorize(n)) out.push_back(prime);
  return out;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [prime, e] : factorize(n)) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= prime;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 euler_phi(u64 n) {
  u64 result = n;
  for (auto [prime, e] : factorize(n)) result = result / prime * (prime - 1);
  return result;
}

std::pair<u64, unsigned> prime_power(u64 q) {
  auto f = factorize(q);
  if (f.size() != 1) throw ValidationError("q = " + std::to_string(q) + " is not a prime power");
  return {f[0].first, f[0].second};
}

u64 mult_order(u64 a, u64 n) {
  if (n == 0) throw ValidationError("mult_order: modulus must be >= 1");
  if (gcd(a % n, n) != 1 && n != 1) {
    throw ValidationError("mult_order: gcd(" + std::to_string(a) + ", " + std::to_string(n) +
                          ") != 1");
  }
  if (n == 1) return 1;
  u64 order = euler_phi(n);
  for (auto [prime, e] : factorize(order)) {
    for (unsigned i = 0; i < e; ++i) {
      if (powmod(a, order / prime, n) == 1) {
        order /= prime;
      } else {
        break;
      }
    }
  }
  return order;
}

unsigned valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace legendre::nt
