#pragma once

// The multiplication-by-q action on Z_d = Z/dZ minus {0, d/2}.

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace legendre::orbits {

using u64 = std::uint64_t;

/// Least v >= 1 with q^v = 1 mod n. ValidationError if gcd(q, n) != 1.
u64 mult_order(u64 q, u64 n);

/// d / gcd(d, m).
u64 d_sub_m(u64 m, u64 d);

/// True for m in Z_d, i.e. m mod d not in {0, d/2}.
bool in_zd(u64 m, u64 d);
/// |Z_d|: d - 2 for even d, d - 1 for odd d.
u64 zd_size(u64 d);

struct Orbit {
  u64 rep = 0;                 // smallest member
  u64 len = 0;                 // o_q(d_m)
  u64 d_m = 0;                 // d / gcd(d, rep)
  std::vector<u64> members;    // rep, q*rep, q^2*rep, ...
};

struct OrbitDecomposition {
  u64 q = 0;
  u64 d = 0;
  std::vector<Orbit> orbits;   // ordered by increasing representative
  std::vector<int> index;      // element -> orbit id, -1 off Z_d

  int orbit_of(u64 m) const { return index[m % d]; }
};

/// Requires d >= 2 and gcd(q, d) = 1.
OrbitDecomposition orbit_decompose(u64 q, u64 d);

/// Number of monic irreducible factors of t^d - 1 over F_q.
u64 theta(u64 q, u64 d);

/// Size estimates on the orbit structure, every sum recomputed from
/// scratch. Float comparisons carry kSlack.
struct OrbitBoundsReport {
  static constexpr double kSlack = 1e-12;
  static constexpr double kConstant = 4.0;  // c_0

  u64 q = 0, d = 0;
  double sum_a = 0, bound_a = 0;               // sum_{e|d, e>=2} phi(e)/log e vs 4 d/log d
  u64 sum_lengths = 0, zd_size = 0;            // sum of orbit lengths vs |Z_d| (<= d)
  u64 count_orbits = 0;
  double bound_c = 0;                          // c_0 log q d/log d
  double sum_log_lengths = 0, bound_d = 0;     // vs 2 c_0 log q d loglog d/log d
  bool pass_a = false, pass_b = false, pass_c = false, pass_d = false;

  bool all_pass() const { return pass_a && pass_b && pass_c && pass_d; }
};

/// Requires d >= 3 and gcd(q, d) = 1.
OrbitBoundsReport orbit_bounds_report(u64 q, u64 d);

nlohmann::json to_json(const OrbitDecomposition& decomposition);

}  // namespace legendre::orbits
