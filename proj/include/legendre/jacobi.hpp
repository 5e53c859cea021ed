#pragma once

// Jacobi sums J(m) = sum_x t_m(x) lambda(1 - x) over F_{q^|m|}, as elements of
// Z[zeta_d].
//
// With g the field generator, t_m(g^e) = zeta_d^{e m}. This needs d_m | Q - 1
// (d_m = d / gcd(d, m)), which holds for Q = q^|m| because |m| = o_q(d_m); d
// itself need not divide Q - 1.

#include <cstdint>
#include <memory>
#include <vector>

#include <json.hpp>

#include "legendre/cyclo.hpp"
#include "legendre/ff.hpp"
#include "legendre/orbits.hpp"

namespace legendre::jacobi {

using u64 = std::uint64_t;

struct JacobiSum {
  u64 q = 0, d = 0;
  u64 m = 0;          // orbit representative
  u64 orbit_len = 0;  // |m|
  int orbit_id = -1;
  cyclo::CycVec value;
};

/// Direct O(Q) summation of J(m) over the field of `table`, unreduced.
/// ValidationError unless m is in Z_d and d_m divides Q - 1.
cyclo::CycVec jacobi_sum(const ff::DlogTable& table, u64 d, u64 m);

/// Per-field tally for batch assembly: weight[r] = #{e = r mod d : lambda(1 - g^e) = 1}
/// minus #{e = r mod d : lambda(1 - g^e) = -1}, over g^e != 1.
struct Histogram {
  u64 d = 0;
  u64 field_size = 0;
  std::vector<std::int64_t> weight;
};

Histogram histogram(const ff::DlogTable& table, u64 d);

/// J(m) from a histogram: coeffs[r m mod d] += weight[r].
cyclo::CycVec assemble(const Histogram& hist, u64 m);

struct JacobiSet {
  u64 q = 0, d = 0;
  orbits::OrbitDecomposition decomposition;
  std::vector<JacobiSum> sums;  // indexed by orbit id
};

/// Orbit lengths whose field q^len exceeds the cache's size cap, ascending.
std::vector<u64> oversized_lengths(u64 q, u64 d, const ff::FieldCache& cache);

/// One Jacobi sum per orbit. Each distinct orbit length costs one field pass.
/// ResourceError naming the first oversized length; `jobs` > 1 builds the
/// fields concurrently.
JacobiSet jacobi_all(u64 q, u64 d, ff::FieldCache& cache, unsigned jobs = 1);

/// True iff reduce(J^2) is the constant q^|m|.
bool is_supersingular(const JacobiSum& j);

/// True iff reduce(J * conj(J)) is the constant q^|m|.
bool weil_exact(const JacobiSum& j);

/// {q, d, orbits: [{m, len, supersingular, coeffs}]}. Coefficient arrays of
/// length above `elide_above` are replaced by null (0 keeps everything).
nlohmann::json to_json(const JacobiSet& set, std::size_t elide_above = 0);

}  // namespace legendre::jacobi
