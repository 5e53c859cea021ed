#pragma once

// Local reduction data of E_d : y^2 = x(x+1)(x+t^d) over F_q(t), the global
// invariants entering the BSD formula, point counts at places, and the
// derived Sha * Reg product and Brauer-Siegel ratio.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "legendre/ff.hpp"
#include "legendre/lfunction.hpp"

namespace legendre::bsd {

using u64 = std::uint64_t;

enum class PlaceKind { Zero, Infinity, RootOfUnity, Good };

/// A place of F_q(t): infinity, or the Frobenius orbit of t0 in F_{q^degree}
/// (t0 the smallest encoding in its orbit).
struct Place {
  PlaceKind kind = PlaceKind::Good;
  unsigned degree = 1;
  ff::Elem root = 0;
};

/// All places of degree <= max_degree, infinity first, then by degree and root.
std::vector<Place> places_up_to(u64 q, u64 d, unsigned max_degree, ff::FieldCache& cache);

/// -sum_x lambda(x (x + 1)(x + t0^d)) over the field of `table`. For t0 = 0 or
/// t0^d = 1 this is the trace of the multiplicative fibre.
std::int64_t fibre_trace(const ff::DlogTable& table, u64 d, ff::Elem t0);

/// Trace at infinity: 1 for even d (split node), 0 for odd d (additive).
std::int64_t infinity_trace(u64 d);

struct PointCount {
  std::int64_t a = 0;
  mpz_class points;  // q^deg + 1 - a
};

/// Point count of the reduction at a good place, over its residue field
/// extended by `extension`. ValidationError for bad places.
PointCount count_points_reduction(u64 q, u64 d, const Place& place, ff::FieldCache& cache,
                                  unsigned extension = 1);

struct PlaceReduction {
  std::string id;           // "0", "inf", or "mu<d'>#<index>"
  PlaceKind kind = PlaceKind::Zero;
  unsigned degree = 1;
  u64 divisor = 0;          // d' for places over mu_d
  std::string kodaira;      // "I_8", "I*_10", "I_2", ...
  unsigned ord_delta = 0;
  unsigned ord_conductor = 0;
  unsigned tamagawa = 0;
};

/// Every bad place. The components at places over mu_d are 2 when -1 is a
/// square in the residue field (q^f = 1 mod 4) and 1 otherwise.
std::vector<PlaceReduction> reduction_table(u64 q, u64 d);

struct TorsionBound {
  unsigned lower = 4;
  unsigned upper = 0;                  // 0 when no bound could be computed
  std::optional<unsigned> exact;       // set when lower == upper
  bool two_part_exact = false;         // no element of the known 2-group is halvable
  mpz_class gcd_orders;                // gcd of the sampled |E(k_v)|
  std::vector<std::pair<Place, mpz_class>> samples;
};

/// Whether the polynomial (coefficients in F_q, constant term first) is a
/// square in F_q[t].
bool is_square(const ff::DlogTable& fq, std::vector<ff::Elem> poly);

/// lower: the rational 2-torsion (order 4), and for even d also the 4-torsion
/// point P = (s, s(s + 1)), s = t^{d/2}, with 2P = (0, 0): order 8.
/// 2-part: with H that known group, the 2-primary torsion is larger than H
/// iff some element of H outside 2H lies in 2E(K); a point (x0, y0) is in
/// 2E(K) iff every x0 - e_i is a square in F_q(t), and (e_i, 0) is iff
/// e_i - e_j and e_i - e_k are. Odd part: torsion injects into every good
/// reduction, so it divides the odd part of gcd |E(k_v)|, taken over at least
/// 3 good places of increasing degree until that odd part is 1.
/// ResourceError with fewer than 3 good places under the cap.
TorsionBound torsion_bound(u64 q, u64 d, ff::FieldCache& cache);

struct BsdInvariants {
  u64 q = 0, d = 0;
  mpz_class height;  // H = q^{floor((d+1)/2)}
  u64 deg_delta = 0, deg_conductor = 0;
  mpz_class tau;
  u64 theta = 0;
  std::vector<PlaceReduction> places;
};

/// Assembled from the reduction table and checked against the closed forms
/// (6d or 6(d+1), d+2 or d+3, 1 <= tau <= (2d)^2 2^theta). InternalError on mismatch.
BsdInvariants invariants(u64 q, u64 d);

/// log n for positive n of any size.
double natural_log(const mpz_class& n);
double natural_log(const mpq_class& x);

/// L* H torsion^2 / (tau q).
mpq_class sha_reg(const mpq_class& lstar, const mpz_class& height, const mpz_class& tau, u64 q,
                  unsigned torsion);

struct BsRatio {
  double ratio = 0;
  double term_one = 1, term_lstar = 0, term_correction = 0;
  bool consistent = false;  // terms sum to ratio within 1e-12
};

BsRatio bs_ratio(const mpq_class& sha, const mpq_class& lstar, const mpz_class& height,
                 const mpz_class& tau, u64 q, unsigned torsion);

struct BsdReport {
  BsdInvariants inv;
  TorsionBound torsion;
  lfunction::LPolynomial l;
  lfunction::SpecialValue sv;
  unsigned torsion_used = 0;
  mpq_class sha;
  BsRatio ratio;
};

/// Full pipeline. Without an explicit torsion the exact value is used when
/// known, otherwise the lower bound (the report records which).
BsdReport bsd_report(u64 q, u64 d, ff::FieldCache& cache, std::optional<unsigned> torsion = std::nullopt);

std::string csv_header();
std::string csv_row(const BsdReport& r);
nlohmann::json to_json(const BsdReport& r);

}  // namespace legendre::bsd
