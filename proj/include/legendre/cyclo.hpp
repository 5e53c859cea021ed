#pragma once

// Exact arithmetic in Z[zeta_d].
//
// CycVec is the group-ring form: d integer coefficients, entry k multiplying
// zeta_d^k. It is not canonical (the cyclotomic relation is not applied), so
// equality tests go through reduce_mod_phi, which returns the unique residue
// modulo Phi_d.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

namespace legendre::ff {
class Field;
class DlogTable;
}

namespace legendre::cyclo {

using u64 = std::uint64_t;

struct CycVec {
  unsigned d = 1;
  std::vector<mpz_class> coeffs;

  static CycVec zero(unsigned d);
  static CycVec constant(unsigned d, const mpz_class& c);
  static CycVec monomial(unsigned d, u64 k, const mpz_class& c = 1);
};

struct CycReduced {
  unsigned d = 1;
  std::vector<mpz_class> coeffs;  // length phi(d), constant term first

  bool is_zero() const;
  bool operator==(const CycReduced&) const = default;
};

CycVec add(const CycVec& a, const CycVec& b);
CycVec sub(const CycVec& a, const CycVec& b);
/// Cyclic convolution, exponents mod d.
CycVec mul(const CycVec& a, const CycVec& b);
CycVec scale(const CycVec& a, const mpz_class& c);

inline CycVec operator+(const CycVec& a, const CycVec& b) { return add(a, b); }
inline CycVec operator-(const CycVec& a, const CycVec& b) { return sub(a, b); }
inline CycVec operator*(const CycVec& a, const CycVec& b) { return mul(a, b); }

/// Phi_d with integer coefficients, constant term first. Memoized.
const std::vector<mpz_class>& cyclotomic_poly(unsigned d);

CycReduced reduce_mod_phi(const CycVec& a);
/// Re-embeds a reduced residue as a length-d group-ring vector.
CycVec lift(const CycReduced& a);
/// reduce(lift(reduce(a))): keeps coefficient growth bounded in long products.
CycVec normalize(const CycVec& a);

bool equal(const CycVec& a, const CycVec& b);

/// The integer c when a reduces to the constant c.
std::optional<mpz_class> is_rational_integer(const CycVec& a);

/// sigma_g : zeta_d -> zeta_d^g. ValidationError unless gcd(g, d) = 1.
CycVec galois_apply(u64 g, const CycVec& a);
inline CycVec conjugate(const CycVec& a) { return galois_apply(a.d - 1, a); }

/// Views a, whose support lies on multiples of d / sub_d, as an element of
/// Z[zeta_{sub_d}] (zeta_d^{k d/sub_d} = zeta_{sub_d}^k).
CycVec contract(const CycVec& a, unsigned sub_d);

/// Ball around sum_k c_k exp(2 pi i j k / d). The center is exact (dyadic) and
/// |true value - center| <= radius = 2^-precision_bits * sum |c_k|.
struct ComplexBall {
  mpq_class re, im, radius;

  double real() const { return re.get_d(); }
  double imag() const { return im.get_d(); }
  double abs2() const { return real() * real() + imag() * imag(); }
};

ComplexBall complex_embed(const CycVec& a, u64 j, unsigned precision_bits = 128);

/// Z[zeta_d] localized at one prime above p, modulo p^kappa: the ring
/// (Z/p^kappa)[x]/(h_lift) with h_lift a monic Hensel lift of an irreducible
/// factor h of Phi_d mod p. p is unramified (p does not divide d), so the
/// valuation of an element is the least p-adic valuation of its coordinates.
class LocalRing {
 public:
  u64 p() const { return p_; }
  unsigned d() const { return d_; }
  unsigned residue_degree() const { return static_cast<unsigned>(h_.size() - 1); }
  unsigned kappa() const { return kappa_; }
  const std::vector<std::uint32_t>& factor_mod_p() const { return h_; }
  const std::vector<mpz_class>& h_lift() const { return h_lift_; }

  /// Same prime, new working precision.
  LocalRing with_precision(unsigned kappa) const;

  friend LocalRing local_ring_from_factor(u64 p, unsigned d, std::span<const std::uint32_t> h,
                                          unsigned kappa);
  friend unsigned ord_p_local(const LocalRing& ring, const CycVec& a);

 private:
  LocalRing() = default;

  u64 p_ = 0;
  unsigned d_ = 0;
  unsigned kappa_ = 0;
  mpz_class modulus_;                       // p^kappa
  std::vector<std::uint32_t> h_;            // monic factor mod p
  std::vector<mpz_class> h_lift_;           // monic, coefficients in [0, p^kappa)
  std::vector<std::vector<mpz_class>> powers_;  // x^k mod (h_lift, p^kappa), k < d
};

/// Builds the ring for an explicit monic irreducible factor h of Phi_d mod p.
LocalRing local_ring_from_factor(u64 p, unsigned d, std::span<const std::uint32_t> h, unsigned kappa);

/// Prime matching the Teichmuller convention of `field`: h is the minimal
/// polynomial over F_p of eta = g^{(Q-1)/d}, g the field generator.
/// Requires d | Q - 1.
LocalRing local_ring(const ff::DlogTable& field, unsigned d, unsigned kappa);

/// Convention taken from the canonical field F_{p^f}, f = o_p(d).
LocalRing local_ring(u64 p, unsigned d, unsigned kappa);

/// Minimal polynomial over F_p of a field element (monic, constant term first).
std::vector<std::uint32_t> minimal_polynomial(const ff::Field& field, std::uint32_t element);

/// Largest j with p^j dividing the image of a. DomainError if a = 0 in
/// Z[zeta_d]; PrecisionError if the image vanishes modulo p^kappa.
unsigned ord_p_local(const LocalRing& ring, const CycVec& a);

/// ord_p_local, doubling kappa until the answer is below the precision.
unsigned ord_p_adaptive(const LocalRing& ring, const CycVec& a);

nlohmann::json to_json(const CycVec& a);

}  // namespace legendre::cyclo
