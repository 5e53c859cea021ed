#include "legendre/cyclo.hpp"

#include <mpfr.h>

#include <map>
#include <mutex>
#include <string>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::cyclo {

namespace {

void require_same(const CycVec& a, const CycVec& b) {
  if (a.d != b.d || a.coeffs.size() != b.coeffs.size()) {
    throw ValidationError("mismatched conductors " + std::to_string(a.d) + " and " +
                          std::to_string(b.d));
  }
}

// Minimal RAII holder for an mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  ~Real() { mpfr_clear(v_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

mpq_class to_rational(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0;
  mpz_class mant;
  const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
  mpq_class out(mant);
  if (e > 0) {
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return out;
}

}  // namespace

CycVec CycVec::zero(unsigned d) {
  if (d == 0) throw ValidationError("conductor must be >= 1");
  return CycVec{d, std::vector<mpz_class>(d)};
}

CycVec CycVec::constant(unsigned d, const mpz_class& c) {
  CycVec out = zero(d);
  out.coeffs[0] = c;
  return out;
}

CycVec CycVec::monomial(unsigned d, u64 k, const mpz_class& c) {
  CycVec out = zero(d);
  out.coeffs[k % d] = c;
  return out;
}

bool CycReduced::is_zero() const {
  for (const auto& c : coeffs) {
    if (c != 0) return false;
  }
  return true;
}

CycVec add(const CycVec& a, const CycVec& b) {
  require_same(a, b);
  CycVec out = a;
  for (unsigned k = 0; k < a.d; ++k) out.coeffs[k] += b.coeffs[k];
  return out;
}

CycVec sub(const CycVec& a, const CycVec& b) {
  require_same(a, b);
  CycVec out = a;
  for (unsigned k = 0; k < a.d; ++k) out.coeffs[k] -= b.coeffs[k];
  return out;
}

CycVec mul(const CycVec& a, const CycVec& b) {
  require_same(a, b);
  const unsigned d = a.d;
  CycVec out = CycVec::zero(d);
  for (unsigned i = 0; i < d; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (unsigned j = 0; j < d; ++j) {
      if (b.coeffs[j] == 0) continue;
      unsigned k = i + j;
      if (k >= d) k -= d;
      mpz_addmul(out.coeffs[k].get_mpz_t(), a.coeffs[i].get_mpz_t(), b.coeffs[j].get_mpz_t());
    }
  }
  return out;
}

CycVec scale(const CycVec& a, const mpz_class& c) {
  CycVec out = a;
  for (auto& x : out.coeffs) x *= c;
  return out;
}

const std::vector<mpz_class>& cyclotomic_poly(unsigned d) {
  if (d == 0) throw ValidationError("cyclotomic_poly: d must be >= 1");
  static std::mutex mutex;
  static std::map<unsigned, std::vector<mpz_class>> memo;
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(d); it != memo.end()) return it->second;
  }
  // x^d - 1 divided exactly by Phi_e for every proper divisor e.
  std::vector<mpz_class> num(d + 1);
  num[0] = -1;
  num[d] = 1;
  for (u64 e : nt::divisors(d)) {
    if (e == d) continue;
    const auto& den = cyclotomic_poly(static_cast<unsigned>(e));
    const std::size_t dd = den.size() - 1;
    std::vector<mpz_class> quot(num.size() - dd);
    for (std::size_t i = num.size(); i-- > dd;) {
      const mpz_class c = num[i];  // den is monic
      quot[i - dd] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    for (std::size_t j = 0; j < dd; ++j) {
      if (num[j] != 0) throw InternalError("inexact cyclotomic division");
    }
    num = std::move(quot);
  }
  std::lock_guard lock(mutex);
  return memo.emplace(d, std::move(num)).first->second;
}

CycReduced reduce_mod_phi(const CycVec& a) {
  const auto& phi = cyclotomic_poly(a.d);
  const std::size_t deg = phi.size() - 1;
  std::vector<mpz_class> rem = a.coeffs;
  for (std::size_t i = rem.size(); i-- > deg;) {
    if (rem[i] == 0) continue;
    const mpz_class c = rem[i];
    for (std::size_t j = 0; j <= deg; ++j) {
      if (phi[j] != 0) mpz_submul(rem[i - deg + j].get_mpz_t(), c.get_mpz_t(), phi[j].get_mpz_t());
    }
  }
  rem.resize(deg);
  return CycReduced{a.d, std::move(rem)};
}

CycVec lift(const CycReduced& a) {
  CycVec out = CycVec::zero(a.d);
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) out.coeffs[k] = a.coeffs[k];
  return out;
}

CycVec normalize(const CycVec& a) { return lift(reduce_mod_phi(a)); }

bool equal(const CycVec& a, const CycVec& b) { return reduce_mod_phi(sub(a, b)).is_zero(); }

std::optional<mpz_class> is_rational_integer(const CycVec& a) {
  const CycReduced r = reduce_mod_phi(a);
  for (std::size_t k = 1; k < r.coeffs.size(); ++k) {
    if (r.coeffs[k] != 0) return std::nullopt;
  }
  return r.coeffs.empty() ? mpz_class(0) : r.coeffs[0];
}

CycVec galois_apply(u64 g, const CycVec& a) {
  if (nt::gcd(g % a.d, a.d) != 1 && a.d != 1) {
    throw ValidationError("galois_apply: gcd(" + std::to_string(g) + ", " + std::to_string(a.d) +
                          ") != 1");
  }
  CycVec out = CycVec::zero(a.d);
  for (u64 k = 0; k < a.d; ++k) out.coeffs[nt::mulmod(g % a.d, k, a.d)] = a.coeffs[k];
  return out;
}

CycVec contract(const CycVec& a, unsigned sub_d) {
  if (sub_d == 0 || a.d % sub_d != 0) {
    throw ValidationError("contract: " + std::to_string(sub_d) + " does not divide " +
                          std::to_string(a.d));
  }
  const unsigned step = a.d / sub_d;
  CycVec out = CycVec::zero(sub_d);
  for (unsigned k = 0; k < a.d; ++k) {
    if (a.coeffs[k] == 0) continue;
    if (k % step != 0) {
      throw ValidationError("contract: element is not in Z[zeta_" + std::to_string(sub_d) + "]");
    }
    out.coeffs[k / step] = a.coeffs[k];
  }
  return out;
}

ComplexBall complex_embed(const CycVec& a, u64 j, unsigned precision_bits) {
  if (nt::gcd(j % a.d, a.d) != 1 && a.d != 1) {
    throw ValidationError("complex_embed: embedding index must be a unit mod d");
  }
  // Guard bits cover the angle error and d roundings in the accumulation.
  unsigned guard = 16;
  for (unsigned t = a.d; t > 0; t >>= 1) ++guard;
  const mpfr_prec_t w = precision_bits + guard;
  Real two_pi(w), angle(w), c(w), s(w), term(w), re(w), im(w);
  mpfr_const_pi(two_pi.get(), MPFR_RNDN);
  mpfr_mul_ui(two_pi.get(), two_pi.get(), 2, MPFR_RNDN);

  mpz_class abs_sum = 0;
  for (u64 k = 0; k < a.d; ++k) {
    const mpz_class& coeff = a.coeffs[k];
    if (coeff == 0) continue;
    abs_sum += abs(coeff);
    const u64 r = nt::mulmod(j % a.d, k, a.d);
    mpfr_mul_ui(angle.get(), two_pi.get(), r, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), a.d, MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    mpfr_mul_z(term.get(), c.get(), coeff.get_mpz_t(), MPFR_RNDN);
    mpfr_add(re.get(), re.get(), term.get(), MPFR_RNDN);
    mpfr_mul_z(term.get(), s.get(), coeff.get_mpz_t(), MPFR_RNDN);
    mpfr_add(im.get(), im.get(), term.get(), MPFR_RNDN);
  }
  ComplexBall out;
  out.re = to_rational(re.get());
  out.im = to_rational(im.get());
  out.radius = mpq_class(abs_sum);
  mpq_div_2exp(out.radius.get_mpq_t(), out.radius.get_mpq_t(), precision_bits);
  return out;
}

nlohmann::json to_json(const CycVec& a) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : a.coeffs) {
    if (c.fits_slong_p()) {
      out.push_back(c.get_si());
    } else {
      out.push_back(c.get_str());
    }
  }
  return out;
}

}  // namespace legendre::cyclo
