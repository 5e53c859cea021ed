// Root isolation for the RH check. L(u/q) is split into square-free parts
// over Q (Yun), each part is solved by Aberth iteration in long double, the
// roots are polished by Newton steps at 50 digits, and each root gets the
// inclusion radius n |F(z)/F'(z)|. Pairwise disjoint disks certify that each
// holds exactly one root.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>

#include "legendre/errors.hpp"
#include "legendre/lfunction.hpp"

namespace legendre::lfunction {

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;
using BigC = boost::multiprecision::cpp_complex_50;
using QPoly = std::vector<mpq_class>;

void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly derivative(const QPoly& a) {
  QPoly out;
  for (std::size_t k = 1; k < a.size(); ++k) out.push_back(a[k] * static_cast<unsigned long>(k));
  trim(out);
  return out;
}

std::pair<QPoly, QPoly> divrem(QPoly a, const QPoly& b) {
  trim(a);
  if (b.empty()) throw InternalError("polynomial division by zero");
  if (a.size() < b.size()) return {QPoly{}, a};
  QPoly quot(a.size() - b.size() + 1);
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const mpq_class c = a[i] / b.back();
    quot[i - b.size() + 1] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= c * b[j];
    if (i + 1 == b.size()) break;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(quot);
  return {quot, a};
}

QPoly monic(QPoly a) {
  trim(a);
  const mpq_class lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

QPoly exact_div(const QPoly& a, const QPoly& b) {
  auto [q, r] = divrem(a, b);
  if (!r.empty()) throw InternalError("inexact division in square-free decomposition");
  return q;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] -= b[i];
  }
  trim(out);
  return out;
}

// (factor, multiplicity) pairs with non-constant factors.
std::vector<std::pair<QPoly, unsigned>> yun(const QPoly& f) {
  std::vector<std::pair<QPoly, unsigned>> out;
  const QPoly fp = derivative(f);
  if (fp.empty()) return out;
  const QPoly a0 = gcd(f, fp);
  QPoly b = exact_div(f, a0), c = exact_div(fp, a0);
  QPoly dd = sub(c, derivative(b));
  for (unsigned i = 1; b.size() > 1; ++i) {
    const QPoly a = gcd(b, dd);
    if (a.size() > 1) out.emplace_back(a, i);
    b = exact_div(b, a);
    c = exact_div(dd, a);
    dd = sub(c, derivative(b));
  }
  return out;
}

Big to_big(const mpq_class& x) { return Big(x.get_num().get_str()) / Big(x.get_den().get_str()); }

template <class C, class V>
std::pair<C, C> eval_with_derivative(const std::vector<V>& coeffs, const C& z) {
  C f = coeffs.back(), df = 0;
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    df = df * z + f;
    f = f * z + coeffs[k];
  }
  return {f, df};
}

std::vector<std::complex<long double>> aberth(const std::vector<long double>& coeffs) {
  using C = std::complex<long double>;
  const std::size_t n = coeffs.size() - 1;
  std::vector<C> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    z[j] = std::polar<long double>(1.0L, 2.0L * M_PIl * (j + 0.25L) / n + 0.4L);
  }
  for (int iter = 0; iter < 2000; ++iter) {
    long double shift = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto [f, df] = eval_with_derivative<C, long double>(coeffs, z[j]);
      if (f == C(0)) continue;
      const C w = f / df;
      C s = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) s += C(1) / (z[j] - z[k]);
      }
      const C step = w / (C(1) - w * s);
      z[j] -= step;
      shift = std::max(shift, std::abs(step));
    }
    if (shift < 1e-18L) break;
  }
  return std::vector<std::complex<long double>>(z.begin(), z.end());
}

struct IsolatedRoot {
  BigC z;
  Big radius;
};

// Roots of a square-free rational polynomial with inclusion radii; clears
// `certified` when the disks overlap.
std::vector<IsolatedRoot> isolate(const QPoly& f, bool& certified) {
  const QPoly g = monic(f);
  const std::size_t n = g.size() - 1;
  std::vector<Big> big(g.size());
  std::vector<long double> ld(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    big[k] = to_big(g[k]);
    ld[k] = static_cast<long double>(g[k].get_d());
  }
  std::vector<IsolatedRoot> out;
  if (n == 1) {
    out.push_back({BigC(-big[0], Big(0)), Big(0)});
    return out;
  }
  const auto approx = aberth(ld);
  const Big eps = Big(std::pow(10.0, -45.0));
  for (const auto& a : approx) {
    BigC z(Big(a.real()), Big(a.imag()));
    for (int it = 0; it < 8; ++it) {
      const auto [fz, dfz] = eval_with_derivative<BigC, Big>(big, z);
      if (abs(dfz) == 0) break;
      z -= fz / dfz;
    }
    const auto [fz, dfz] = eval_with_derivative<BigC, Big>(big, z);
    // Evaluation error allowance: eps * sum |a_k| |z|^k.
    Big mag = 0, zk = 1;
    for (const auto& c : big) {
      mag += abs(c) * zk;
      zk *= abs(z);
    }
    const Big dfabs = abs(dfz);
    if (dfabs == 0) {
      certified = false;
      out.push_back({z, Big(1)});
      continue;
    }
    out.push_back({z, Big(n) * (abs(fz) + eps * mag) / dfabs});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (abs(out[i].z - out[j].z) <= out[i].radius + out[j].radius) certified = false;
    }
  }
  return out;
}

}  // namespace

RootCheck check_rh(const LPolynomial& l, double tol) {
  RootCheck out;
  if (l.degree() == 0) return out;
  // G(u) = L(u / q): the roots should lie on the unit circle.
  QPoly g;
  mpz_class qk = 1;
  for (const auto& c : l.coeffs) {
    g.push_back(mpq_class(c, qk));
    g.back().canonicalize();
    qk *= static_cast<unsigned long>(l.q);
  }
  trim(g);
  const Big qbig(static_cast<unsigned long long>(l.q));
  Big worst = 0;
  for (const auto& [factor, mult] : yun(g)) {
    bool certified = true;
    const auto roots = isolate(factor, certified);
    out.certified = out.certified && certified;
    for (const auto& r : roots) {
      const Big dev = (abs(abs(r.z) - Big(1)) + r.radius) / qbig;
      worst = std::max(worst, dev);
      const std::complex<double> t(static_cast<double>(real(r.z) / qbig), static_cast<double>(imag(r.z) / qbig));
      for (unsigned m = 0; m < mult; ++m) out.roots.push_back(t);
    }
  }
  if (out.roots.size() != l.degree()) out.certified = false;
  out.max_deviation = static_cast<double>(worst);
  out.pass = out.certified && out.max_deviation <= tol;
  return out;
}

}  // namespace legendre::lfunction
