#include "legendre/ff.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "legendre/errors.hpp"
#include "legendre/numtheory.hpp"

namespace legendre::ff {

namespace {

using Poly = std::vector<std::uint64_t>;  // over F_p, constant term first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

// Remainder of a modulo a nonzero polynomial m.
Poly poly_rem(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = nt::powmod(m.back(), p - 2, p);
  while (a.size() > dm && !a.empty()) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - c * m[i] % p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_rem(std::move(r), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  base = poly_rem(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

std::uint64_t FieldSpec::size() const { return nt::ipow(p, k); }

bool is_irreducible(std::span<const std::uint32_t> monic, std::uint32_t p) {
  const std::size_t k = monic.size() - 1;
  if (k == 0) return false;
  if (k == 1) return true;
  Poly f(monic.begin(), monic.end());
  const Poly x{0, 1};
  // Rabin: x^{p^k} = x mod f, and gcd(x^{p^{k/r}} - x, f) = 1 for primes r | k.
  std::vector<Poly> frob(k + 1);  // frob[j] = x^{p^j} mod f
  frob[0] = x;
  for (std::size_t j = 1; j <= k; ++j) frob[j] = poly_powmod(frob[j - 1], p, f, p);
  if (poly_sub(frob[k], x, p) != Poly{}) return false;
  for (auto r : nt::prime_divisors(k)) {
    Poly g = poly_gcd(f, poly_sub(frob[k / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

FieldSpec build_field(std::uint32_t p, unsigned k, std::uint64_t size_cap) {
  if (p < 3 || !nt::is_prime(p)) {
    throw ValidationError("build_field: p = " + std::to_string(p) + " is not an odd prime");
  }
  if (k == 0) throw ValidationError("build_field: extension degree must be >= 1");
  size_cap = std::min(size_cap, kMaxSizeCap);
  std::uint64_t Q = 1;
  for (unsigned i = 0; i < k; ++i) {
    Q *= p;
    if (Q > size_cap) {
      throw ResourceError("field F_" + std::to_string(p) + "^" + std::to_string(k) +
                          " exceeds the size cap " + std::to_string(size_cap));
    }
  }

  FieldSpec spec;
  spec.p = p;
  spec.k = k;
  spec.modulus.assign(k + 1, 0);
  spec.modulus[k] = 1;
  // Candidate N has c_0 as its most significant base-p digit.
  bool found = false;
  for (std::uint64_t n = 0; n < Q && !found; ++n) {
    std::uint64_t rest = n;
    for (unsigned i = k; i-- > 0;) {
      spec.modulus[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    found = is_irreducible(spec.modulus, p);
  }
  if (!found) throw InternalError("no irreducible polynomial found");

  const Field field(spec);
  const auto primes = nt::prime_divisors(Q - 1);
  for (std::uint64_t cand = 2; cand < Q; ++cand) {
    const auto g = static_cast<Elem>(cand);
    const bool primitive = std::all_of(primes.begin(), primes.end(), [&](std::uint64_t r) {
      return field.pow(g, (Q - 1) / r) != 1;
    });
    if (primitive) {
      spec.generator = g;
      return spec;
    }
  }
  throw InternalError("no generator found for F_" + std::to_string(p) + "^" + std::to_string(k));
}

// ---------------------------------------------------------------------------

Field::Field(FieldSpec spec) : spec_(std::move(spec)), size_(spec_.size()) {}

std::vector<std::uint32_t> Field::digits(Elem a) const {
  std::vector<std::uint32_t> out(spec_.k);
  for (unsigned i = 0; i < spec_.k; ++i) {
    out[i] = a % spec_.p;
    a /= spec_.p;
  }
  return out;
}

Elem Field::encode(std::span<const std::uint32_t> digits) const {
  std::uint64_t enc = 0;
  for (std::size_t i = digits.size(); i-- > 0;) enc = enc * spec_.p + digits[i] % spec_.p;
  return static_cast<Elem>(enc);
}

Elem Field::add(Elem a, Elem b) const {
  std::uint64_t out = 0, scale = 1;
  for (unsigned i = 0; i < spec_.k; ++i) {
    out += ((a % spec_.p + b % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    b /= spec_.p;
    scale *= spec_.p;
  }
  return static_cast<Elem>(out);
}

Elem Field::neg(Elem a) const {
  std::uint64_t out = 0, scale = 1;
  for (unsigned i = 0; i < spec_.k; ++i) {
    out += ((spec_.p - a % spec_.p) % spec_.p) * scale;
    a /= spec_.p;
    scale *= spec_.p;
  }
  return static_cast<Elem>(out);
}

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::mul(Elem a, Elem b) const {
  const unsigned k = spec_.k;
  const std::uint64_t p = spec_.p;
  if (k == 1) return static_cast<Elem>(std::uint64_t{a} * b % p);
  auto da = digits(a), db = digits(b);
  std::vector<std::uint64_t> prod(2 * k - 1, 0);
  for (unsigned i = 0; i < k; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{da[i]} * db[j]) % p;
  }
  for (std::size_t top = prod.size() - 1; top >= k; --top) {
    const std::uint64_t c = prod[top];
    if (c != 0) {
      for (unsigned i = 0; i < k; ++i) {
        prod[top - k + i] = (prod[top - k + i] + (p - c) * spec_.modulus[i]) % p;
      }
    }
    prod[top] = 0;
  }
  std::vector<std::uint32_t> out(k);
  for (unsigned i = 0; i < k; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return encode(out);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem result = 1;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero in F_" + std::to_string(spec_.p) + "^" +
                                std::to_string(spec_.k));
  return pow(a, size_ - 2);
}

Elem Field::from_int(std::int64_t c) const {
  const auto p = static_cast<std::int64_t>(spec_.p);
  return static_cast<Elem>(((c % p) + p) % p);
}

// ---------------------------------------------------------------------------

DlogTable::DlogTable(FieldSpec spec) : field_(std::move(spec)) {
  const FieldSpec& s = field_.spec();
  const std::uint64_t Q = field_.size();
  const unsigned k = s.k;
  const std::uint64_t p = s.p;
  constexpr std::uint32_t kUnset = UINT32_MAX;
  dlog_.assign(Q, kUnset);
  antilog_.resize(Q - 1);

  const auto gen = field_.digits(s.generator);
  std::size_t gen_deg = 0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    if (gen[i] != 0) gen_deg = i;
  }

  std::vector<std::uint64_t> state(k, 0), shifted(k), acc(k);
  state[0] = 1;
  for (std::uint64_t e = 0; e + 1 < Q; ++e) {
    std::uint64_t enc = 0;
    for (unsigned i = k; i-- > 0;) enc = enc * p + state[i];
    if (dlog_[enc] != kUnset) throw InternalError("generator order is smaller than Q - 1");
    dlog_[enc] = static_cast<std::uint32_t>(e);
    antilog_[e] = static_cast<Elem>(enc);

    // state *= generator, accumulating gen_j * x^j * state.
    std::fill(acc.begin(), acc.end(), 0);
    shifted = state;
    for (std::size_t j = 0; j <= gen_deg; ++j) {
      if (gen[j] != 0) {
        for (unsigned i = 0; i < k; ++i) acc[i] = (acc[i] + gen[j] * shifted[i]) % p;
      }
      if (j < gen_deg) {
        const std::uint64_t top = shifted[k - 1];
        for (unsigned i = k - 1; i > 0; --i) {
          shifted[i] = (shifted[i - 1] + (p - top) * s.modulus[i]) % p;
        }
        shifted[0] = (p - top) * s.modulus[0] % p;
      }
    }
    state = acc;
  }
  if (state[0] != 1 || std::any_of(state.begin() + 1, state.end(), [](auto c) { return c != 0; })) {
    throw InternalError("generator power g^(Q-1) != 1");
  }
}

DlogTable::DlogTable(FieldSpec spec, std::vector<std::uint32_t> dlog, std::vector<Elem> antilog)
    : field_(std::move(spec)), dlog_(std::move(dlog)), antilog_(std::move(antilog)) {}

std::uint32_t DlogTable::dlog(Elem x) const {
  if (x == 0) throw DomainError("discrete logarithm of zero");
  return dlog_[x];
}

int DlogTable::legendre(Elem x) const {
  if (x == 0) return 0;
  return (dlog_[x] & 1U) ? -1 : 1;
}

Elem DlogTable::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  return antilog(std::uint64_t{dlog_[a]} + dlog_[b]);
}

Elem DlogTable::pow(Elem a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  return antilog(nt::mulmod(dlog_[a], e, group_order()));
}

DlogTable dlog_table(const FieldSpec& spec) { return DlogTable(spec); }

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[7] = {'F', 'F', 'D', 'L', 'O', 'G', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  v = std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) | (std::uint32_t{bytes[2]} << 16) |
      (std::uint32_t{bytes[3]} << 24);
  return true;
}

}  // namespace

std::string cache_file_name(std::uint32_t p, unsigned k) {
  return "ff_p" + std::to_string(p) + "_k" + std::to_string(k) + ".tbl";
}

void save_table(const DlogTable& table, const std::filesystem::path& file) {
  const FieldSpec& s = table.spec();
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write cache file " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    put_u32(out, s.p);
    put_u32(out, s.k);
    for (auto c : s.modulus) put_u32(out, c);
    put_u32(out, s.generator);
    for (auto e : table.dlog_entries()) put_u32(out, e);
    if (!out) throw ResourceError("short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<DlogTable> load_table(const std::filesystem::path& file, const FieldSpec& expected) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic)) {
    return std::nullopt;
  }
  std::uint32_t p = 0, k = 0, gen = 0;
  if (!get_u32(in, p) || !get_u32(in, k) || p != expected.p || k != expected.k) return std::nullopt;
  std::vector<std::uint32_t> modulus(k + 1);
  for (auto& c : modulus) {
    if (!get_u32(in, c)) return std::nullopt;
  }
  if (!get_u32(in, gen) || modulus != expected.modulus || gen != expected.generator) {
    return std::nullopt;
  }

  const std::uint64_t Q = expected.size();
  std::vector<std::uint32_t> dlog(Q, 0);
  std::vector<Elem> antilog(Q - 1, 0);
  std::vector<bool> seen(Q - 1, false);
  for (std::uint64_t enc = 1; enc < Q; ++enc) {
    std::uint32_t e = 0;
    if (!get_u32(in, e) || e >= Q - 1 || seen[e]) return std::nullopt;
    seen[e] = true;
    dlog[enc] = e;
    antilog[e] = static_cast<Elem>(enc);
  }
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;

  // The entries form a permutation; spot-check that it is the generator's.
  const Field field(expected);
  if (antilog[0] != 1 || antilog[1] != expected.generator) return std::nullopt;
  const std::uint64_t stride = std::max<std::uint64_t>(1, (Q - 1) / 256);
  for (std::uint64_t e = 0; e + 1 < Q; e += stride) {
    const Elem next = antilog[(e + 1) % (Q - 1)];
    if (field.mul(antilog[e], expected.generator) != next) return std::nullopt;
  }
  return DlogTable(expected, std::move(dlog), std::move(antilog));
}

// ---------------------------------------------------------------------------

FieldCache::FieldCache(std::uint64_t size_cap, std::optional<std::filesystem::path> cache_dir)
    : size_cap_(std::min(size_cap, kMaxSizeCap)), cache_dir_(std::move(cache_dir)) {
  if (size_cap == 0) throw ValidationError("field size cap must be positive");
}

bool FieldCache::fits(std::uint32_t p, unsigned k) const {
  std::uint64_t Q = 1;
  for (unsigned i = 0; i < k; ++i) {
    Q *= p;
    if (Q > size_cap_) return false;
  }
  return true;
}

std::shared_ptr<const DlogTable> FieldCache::construct(std::uint32_t p, unsigned k) const {
  FieldSpec spec = build_field(p, k, size_cap_);
  if (cache_dir_) {
    const auto file = *cache_dir_ / cache_file_name(p, k);
    if (auto loaded = load_table(file, spec)) {
      return std::make_shared<const DlogTable>(std::move(*loaded));
    }
    auto built = std::make_shared<const DlogTable>(spec);
    std::error_code ec;
    std::filesystem::create_directories(*cache_dir_, ec);
    save_table(*built, file);
    return built;
  }
  return std::make_shared<const DlogTable>(spec);
}

std::shared_ptr<const DlogTable> FieldCache::get(std::uint32_t p, unsigned k) {
  if (!fits(p, k)) {
    throw ResourceError("field F_" + std::to_string(p) + "^" + std::to_string(k) +
                        " exceeds the size cap " + std::to_string(size_cap_));
  }
  std::shared_future<std::shared_ptr<const DlogTable>> future;
  std::promise<std::shared_ptr<const DlogTable>> promise;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = tables_.find({p, k});
    if (it == tables_.end()) {
      future = promise.get_future().share();
      tables_.emplace(std::make_pair(p, k), future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(construct(p, k));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      tables_.erase({p, k});
      throw;
    }
  }
  return future.get();
}

}  // namespace legendre::ff
