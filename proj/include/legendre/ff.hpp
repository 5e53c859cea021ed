#pragma once

// Explicit finite fields F_{p^k}, p odd.
//
// Elements are encoded as integers: the residue sum_i c_i x^i (0 <= c_i < p)
// is stored as sum_i c_i p^i. The modulus is the lexicographically smallest
// monic irreducible of degree k (coefficients compared from the constant term
// upward), and the generator is the smallest encoding whose multiplicative
// order is Q - 1. Both choices are deterministic, so a (p, k) pair always
// yields the same field, the same generator and the same discrete logarithms.
//
// Teichmuller convention: the lift t(g^e) = zeta_{Q-1}^e is fixed per field by
// its generator g. The Jacobi sums of one field therefore agree with those of a
// globally compatible system of characters up to a Galois automorphism u, i.e.
// J(m) here is J'(u*m) there. Because u permutes Galois-conjugate sums of the
// same orbit length, every symmetric quantity (L(T), its vanishing order, the
// special value, multisets of p-adic valuations) is unaffected.

#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace legendre::ff {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultSizeCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kMaxSizeCap = std::uint64_t{1} << 31;

struct FieldSpec {
  std::uint32_t p = 0;
  unsigned k = 0;
  std::vector<std::uint32_t> modulus;  // k + 1 coefficients, constant term first, monic
  Elem generator = 0;

  std::uint64_t size() const;
  bool operator==(const FieldSpec&) const = default;
};

/// Builds F_{p^k}. Throws ValidationError if p is not an odd prime or k == 0,
/// ResourceError if p^k exceeds size_cap.
FieldSpec build_field(std::uint32_t p, unsigned k, std::uint64_t size_cap = kDefaultSizeCap);

/// True iff the monic polynomial (constant term first) is irreducible over F_p.
bool is_irreducible(std::span<const std::uint32_t> monic, std::uint32_t p);

/// Polynomial arithmetic modulo the field's modulus, on encoded elements.
class Field {
 public:
  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  unsigned k() const { return spec_.k; }
  std::uint64_t size() const { return size_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;
  /// Throws DomainError for a == 0.
  Elem inv(Elem a) const;

  Elem from_int(std::int64_t c) const;
  std::vector<std::uint32_t> digits(Elem a) const;
  Elem encode(std::span<const std::uint32_t> digits) const;

 private:
  FieldSpec spec_;
  std::uint64_t size_;
};

/// Full discrete-logarithm table of a field with respect to its generator.
class DlogTable {
 public:
  explicit DlogTable(FieldSpec spec);

  const FieldSpec& spec() const { return field_.spec(); }
  const Field& field() const { return field_; }
  std::uint64_t size() const { return field_.size(); }
  std::uint32_t group_order() const { return static_cast<std::uint32_t>(field_.size() - 1); }

  /// Exponent in [0, Q-2]; DomainError for x == 0.
  std::uint32_t dlog(Elem x) const;
  Elem antilog(std::uint64_t e) const { return antilog_[e % antilog_.size()]; }

  /// Quadratic character, extended by 0 at 0.
  int legendre(Elem x) const;

  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// Encoding of x - 1 without a full digit decode.
  Elem minus_one(Elem x) const {
    return (x % field_.p() == 0) ? x + field_.p() - 1 : x - 1;
  }

  /// dlog entries for encodings 1..Q-1, in order.
  std::span<const std::uint32_t> dlog_entries() const {
    return std::span<const std::uint32_t>(dlog_).subspan(1);
  }

 private:
  friend std::optional<DlogTable> load_table(const std::filesystem::path&, const FieldSpec&);
  DlogTable(FieldSpec spec, std::vector<std::uint32_t> dlog, std::vector<Elem> antilog);

  Field field_;
  std::vector<std::uint32_t> dlog_;  // indexed by encoding; slot 0 unused
  std::vector<Elem> antilog_;
};

DlogTable dlog_table(const FieldSpec& spec);

inline int legendre(const DlogTable& table, Elem x) { return table.legendre(x); }

// On-disk cache: "FFDLOG1", then little-endian u32 p, k, the k+1 modulus
// coefficients, the generator, and the Q-1 dlog entries for encodings 1..Q-1.
std::string cache_file_name(std::uint32_t p, unsigned k);
void save_table(const DlogTable& table, const std::filesystem::path& file);
/// Returns nullopt when the file is missing, truncated, has a bad magic, or
/// does not describe `expected`.
std::optional<DlogTable> load_table(const std::filesystem::path& file, const FieldSpec& expected);

/// Construct-once store of dlog tables, shared by concurrent readers.
class FieldCache {
 public:
  explicit FieldCache(std::uint64_t size_cap = kDefaultSizeCap,
                      std::optional<std::filesystem::path> cache_dir = std::nullopt);

  std::shared_ptr<const DlogTable> get(std::uint32_t p, unsigned k);
  bool fits(std::uint32_t p, unsigned k) const;
  std::uint64_t size_cap() const { return size_cap_; }

 private:
  std::shared_ptr<const DlogTable> construct(std::uint32_t p, unsigned k) const;

  std::uint64_t size_cap_;
  std::optional<std::filesystem::path> cache_dir_;
  std::mutex mutex_;
  std::map<std::pair<std::uint32_t, unsigned>, std::shared_future<std::shared_ptr<const DlogTable>>>
      tables_;
};

}  // namespace legendre::ff
