#pragma once

// Batch drivers behind the command-line tool. Every command writes its
// result document to `out`, diagnostics to `err`, and returns the process
// exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "legendre/ff.hpp"

namespace legendre::cli {

using u64 = std::uint64_t;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalid = 2, kResource = 3 };

enum class Format { Json, Csv };

enum class Check { Rh, Euler, Stickelberger, Bounds };

struct RunConfig {
  u64 q = 3;
  std::optional<u64> d;
  std::optional<u64> d_min, d_max;
  u64 cap = ff::kDefaultSizeCap;
  unsigned prec = 128;
  double eps = 0.125;
  Format format = Format::Json;
  std::optional<std::filesystem::path> cache_dir;
  unsigned jobs = 1;
  std::set<Check> checks{Check::Rh, Check::Euler, Check::Stickelberger, Check::Bounds};

  /// ValidationError on a malformed configuration.
  void validate() const;
  /// --d alone, or the inclusive range; `fallback` when neither is given.
  std::vector<u64> d_values(std::optional<std::pair<u64, u64>> fallback = std::nullopt) const;
};

/// The flag value if present, else LEGENDRE_CACHE_DIR if set and nonempty.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

/// "rh", "euler", "stickelberger", "bounds", or "all".
std::set<Check> parse_checks(const std::vector<std::string>& names);

int cmd_lfunction(const RunConfig& config, std::ostream& out, std::ostream& err);
/// One row per admissible d: the BSD columns, then log L*/log H, the band
/// and a supersingular flag.
int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Weil, RH, Euler, Stickelberger and band checks over the configured range
/// (default d in [3, 40]); exit 1 naming every failed check.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_orbits(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_jacobi(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bsd(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stickelberger(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace legendre::cli
