#include "legendre/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "legendre/analysis.hpp"
#include "legendre/bsd.hpp"
#include "legendre/errors.hpp"
#include "legendre/jacobi.hpp"
#include "legendre/lfunction.hpp"
#include "legendre/numtheory.hpp"
#include "legendre/orbits.hpp"

namespace legendre::cli {

namespace {

using nlohmann::json;

enum class Status { Done, SkipResource, SkipInvalid };

struct Outcome {
  u64 d = 0;
  Status status = Status::Done;
  std::string reason;
  json doc;
  std::vector<std::string> rows;
  std::vector<std::string> failures;
};

using Job = std::function<void(u64 d, ff::FieldCache& cache, Outcome& out)>;

json rational(const mpq_class& x) { return {{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}}; }

// Runs `job` for every d on a pool of `jobs` threads; results keep d order.
std::vector<Outcome> run(const RunConfig& config, const std::vector<u64>& ds, u64 min_d, const Job& job) {
  ff::FieldCache cache(config.cap, config.cache_dir);
  std::vector<Outcome> outcomes(ds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ds.size(); i = next++) {
      Outcome& o = outcomes[i];
      o.d = ds[i];
      if (ds[i] < min_d) {
        o.status = Status::SkipInvalid;
        o.reason = "d must be >= " + std::to_string(min_d);
        continue;
      }
      if (nt::gcd(config.q, ds[i]) != 1) {
        o.status = Status::SkipInvalid;
        o.reason = "gcd(q, d) != 1";
        continue;
      }
      try {
        job(ds[i], cache, o);
      } catch (const ResourceError& e) {
        o = Outcome{ds[i], Status::SkipResource, e.what(), {}, {}, {}};
      } catch (const ValidationError& e) {
        o = Outcome{ds[i], Status::SkipInvalid, e.what(), {}, {}, {}};
      } catch (const InternalError& e) {
        o.failures.push_back(std::string("internal: ") + e.what());
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(ds.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

json skip_record(const Outcome& o) {
  return {{"d", o.d}, {"kind", o.status == Status::SkipResource ? "resource" : "invalid"}, {"reason", o.reason}};
}

// Writes the document or table and picks the exit code.
int emit(const RunConfig& config, const std::string& command, const std::string& csv_header,
         const std::vector<Outcome>& outcomes, std::ostream& out, std::ostream& err) {
  json results = json::array(), skipped = json::array(), failures = json::array();
  bool any_done = false, any_resource = false;
  for (const auto& o : outcomes) {
    if (o.status != Status::Done) {
      skipped.push_back(skip_record(o));
      any_resource = any_resource || o.status == Status::SkipResource;
      continue;
    }
    any_done = true;
    if (!o.doc.is_null()) results.push_back(o.doc);
    for (const auto& f : o.failures) failures.push_back("q=" + std::to_string(config.q) + " d=" + std::to_string(o.d) + " " + f);
  }
  if (config.format == Format::Json) {
    json doc = {{"command", command}, {"q", config.q}, {"results", results}, {"skipped", skipped}};
    if (command == "verify") {
      doc["failures"] = failures;
      doc["pass"] = failures.empty();
    }
    out << doc.dump(2) << '\n';
  } else {
    out << csv_header << '\n';
    for (const auto& o : outcomes) {
      if (o.status != Status::Done) continue;
      for (const auto& r : o.rows) out << r << '\n';
    }
    for (const auto& s : skipped) err << "skip " << s.dump() << '\n';
  }
  for (const auto& f : failures) err << "FAIL " << f.get<std::string>() << '\n';
  if (config.d) {
    // A single requested d: its skip is the outcome of the run.
    const auto& o = outcomes.front();
    if (o.status == Status::SkipInvalid) {
      err << "error: " << o.reason << '\n';
      return kInvalid;
    }
    if (o.status == Status::SkipResource) return kResource;
  }
  if (!failures.empty()) return kCheckFailed;
  if (!any_done && any_resource) return kResource;
  return kOk;
}

std::vector<u64> requested(const RunConfig& config, std::optional<std::pair<u64, u64>> fallback = std::nullopt) {
  config.validate();
  return config.d_values(fallback);
}

template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  const auto [p, a] = nt::prime_power(q);
  if (p == 2) throw ValidationError("q must be odd");
  (void)a;
  if (cap < 3 || cap > ff::kMaxSizeCap) {
    throw ValidationError("cap must lie in [3, " + std::to_string(ff::kMaxSizeCap) + "]");
  }
  if (prec < 16 || prec > 65536) throw ValidationError("prec must lie in [16, 65536]");
  if (!(eps > 0 && eps < 0.25)) throw ValidationError("eps must lie in (0, 1/4)");
  if (jobs == 0) throw ValidationError("jobs must be positive");
  if (d && (d_min || d_max)) throw ValidationError("give either --d or --d-min/--d-max");
  if (d_min.has_value() != d_max.has_value()) throw ValidationError("--d-min and --d-max go together");
  if (d_min && *d_min > *d_max) throw ValidationError("--d-min exceeds --d-max");
  if (d_max && *d_max > 100000) throw ValidationError("--d-max above 100000");
  if (d && *d > 100000) throw ValidationError("--d above 100000");
  if (d && nt::gcd(q, *d) != 1) {
    throw ValidationError("gcd(q, d) = " + std::to_string(nt::gcd(q, *d)) + " != 1");
  }
}

std::vector<u64> RunConfig::d_values(std::optional<std::pair<u64, u64>> fallback) const {
  std::vector<u64> out;
  if (d) {
    out.push_back(*d);
    return out;
  }
  std::pair<u64, u64> range;
  if (d_min) {
    range = {*d_min, *d_max};
  } else if (fallback) {
    range = *fallback;
  } else {
    throw ValidationError("give --d or --d-min/--d-max");
  }
  for (u64 x = range.first; x <= range.second; ++x) out.push_back(x);
  return out;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv("LEGENDRE_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

std::set<Check> parse_checks(const std::vector<std::string>& names) {
  std::set<Check> out;
  for (const auto& n : names) {
    if (n == "rh") {
      out.insert(Check::Rh);
    } else if (n == "euler") {
      out.insert(Check::Euler);
    } else if (n == "stickelberger") {
      out.insert(Check::Stickelberger);
    } else if (n == "bounds") {
      out.insert(Check::Bounds);
    } else if (n == "all") {
      out.insert({Check::Rh, Check::Euler, Check::Stickelberger, Check::Bounds});
    } else {
      throw ValidationError("unknown check '" + n + "'");
    }
  }
  if (out.empty()) out = {Check::Rh, Check::Euler, Check::Stickelberger, Check::Bounds};
  return out;
}

int cmd_lfunction(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 2, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto set = jacobi::jacobi_all(config.q, d, cache);
      const auto l = lfunction::l_polynomial(set);
      const auto sv = lfunction::special_value(set, l);
      o.doc = lfunction::to_json(l, sv);
      o.rows.push_back(lfunction::csv_row(l, sv));
    });
    return emit(config, "lfunction", lfunction::csv_header(), outcomes, out, err);
  });
}

int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto r = bsd::bsd_report(config.q, d, cache);
      const auto band = analysis::bounds_report(config.q, d, r.sv.value, config.eps);
      const bool supersingular = r.sv.s_orbits.empty();
      std::string row = bsd::csv_row(r) + "," + fmt(band.value) + ",";
      row += band.applicable ? fmt(band.lower) + "," + fmt(band.upper) : std::string(",");
      row += supersingular ? ",1" : ",0";
      o.rows.push_back(row);
      o.doc = bsd::to_json(r);
      o.doc["bounds"] = analysis::to_json(band);
      o.doc["supersingular"] = supersingular;
    });
    return emit(config, "scan", bsd::csv_header() + ",lstar_ratio,band_lower,band_upper,supersingular", outcomes,
                out, err);
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config, std::pair<u64, u64>{3, 40});
    const auto [p, a] = nt::prime_power(config.q);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      json checks = json::object();
      auto record = [&](const std::string& name, bool pass, const std::string& detail = {}) {
        checks[name] = pass;
        o.rows.push_back(std::to_string(config.q) + "," + std::to_string(d) + "," + name + "," + (pass ? "1" : "0"));
        if (!pass) o.failures.push_back(name + (detail.empty() ? "" : ": " + detail));
      };
      const auto set = jacobi::jacobi_all(config.q, d, cache);
      bool weil = true;
      for (const auto& j : set.sums) weil = weil && jacobi::weil_exact(j);
      record("weil", weil);
      bsd::invariants(config.q, d);
      record("invariants", true);
      const auto l = lfunction::l_polynomial(set);
      record("degree", l.degree() == lfunction::expected_degree(d));
      record("functional_equation", lfunction::functional_equation_sign(l) != 0);
      std::optional<lfunction::SpecialValue> sv;
      try {
        sv = lfunction::special_value(set, l);
        record("special_value", true);
      } catch (const InternalError& e) {
        record("special_value", false, e.what());
      }
      if (config.checks.count(Check::Rh)) {
        const auto rh = lfunction::check_rh(l);
        record("rh", rh.pass, "max deviation " + fmt(rh.max_deviation));
      }
      if (config.checks.count(Check::Euler)) {
        unsigned D = static_cast<unsigned>(std::min<u64>(l.degree(), 4));
        while (D > 0 && !cache.fits(static_cast<std::uint32_t>(p), a * D)) --D;
        if (D > 0) record("euler", lfunction::euler_oracle(l, D, cache).pass, "D = " + std::to_string(D));
      }
      if (config.checks.count(Check::Stickelberger)) {
        const auto st = analysis::stickelberger_check(set, cache);
        const auto bad = st.first_mismatch();
        record("stickelberger", !bad, bad ? "n = " + std::to_string(*bad) : "");
      }
      if (config.checks.count(Check::Bounds) && sv) {
        const auto mean = analysis::mean_e_bound_check(config.q, d, sv->value);
        record("mean_defect", mean.pass);
        const auto band = analysis::bounds_report(config.q, d, sv->value, config.eps);
        if (band.applicable) record("band", band.inside, "value " + fmt(band.value));
      }
      o.doc = {{"d", d}, {"checks", checks}};
    });
    return emit(config, "verify", "q,d,check,pass", outcomes, out, err);
  });
}

int cmd_orbits(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 2, [&](u64 d, ff::FieldCache&, Outcome& o) {
      const auto dec = orbits::orbit_decompose(config.q, d);
      o.doc = orbits::to_json(dec);
      o.doc["theta"] = orbits::theta(config.q, d);
      for (const auto& orb : dec.orbits) {
        o.rows.push_back(std::to_string(config.q) + "," + std::to_string(d) + "," + std::to_string(orb.rep) + "," +
                         std::to_string(orb.len) + "," + std::to_string(orb.d_m));
      }
    });
    return emit(config, "orbits", "q,d,rep,len,d_m", outcomes, out, err);
  });
}

int cmd_jacobi(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto set = jacobi::jacobi_all(config.q, d, cache);
      o.doc = jacobi::to_json(set);
      for (std::size_t i = 0; i < set.sums.size(); ++i) {
        const auto& j = set.sums[i];
        const auto ball = cyclo::complex_embed(j.value, 1, config.prec);
        o.doc["orbits"][i]["embedding"] = {
            {"re", rational(ball.re)}, {"im", rational(ball.im)}, {"radius", rational(ball.radius)}};
        o.rows.push_back(std::to_string(config.q) + "," + std::to_string(d) + "," + std::to_string(j.m) + "," +
                         std::to_string(j.orbit_len) + "," + (jacobi::is_supersingular(j) ? "1" : "0") + "," +
                         fmt(ball.real()) + "," + fmt(ball.imag()));
      }
    });
    return emit(config, "jacobi", "q,d,m,len,supersingular,re,im", outcomes, out, err);
  });
}

int cmd_bsd(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto r = bsd::bsd_report(config.q, d, cache);
      o.doc = bsd::to_json(r);
      o.rows.push_back(bsd::csv_row(r));
    });
    return emit(config, "bsd", bsd::csv_header(), outcomes, out, err);
  });
}

int cmd_stickelberger(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto r = analysis::stickelberger_check(config.q, d, cache);
      o.doc = analysis::to_json(r);
      o.rows = analysis::stickelberger_csv_rows(r);
      if (const auto bad = r.first_mismatch()) o.failures.push_back("stickelberger: n = " + std::to_string(*bad));
    });
    return emit(config, "stickelberger", analysis::stickelberger_csv_header(), outcomes, out, err);
  });
}

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto ds = requested(config);
    const auto outcomes = run(config, ds, 3, [&](u64 d, ff::FieldCache& cache, Outcome& o) {
      const auto r = analysis::bounds_report(config.q, d, cache, config.eps);
      const auto mean = analysis::mean_e_bound_check(config.q, d, r.lstar);
      o.doc = analysis::to_json(r);
      o.doc["mean_defect"] = analysis::to_json(mean);
      o.rows.push_back(analysis::bounds_csv_row(r));
      if (r.applicable && !r.inside) o.failures.push_back("band: value " + fmt(r.value));
      if (!mean.pass) o.failures.push_back("mean_defect");
    });
    return emit(config, "bounds", analysis::bounds_csv_header(), outcomes, out, err);
  });
}

}  // namespace legendre::cli
