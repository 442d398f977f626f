#include "kempner/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "kempner/asymptotics.hpp"
#include "kempner/engine.hpp"
#include "kempner/errors.hpp"
#include "kempner/measure.hpp"
#include "kempner/moments.hpp"
#include "kempner/render.hpp"
#include "kempner/specfun.hpp"

namespace kempner::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  long long base = 10;
  std::vector<long long> exclude;
  int digits = 15;
  std::string method = "series";
  std::string format = "plain";
  std::size_t term_cap = kDefaultTermCap;
  std::uint64_t atom_budget = kDefaultAtomBudget;
  bool allow_slow = false;
  int cardinality = 1;
  std::string family = "both";
  std::vector<int> bases{50, 100, 200, 400};
  int digit = 1;
  int jobs = 1;
};

template <class T>
std::optional<T> env_number(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError(std::string(name) + ": expected a positive integer, got '" + raw + "'");
  return static_cast<T>(v);
}

SeriesOptions series_options(const Config& cfg) {
  SeriesOptions o;
  o.term_cap = cfg.term_cap;
  o.allow_slow = cfg.allow_slow;
  return o;
}

ProblemSpec problem_from(const Config& cfg) {
  if (cfg.exclude.empty()) throw UsageError("--exclude: at least one digit is required");
  try {
    return make_problem(cfg.base, cfg.exclude);
  } catch (const InvalidBase& e) {
    throw UsageError(std::string("--base: ") + e.what());
  } catch (const InvalidProblem& e) {
    throw UsageError(std::string("--exclude: ") + e.what());
  }
}

// Evaluates `f(i)` for i < n on up to `jobs` threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F f) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

// Absolute tolerance that should leave `digits` significant digits of K.
BigRational tolerance_for(const ProblemSpec& spec, int digits) {
  const double ceiling = spec.base() * std::log(spec.base()) / spec.excluded_count();
  const long top = static_cast<long>(std::floor(std::log10(ceiling * 1.01)));
  const long e = top - digits - 2;
  BigInteger p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e)));
  return e >= 0 ? BigRational(p) : make_ratio(1, p);
}

KempnerResult oracle_result(const ProblemSpec& spec, const BigRational& tol, const Config& cfg) {
  const int length = choose_truncation_length(spec, tol.get_d() / spec.base(), cfg.atom_budget);
  const TruncatedMeasure measure = build_truncated_measure(spec, length, cfg.atom_budget);
  Precision prec;
  prec.digits = cfg.digits + 5;
  OracleValue v = oracle_K_loglike(measure, prec);
  KempnerResult r{spec, std::move(v.value), static_cast<std::size_t>(length), upper_real(v.error_bound),
                  Method::oracle};
  return r;
}

KempnerResult compute_one(const ProblemSpec& spec, const std::string& method, const Config& cfg) {
  BigRational tol = tolerance_for(spec, cfg.digits);
  if (method == "oracle") return oracle_result(spec, tol, cfg);
  const SeriesOptions opts = series_options(cfg);
  for (int attempt = 0;; ++attempt) {
    KempnerResult r = method == "via-u" ? kempner_via_U(spec, tol, opts) : kempner_series(spec, tol, opts);
    if (attempt == 3 || r.value.is_exact() ||
        significant_digits(certified_decimal(r.value, cfg.digits)) >= cfg.digits) {
      return r;
    }
    tol /= 1000;
  }
}

std::vector<std::string> methods_for(const Config& cfg) {
  if (cfg.method == "all") return {"series", "via-u", "oracle"};
  return {cfg.method};
}

void print_results(const std::vector<KempnerResult>& results, const Config& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    for (const auto& r : results) out << result_json(r, cfg.digits) << '\n';
  } else if (cfg.format == "csv") {
    out << result_csv_header() << '\n';
    for (const auto& r : results) out << result_csv_row(r, cfg.digits) << '\n';
  } else {
    for (const auto& r : results) {
      out << certified_decimal(r.value, cfg.digits) << '\n';
      out << "  b=" << r.spec.base() << " E=" << r.spec.excluded_string() << " radius=" << radius_string(r.value)
          << " terms=" << r.terms_used << " method=" << to_string(r.method) << '\n';
    }
  }
}

int cmd_compute(const Config& cfg, std::ostream& out) {
  const ProblemSpec spec = problem_from(cfg);
  std::vector<KempnerResult> results;
  for (const auto& m : methods_for(cfg)) results.push_back(compute_one(spec, m, cfg));
  print_results(results, cfg, out);
  return kExitOk;
}

std::string low(const Ball& x, int digits) { return x.lower().to_string(digits, MPFR_RNDD); }
std::string high(const Ball& x, int digits) { return x.upper().to_string(digits, MPFR_RNDU); }

int cmd_bounds(const Config& cfg, std::ostream& out) {
  const ProblemSpec spec = problem_from(cfg);
  Precision prec;
  prec.digits = cfg.digits + 5;
  const KempnerBounds kb = kempner_bounds(spec, prec);
  const int d = cfg.digits;
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["b"] = spec.base();
    j["E"] = spec.excluded();
    j["digits"] = nlohmann::json::array();
    for (const auto& db : kb.digits) {
      j["digits"].push_back({{"digit", db.digit}, {"lo", low(db.lo, d)}, {"hi", high(db.hi, d)}});
    }
    j["lo"] = low(kb.lo_total, d);
    j["hi"] = high(kb.hi_total, d);
    out << j.dump() << '\n';
  } else if (cfg.format == "csv") {
    out << "digit,lo,hi\n";
    for (const auto& db : kb.digits) out << db.digit << ',' << low(db.lo, d) << ',' << high(db.hi, d) << '\n';
    out << "total," << low(kb.lo_total, d) << ',' << high(kb.hi_total, d) << '\n';
  } else {
    out << "b=" << spec.base() << " E=" << spec.excluded_string() << '\n';
    for (const auto& db : kb.digits) {
      out << "  digit " << db.digit << ": [" << low(db.lo, d) << ", " << high(db.hi, d) << ")\n";
    }
    out << "  K in [" << low(kb.lo_total, d) << ", " << high(kb.hi_total, d) << ")\n";
  }
  return kExitOk;
}

int cmd_table(const Config& cfg, std::ostream& out) {
  if (cfg.base < 2) throw UsageError("--base: base must be at least 2, got " + std::to_string(cfg.base));
  if (cfg.cardinality < 1 || cfg.cardinality > cfg.base) {
    throw UsageError("--cardinality: must lie in 1.." + std::to_string(cfg.base));
  }
  const auto specs = all_problems_with_cardinality(static_cast<int>(cfg.base), cfg.cardinality);
  const auto results = parallel_map<KempnerResult>(
      specs.size(), cfg.jobs, [&](std::size_t i) { return compute_one(specs[i], cfg.method == "all" ? "series" : cfg.method, cfg); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (mpfr_cmp(results[i].value.mid().get(), results[best].value.mid().get()) > 0) best = i;
  }
  bool separated = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i != best && !results[i].value.certainly_less(results[best].value)) separated = false;
  }

  if (cfg.format == "json") {
    nlohmann::ordered_json j = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto row = nlohmann::ordered_json::parse(result_json(results[i], cfg.digits));
      row["maximizer"] = i == best;
      j.push_back(row);
    }
    out << j.dump() << '\n';
  } else if (cfg.format == "csv") {
    out << result_csv_header() << ",maximizer\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      out << result_csv_row(results[i], cfg.digits) << ',' << (i == best ? 1 : 0) << '\n';
    }
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      out << (i == best ? "* " : "  ") << "E=" << results[i].spec.excluded_string() << "  "
          << certified_decimal(results[i].value, cfg.digits) << '\n';
    }
    out << "maximizer E=" << results[best].spec.excluded_string()
        << (separated ? " (separated from all others)" : " (not separated within radii)") << '\n';
  }
  return kExitOk;
}

int cmd_asymptotic(const Config& cfg, std::ostream& out) {
  std::vector<ExpansionFamily> families;
  if (cfg.family == "zero" || cfg.family == "both") families.push_back(ExpansionFamily::zero_excluded);
  if (cfg.family == "top" || cfg.family == "both") families.push_back(ExpansionFamily::top_excluded);
  if (cfg.family == "single") families.push_back(ExpansionFamily::single_digit);
  for (int b : cfg.bases) {
    if (b < 2) throw UsageError("--bases: base must be at least 2, got " + std::to_string(b));
    if (cfg.family == "single" && (cfg.digit < 1 || cfg.digit >= b)) {
      throw UsageError("--digit: must lie in 1.." + std::to_string(b - 1) + " for base " + std::to_string(b));
    }
  }
  const SeriesOptions opts = series_options(cfg);
  int status = kExitOk;
  if (cfg.format == "csv") out << "family,b,defect,radius\n";
  for (ExpansionFamily family : families) {
    const auto samples = parallel_map<DecaySample>(cfg.bases.size(), cfg.jobs, [&](std::size_t i) {
      const int b = cfg.bases[i];
      ExpansionResult e = family == ExpansionFamily::zero_excluded  ? expansion_zero_excluded(b)
                          : family == ExpansionFamily::top_excluded ? expansion_top_excluded(b)
                                                                    : expansion_single_digit(b, cfg.digit);
      BigInteger scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e.remainder_order));
      return expansion_defect(e, make_ratio(1, scale * 1000000), opts);
    });
    std::optional<DecayFit> fit;
    std::string fit_error;
    if (samples.size() >= 3) {
      try {
        fit = fit_decay_order(samples);
      } catch (const InconclusiveOrder& e) {
        fit_error = e.what();
        status = kExitComputation;
      }
    }
    const int claimed = family == ExpansionFamily::single_digit ? 2 : 3;
    if (cfg.format == "csv") {
      for (const auto& s : samples) {
        std::ostringstream row;
        row.precision(17);
        row << to_string(family) << ',' << static_cast<long long>(s.base) << ',' << s.defect << ',' << s.radius;
        out << row.str() << '\n';
      }
    } else if (cfg.format == "json") {
      nlohmann::ordered_json j;
      j["family"] = to_string(family);
      j["claimed_order"] = -claimed;
      j["samples"] = nlohmann::json::array();
      for (const auto& s : samples) {
        j["samples"].push_back({{"b", static_cast<long long>(s.base)}, {"defect", s.defect}, {"radius", s.radius}});
      }
      if (fit) {
        j["slope"] = fit->slope;
        j["max_abs_residual"] = fit->max_abs_residual;
        j["decaying"] = fit->decaying;
      } else if (!fit_error.empty()) {
        j["error"] = fit_error;
      }
      out << j.dump() << '\n';
    } else {
      out << to_string(family) << " (claimed O(b^-" << claimed << "))\n";
      for (const auto& s : samples) {
        std::ostringstream row;
        row.precision(6);
        row << "  b=" << static_cast<long long>(s.base) << "  defect=" << s.defect << "  radius=" << s.radius;
        out << row.str() << '\n';
      }
      if (fit) {
        std::ostringstream row;
        row.precision(4);
        row << "  fitted order " << fit->slope << "  max residual " << fit->max_abs_residual;
        if (!fit->decaying) row << "  FLAG: defects do not decay";
        out << row.str() << '\n';
      } else if (!fit_error.empty()) {
        out << "  order inconclusive: " << fit_error << '\n';
      }
    }
  }
  return status;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Check> verify_suite(const ProblemSpec& spec, const Config& cfg) {
  std::vector<Check> checks;
  auto record = [&](const std::string& name, auto&& body) {
    try {
      std::string detail;
      const bool ok = body(detail);
      checks.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      checks.push_back({name, false, e.what()});
    }
  };
  const SeriesOptions opts = series_options(cfg);
  const BigRational tol = tolerance_for(spec, cfg.digits);
  const KempnerResult series = kempner_series(spec, tol, opts);
  Ball ceiling = hp_log(BigRational(spec.base()), Precision{cfg.digits + 10});
  ceiling.mul_rational(make_ratio(spec.base(), spec.excluded_count()));

  record("recurrences agree", [&](std::string& detail) {
    std::vector<int> shifts = spec.shifts();
    shifts.push_back(0);
    for (int d : shifts) {
      if (moment_table(spec, d, 30).values != moment_table_alt(spec, d, 30).values) {
        detail = "d=" + std::to_string(d);
        return false;
      }
    }
    return true;
  });
  if (spec.excluded() == std::vector<int>{spec.base() - 1}) {
    record("special relation", [&](std::string& detail) {
      const bool ok = special_c_table(spec.base(), 30).values == moment_table(spec, 1, 30).values;
      if (!ok) detail = "c_m differs from v_m(1)";
      return ok;
    });
  }
  if (spec.excluded() == std::vector<int>{0} || spec.excluded() == std::vector<int>{spec.base() - 1}) {
    record("closed forms", [&](std::string& detail) {
      const bool zero = spec.excludes(0);
      const MomentTable t = moment_table(spec, zero ? 0 : 1, 2);
      BigInteger b2 = spec.base() * static_cast<long>(spec.base()), b3 = b2 * spec.base();
      const BigRational m1 = (zero ? -t[1] : t[1]) / BigRational(b2);
      const BigRational m2 = t[2] / BigRational(b3);
      const auto cf = closed_form_low_moments(spec);
      const bool ok = cf.first == m1 && cf.second == m2;
      if (!ok) detail = "closed form mismatch";
      return ok;
    });
  }
  record("oracle moments", [&](std::string& detail) {
    const TruncatedMeasure tm =
        build_truncated_measure(spec, choose_truncation_length(spec, 1e-30, 100000), cfg.atom_budget);
    for (int d = 0; d <= 3; ++d) {
      const MomentTable t = moment_table(spec, d, 6);
      for (unsigned m = 0; m <= 6; ++m) {
        const OracleMoment om = oracle_moment(tm, d, m);
        if (abs(om.value - t[m]) > om.error_bound) {
          detail = "d=" + std::to_string(d) + " m=" + std::to_string(m);
          return false;
        }
      }
    }
    return true;
  });
  record("series inside digamma bounds", [&](std::string& detail) {
    const KempnerBounds kb = kempner_bounds(spec, Precision{cfg.digits + 10});
    const bool ok = mpfr_cmp(kb.lo_total.upper().get(), series.value.lower().get()) <= 0 &&
                    series.value.certainly_less(kb.hi_total);
    if (!ok) detail = "K=" + series.value.to_string(20);
    return ok;
  });
  record("series overlaps U-sum", [&](std::string& detail) {
    const KempnerResult u = kempner_via_U(spec, tol, opts);
    detail = "U-sum " + u.value.to_string(20);
    return u.value.overlaps(series.value);
  });
  record("series overlaps truncated measure", [&](std::string& detail) {
    const TruncatedMeasure tm = build_truncated_measure(spec, choose_truncation_length(spec, 1e-30, 200000),
                                                        cfg.atom_budget);
    const OracleValue a = oracle_K_loglike(tm, Precision{cfg.digits + 10});
    const OracleValue b = oracle_theorem_main(tm, Precision{cfg.digits + 10});
    detail = "log-like " + a.value.to_string(12) + ", digamma " + b.value.to_string(12);
    return a.value.overlaps(series.value) && b.value.overlaps(series.value);
  });
  if (spec.excluded() == std::vector<int>{0}) {
    record("above b log b", [&](std::string&) { return ceiling.certainly_less(series.value); });
  } else if (!spec.is_degenerate()) {
    record("below (b/p) log b", [&](std::string&) { return series.value.certainly_less(ceiling); });
  }
  record("U recursion", [&](std::string& detail) {
    for (long long n = 1; n <= 5; ++n) {
      const BigRational t = make_ratio(1, 1000000000000L);
      Ball rhs(make_ratio(1, static_cast<long>(n)), 256);
      for (int a : spec.admissible()) rhs += stieltjes_U(spec, n * spec.base() + a, t, opts);
      if (!stieltjes_U(spec, n, t, opts).overlaps(rhs)) {
        detail = "n=" + std::to_string(n);
        return false;
      }
    }
    return true;
  });
  return checks;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const ProblemSpec spec = problem_from(cfg);
  const auto checks = verify_suite(spec, cfg);
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["b"] = spec.base();
    j["E"] = spec.excluded();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["pass"] = all;
    out << j.dump() << '\n';
  } else if (cfg.format == "csv") {
    out << "check,pass,detail\n";
    for (const auto& c : checks) out << c.name << ',' << (c.pass ? 1 : 0) << ",\"" << c.detail << "\"\n";
  } else {
    out << "b=" << spec.base() << " E=" << spec.excluded_string() << '\n';
    for (const auto& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name;
      if (!c.pass && !c.detail.empty()) out << ": " << c.detail;
      out << '\n';
    }
  }
  return all ? kExitOk : kExitComputation;
}

void add_problem_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("-b,--base", cfg.base, "Number base (>= 2)");
  sub->add_option("-e,--exclude", cfg.exclude, "Excluded digits, repeatable or comma separated")->delimiter(',');
}

void add_output_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("-d,--digits", cfg.digits, "Certified significant digits")->check(CLI::Range(1, 100000));
  sub->add_option("-f,--format", cfg.format, "Output format")->check(CLI::IsMember({"plain", "json", "csv"}));
}

void add_series_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--term-cap", cfg.term_cap, "Maximum series terms (env KEMPNER_TERM_CAP)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--atom-budget", cfg.atom_budget, "Maximum measure atoms (env KEMPNER_ATOM_BUDGET)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--allow-slow", cfg.allow_slow, "Run series whose convergence ratio is close to 1");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    if (auto v = env_number<std::size_t>("KEMPNER_TERM_CAP")) cfg.term_cap = *v;
    if (auto v = env_number<std::uint64_t>("KEMPNER_ATOM_BUDGET")) cfg.atom_budget = *v;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Kempner sums with certified digits"};
  app.name("kempner");
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "Compute K(b,E)");
  add_problem_flags(compute, cfg);
  add_output_flags(compute, cfg);
  add_series_flags(compute, cfg);
  compute->add_option("-m,--method", cfg.method, "Evaluation method")
      ->check(CLI::IsMember({"series", "via-u", "oracle", "all"}));

  auto* bounds = app.add_subcommand("bounds", "Per-digit digamma bounds");
  add_problem_flags(bounds, cfg);
  add_output_flags(bounds, cfg);

  auto* table = app.add_subcommand("table", "All excluded sets of one cardinality");
  table->add_option("-b,--base", cfg.base, "Number base (>= 2)");
  table->add_option("-c,--cardinality", cfg.cardinality, "Size of the excluded set")->required();
  add_output_flags(table, cfg);
  add_series_flags(table, cfg);
  table->add_option("-m,--method", cfg.method, "Evaluation method")->check(CLI::IsMember({"series", "via-u"}));
  table->add_option("-j,--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* asym = app.add_subcommand("asymptotic", "Expansion defects and fitted decay order");
  asym->add_option("--family", cfg.family, "Expansion family")
      ->check(CLI::IsMember({"zero", "top", "both", "single"}));
  asym->add_option("--bases", cfg.bases, "Bases to sample")->delimiter(',');
  asym->add_option("--digit", cfg.digit, "Excluded digit for the single family");
  asym->add_option("-f,--format", cfg.format, "Output format")->check(CLI::IsMember({"plain", "json", "csv"}));
  add_series_flags(asym, cfg);
  asym->add_option("-j,--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Cross-method consistency checks");
  add_problem_flags(verify, cfg);
  add_output_flags(verify, cfg);
  add_series_flags(verify, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(cfg, out);
    if (*bounds) return cmd_bounds(cfg, out);
    if (*table) return cmd_table(cfg, out);
    if (*asym) return cmd_asymptotic(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace kempner::cli
