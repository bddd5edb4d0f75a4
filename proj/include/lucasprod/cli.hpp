#pragma once

// Subcommand dispatch and report rendering for the lucasprod tool.
// Kept in a header so tests can drive run() in-process.
//
// Exit codes: 0 success, 1 mathematical "not found / rejected", 2 usage
// error, 3 factorization budget exhausted.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lucasprod/abc_evidence.hpp"
#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"
#include "lucasprod/primitive.hpp"
#include "lucasprod/solver.hpp"
#include "lucasprod/square_class.hpp"
#include "lucasprod/term_factorizer.hpp"

namespace lucasprod::cli {

enum class Format { Text, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

inline constexpr const char* kCacheEnv = "LUCAS_FACTOR_CACHE";

struct RunConfig {
  std::string command;
  std::int64_t p = 1;
  std::int64_t q = 1;
  std::string a = "1";
  unsigned long k = 2;
  std::uint64_t min_index = 1;
  std::uint64_t max_index = 20;
  unsigned max_factors = 2;
  std::vector<std::uint64_t> indices;
  std::string prime;
  std::uint64_t n = 0;
  Format format = Format::Text;
  std::optional<std::string> cache_path;
  std::uint64_t budget = kDefaultRhoBudget;
  unsigned jobs = 1;
};

/// Flag beats environment; no flag and no environment means no cache.
inline std::optional<std::string> resolve_cache_path(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return flag;
  if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0') {
    return std::string(env);
  }
  return std::nullopt;
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

namespace detail {

using json = nlohmann::ordered_json;

struct UsageError {
  std::string message;
};

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline std::string brace_list(const std::vector<std::uint64_t>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(xs[i]);
  }
  return s + "}";
}

inline json certificate_json(const SolutionCertificate& cert) {
  json j;
  j["indices"] = cert.indices;
  j["y"] = to_string(cert.y);
  json vals = json::object();
  for (const auto& [p, row] : cert.valuations) {
    json entries = json::array();
    for (const auto& e : row) entries.push_back({{"index", e.index}, {"exponent", e.exponent}});
    vals[to_string(p)] = std::move(entries);
  }
  j["valuations"] = std::move(vals);
  return j;
}

inline void certificate_text(std::ostream& out, const SolutionCertificate& cert) {
  out << brace_list(cert.indices) << " y=" << to_string(cert.y);
  if (cert.trivial) out << " (trivial)";
  out << '\n';
  for (const auto& [p, row] : cert.valuations) {
    out << "  " << to_string(p) << ":";
    for (const auto& e : row) out << " U_" << e.index << "^" << e.exponent;
    out << '\n';
  }
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& out)
      : config_(config),
        out_(out),
        params_(validated_params(config)),
        cache_(open_cache(config)),
        factorizer_(config.budget, cache_ ? &*cache_ : nullptr),
        terms_(params_, factorizer_) {}

  int dispatch() {
    const std::string& c = config_.command;
    if (c == "seq") return seq();
    if (c == "classify") return classify();
    if (c == "admissible") return admissible();
    if (c == "solve") return solve();
    if (c == "verify") return verify();
    if (c == "rank") return rank();
    if (c == "primitive") return primitive();
    if (c == "abc-quality") return abc_quality();
    throw UsageError{"unknown subcommand '" + c + "'"};
  }

 private:
  static LucasParams validated_params(const RunConfig& config) {
    try {
      return validate_params(config.p, config.q);
    } catch (const Error& e) {
      const char* flag = e.kind() == ErrorKind::BadQ ? "--q" : "--p/--q";
      throw UsageError{std::string(flag) + ": " + e.what()};
    }
  }

  static std::optional<FactorCache> open_cache(const RunConfig& config) {
    if (auto path = resolve_cache_path(config.cache_path)) return std::optional<FactorCache>(std::in_place, *path);
    return std::nullopt;
  }

  bool json_mode() const { return config_.format == Format::Json; }

  BigInt parsed_a() const {
    auto a = parse_bigint(config_.a);
    if (!a) throw UsageError{"--a: not an integer: '" + config_.a + "'"};
    if (*a == 0) throw UsageError{"--a: must be nonzero"};
    return *a;
  }

  void require_k() const {
    if (config_.k < 2) throw UsageError{"--k: must be at least 2"};
  }

  void require_range(std::uint64_t lo) const {
    if (config_.max_index < lo) {
      throw UsageError{"--max: must be at least " + std::to_string(lo)};
    }
    if (config_.max_index > kDefaultIndexCap) {
      throw UsageError{"--max: exceeds index cap " + std::to_string(kDefaultIndexCap)};
    }
    if (config_.min_index < 1 || config_.min_index > config_.max_index) {
      throw UsageError{"--min: must lie in [1, --max]"};
    }
  }

  ProductEquation equation() const {
    require_k();
    require_range(2);
    if (config_.max_factors < 1) throw UsageError{"--r: must be at least 1"};
    return make_equation(params_, parsed_a(), config_.k, config_.max_index, config_.max_factors);
  }

  json envelope(bool with_a, bool with_k) const {
    json j;
    j["command"] = config_.command;
    json p;
    p["p"] = params_.P;
    p["q"] = params_.Q;
    if (with_a) p["a"] = to_string(parsed_a());
    if (with_k) p["k"] = config_.k;
    j["params"] = std::move(p);
    j["results"] = json::array();
    return j;
  }

  std::string header() const {
    return "P=" + std::to_string(params_.P) + " Q=" + std::to_string(params_.Q);
  }

  void emit(const json& j) { out_ << j.dump(2) << '\n'; }

  int seq() {
    require_range(1);
    const auto terms = lucas_sequence(params_, config_.max_index + 1);
    json j = envelope(false, false);
    if (!json_mode()) out_ << "# U_n " << header() << " n=1.." << config_.max_index << '\n';
    for (std::uint64_t n = 1; n <= config_.max_index; ++n) {
      if (json_mode()) {
        j["results"].push_back({{"n", n}, {"value", to_string(terms[n])}});
      } else {
        out_ << n << ' ' << to_string(terms[n]) << '\n';
      }
    }
    if (json_mode()) emit(j);
    return kExitOk;
  }

  int classify() {
    require_k();
    require_range(1);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = config_.min_index; n <= config_.max_index; ++n) ns.push_back(n);
    const auto factored = terms_.factor_all(ns, config_.jobs);
    json j = envelope(false, true);
    if (!json_mode()) {
      out_ << "# classify " << header() << " k=" << config_.k << '\n';
      out_ << "n U_n e s class\n";
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
      require_complete(factored[i], static_cast<long>(ns[i]));
      const auto dec = power_free_part(factored[i], config_.k);
      const std::string cls = "[" + class_of(factored[i]).str() + "]";
      const std::string value = to_string(factored[i].value());
      if (json_mode()) {
        j["results"].push_back({{"n", ns[i]},
                                {"value", value},
                                {"e", to_string(dec.e)},
                                {"s", to_string(dec.s)},
                                {"class", cls}});
      } else {
        out_ << ns[i] << ' ' << value << ' ' << to_string(dec.e) << ' ' << to_string(dec.s) << ' '
             << cls << '\n';
      }
    }
    if (json_mode()) emit(j);
    return kExitOk;
  }

  int admissible() {
    const ProductEquation eq = equation();
    const AdmissibleSet set = admissible_indices(eq, factorizer_);
    json j = envelope(true, true);
    if (!json_mode()) {
      out_ << "# admissible " << header() << " A=" << to_string(eq.A) << " k=" << eq.k
           << " N=" << eq.max_index << '\n';
    }
    for (std::uint64_t n : set.indices) {
      const std::string value = to_string(lucas_u(params_, n));
      if (json_mode()) {
        j["results"].push_back({{"n", n}, {"value", value}});
      } else {
        out_ << n << ' ' << value << '\n';
      }
    }
    if (json_mode()) {
      emit(j);
    } else {
      out_ << "# " << set.indices.size() << " admissible indices\n";
    }
    return set.indices.empty() ? kExitRejected : kExitOk;
  }

  int solve() {
    const ProductEquation eq = equation();
    const auto certs = enumerate_solutions(eq, terms_, config_.jobs);
    const auto trivial = trivial_solution(eq);
    json j = envelope(true, true);
    if (!json_mode()) {
      out_ << "# solve " << header() << " A=" << to_string(eq.A) << " k=" << eq.k
           << " N=" << eq.max_index << " r=" << eq.max_factors << '\n';
    }
    for (const auto& cert : certs) {
      if (json_mode()) {
        j["results"].push_back(certificate_json(cert));
      } else {
        certificate_text(out_, cert);
      }
    }
    if (json_mode()) {
      j["trivial"] = trivial ? certificate_json(*trivial) : json(nullptr);
      emit(j);
    } else {
      if (trivial) out_ << "# trivial solution {} y=" << to_string(trivial->y) << '\n';
      out_ << "# " << certs.size() << " solutions\n";
    }
    return certs.empty() ? kExitRejected : kExitOk;
  }

  int verify() {
    require_k();
    if (config_.indices.empty()) throw UsageError{"--indices: at least one index is required"};
    for (std::uint64_t n : config_.indices) {
      if (n < 1 || n > kDefaultIndexCap) throw UsageError{"--indices: each index must lie in [1, cap]"};
    }
    const ProductEquation eq{params_, parsed_a(), config_.k, 2, 1};
    const VerifyOutcome outcome = verify_solution(eq, config_.indices, terms_);
    json j = envelope(true, true);
    if (const auto* cert = std::get_if<SolutionCertificate>(&outcome)) {
      if (json_mode()) {
        j["results"].push_back(certificate_json(*cert));
        emit(j);
      } else {
        out_ << "# verify " << header() << " A=" << to_string(eq.A) << " k=" << eq.k << '\n';
        certificate_text(out_, *cert);
        out_ << "verified\n";
      }
      return kExitOk;
    }
    const auto& rej = std::get<Rejection>(outcome);
    if (json_mode()) {
      j["results"].push_back({{"rejection", rejection_name(rej.kind)}, {"detail", rej.detail}});
      emit(j);
    } else {
      out_ << "# verify " << header() << " A=" << to_string(eq.A) << " k=" << eq.k << '\n';
      out_ << "rejected " << rejection_name(rej.kind) << ": " << rej.detail << '\n';
    }
    return kExitRejected;
  }

  int rank() {
    auto p = parse_bigint(config_.prime);
    if (!p || !is_prime(*p)) throw UsageError{"--prime: not a prime: '" + config_.prime + "'"};
    RankOfApparition r;
    try {
      r = rank_of_apparition(params_, *p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw UsageError{std::string("--prime: ") + e.what()};
      if (e.kind() != ErrorKind::NotFoundWithinBound) throw;
      out_ << e.what() << '\n';
      return kExitRejected;
    }
    if (json_mode()) {
      json j = envelope(false, false);
      j["results"].push_back({{"p", to_string(r.p)}, {"z", r.z}});
      emit(j);
    } else {
      out_ << "z(" << to_string(r.p) << ") = " << r.z << '\n';
    }
    return kExitOk;
  }

  int primitive() {
    if (config_.n < 1 || config_.n > kDefaultIndexCap) throw UsageError{"--n: must lie in [1, cap]"};
    const BigInt A = parsed_a();
    const PrimitiveReport report = primitive_divisors(terms_, config_.n);
    std::optional<ObstructionVerdict> verdict;
    if (config_.n >= 2) verdict = obstruction_filter(report, factorizer_.factorize_complete(A));
    if (json_mode()) {
      json j = envelope(true, false);
      json entries = json::array();
      for (const auto& e : report.entries) {
        entries.push_back({{"p", to_string(e.p)},
                           {"multiplicity", e.multiplicity},
                           {"rank", e.rank},
                           {"primitive", e.primitive}});
      }
      json r = {{"n", report.n}, {"entries", std::move(entries)}};
      if (verdict) r["verdict"] = {{"admissible", verdict->admissible}, {"reason", verdict->reason}};
      j["results"].push_back(std::move(r));
      emit(j);
      return kExitOk;
    }
    out_ << "# primitive divisors of U_" << report.n << " " << header() << " = "
         << to_string(lucas_u(params_, report.n)) << '\n';
    for (const auto& e : report.entries) {
      out_ << "p=" << to_string(e.p) << " v=" << e.multiplicity << " z=" << e.rank
           << " primitive=" << (e.primitive ? "yes" : "no") << '\n';
    }
    if (verdict) {
      out_ << "verdict A=" << to_string(A) << ": "
           << (verdict->admissible ? "admissible" : "excluded") << " (" << verdict->reason << ")\n";
    }
    return kExitOk;
  }

  int abc_quality() {
    require_k();
    require_range(1);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = config_.min_index; n <= config_.max_index; ++n) ns.push_back(n);
    const auto factored = terms_.factor_all(ns, config_.jobs);
    json j = envelope(false, true);
    if (!json_mode()) {
      out_ << "# abc-quality " << header() << " k=" << config_.k << '\n';
      out_ << "n e s height radical quality lower_slack upper_slack\n";
    }
    std::optional<double> worst_upper;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      require_complete(factored[i], static_cast<long>(ns[i]));
      const QualityReport r = quality_report(params_, ns[i], config_.k, factored[i]);
      if (!worst_upper || r.upper_slack_term > *worst_upper) worst_upper = r.upper_slack_term;
      if (json_mode()) {
        j["results"].push_back({{"n", r.n},
                                {"e", to_string(r.e)},
                                {"s", to_string(r.s)},
                                {"height", round6(r.height)},
                                {"radical", round6(r.radical)},
                                {"quality", r.quality ? json(round6(*r.quality)) : json(nullptr)},
                                {"lower_slack", round6(r.lower_slack)},
                                {"upper_slack_term", round6(r.upper_slack_term)}});
      } else {
        out_ << r.n << ' ' << to_string(r.e) << ' ' << to_string(r.s) << ' ' << fixed6(r.height)
             << ' ' << fixed6(r.radical) << ' ' << (r.quality ? fixed6(*r.quality) : "-") << ' '
             << fixed6(r.lower_slack) << ' ' << fixed6(r.upper_slack_term) << '\n';
      }
    }
    if (json_mode()) {
      emit(j);
    } else if (worst_upper) {
      out_ << "# max upper_slack " << fixed6(*worst_upper) << '\n';
    }
    return kExitOk;
  }

  const RunConfig& config_;
  std::ostream& out_;
  LucasParams params_;
  std::optional<FactorCache> cache_;
  Factorizer factorizer_;
  TermFactorizer terms_;
};

}  // namespace detail

/// Runs one subcommand. Reports go to `out`, diagnostics to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    detail::Runner runner(config, out);
    return runner.dispatch();
  } catch (const detail::UsageError& e) {
    err << "error: " << e.message << '\n';
    return kExitUsage;
  } catch (const IncompleteFactorizationError& e) {
    err << "error: factorization budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace lucasprod::cli
