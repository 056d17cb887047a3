#include "pir/verify.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "pir/errors.hpp"

namespace pir::verify {

namespace {

Rational pow_rational(uint64_t base, uint64_t exp) {
  return Rational(boost::multiprecision::pow(BigInt(base), unsigned(exp)));
}

double chi_square_p_value(double stat, uint64_t dof) {
  if (dof == 0) return 1.0;
  return boost::math::gamma_q(double(dof) / 2.0, stat / 2.0);
}

// Serialized-query support size for the flat-symbol schemes; nullopt where
// only the coarsened statistic is workable (con5).
std::optional<uint64_t> query_support_size(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2: return pow_u64(2, p.k);
    case SchemeId::Con1: {
      const uint64_t bits = uint64_t(p.k) * p.record_bits;
      return bits > 63 ? std::nullopt
                       : std::optional<uint64_t>(uint64_t(1) << bits);
    }
    case SchemeId::Con2: return pow_u64(p.record_bits + 1, p.k);
    case SchemeId::Con3:
    case SchemeId::Con6: return pow_u64(p.n, p.k);
    case SchemeId::Con4: return pow_u64(p.class_count, p.k);
    case SchemeId::Con5: return std::nullopt;
  }
  return std::nullopt;
}

uint64_t marginal_domain(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2:
    case SchemeId::Con1: return 2;
    case SchemeId::Con2: return p.record_bits + 1;
    case SchemeId::Con3:
    case SchemeId::Con6: return p.n;
    case SchemeId::Con4: return p.class_count;
    case SchemeId::Con5: {
      const auto nk = pow_u64(p.n, p.k);
      if (!nk) throw ParamError("symbol domain overflows");
      return *nk;
    }
  }
  throw ParamError("unknown scheme");
}

// con5 symbols are 1-based; everything else is already a 0-based residue.
uint64_t symbol_bin(const SchemeParams& p, uint64_t symbol) {
  return p.scheme == SchemeId::Con5 ? symbol - 1 : symbol;
}

unsigned worker_count(const EnumerationLimits& limits, uint64_t jobs) {
  unsigned n = limits.threads != 0 ? limits.threads
                                   : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  n = std::min<uint64_t>(n, 8);
  return unsigned(std::min<uint64_t>(n, std::max<uint64_t>(jobs, 1)));
}

}  // namespace

QueryBuilder standard_queries() {
  return [](const SchemeParams& p, RecordId ell,
            const schemes::Randomness& rnd) {
    return schemes::queries_from(p, ell, rnd);
  };
}

QueryBuilder leaky_con3_queries() {
  return [](const SchemeParams& p, RecordId ell,
            const schemes::Randomness& rnd) {
    if (p.scheme != SchemeId::Con3) {
      throw ParamError("leaky variant is a con3 negative control");
    }
    schemes::QuerySet qs = schemes::queries_from(p, ell, rnd);
    for (auto& q : qs.per_server) {
      q.symbols[ell.value - 1] = ell.value % p.n;  // leaks the target
    }
    return qs;
  };
}

RunResult run_protocol(const SchemeParams& params, const Database& db,
                       RecordId ell, uint64_t seed, bool skip_zero) {
  const auto storages = schemes::encode(params, db);
  Rng rng(seed);
  const schemes::QuerySet qs = schemes::gen_query(params, ell, rng);

  RunResult result;
  result.transcript.upload_bits.resize(params.n, 0);
  result.transcript.download_bits.resize(params.n, 0);
  std::vector<schemes::ResponsePayload> responses;
  responses.reserve(params.n);
  for (uint32_t sid = 1; sid <= params.n; ++sid) {
    const auto& q = qs.per_server[sid - 1];
    result.transcript.upload_bits[sid - 1] =
        schemes::serialize_query(params, q).size();
    auto resp = schemes::answer(params, storages[sid - 1], q, skip_zero);
    result.transcript.download_bits[sid - 1] = resp.bits.size();
    responses.push_back(std::move(resp));
  }
  result.record = schemes::reconstruct(params, qs.user_state, responses);
  return result;
}

CorrectnessReport check_correctness_exhaustive(
    const SchemeParams& params, const EnumerationLimits& limits) {
  params.validate();
  CorrectnessReport report;

  const uint64_t db_bits = uint64_t(params.k) * params.record_bits;
  const std::optional<uint64_t> db_space =
      db_bits > 40 ? std::nullopt
                   : std::optional<uint64_t>(uint64_t(1) << db_bits);
  const std::optional<uint64_t> rand_space =
      schemes::randomness_space_size(params);

  const auto fits = [&](uint64_t dbs, uint64_t rnds) {
    return dbs <= limits.max_total_runs / params.k &&
           rnds <= limits.max_total_runs / params.k / dbs;
  };

  report.databases_exhaustive =
      db_space.has_value() && rand_space.has_value() &&
      fits(*db_space, std::min(*rand_space, limits.sampled_randomness));
  if (report.databases_exhaustive) {
    report.randomness_exhaustive = fits(*db_space, *rand_space);
  } else {
    report.randomness_exhaustive =
        rand_space.has_value() && fits(limits.sampled_databases, *rand_space);
  }
  report.database_count =
      report.databases_exhaustive ? *db_space : limits.sampled_databases;
  report.randomness_count =
      report.randomness_exhaustive ? *rand_space : limits.sampled_randomness;

  // Materialize the database list (sampled mode draws them from the seed).
  std::vector<Database> dbs;
  dbs.reserve(report.database_count);
  if (report.databases_exhaustive) {
    for (uint64_t idx = 0; idx < report.database_count; ++idx) {
      dbs.push_back(database_from_index(params.k, params.record_bits, idx));
    }
  } else {
    Rng rng(limits.seed);
    for (uint64_t i = 0; i < report.database_count; ++i) {
      dbs.push_back(random_database(params.k, params.record_bits, rng));
    }
  }
  std::vector<uint64_t> rand_seeds;
  if (!report.randomness_exhaustive) {
    Rng rng(limits.seed ^ 0x9e3779b97f4a7c15ull);
    for (uint64_t i = 0; i < report.randomness_count; ++i) {
      rand_seeds.push_back(rng.next_u64());
    }
  }

  std::atomic<uint64_t> runs{0};
  std::atomic<uint64_t> failures{0};
  std::mutex detail_mu;
  std::string first_failure;

  const auto run_range = [&](size_t begin, size_t end) {
    uint64_t local_runs = 0;
    for (size_t d = begin; d < end; ++d) {
      const Database& db = dbs[d];
      const auto storages = schemes::encode(params, db);
      for (uint32_t ell = 1; ell <= params.k; ++ell) {
        const RecordId id{ell};
        for (uint64_t ri = 0; ri < report.randomness_count; ++ri) {
          schemes::Randomness rnd;
          if (report.randomness_exhaustive) {
            rnd = schemes::randomness_from_index(params, id, ri);
          } else {
            Rng rng(rand_seeds[ri] + ell);
            rnd = schemes::sample_randomness(params, id, rng);
          }
          const auto qs = schemes::queries_from(params, id, rnd);
          std::vector<schemes::ResponsePayload> responses;
          responses.reserve(params.n);
          for (uint32_t sid = 1; sid <= params.n; ++sid) {
            responses.push_back(schemes::answer(params, storages[sid - 1],
                                                qs.per_server[sid - 1]));
          }
          const BitString got =
              schemes::reconstruct(params, qs.user_state, responses);
          ++local_runs;
          if (got != db.record(id)) {
            failures.fetch_add(1);
            std::lock_guard<std::mutex> lock(detail_mu);
            if (first_failure.empty()) {
              std::ostringstream os;
              os << "db#" << d << " ell=" << ell << " rand#" << ri
                 << ": got " << got.to_string() << " want "
                 << db.record(id).to_string();
              first_failure = os.str();
            }
          }
        }
      }
    }
    runs.fetch_add(local_runs);
  };

  const unsigned workers = worker_count(limits, dbs.size());
  if (workers <= 1) {
    run_range(0, dbs.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (dbs.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const size_t begin = std::min(dbs.size(), size_t(w) * chunk);
      const size_t end = std::min(dbs.size(), begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  report.runs = runs.load();
  report.failures = failures.load();
  report.pass = report.failures == 0;
  std::ostringstream os;
  os << (report.databases_exhaustive ? "databases exhaustive ("
                                     : "databases SAMPLED (")
     << report.database_count << "), "
     << (report.randomness_exhaustive ? "randomness exhaustive ("
                                      : "randomness SAMPLED (")
     << report.randomness_count << ")";
  if (!first_failure.empty()) os << "; first failure: " << first_failure;
  report.detail = os.str();
  return report;
}

QueryDistribution exact_privacy_distribution(const SchemeParams& params,
                                             uint32_t server, RecordId ell,
                                             uint64_t max_space,
                                             const QueryBuilder& builder) {
  params.validate();
  if (server < 1 || server > params.n) {
    throw ParamError("server index out of range");
  }
  const auto space = schemes::randomness_space_size(params);
  if (!space || *space > max_space) {
    throw ParamError(
        "randomness space too large for exact enumeration; use the "
        "statistical mode");
  }
  QueryDistribution dist;
  dist.total = *space;
  for (uint64_t idx = 0; idx < *space; ++idx) {
    const auto rnd = schemes::randomness_from_index(params, ell, idx);
    const auto qs = builder(params, ell, rnd);
    const BitString bits =
        schemes::serialize_query(params, qs.per_server[server - 1]);
    ++dist.counts[bits.to_string()];
  }
  return dist;
}

ExactPrivacyReport check_exact_privacy(const SchemeParams& params,
                                       uint64_t max_space,
                                       const QueryBuilder& builder) {
  params.validate();
  ExactPrivacyReport report;
  report.pass = true;
  for (uint32_t server = 1; server <= params.n; ++server) {
    const auto reference = exact_privacy_distribution(
        params, server, RecordId{1}, max_space, builder);
    report.space = reference.total;
    for (uint32_t ell = 2; ell <= params.k; ++ell) {
      const auto other = exact_privacy_distribution(
          params, server, RecordId{ell}, max_space, builder);
      if (!(other == reference)) {
        report.pass = false;
        if (report.detail.empty()) {
          report.detail = "server " + std::to_string(server) +
                          ": distribution for ell=" + std::to_string(ell) +
                          " differs from ell=1";
        }
      }
    }
  }
  if (report.pass) report.detail = "identical across all record indices";
  return report;
}

StatisticalPrivacyReport statistical_privacy_test(const SchemeParams& params,
                                                  uint32_t server,
                                                  uint64_t trials,
                                                  double significance,
                                                  uint64_t seed,
                                                  const QueryBuilder& builder) {
  params.validate();
  if (server < 1 || server > params.n) {
    throw ParamError("server index out of range");
  }
  if (trials == 0) throw ParamError("trials must be positive");

  StatisticalPrivacyReport report;
  report.trials_per_record = trials;

  constexpr uint64_t kFullSupportCap = 2048;
  const auto support = query_support_size(params);
  report.coarsened = !support || *support > kFullSupportCap;

  const uint64_t feature_size =
      report.coarsened ? marginal_domain(params) : *support;
  report.inconclusive = trials < 100 * feature_size;

  const uint64_t coords = schemes::query_symbol_count(params);
  const uint64_t tests_per_record = report.coarsened ? coords : 1;
  report.threshold = significance / double(tests_per_record);

  // Sample the serialized query (full mode) or the per-coordinate symbols
  // (coarsened mode) for every record index.
  std::vector<std::map<std::string, uint64_t>> full_counts(params.k);
  std::vector<std::vector<std::vector<uint64_t>>> coord_counts(
      params.k, std::vector<std::vector<uint64_t>>(
                    report.coarsened ? coords : 0,
                    std::vector<uint64_t>(
                        report.coarsened ? marginal_domain(params) : 0, 0)));
  for (uint32_t ell = 1; ell <= params.k; ++ell) {
    Rng rng(seed + ell);
    for (uint64_t tr = 0; tr < trials; ++tr) {
      const auto rnd = schemes::sample_randomness(params, RecordId{ell}, rng);
      const auto qs = builder(params, RecordId{ell}, rnd);
      const auto& q = qs.per_server[server - 1];
      if (report.coarsened) {
        for (uint64_t c = 0; c < coords; ++c) {
          ++coord_counts[ell - 1][c][symbol_bin(params, q.symbols[c])];
        }
      } else {
        ++full_counts[ell - 1]
                     [schemes::serialize_query(params, q).to_string()];
      }
    }
  }

  // Chi-square of each record index's histogram against the pooled one.
  const auto chi_square_vs_pooled =
      [&](const std::function<uint64_t(uint32_t, size_t)>& count,
          size_t bins, uint32_t ell) {
        double stat = 0.0;
        uint64_t dof = 0;
        for (size_t b = 0; b < bins; ++b) {
          uint64_t pooled = 0;
          for (uint32_t e = 1; e <= params.k; ++e) pooled += count(e, b);
          if (pooled == 0) continue;
          ++dof;
          const double expected =
              double(pooled) / double(params.k);  // equal trials per ell
          const double observed = double(count(ell, b));
          stat += (observed - expected) * (observed - expected) / expected;
        }
        return chi_square_p_value(stat, dof == 0 ? 0 : dof - 1);
      };

  report.p_values.resize(params.k, 1.0);
  if (report.coarsened) {
    for (uint32_t ell = 1; ell <= params.k; ++ell) {
      double min_p = 1.0;
      for (uint64_t c = 0; c < coords; ++c) {
        const double p = chi_square_vs_pooled(
            [&](uint32_t e, size_t b) { return coord_counts[e - 1][c][b]; },
            marginal_domain(params), ell);
        min_p = std::min(min_p, p);
      }
      report.p_values[ell - 1] = min_p;
    }
  } else {
    // Shared bin index over every string seen in any histogram.
    std::vector<std::string> bins;
    for (const auto& m : full_counts) {
      for (const auto& [key, cnt] : m) bins.push_back(key);
    }
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    for (uint32_t ell = 1; ell <= params.k; ++ell) {
      report.p_values[ell - 1] = chi_square_vs_pooled(
          [&](uint32_t e, size_t b) {
            const auto it = full_counts[e - 1].find(bins[b]);
            return it == full_counts[e - 1].end() ? uint64_t(0) : it->second;
          },
          bins.size(), ell);
    }
  }

  const double min_p =
      *std::min_element(report.p_values.begin(), report.p_values.end());
  report.pass = !report.inconclusive && min_p >= report.threshold;

  std::ostringstream os;
  os << (report.coarsened ? "per-coordinate marginals" : "full query")
     << ", min p=" << min_p << ", threshold=" << report.threshold;
  if (report.inconclusive) {
    os << "; INCONCLUSIVE: need at least " << 100 * feature_size
       << " trials per record";
  }
  report.detail = os.str();
  return report;
}

uint64_t lower_bound_download(uint64_t n, uint64_t k, uint64_t R) {
  if (n < 1 || k < 1 || R < 1) throw ParamError("n, k, R must be positive");
  if (k == 1) return R;
  uint64_t bound = R + 1;
  if (n >= 2) {
    const uint64_t needed_k = (R + n - 2) / (n - 1) + 1;
    if (k >= needed_k) {
      bound = std::max(bound, (n * R + n - 2) / (n - 1));
    }
  }
  return bound;
}

Rational alpha_upper_bound(uint64_t k, uint64_t R) {
  if (k < 3) {
    throw ParamError("the silent-server probability bound requires k >= 3");
  }
  return Rational(BigInt(R + 1), BigInt(k) * R + 1);
}

Rational optimal_rate_download(uint64_t n, uint64_t k, uint64_t R) {
  if (n < 2) throw ParamError("n must be at least 2");
  const Rational nk = pow_rational(n, k);
  return (1 - 1 / nk) * Rational(BigInt(n) * R, BigInt(n) - 1);
}

BoundsReport bounds_report(uint64_t n, uint64_t k, uint64_t R) {
  BoundsReport report;
  report.lower_bound_bits = lower_bound_download(n, k, R);
  report.optimal_rate_download_bits = optimal_rate_download(n, k, R);
  if (k >= 3) report.alpha_upper = alpha_upper_bound(k, R);
  return report;
}

Rational empirical_alpha_exhaustive(const SchemeParams& params) {
  params.validate();
  if (params.scheme != SchemeId::Con1) {
    throw ParamError("empirical alpha is defined for con1 in skip-zero mode");
  }
  const auto space = schemes::randomness_space_size(params);
  if (!space || *space > (uint64_t(1) << 24)) {
    throw ParamError("randomness space too large for exhaustive alpha");
  }
  // A run downloads exactly R bits iff some server's coefficient array is
  // all zero; at most one server can be silent at a time.
  uint64_t silent_runs = 0;
  for (uint32_t ell = 1; ell <= params.k; ++ell) {
    for (uint64_t idx = 0; idx < *space; ++idx) {
      const auto rnd =
          schemes::randomness_from_index(params, RecordId{ell}, idx);
      const auto qs = schemes::queries_from(params, RecordId{ell}, rnd);
      for (const auto& q : qs.per_server) {
        if (schemes::query_is_all_zero(q)) {
          ++silent_runs;
          break;
        }
      }
    }
  }
  return Rational(BigInt(silent_runs), BigInt(params.k) * *space);
}

Rational empirical_alpha_sampled(const SchemeParams& params, uint64_t trials,
                                 uint64_t seed) {
  params.validate();
  if (params.scheme != SchemeId::Con1) {
    throw ParamError("empirical alpha is defined for con1 in skip-zero mode");
  }
  if (trials == 0) throw ParamError("trials must be positive");
  Rng rng(seed);
  uint64_t silent_runs = 0;
  for (uint64_t tr = 0; tr < trials; ++tr) {
    const RecordId ell{uint32_t(rng.uniform(params.k)) + 1};
    const auto qs = schemes::gen_query(params, ell, rng);
    for (const auto& q : qs.per_server) {
      if (schemes::query_is_all_zero(q)) {
        ++silent_runs;
        break;
      }
    }
  }
  return Rational(BigInt(silent_runs), BigInt(trials));
}

uint64_t measured_worst_download(const SchemeParams& params,
                                 const EnumerationLimits& limits) {
  params.validate();
  Rng rng(limits.seed);
  const Database db = random_database(params.k, params.record_bits, rng);
  const auto storages = schemes::encode(params, db);

  const auto space = schemes::randomness_space_size(params);
  const bool exhaustive =
      space.has_value() && *space * params.k <= limits.max_total_runs;
  const uint64_t count = exhaustive ? *space : limits.sampled_randomness;

  uint64_t worst = 0;
  for (uint32_t ell = 1; ell <= params.k; ++ell) {
    for (uint64_t i = 0; i < count; ++i) {
      schemes::Randomness rnd;
      if (exhaustive) {
        rnd = schemes::randomness_from_index(params, RecordId{ell}, i);
      } else {
        Rng sample_rng(limits.seed + i * 1315423911ull + ell);
        rnd = schemes::sample_randomness(params, RecordId{ell}, sample_rng);
      }
      const auto qs = schemes::queries_from(params, RecordId{ell}, rnd);
      uint64_t total = 0;
      for (uint32_t sid = 1; sid <= params.n; ++sid) {
        total += schemes::answer(params, storages[sid - 1],
                                 qs.per_server[sid - 1])
                     .bits.size();
      }
      worst = std::max(worst, total);
    }
  }
  return worst;
}

Rational mean_download_exhaustive(const SchemeParams& params,
                                  bool skip_zero) {
  params.validate();
  const auto space = schemes::randomness_space_size(params);
  if (!space || *space > (uint64_t(1) << 22)) {
    throw ParamError("randomness space too large for an exhaustive mean");
  }
  Rng rng(7);
  const Database db = random_database(params.k, params.record_bits, rng);
  const auto storages = schemes::encode(params, db);

  BigInt total_bits = 0;
  for (uint32_t ell = 1; ell <= params.k; ++ell) {
    for (uint64_t idx = 0; idx < *space; ++idx) {
      const auto rnd =
          schemes::randomness_from_index(params, RecordId{ell}, idx);
      const auto qs = schemes::queries_from(params, RecordId{ell}, rnd);
      for (uint32_t sid = 1; sid <= params.n; ++sid) {
        total_bits += schemes::answer(params, storages[sid - 1],
                                      qs.per_server[sid - 1], skip_zero)
                          .bits.size();
      }
    }
  }
  return Rational(total_bits, BigInt(params.k) * *space);
}

}  // namespace pir::verify
