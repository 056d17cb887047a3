#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pir/database.hpp"
#include "pir/rational.hpp"
#include "pir/schemes.hpp"
#include "pir/transcript.hpp"

namespace pir::verify {

struct RunResult {
  BitString record;
  TranscriptReport transcript;
};

// One complete local protocol run: encode, generate queries from the seed,
// answer every server, reconstruct, and account every transmitted bit.
RunResult run_protocol(const SchemeParams& params, const Database& db,
                       RecordId ell, uint64_t seed, bool skip_zero = false);

// Builds queries from sampled values. The default is the real scheme;
// tests substitute a deliberately broken variant as a negative control.
using QueryBuilder = std::function<schemes::QuerySet(
    const SchemeParams&, RecordId, const schemes::Randomness&)>;

QueryBuilder standard_queries();
// Negative control: a con3 variant whose ell coordinate is sent as
// ell mod n instead of a_ell + r mod n, leaking the target record.
QueryBuilder leaky_con3_queries();

struct EnumerationLimits {
  uint64_t max_total_runs = uint64_t(1) << 20;
  uint64_t sampled_databases = 64;
  uint64_t sampled_randomness = 256;
  uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CorrectnessReport {
  bool pass = false;
  bool databases_exhaustive = false;
  bool randomness_exhaustive = false;
  uint64_t database_count = 0;   // enumerated or sampled
  uint64_t randomness_count = 0;
  uint64_t runs = 0;
  uint64_t failures = 0;
  std::string detail;  // mode description plus first failure, if any
};

// Iterates databases x records x randomness and checks every reconstruction
// exactly. Spaces beyond the limits are sampled and the downgrade is
// reported in the verdict, never silently.
CorrectnessReport check_correctness_exhaustive(
    const SchemeParams& params, const EnumerationLimits& limits = {});

// Exact pmf of the serialized query one server sees, by enumeration of the
// whole randomness space. Keys are the serialized bit patterns; counts are
// out of `total`. Throws ParamError when the space exceeds max_space,
// directing the caller to the statistical mode.
struct QueryDistribution {
  std::map<std::string, uint64_t> counts;
  uint64_t total = 0;

  bool operator==(const QueryDistribution&) const = default;
};

QueryDistribution exact_privacy_distribution(
    const SchemeParams& params, uint32_t server, RecordId ell,
    uint64_t max_space = uint64_t(1) << 20,
    const QueryBuilder& builder = standard_queries());

struct ExactPrivacyReport {
  bool pass = false;
  uint64_t space = 0;  // randomness space size per record index
  std::string detail;  // first mismatching (server, ell) pair
};

// Passes iff for every server the distribution is literally identical
// across all ell.
ExactPrivacyReport check_exact_privacy(
    const SchemeParams& params, uint64_t max_space = uint64_t(1) << 20,
    const QueryBuilder& builder = standard_queries());

struct StatisticalPrivacyReport {
  bool pass = false;
  bool inconclusive = false;   // undersampled support
  bool coarsened = false;      // per-coordinate marginals instead of the
                               // full serialized query
  uint64_t trials_per_record = 0;
  double threshold = 0.0;      // per-test significance after correction
  std::vector<double> p_values;  // per ell (min across coordinates when
                                 // coarsened)
  std::string detail;
};

// Chi-square goodness of fit of each record index's empirical query
// distribution against the pooled one.
StatisticalPrivacyReport statistical_privacy_test(
    const SchemeParams& params, uint32_t server, uint64_t trials,
    double significance, uint64_t seed,
    const QueryBuilder& builder = standard_queries());

// Best applicable download lower bound: R for k = 1, R+1 for k >= 2, and
// ceil(n/(n-1) R) once k >= ceil(R/(n-1)) + 1 with n >= 2.
uint64_t lower_bound_download(uint64_t n, uint64_t k, uint64_t R);

// (R+1)/(kR+1); requires k >= 3.
Rational alpha_upper_bound(uint64_t k, uint64_t R);

// (1 - 1/n^k) (n/(n-1)) R.
Rational optimal_rate_download(uint64_t n, uint64_t k, uint64_t R);

struct BoundsReport {
  uint64_t lower_bound_bits = 0;
  Rational optimal_rate_download_bits;
  std::optional<Rational> alpha_upper;  // only when k >= 3
};

BoundsReport bounds_report(uint64_t n, uint64_t k, uint64_t R);

// Fraction of (record, randomness) pairs where a skip-zero con1 run
// downloads exactly R bits. Exhaustive over the whole space.
Rational empirical_alpha_exhaustive(const SchemeParams& params);
Rational empirical_alpha_sampled(const SchemeParams& params, uint64_t trials,
                                 uint64_t seed);

// Max total download over enumerated (or sampled) randomness and all ell,
// without skip-zero.
uint64_t measured_worst_download(const SchemeParams& params,
                                 const EnumerationLimits& limits = {});

// Mean total download over the full randomness space and all ell; requires
// an enumerable space.
Rational mean_download_exhaustive(const SchemeParams& params, bool skip_zero);

}  // namespace pir::verify
