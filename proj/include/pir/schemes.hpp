#pragma once

#include <cstdint>
#include <vector>

#include "pir/bitstring.hpp"
#include "pir/database.hpp"
#include "pir/params.hpp"
#include "pir/rational.hpp"
#include "pir/rng.hpp"

namespace pir::schemes {

// What one server holds. Replication schemes store the records verbatim in
// index order; con4 server (class r, merge group g) stores, record-major,
// the s-bit record blocks its group covers.
struct ServerStorage {
  uint32_t server_id = 0;  // 1..n
  BitString payload;
};

// The values a user samples for one retrieval, laid out per scheme:
//   chor2      fields = { alpha: k bits }
//   con1       fields = { alpha: k*R bits, row-major (record, bit) }
//   con2/3/4/6 fields = { a: k symbols }
//   con5       fields = { f_i values per component, for each i != ell
//                         ascending, then the part1 bijection values }
struct Randomness {
  std::vector<std::vector<uint64_t>> fields;

  bool operator==(const Randomness&) const = default;
};

// Private reconstruction state; never serialized, never sent.
struct UserState {
  RecordId ell;
  Randomness rnd;
};

// One server's query in symbol form. Serialization to wire bits is
// scheme-specific (serialize_query).
struct Query {
  std::vector<uint64_t> symbols;

  bool operator==(const Query&) const = default;
};

struct QuerySet {
  UserState user_state;
  std::vector<Query> per_server;  // exactly n entries, server 1 first
};

struct ResponsePayload {
  uint32_t server_id = 0;
  BitString bits;  // may be empty for a legal skip-zero omission
};

// Closed-form complexity of a parameter choice, logs rounded with
// ceil(log2 .). expected_download_bits reflects skip-zero operation for the
// schemes that support it and equals the worst case elsewhere.
struct SchemeProfile {
  uint64_t upload_bits = 0;
  uint64_t worst_download_bits = 0;
  Rational expected_download_bits;
  uint64_t total_storage_bits = 0;
  uint64_t per_server_storage_bits = 0;
};

// --- storage ---------------------------------------------------------------

std::vector<ServerStorage> encode(const SchemeParams& params,
                                  const Database& db);

// --- queries ---------------------------------------------------------------

// Per-server symbol count / serialized bit count; fixed by the parameters.
uint64_t query_symbol_count(const SchemeParams& params);
uint64_t query_bits(const SchemeParams& params);

// Full-length response bit count per server (skip-zero omissions aside).
uint64_t response_bits(const SchemeParams& params);

// Size of the randomness space behind one retrieval, when it fits in 64 bits
// and is therefore enumerable.
std::optional<uint64_t> randomness_space_size(const SchemeParams& params);

// The index'th point of the randomness space; bijective with {0..size-1}.
Randomness randomness_from_index(const SchemeParams& params, RecordId ell,
                                 uint64_t index);

Randomness sample_randomness(const SchemeParams& params, RecordId ell,
                             Rng& rng);

// Deterministic query construction from sampled values.
QuerySet queries_from(const SchemeParams& params, RecordId ell,
                      const Randomness& rnd);

QuerySet gen_query(const SchemeParams& params, RecordId ell, Rng& rng);

BitString serialize_query(const SchemeParams& params, const Query& q);
Query deserialize_query(const SchemeParams& params, const BitString& bits);

// True when every symbol is zero (the skip-zero trigger for con1/con3).
bool query_is_all_zero(const Query& q);

// Whether a zero-length response is a legal omission for this scheme/query.
bool omission_allowed(const SchemeParams& params, const Query& q);

// --- protocol --------------------------------------------------------------

ResponsePayload answer(const SchemeParams& params,
                       const ServerStorage& storage, const Query& q,
                       bool skip_zero = false);

BitString reconstruct(const SchemeParams& params, const UserState& state,
                      const std::vector<ResponsePayload>& responses);

SchemeProfile profile(const SchemeParams& params);

}  // namespace pir::schemes
