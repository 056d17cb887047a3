#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pir/bitstring.hpp"
#include "pir/rng.hpp"

namespace pir {

// 1-based index of the record a user retrieves.
struct RecordId {
  uint32_t value = 1;
};

// k records of exactly R bits each.
struct Database {
  uint32_t record_count = 0;  // k
  uint64_t record_bits = 0;   // R
  std::vector<BitString> records;

  const BitString& record(RecordId id) const;
};

Database make_database(uint32_t k, uint64_t record_bits,
                       std::vector<BitString> records);
Database random_database(uint32_t k, uint64_t record_bits, Rng& rng);

// The index'th database of the 2^(k*R) possible ones, record bits drawn
// MSB-first from the index. Used by exhaustive enumeration; requires
// k*R <= 63.
Database database_from_index(uint32_t k, uint64_t record_bits, uint64_t index);

// PIRDB1 container: magic "PIRDB1", k as u32 big-endian, R as u64 big-endian,
// then the k*R record bits packed MSB-first and zero-padded to a byte.
std::vector<uint8_t> serialize_database(const Database& db);
Database parse_database(const std::vector<uint8_t>& bytes);

Database load_database(const std::string& path);
void save_database(const Database& db, const std::string& path);

}  // namespace pir
