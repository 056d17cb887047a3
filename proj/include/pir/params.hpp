#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pir {

// The seven implemented schemes. Values double as the wire scheme_id byte.
enum class SchemeId : uint8_t {
  Chor2 = 1,  // classic 2-server XOR scheme
  Con1 = 2,   // R+1 servers, coefficient-array queries, 1-bit answers
  Con2 = 3,   // R+1 servers, Z_{R+1} symbol queries, 1-bit answers
  Con3 = 4,   // n servers, block-selector queries, R/(n-1)-bit answers
  Con4 = 5,   // t*(R/s)/merge servers, sub-block storage
  Con5 = 6,   // n servers, star-graph paired block combinations
  Con6 = 7,   // n servers, shifted parallel copies of Con3
};

std::string_view scheme_name(SchemeId scheme);
SchemeId scheme_from_name(std::string_view name);

// n^k, or nullopt on uint64 overflow.
std::optional<uint64_t> pow_u64(uint64_t base, uint32_t exp);

// Scheme identifier plus (n, k, R) and the Con4-specific block/class/merge
// parameters. Construct through the factories or make(); both validate the
// divisibility constraints and derive n where the scheme pins it.
struct SchemeParams {
  SchemeId scheme{};
  uint32_t n = 0;           // server count
  uint32_t k = 0;           // record count
  uint64_t record_bits = 0; // R
  uint64_t block_bits = 0;  // s   (Con4 only)
  uint32_t class_count = 0; // t   (Con4 only)
  uint32_t merge = 1;       // class-merge factor (Con4 only)

  static SchemeParams chor2(uint32_t k, uint64_t record_bits);
  static SchemeParams con1(uint32_t k, uint64_t record_bits);
  static SchemeParams con2(uint32_t k, uint64_t record_bits);
  static SchemeParams con3(uint32_t n, uint32_t k, uint64_t record_bits);
  static SchemeParams con4(uint32_t k, uint64_t record_bits,
                           uint64_t block_bits, uint32_t class_count,
                           uint32_t merge = 1);
  static SchemeParams con5(uint32_t n, uint32_t k, uint64_t record_bits);
  static SchemeParams con6(uint32_t n, uint32_t k, uint64_t record_bits);

  // Generic entry point for CLI flag handling. n may be 0 where the scheme
  // derives it (Chor2, Con1, Con2, Con4); a nonzero n must then agree.
  static SchemeParams make(SchemeId scheme, uint32_t n, uint32_t k,
                           uint64_t record_bits, uint64_t block_bits = 0,
                           uint32_t class_count = 0, uint32_t merge = 1);

  // Throws ParamError if any constraint fails.
  void validate() const;

  std::string describe() const;
};

}  // namespace pir
