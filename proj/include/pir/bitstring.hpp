#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pir {

// Bit vector packed MSB-first: bit 0 is the first (leftmost) bit and lives in
// the most significant bit of byte 0. Unused padding bits past size() are kept
// zero, so byte-level equality and XOR agree with bit-level semantics.
//
// This is the carrier for records, blocks, serialized queries and response
// payloads; complexity accounting always counts size() in bits, never the
// padded byte length.
class BitString {
 public:
  BitString() = default;
  explicit BitString(size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

  // Parses a string of '0'/'1' characters.
  static BitString from_string(std::string_view s);
  // Wraps packed bytes; trailing padding bits are masked to zero.
  static BitString from_bytes(std::span<const uint8_t> bytes, size_t nbits);

  std::string to_string() const;

  size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(size_t i) const;
  void set_bit(size_t i, bool value);

  // Bitwise XOR. Only defined for equal lengths.
  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) {
    a ^= b;
    return a;
  }

  bool operator==(const BitString& other) const = default;

  void append_bit(bool value);
  void append(const BitString& other);

  // Contiguous sub-string of `len` bits starting at bit `pos`.
  BitString slice(size_t pos, size_t len) const;

  bool is_all_zero() const;

  // Packed representation, MSB-first, padding bits zero.
  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  void mask_padding();

  size_t nbits_ = 0;
  std::vector<uint8_t> bytes_;
};

// Splits x into m contiguous blocks in index order (block 1 first); m must
// divide x.size(). Concatenating the result recovers x.
std::vector<BitString> split_into_blocks(const BitString& x, size_t m);

// Width of one symbol modulo m, i.e. ceil(log2 m). Requires m >= 2.
size_t symbol_width(uint64_t modulus);

// Encodes each value in exactly symbol_width(modulus) bits, big-endian,
// concatenated. Values must lie in {0..modulus-1}.
BitString pack_symbols(std::span<const uint64_t> values, uint64_t modulus);

// Inverse of pack_symbols for a known symbol count. Rejects inputs whose
// length is not count*width or that decode to a symbol >= modulus.
std::vector<uint64_t> unpack_symbols(const BitString& bits, uint64_t modulus,
                                     size_t count);

}  // namespace pir
