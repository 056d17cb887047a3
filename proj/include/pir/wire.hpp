#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pir/bitstring.hpp"
#include "pir/params.hpp"

namespace pir::net {

// One frame per query and per response:
//   magic "PIR1" | msg_type u8 | scheme_id u8 | payload_bit_len u32 BE |
//   payload, ceil(bits/8) bytes, MSB-first, zero padded.
// Accounting always uses payload_bit_len, never the padded byte count.

inline constexpr std::array<uint8_t, 4> kFrameMagic = {'P', 'I', 'R', '1'};
inline constexpr size_t kFrameHeaderBytes = 10;
inline constexpr uint32_t kMaxPayloadBits = uint32_t(1) << 30;

enum class MsgType : uint8_t {
  Query = 1,
  Response = 2,
  Error = 3,
};

enum class ErrorReason : uint8_t {
  MalformedFrame = 1,
  SchemeMismatch = 2,
  BadQuery = 3,
  Internal = 4,
};

struct Frame {
  MsgType type{};
  uint8_t scheme_id = 0;
  uint32_t payload_bit_len = 0;
  std::vector<uint8_t> payload;

  static Frame query(SchemeId scheme, const BitString& bits);
  static Frame response(SchemeId scheme, const BitString& bits);
  // Error payload: one reason byte followed by an ASCII message.
  static Frame error(SchemeId scheme, ErrorReason reason,
                     std::string_view message);

  BitString payload_bits() const;
  size_t payload_bytes() const { return (size_t(payload_bit_len) + 7) / 8; }
};

struct FrameHeader {
  MsgType type{};
  uint8_t scheme_id = 0;
  uint32_t payload_bit_len = 0;

  size_t payload_bytes() const { return (size_t(payload_bit_len) + 7) / 8; }
};

std::vector<uint8_t> encode_frame(const Frame& f);

// Header parse; nullopt means the magic did not match (the peer is not
// speaking this protocol and the connection should be dropped). Other
// malformed headers throw ProtocolError.
std::optional<FrameHeader> parse_frame_header(
    std::span<const uint8_t, kFrameHeaderBytes> bytes);

// Whole-buffer decode, used by tests and by in-memory paths.
Frame decode_frame(std::span<const uint8_t> bytes);

}  // namespace pir::net
