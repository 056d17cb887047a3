#include "pir/wire.hpp"

#include <algorithm>

#include "pir/errors.hpp"

namespace pir::net {

namespace {

Frame make_frame(MsgType type, SchemeId scheme, const BitString& bits) {
  if (bits.size() > kMaxPayloadBits) {
    throw ProtocolError("frame payload too large");
  }
  Frame f;
  f.type = type;
  f.scheme_id = uint8_t(scheme);
  f.payload_bit_len = uint32_t(bits.size());
  f.payload = bits.bytes();
  return f;
}

}  // namespace

Frame Frame::query(SchemeId scheme, const BitString& bits) {
  return make_frame(MsgType::Query, scheme, bits);
}

Frame Frame::response(SchemeId scheme, const BitString& bits) {
  return make_frame(MsgType::Response, scheme, bits);
}

Frame Frame::error(SchemeId scheme, ErrorReason reason,
                   std::string_view message) {
  Frame f;
  f.type = MsgType::Error;
  f.scheme_id = uint8_t(scheme);
  f.payload.push_back(uint8_t(reason));
  f.payload.insert(f.payload.end(), message.begin(), message.end());
  f.payload_bit_len = uint32_t(f.payload.size() * 8);
  return f;
}

BitString Frame::payload_bits() const {
  return BitString::from_bytes(payload, payload_bit_len);
}

std::vector<uint8_t> encode_frame(const Frame& f) {
  if (f.payload.size() != f.payload_bytes()) {
    throw ProtocolError("frame payload length mismatch");
  }
  std::vector<uint8_t> out(kFrameMagic.begin(), kFrameMagic.end());
  out.push_back(uint8_t(f.type));
  out.push_back(f.scheme_id);
  for (int i = 3; i >= 0; --i) {
    out.push_back(uint8_t(f.payload_bit_len >> (8 * i)));
  }
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

std::optional<FrameHeader> parse_frame_header(
    std::span<const uint8_t, kFrameHeaderBytes> bytes) {
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), bytes.begin())) {
    return std::nullopt;
  }
  const uint8_t type = bytes[4];
  if (type < uint8_t(MsgType::Query) || type > uint8_t(MsgType::Error)) {
    throw ProtocolError("unknown frame type");
  }
  FrameHeader h;
  h.type = MsgType(type);
  h.scheme_id = bytes[5];
  h.payload_bit_len = 0;
  for (int i = 0; i < 4; ++i) {
    h.payload_bit_len = (h.payload_bit_len << 8) | bytes[6 + i];
  }
  if (h.payload_bit_len > kMaxPayloadBits) {
    throw ProtocolError("frame payload too large");
  }
  return h;
}

Frame decode_frame(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) {
    throw ProtocolError("frame truncated");
  }
  const auto header =
      parse_frame_header(bytes.first<kFrameHeaderBytes>());
  if (!header) throw ProtocolError("bad frame magic");
  if (bytes.size() != kFrameHeaderBytes + header->payload_bytes()) {
    throw ProtocolError("frame length mismatch");
  }
  Frame f;
  f.type = header->type;
  f.scheme_id = header->scheme_id;
  f.payload_bit_len = header->payload_bit_len;
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

}  // namespace pir::net
