#include "pir/wire.hpp"

#include <random>

#include "doctest.h"
#include "pir/errors.hpp"

using namespace pir;
using namespace pir::net;

TEST_CASE("frame encode/decode round-trip") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    const size_t len = rng() % 70;
    BitString bits(len);
    for (size_t i = 0; i < len; ++i) bits.set_bit(i, rng() & 1);
    const Frame f = Frame::query(SchemeId::Con3, bits);
    const auto bytes = encode_frame(f);
    CHECK(bytes.size() == kFrameHeaderBytes + (len + 7) / 8);
    const Frame back = decode_frame(bytes);
    CHECK(back.type == MsgType::Query);
    CHECK(back.scheme_id == uint8_t(SchemeId::Con3));
    CHECK(back.payload_bit_len == len);
    CHECK(back.payload_bits() == bits);
  }
}

TEST_CASE("zero-length payload frame is legal") {
  const Frame f = Frame::response(SchemeId::Con1, BitString());
  const auto bytes = encode_frame(f);
  CHECK(bytes.size() == kFrameHeaderBytes);
  CHECK(decode_frame(bytes).payload_bit_len == 0);
}

TEST_CASE("frame rejects malformed input") {
  const Frame f = Frame::query(SchemeId::Chor2, BitString::from_string("101"));
  auto bytes = encode_frame(f);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_frame(bad_magic), ProtocolError);

  auto bad_type = bytes;
  bad_type[4] = 9;
  CHECK_THROWS_AS(decode_frame(bad_type), ProtocolError);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_frame(truncated), ProtocolError);

  CHECK_THROWS_AS(decode_frame(std::vector<uint8_t>{1, 2}), ProtocolError);
}

TEST_CASE("error frames carry a reason byte and message") {
  const Frame f = Frame::error(SchemeId::Con3, ErrorReason::SchemeMismatch,
                               "wrong scheme");
  const Frame back = decode_frame(encode_frame(f));
  REQUIRE(!back.payload.empty());
  CHECK(back.payload[0] == uint8_t(ErrorReason::SchemeMismatch));
  CHECK(std::string(back.payload.begin() + 1, back.payload.end()) ==
        "wrong scheme");
}
