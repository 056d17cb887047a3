#include "pir/bitstring.hpp"

#include <bit>

#include "pir/errors.hpp"

namespace pir {

BitString BitString::from_string(std::string_view s) {
  BitString out(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      out.set_bit(i, true);
    } else if (s[i] != '0') {
      throw ParamError("bit string must contain only '0' and '1'");
    }
  }
  return out;
}

BitString BitString::from_bytes(std::span<const uint8_t> bytes, size_t nbits) {
  if (bytes.size() != (nbits + 7) / 8) {
    throw ParamError("byte buffer length does not match declared bit length");
  }
  BitString out;
  out.nbits_ = nbits;
  out.bytes_.assign(bytes.begin(), bytes.end());
  out.mask_padding();
  return out;
}

std::string BitString::to_string() const {
  std::string s(nbits_, '0');
  for (size_t i = 0; i < nbits_; ++i) {
    if (bit(i)) s[i] = '1';
  }
  return s;
}

bool BitString::bit(size_t i) const {
  if (i >= nbits_) throw ParamError("bit index out of range");
  return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
}

void BitString::set_bit(size_t i, bool value) {
  if (i >= nbits_) throw ParamError("bit index out of range");
  const uint8_t mask = uint8_t(1) << (7 - (i & 7));
  if (value) {
    bytes_[i >> 3] |= mask;
  } else {
    bytes_[i >> 3] &= uint8_t(~mask);
  }
}

BitString& BitString::operator^=(const BitString& other) {
  if (nbits_ != other.nbits_) {
    throw ParamError("xor requires equal bit lengths");
  }
  for (size_t i = 0; i < bytes_.size(); ++i) {
    bytes_[i] ^= other.bytes_[i];
  }
  return *this;
}

void BitString::append_bit(bool value) {
  if (nbits_ % 8 == 0) bytes_.push_back(0);
  ++nbits_;
  if (value) set_bit(nbits_ - 1, true);
}

void BitString::append(const BitString& other) {
  const size_t off = nbits_ % 8;
  if (off == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    nbits_ += other.nbits_;
    return;
  }
  // Every appended byte straddles two destination bytes.
  for (size_t i = 0; i < other.bytes_.size(); ++i) {
    const uint8_t b = other.bytes_[i];
    bytes_.back() |= uint8_t(b >> off);
    bytes_.push_back(uint8_t(b << (8 - off)));
  }
  nbits_ += other.nbits_;
  bytes_.resize((nbits_ + 7) / 8);
  mask_padding();
}

BitString BitString::slice(size_t pos, size_t len) const {
  if (pos + len > nbits_) throw ParamError("slice out of range");
  BitString out(len);
  const size_t sh = pos % 8;
  const size_t first = pos / 8;
  if (sh == 0) {
    for (size_t i = 0; i < out.bytes_.size(); ++i) {
      out.bytes_[i] = bytes_[first + i];
    }
  } else {
    for (size_t i = 0; i < out.bytes_.size(); ++i) {
      uint8_t b = uint8_t(bytes_[first + i] << sh);
      if (first + i + 1 < bytes_.size()) {
        b |= uint8_t(bytes_[first + i + 1] >> (8 - sh));
      }
      out.bytes_[i] = b;
    }
  }
  out.mask_padding();
  return out;
}

bool BitString::is_all_zero() const {
  for (uint8_t b : bytes_) {
    if (b != 0) return false;
  }
  return true;
}

void BitString::mask_padding() {
  const size_t tail = nbits_ % 8;
  if (tail != 0 && !bytes_.empty()) {
    bytes_.back() &= uint8_t(0xFF << (8 - tail));
  }
}

std::vector<BitString> split_into_blocks(const BitString& x, size_t m) {
  if (m < 1) throw ParamError("block count must be at least 1");
  if (x.size() % m != 0) {
    throw ParamError("block count must divide the bit length");
  }
  const size_t blk = x.size() / m;
  std::vector<BitString> out;
  out.reserve(m);
  for (size_t b = 0; b < m; ++b) {
    out.push_back(x.slice(b * blk, blk));
  }
  return out;
}

size_t symbol_width(uint64_t modulus) {
  if (modulus < 2) throw ParamError("symbol modulus must be at least 2");
  return std::bit_width(modulus - 1);
}

BitString pack_symbols(std::span<const uint64_t> values, uint64_t modulus) {
  const size_t w = symbol_width(modulus);
  BitString out(values.size() * w);
  size_t pos = 0;
  for (uint64_t v : values) {
    if (v >= modulus) throw ParamError("symbol value out of range");
    for (size_t b = 0; b < w; ++b, ++pos) {
      if ((v >> (w - 1 - b)) & 1) out.set_bit(pos, true);
    }
  }
  return out;
}

std::vector<uint64_t> unpack_symbols(const BitString& bits, uint64_t modulus,
                                     size_t count) {
  const size_t w = symbol_width(modulus);
  if (bits.size() != count * w) {
    throw ParamError("bit length does not match symbol count");
  }
  std::vector<uint64_t> out(count, 0);
  size_t pos = 0;
  for (size_t i = 0; i < count; ++i) {
    uint64_t v = 0;
    for (size_t b = 0; b < w; ++b, ++pos) {
      v = (v << 1) | uint64_t(bits.bit(pos));
    }
    if (v >= modulus) throw ParamError("decoded symbol out of range");
    out[i] = v;
  }
  return out;
}

}  // namespace pir
