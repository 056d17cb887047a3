#include "pir/database.hpp"

#include <fstream>

#include "pir/errors.hpp"

namespace pir {

namespace {

constexpr char kMagic[6] = {'P', 'I', 'R', 'D', 'B', '1'};

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u64_be(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

}  // namespace

const BitString& Database::record(RecordId id) const {
  if (id.value < 1 || id.value > record_count) {
    throw ParamError("record index out of range");
  }
  return records[id.value - 1];
}

Database make_database(uint32_t k, uint64_t record_bits,
                       std::vector<BitString> records) {
  if (k < 1 || record_bits < 1) {
    throw ParamError("database needs k >= 1 and R >= 1");
  }
  if (records.size() != k) {
    throw ParamError("record count does not match k");
  }
  for (const BitString& r : records) {
    if (r.size() != record_bits) {
      throw ParamError("every record must be exactly R bits");
    }
  }
  return Database{k, record_bits, std::move(records)};
}

Database random_database(uint32_t k, uint64_t record_bits, Rng& rng) {
  std::vector<BitString> recs;
  recs.reserve(k);
  for (uint32_t i = 0; i < k; ++i) {
    BitString r(record_bits);
    for (uint64_t b = 0; b < record_bits; ++b) r.set_bit(b, rng.coin());
    recs.push_back(std::move(r));
  }
  return make_database(k, record_bits, std::move(recs));
}

Database database_from_index(uint32_t k, uint64_t record_bits,
                             uint64_t index) {
  const uint64_t total = uint64_t(k) * record_bits;
  if (total > 63) throw ParamError("database space too large to enumerate");
  std::vector<BitString> recs;
  recs.reserve(k);
  uint64_t pos = 0;
  for (uint32_t i = 0; i < k; ++i) {
    BitString r(record_bits);
    for (uint64_t b = 0; b < record_bits; ++b, ++pos) {
      r.set_bit(b, (index >> (total - 1 - pos)) & 1);
    }
    recs.push_back(std::move(r));
  }
  return make_database(k, record_bits, std::move(recs));
}

std::vector<uint8_t> serialize_database(const Database& db) {
  std::vector<uint8_t> out(kMagic, kMagic + sizeof(kMagic));
  put_u32_be(out, db.record_count);
  put_u64_be(out, db.record_bits);
  BitString all;
  for (const BitString& r : db.records) all.append(r);
  out.insert(out.end(), all.bytes().begin(), all.bytes().end());
  return out;
}

Database parse_database(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 12 ||
      !std::equal(kMagic, kMagic + sizeof(kMagic), bytes.begin())) {
    throw FormatError("not a PIRDB1 file");
  }
  size_t pos = sizeof(kMagic);
  uint32_t k = 0;
  for (int i = 0; i < 4; ++i) k = (k << 8) | bytes[pos++];
  uint64_t record_bits = 0;
  for (int i = 0; i < 8; ++i) record_bits = (record_bits << 8) | bytes[pos++];
  if (k == 0 || record_bits == 0) {
    throw FormatError("PIRDB1 declares an empty database");
  }
  const uint64_t total_bits = uint64_t(k) * record_bits;
  const uint64_t payload_bytes = (total_bits + 7) / 8;
  if (bytes.size() - pos != payload_bytes) {
    throw FormatError(bytes.size() - pos < payload_bytes
                          ? "PIRDB1 payload truncated"
                          : "PIRDB1 payload has trailing bytes");
  }
  BitString all = BitString::from_bytes(
      std::span<const uint8_t>(bytes.data() + pos, payload_bytes), total_bits);
  std::vector<BitString> recs = split_into_blocks(all, k);
  return make_database(k, record_bits, std::move(recs));
}

Database load_database(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open database file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return parse_database(bytes);
}

void save_database(const Database& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  const std::vector<uint8_t> bytes = serialize_database(db);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace pir
