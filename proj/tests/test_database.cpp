#include "pir/database.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "pir/errors.hpp"

using namespace pir;

TEST_CASE("database save/load round-trip") {
  const Database db = make_database(
      2, 3,
      {BitString::from_string("101"), BitString::from_string("110")});
  const auto path =
      (std::filesystem::temp_directory_path() / "pirdb_roundtrip.pirdb")
          .string();
  save_database(db, path);
  const Database back = load_database(path);
  std::remove(path.c_str());
  REQUIRE(back.record_count == 2);
  REQUIRE(back.record_bits == 3);
  CHECK(back.records[0] == db.records[0]);
  CHECK(back.records[1] == db.records[1]);
}

TEST_CASE("database byte layout") {
  const Database db = make_database(
      2, 3,
      {BitString::from_string("101"), BitString::from_string("110")});
  const auto bytes = serialize_database(db);
  // magic + u32 k + u64 R + ceil(6/8) payload bytes
  REQUIRE(bytes.size() == 6 + 4 + 8 + 1);
  CHECK(bytes[0] == 'P');
  CHECK(bytes[5] == '1');
  CHECK(bytes[9] == 2);    // k, big-endian
  CHECK(bytes[17] == 3);   // R, big-endian
  CHECK(bytes[18] == 0xB8);  // 101110 padded with two zero bits
  CHECK(parse_database(bytes).records == db.records);
}

TEST_CASE("database format errors") {
  const Database db = make_database(
      2, 8,
      {BitString::from_string("10110010"), BitString::from_string("01011100")});
  auto bytes = serialize_database(db);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(parse_database(bad_magic), FormatError);

  // Declares k=2, R=8 but carries a single payload byte.
  auto truncated = bytes;
  truncated.resize(6 + 4 + 8 + 1);
  CHECK_THROWS_AS(parse_database(truncated), FormatError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(parse_database(trailing), FormatError);

  auto zero_k = bytes;
  for (int i = 6; i < 10; ++i) zero_k[i] = 0;
  CHECK_THROWS_AS(parse_database(zero_k), FormatError);

  auto zero_r = bytes;
  for (int i = 10; i < 18; ++i) zero_r[i] = 0;
  CHECK_THROWS_AS(parse_database(zero_r), FormatError);
}

TEST_CASE("make_database validates shapes") {
  CHECK_THROWS_AS(make_database(2, 3, {BitString::from_string("101")}),
                  ParamError);
  CHECK_THROWS_AS(
      make_database(1, 3, {BitString::from_string("10")}), ParamError);
  CHECK_THROWS_AS(make_database(0, 3, {}), ParamError);
}

TEST_CASE("database_from_index enumerates all databases") {
  // k=2, R=2: 16 databases, each bit pattern hit exactly once.
  std::set<std::string> seen;
  for (uint64_t idx = 0; idx < 16; ++idx) {
    const Database db = database_from_index(2, 2, idx);
    seen.insert(db.records[0].to_string() + db.records[1].to_string());
  }
  CHECK(seen.size() == 16);
  CHECK_THROWS_AS(database_from_index(8, 8, 0), ParamError);
}
