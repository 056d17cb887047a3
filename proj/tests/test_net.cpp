#include "pir/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <memory>

#include "doctest.h"
#include "pir/errors.hpp"
#include "pir/verify.hpp"
#include "pir/wire.hpp"

using namespace pir;
using namespace pir::net;

namespace {

struct Cluster {
  std::vector<std::unique_ptr<Daemon>> daemons;
  std::vector<Endpoint> endpoints;
};

Cluster start_cluster(const SchemeParams& params, const Database& db,
                      bool skip_zero = false) {
  Cluster c;
  const auto storages = schemes::encode(params, db);
  for (uint32_t sid = 1; sid <= params.n; ++sid) {
    auto d = std::make_unique<Daemon>(params, storages[sid - 1], skip_zero);
    d->start("127.0.0.1", 0);
    c.endpoints.push_back(Endpoint{"127.0.0.1", d->port()});
    c.daemons.push_back(std::move(d));
  }
  return c;
}

int connect_raw(uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) ==
          0);
  return fd;
}

std::optional<Frame> exchange(int fd, const std::vector<uint8_t>& bytes) {
  REQUIRE(::write(fd, bytes.data(), bytes.size()) ==
          ssize_t(bytes.size()));
  std::vector<uint8_t> in;
  uint8_t buf[512];
  for (;;) {
    const ssize_t n = ::read(fd, buf, sizeof(buf));
    if (n <= 0) break;
    in.insert(in.end(), buf, buf + n);
    if (in.size() >= kFrameHeaderBytes) {
      const auto header = parse_frame_header(
          std::span<const uint8_t, kFrameHeaderBytes>(in.data(),
                                                      kFrameHeaderBytes));
      if (header &&
          in.size() >= kFrameHeaderBytes + header->payload_bytes()) {
        break;
      }
    }
  }
  if (in.empty()) return std::nullopt;
  return decode_frame(in);
}

}  // namespace

TEST_CASE("endpoint parsing") {
  const auto eps = parse_endpoints("localhost:9001,10.0.0.1:80");
  REQUIRE(eps.size() == 2);
  CHECK(eps[0].host == "localhost");
  CHECK(eps[0].port == 9001);
  CHECK(eps[1].host == "10.0.0.1");
  CHECK_THROWS_AS(parse_endpoints("nohost"), ParamError);
  CHECK_THROWS_AS(parse_endpoints("host:0"), ParamError);
}

TEST_CASE("local and remote runs are bit-identical") {
  Rng rng(12);
  const Database db = random_database(2, 4, rng);
  const SchemeParams cases[] = {
      SchemeParams::chor2(2, 4),
      SchemeParams::con3(3, 2, 4),
      SchemeParams::con5(2, 2, 4),
  };
  for (const auto& params : cases) {
    Cluster cluster = start_cluster(params, db);
    for (uint32_t ell = 1; ell <= params.k; ++ell) {
      const uint64_t seed = 1000 + ell;
      const auto local =
          verify::run_protocol(params, db, RecordId{ell}, seed);
      const auto remote =
          fetch_record(cluster.endpoints, params, RecordId{ell}, seed);
      CHECK(remote.record == local.record);
      CHECK(remote.transcript == local.transcript);
    }
  }
}

TEST_CASE("skip-zero omissions travel as zero-length frames") {
  const auto params = SchemeParams::con1(2, 2);
  const Database db = database_from_index(2, 2, 13);
  Cluster cluster = start_cluster(params, db, /*skip_zero=*/true);
  // Find a seed whose coefficient array is all zero somewhere.
  for (uint64_t seed = 0; seed < 512; ++seed) {
    Rng rng(seed);
    const auto qs = schemes::gen_query(params, RecordId{1}, rng);
    bool has_zero = false;
    for (const auto& q : qs.per_server) {
      has_zero = has_zero || schemes::query_is_all_zero(q);
    }
    if (!has_zero) continue;
    const auto remote =
        fetch_record(cluster.endpoints, params, RecordId{1}, seed);
    CHECK(remote.record == db.record(RecordId{1}));
    CHECK(remote.transcript.total_download() == params.record_bits);
    return;
  }
  FAIL("no all-zero query in the seed range");
}

TEST_CASE("a stopped daemon fails the whole retrieval by name") {
  const auto params = SchemeParams::con3(3, 2, 2);
  Rng rng(5);
  const Database db = random_database(2, 2, rng);
  Cluster cluster = start_cluster(params, db);
  cluster.daemons[1]->stop();
  try {
    fetch_record(cluster.endpoints, params, RecordId{1}, 3);
    FAIL("expected a NetError");
  } catch (const NetError& e) {
    CHECK(std::string(e.what()).find("server 2") != std::string::npos);
  }
}

TEST_CASE("daemons are stateless across repeated and interleaved queries") {
  const auto params = SchemeParams::con3(3, 2, 2);
  Rng rng(6);
  const Database db = random_database(2, 2, rng);
  Cluster cluster = start_cluster(params, db);

  Rng qrng(9);
  const auto qs = schemes::gen_query(params, RecordId{2}, qrng);
  const auto bytes = encode_frame(Frame::query(
      params.scheme, schemes::serialize_query(params, qs.per_server[0])));

  const int fd1 = connect_raw(cluster.endpoints[0].port);
  const int fd2 = connect_raw(cluster.endpoints[0].port);
  const auto r1 = exchange(fd1, bytes);
  const auto r2 = exchange(fd2, bytes);
  const auto r3 = exchange(fd1, bytes);  // same connection, second frame
  ::close(fd1);
  ::close(fd2);
  REQUIRE(r1.has_value());
  REQUIRE(r2.has_value());
  REQUIRE(r3.has_value());
  CHECK(r1->payload == r2->payload);
  CHECK(r1->payload == r3->payload);
  CHECK(r1->type == MsgType::Response);
}

TEST_CASE("bad magic closes the connection without a response") {
  const auto params = SchemeParams::chor2(2, 2);
  Rng rng(7);
  const Database db = random_database(2, 2, rng);
  Cluster cluster = start_cluster(params, db);

  const int fd = connect_raw(cluster.endpoints[0].port);
  std::vector<uint8_t> garbage = {'N', 'O', 'P', 'E', 1, 1, 0, 0, 0, 0};
  CHECK(!exchange(fd, garbage).has_value());
  ::close(fd);
}

TEST_CASE("scheme mismatch returns an error frame") {
  const auto params = SchemeParams::con3(3, 2, 2);
  Rng rng(8);
  const Database db = random_database(2, 2, rng);
  Cluster cluster = start_cluster(params, db);

  Rng qrng(1);
  const auto qs = schemes::gen_query(params, RecordId{1}, qrng);
  auto frame = Frame::query(params.scheme,
                            schemes::serialize_query(params, qs.per_server[0]));
  frame.scheme_id = uint8_t(SchemeId::Con6);
  const int fd = connect_raw(cluster.endpoints[0].port);
  const auto reply = exchange(fd, encode_frame(frame));
  ::close(fd);
  REQUIRE(reply.has_value());
  CHECK(reply->type == MsgType::Error);
  REQUIRE(!reply->payload.empty());
  CHECK(reply->payload[0] == uint8_t(ErrorReason::SchemeMismatch));
}

TEST_CASE("malformed query payload returns a bad-query error") {
  const auto params = SchemeParams::con3(3, 2, 2);
  Rng rng(9);
  const Database db = random_database(2, 2, rng);
  Cluster cluster = start_cluster(params, db);

  const Frame frame =
      Frame::query(params.scheme, BitString::from_string("1"));  // wrong size
  const int fd = connect_raw(cluster.endpoints[0].port);
  const auto reply = exchange(fd, encode_frame(frame));
  ::close(fd);
  REQUIRE(reply.has_value());
  CHECK(reply->type == MsgType::Error);
  REQUIRE(!reply->payload.empty());
  CHECK(reply->payload[0] == uint8_t(ErrorReason::BadQuery));
}
