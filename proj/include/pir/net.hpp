#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pir/schemes.hpp"
#include "pir/transcript.hpp"

namespace pir::net {

struct Endpoint {
  std::string host;
  uint16_t port = 0;
};

// Parses "host1:p1,host2:p2,...".
std::vector<Endpoint> parse_endpoints(const std::string& spec);

// TCP daemon holding one server's storage. Stateless between requests: every
// query frame is answered from the shared read-only storage, concurrent
// connections each get an independent handler thread.
class Daemon {
 public:
  Daemon(SchemeParams params, schemes::ServerStorage storage,
         bool skip_zero = false);
  ~Daemon();

  Daemon(const Daemon&) = delete;
  Daemon& operator=(const Daemon&) = delete;

  // Binds and starts accepting. port 0 picks an ephemeral port; the bound
  // port is available from port() afterwards.
  void start(const std::string& host, uint16_t port);
  void stop();

  uint16_t port() const { return port_; }

  // Blocks until stop() is called from another thread (CLI serve loop).
  void wait();

 private:
  void accept_loop();
  void handle_connection(int fd);

  SchemeParams params_;
  schemes::ServerStorage storage_;
  bool skip_zero_ = false;

  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex mu_;
  std::vector<std::thread> handlers_;
  std::set<int> open_fds_;
};

struct FetchResult {
  BitString record;
  TranscriptReport transcript;
};

// Queries all n daemons concurrently and reconstructs. Bit-identical to the
// local run with the same seed. Any unreachable or misbehaving daemon aborts
// the retrieval with a NetError naming the server; there is no partial
// reconstruction.
FetchResult fetch_record(const std::vector<Endpoint>& endpoints,
                         const SchemeParams& params, RecordId ell,
                         uint64_t seed);

}  // namespace pir::net
