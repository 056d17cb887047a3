#include "pir/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <future>

#include "pir/errors.hpp"
#include "pir/wire.hpp"

namespace pir::net {

namespace {

// Full-buffer IO helpers; 0-byte read means orderly EOF.
bool read_exact(int fd, uint8_t* buf, size_t len) {
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::read(fd, buf + done, len - done);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += size_t(n);
  }
  return true;
}

bool write_all(int fd, const uint8_t* buf, size_t len) {
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::write(fd, buf + done, len - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += size_t(n);
  }
  return true;
}

bool send_frame(int fd, const Frame& f) {
  const std::vector<uint8_t> bytes = encode_frame(f);
  return write_all(fd, bytes.data(), bytes.size());
}

// Reads one frame. Returns nullopt on EOF/IO failure or bad magic (the
// caller drops the connection in those cases).
std::optional<Frame> read_frame(int fd) {
  std::array<uint8_t, kFrameHeaderBytes> header_bytes;
  if (!read_exact(fd, header_bytes.data(), header_bytes.size())) {
    return std::nullopt;
  }
  const auto header = parse_frame_header(header_bytes);  // may throw
  if (!header) return std::nullopt;
  Frame f;
  f.type = header->type;
  f.scheme_id = header->scheme_id;
  f.payload_bit_len = header->payload_bit_len;
  f.payload.resize(header->payload_bytes());
  if (!f.payload.empty() &&
      !read_exact(fd, f.payload.data(), f.payload.size())) {
    return std::nullopt;
  }
  return f;
}

int connect_to(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  if (::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw NetError("cannot resolve " + ep.host);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw NetError("cannot connect to " + ep.host + ":" + port);
  }
  return fd;
}

}  // namespace

std::vector<Endpoint> parse_endpoints(const std::string& spec) {
  std::vector<Endpoint> out;
  size_t pos = 0;
  while (pos <= spec.size()) {
    const size_t comma = spec.find(',', pos);
    const std::string item =
        spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const size_t colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0 ||
        colon + 1 >= item.size()) {
      throw ParamError("endpoint must be host:port, got '" + item + "'");
    }
    Endpoint ep;
    ep.host = item.substr(0, colon);
    const unsigned long p = std::stoul(item.substr(colon + 1));
    if (p == 0 || p > 65535) throw ParamError("port out of range: " + item);
    ep.port = uint16_t(p);
    out.push_back(std::move(ep));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Daemon::Daemon(SchemeParams params, schemes::ServerStorage storage,
               bool skip_zero)
    : params_(std::move(params)),
      storage_(std::move(storage)),
      skip_zero_(skip_zero) {
  params_.validate();
  if (storage_.server_id < 1 || storage_.server_id > params_.n) {
    throw ParamError("storage server id out of range");
  }
}

Daemon::~Daemon() { stop(); }

void Daemon::start(const std::string& host, uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw NetError("socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("listen host must be an IPv4 address: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) <
      0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("bind failed on " + host + ":" + std::to_string(port));
  }
  if (::listen(listen_fd_, 64) < 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("listen failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  stopping_ = false;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Daemon::stop() {
  if (listen_fd_ < 0 && !accept_thread_.joinable()) return;
  stopping_ = true;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> handlers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    handlers.swap(handlers_);
  }
  for (std::thread& t : handlers) {
    if (t.joinable()) t.join();
  }
}

void Daemon::wait() {
  if (accept_thread_.joinable()) accept_thread_.join();
}

void Daemon::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) break;
      if (errno == EINTR) continue;
      break;
    }
    std::lock_guard<std::mutex> lock(mu_);
    open_fds_.insert(fd);
    handlers_.emplace_back([this, fd] {
      handle_connection(fd);
      std::lock_guard<std::mutex> inner(mu_);
      open_fds_.erase(fd);
    });
  }
}

void Daemon::handle_connection(int fd) {
  while (!stopping_) {
    std::optional<Frame> frame;
    try {
      frame = read_frame(fd);
    } catch (const ProtocolError& e) {
      send_frame(fd, Frame::error(params_.scheme,
                                  ErrorReason::MalformedFrame, e.what()));
      break;
    }
    if (!frame) break;  // EOF or bad magic: drop without a response
    if (frame->type != MsgType::Query) {
      send_frame(fd, Frame::error(params_.scheme, ErrorReason::MalformedFrame,
                                  "expected a query frame"));
      break;
    }
    if (frame->scheme_id != uint8_t(params_.scheme)) {
      send_frame(fd, Frame::error(params_.scheme, ErrorReason::SchemeMismatch,
                                  "daemon serves a different scheme"));
      break;
    }
    try {
      const schemes::Query q =
          schemes::deserialize_query(params_, frame->payload_bits());
      const schemes::ResponsePayload resp =
          schemes::answer(params_, storage_, q, skip_zero_);
      if (!send_frame(fd, Frame::response(params_.scheme, resp.bits))) break;
    } catch (const ProtocolError& e) {
      send_frame(fd,
                 Frame::error(params_.scheme, ErrorReason::BadQuery, e.what()));
      break;
    } catch (const std::exception& e) {
      send_frame(fd,
                 Frame::error(params_.scheme, ErrorReason::Internal, e.what()));
      break;
    }
  }
  ::close(fd);
}

FetchResult fetch_record(const std::vector<Endpoint>& endpoints,
                         const SchemeParams& params, RecordId ell,
                         uint64_t seed) {
  params.validate();
  if (endpoints.size() != params.n) {
    throw ParamError("need exactly one endpoint per server");
  }
  Rng rng(seed);
  const schemes::QuerySet qs = schemes::gen_query(params, ell, rng);

  TranscriptReport transcript;
  transcript.upload_bits.resize(params.n, 0);
  transcript.download_bits.resize(params.n, 0);
  std::vector<schemes::ResponsePayload> responses(params.n);

  const auto fetch_one = [&](uint32_t sid) {
    const BitString query_bits =
        schemes::serialize_query(params, qs.per_server[sid - 1]);
    const int fd = connect_to(endpoints[sid - 1]);
    const Frame out = Frame::query(params.scheme, query_bits);
    std::optional<Frame> in;
    if (send_frame(fd, out)) in = read_frame(fd);
    ::close(fd);
    if (!in) {
      throw NetError("server " + std::to_string(sid) + " (" +
                     endpoints[sid - 1].host + ":" +
                     std::to_string(endpoints[sid - 1].port) +
                     ") did not answer");
    }
    if (in->type == MsgType::Error) {
      std::string msg(in->payload.begin() +
                          (in->payload.empty() ? 0 : 1),
                      in->payload.end());
      throw NetError("server " + std::to_string(sid) +
                     " returned an error: " + msg);
    }
    if (in->type != MsgType::Response) {
      throw NetError("server " + std::to_string(sid) +
                     " sent an unexpected frame");
    }
    const uint64_t expected = schemes::response_bits(params);
    if (in->payload_bit_len != expected &&
        !(in->payload_bit_len == 0 &&
          schemes::omission_allowed(params, qs.per_server[sid - 1]))) {
      throw NetError("server " + std::to_string(sid) +
                     " response has illegal length");
    }
    transcript.upload_bits[sid - 1] = query_bits.size();
    transcript.download_bits[sid - 1] = in->payload_bit_len;
    responses[sid - 1] =
        schemes::ResponsePayload{sid, in->payload_bits()};
  };

  // One query per server, issued concurrently; join before reconstructing.
  std::vector<std::future<void>> futures;
  futures.reserve(params.n);
  for (uint32_t sid = 1; sid <= params.n; ++sid) {
    futures.push_back(std::async(std::launch::async, fetch_one, sid));
  }
  std::exception_ptr failure;
  for (auto& f : futures) {
    try {
      f.get();
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  FetchResult result;
  result.record = schemes::reconstruct(params, qs.user_state, responses);
  result.transcript = std::move(transcript);
  return result;
}

}  // namespace pir::net
