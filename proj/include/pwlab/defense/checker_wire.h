#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <thread>

#include "pwlab/defense/honeychecker.h"

namespace pwlab::defense {

// Line protocol over a local stream socket, one request per line:
//   SET <user> <index-blob-hex>  -> OK
//   CHECK <user> <index>         -> REAL | DECOY
// Any problem answers ERR <code> (malformed, bad-index, unknown-user,
// corrupt-state, internal). User ids must be non-empty and free of
// whitespace. SET's blob is 8 hex chars, the index as a little-endian
// 32-bit word; sealing with the checker key happens at rest on the
// checker, the key never crosses the wire. CHECK's index is decimal.

class CheckerServer {
 public:
  CheckerServer(std::filesystem::path socket_path, LocalHoneychecker& checker);
  ~CheckerServer();

  CheckerServer(const CheckerServer&) = delete;
  CheckerServer& operator=(const CheckerServer&) = delete;

  void start();
  void stop();
  bool running() const { return running_.load(); }
  const std::filesystem::path& socket_path() const { return path_; }

  std::string handle_line(const std::string& line);  // exposed for tests

 private:
  std::filesystem::path path_;
  LocalHoneychecker& checker_;
  int listen_fd_ = -1;
  std::thread accept_thread_;
  std::atomic<bool> stopping_{false};
  std::atomic<bool> running_{false};

  void serve();
  void handle_connection(int fd);
};

// Speaks the protocol from the main system's side. One connection per
// request keeps the server loop trivial and the client stateless. Transport
// trouble or an unparseable reply surfaces as CheckerError("checker-offline")
// so the caller can fail closed.
class CheckerClient : public Honeychecker {
 public:
  explicit CheckerClient(std::filesystem::path socket_path);

  void set_index(const std::string& user_id, std::uint32_t real_index) override;
  CheckResult check(const std::string& user_id, std::uint32_t index,
                    std::int64_t now) override;

 private:
  std::filesystem::path path_;

  std::string round_trip(const std::string& request) const;
};

}  // namespace pwlab::defense
