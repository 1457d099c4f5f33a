#include "pwlab/defense/checker_wire.h"

#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <sstream>
#include <stdexcept>

namespace pwlab::defense {

namespace {

bool valid_user_token(const std::string& user) {
  if (user.empty() || user.size() > 128) return false;
  for (unsigned char c : user)
    if (c <= ' ' || c == 0x7f) return false;
  return true;
}

bool parse_index(const std::string& token, std::uint32_t& out) {
  if (token.empty() || token.size() > 9) return false;
  std::uint32_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<std::uint32_t>(c - '0');
  }
  out = value;
  return true;
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string encode_index_blob(std::uint32_t index) {
  static const char* digits = "0123456789abcdef";
  std::string blob(8, '0');
  for (int byte = 0; byte < 4; ++byte) {
    std::uint8_t b = static_cast<std::uint8_t>(index >> (8 * byte));
    blob[2 * byte] = digits[b >> 4];
    blob[2 * byte + 1] = digits[b & 0xf];
  }
  return blob;
}

bool parse_index_blob(const std::string& token, std::uint32_t& out) {
  if (token.size() != 8) return false;
  std::uint32_t value = 0;
  for (int byte = 0; byte < 4; ++byte) {
    int hi = hex_nibble(token[2 * byte]);
    int lo = hex_nibble(token[2 * byte + 1]);
    if (hi < 0 || lo < 0) return false;
    value |= static_cast<std::uint32_t>((hi << 4) | lo) << (8 * byte);
  }
  out = value;
  return true;
}

void send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return;  // peer went away; nothing useful to do
    sent += static_cast<std::size_t>(n);
  }
}

sockaddr_un make_address(const std::filesystem::path& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  std::string s = path.string();
  if (s.size() + 1 > sizeof(addr.sun_path))
    throw std::invalid_argument("socket path too long: " + s);
  std::memcpy(addr.sun_path, s.c_str(), s.size() + 1);
  return addr;
}

}  // namespace

CheckerServer::CheckerServer(std::filesystem::path socket_path,
                             LocalHoneychecker& checker)
    : path_(std::move(socket_path)), checker_(checker) {}

CheckerServer::~CheckerServer() { stop(); }

void CheckerServer::start() {
  if (running_) return;
  sockaddr_un addr = make_address(path_);

  listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (listen_fd_ < 0)
    throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  ::unlink(path_.c_str());
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("bind " + path_.string() + ": " + std::strerror(err));
  }
  if (::listen(listen_fd_, 16) != 0) {
    int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    ::unlink(path_.c_str());
    throw std::runtime_error(std::string("listen: ") + std::strerror(err));
  }

  stopping_ = false;
  running_ = true;
  accept_thread_ = std::thread([this] { serve(); });
}

void CheckerServer::stop() {
  if (!running_) return;
  stopping_ = true;
  if (accept_thread_.joinable()) accept_thread_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  ::unlink(path_.c_str());
  running_ = false;
}

void CheckerServer::serve() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 100);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    handle_connection(fd);
    ::close(fd);
  }
}

void CheckerServer::handle_connection(int fd) {
  std::string buffer;
  char chunk[512];
  while (!stopping_) {
    pollfd pfd{fd, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 100);
    if (ready < 0) {
      if (errno == EINTR) continue;
      return;
    }
    if (ready == 0) continue;
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) return;
    buffer.append(chunk, static_cast<std::size_t>(n));
    if (buffer.size() > 4096) {
      send_all(fd, "ERR malformed\n");
      return;
    }
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      send_all(fd, handle_line(line) + "\n");
    }
  }
}

std::string CheckerServer::handle_line(const std::string& line) {
  std::istringstream in(line);
  std::string verb, user, index_token, extra;
  in >> verb >> user >> index_token;
  if (in >> extra) return "ERR malformed";
  if ((verb != "SET" && verb != "CHECK") || !valid_user_token(user))
    return "ERR malformed";
  std::uint32_t index = 0;
  bool parsed = verb == "SET" ? parse_index_blob(index_token, index)
                              : parse_index(index_token, index);
  if (!parsed) return "ERR malformed";

  try {
    if (verb == "SET") {
      checker_.set_index(user, index);
      return "OK";
    }
    CheckResult result = checker_.check(user, index, std::time(nullptr));
    return result == CheckResult::real ? "REAL" : "DECOY";
  } catch (const CheckerError& e) {
    return "ERR " + e.code();
  } catch (const std::exception&) {
    return "ERR internal";
  }
}

CheckerClient::CheckerClient(std::filesystem::path socket_path)
    : path_(std::move(socket_path)) {}

std::string CheckerClient::round_trip(const std::string& request) const {
  sockaddr_un addr = make_address(path_);
  int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) throw CheckerError("checker-offline", "cannot create socket");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw CheckerError("checker-offline",
                       "cannot reach checker at " + path_.string());
  }
  send_all(fd, request + "\n");

  std::string reply;
  char chunk[256];
  while (reply.find('\n') == std::string::npos) {
    pollfd pfd{fd, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 2000);
    if (ready <= 0) {
      ::close(fd);
      throw CheckerError("checker-offline", "checker reply timed out");
    }
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      ::close(fd);
      throw CheckerError("checker-offline", "checker closed the connection");
    }
    reply.append(chunk, static_cast<std::size_t>(n));
  }
  ::close(fd);
  return reply.substr(0, reply.find('\n'));
}

void CheckerClient::set_index(const std::string& user_id, std::uint32_t real_index) {
  if (!valid_user_token(user_id))
    throw CheckerError("malformed", "user id not expressible on the wire");
  std::string reply = round_trip("SET " + user_id + " " + encode_index_blob(real_index));
  if (reply == "OK") return;
  if (reply.rfind("ERR ", 0) == 0)
    throw CheckerError(reply.substr(4), "checker refused set_index: " + reply);
  throw CheckerError("checker-offline", "unexpected checker reply: " + reply);
}

CheckResult CheckerClient::check(const std::string& user_id, std::uint32_t index,
                                 std::int64_t) {
  if (!valid_user_token(user_id))
    throw CheckerError("malformed", "user id not expressible on the wire");
  std::string reply = round_trip("CHECK " + user_id + " " + std::to_string(index));
  if (reply == "REAL") return CheckResult::real;
  if (reply == "DECOY") return CheckResult::decoy;
  if (reply.rfind("ERR ", 0) == 0)
    throw CheckerError(reply.substr(4), "checker refused check: " + reply);
  throw CheckerError("checker-offline", "unexpected checker reply: " + reply);
}

}  // namespace pwlab::defense
