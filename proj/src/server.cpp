#include "ttalign/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <system_error>

#include "ttalign/traversal.hpp"

namespace ttalign {

namespace {

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string fixed6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

constexpr std::size_t kMaxLine = 1 << 16;

}  // namespace

std::string QueryService::respond(std::string_view request) const {
  auto words = split_words(request);
  if (words.empty()) return "ERR empty request\n";
  const auto cmd = words[0];
  try {
    if (cmd == "NN") {
      if (words.size() != 4) return "ERR usage: NN <token> <k> <library>\n";
      int k = 0, lib = 0;
      if (!parse_int(words[2], k) || k < 1) return "ERR k must be a positive integer\n";
      if (!parse_int(words[3], lib) || lib < 0) return "ERR library must be a non-negative integer\n";
      const std::string token = unescape_token(words[1]);
      if (!index_.model().dict.find(token)) return "ERR unknown token\n";
      std::string out;
      for (const auto& n : index_.nearest_serial(token, k, lib)) {
        out += escape_token(n.token);
        out += '\t';
        out += fixed6(n.score);
        out += '\n';
      }
      out += '\n';
      return out;
    }
    if (cmd == "SIM") {
      if (words.size() != 3) return "ERR usage: SIM <token1> <token2>\n";
      const std::string a = unescape_token(words[1]);
      const std::string b = unescape_token(words[2]);
      const auto& dict = index_.model().dict;
      if (!dict.find(a) || !dict.find(b)) return "ERR unknown token\n";
      return fixed6(index_.similarity(a, b)) + "\n";
    }
  } catch (const std::exception& e) {
    return std::string("ERR ") + e.what() + "\n";
  }
  return "ERR unknown command '" + std::string(cmd) + "'\n";
}

LineServer::LineServer(const QueryService& service, int workers)
    : service_(service), workers_(std::max(1, workers)) {}

LineServer::~LineServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int LineServer::listen(int port, const std::string& host) {
  if (listen_fd_ >= 0) throw std::logic_error("server is already listening");
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::system_error(errno, std::generic_category(), "socket");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw std::invalid_argument("bad IPv4 address '" + host + "'");
  }
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd, 128) < 0) {
    int err = errno;
    ::close(fd);
    throw std::system_error(err, std::generic_category(),
                            "cannot listen on " + host + ":" + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  listen_fd_ = fd;
  return ntohs(addr.sin_port);
}

void LineServer::serve() {
  if (listen_fd_ < 0) throw std::logic_error("listen() must be called before serve()");
  for (int i = 0; i < workers_; ++i) pool_.emplace_back([this] { worker_loop(); });
  while (!stopping_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    pending_.push_back(fd);
    cv_.notify_one();
  }
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
    cv_.notify_all();
  }
  for (auto& t : pool_) t.join();
  pool_.clear();
  for (int fd : pending_) ::close(fd);
  pending_.clear();
}

void LineServer::stop() {
  std::lock_guard lock(mu_);
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  for (int fd : active_) ::shutdown(fd, SHUT_RDWR);
  cv_.notify_all();
}

void LineServer::worker_loop() {
  for (;;) {
    int fd;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !pending_.empty(); });
      if (stopping_) return;
      fd = pending_.front();
      pending_.pop_front();
      active_.insert(fd);
    }
    handle(fd);
    {
      std::lock_guard lock(mu_);
      active_.erase(fd);
    }
    ::close(fd);
  }
}

void LineServer::handle(int fd) {
  std::string buffer;
  char chunk[4096];
  for (;;) {
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      if (!send_all(fd, service_.respond(std::string_view(buffer).substr(start, nl - start)))) {
        return;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLine) {
      send_all(fd, "ERR request line too long\n");
      return;
    }
  }
}

}  // namespace ttalign
