#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ttalign/eval.hpp"
#include "ttalign/model.hpp"

namespace ttalign {

/// Stateless request handler over a loaded model.
///
///   NN <token> <k> <library>   k lines "<token>\t<cosine>", then a blank line
///   SIM <token1> <token2>      one line "<cosine>"
///
/// Anything else yields a single "ERR <message>" line.
class QueryService {
 public:
  explicit QueryService(const EmbeddingModel& model) : index_(model) {}

  /// Complete response for one request line, newline-terminated.
  std::string respond(std::string_view request) const;

 private:
  VectorIndex index_;
};

/// TCP line server: one accept loop feeding a fixed pool of connection
/// handlers. The service is shared read-only.
class LineServer {
 public:
  explicit LineServer(const QueryService& service, int workers = 8);
  ~LineServer();
  LineServer(const LineServer&) = delete;
  LineServer& operator=(const LineServer&) = delete;

  /// Binds and listens; port 0 picks a free port. Returns the bound port.
  /// Throws std::system_error on failure.
  int listen(int port, const std::string& host = "127.0.0.1");
  /// Accepts connections until stop() is called.
  void serve();
  /// Safe to call from any thread, more than once.
  void stop();

 private:
  void worker_loop();
  void handle(int fd);

  const QueryService& service_;
  int workers_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<int> pending_;
  std::set<int> active_;
  std::vector<std::thread> pool_;
};

}  // namespace ttalign
