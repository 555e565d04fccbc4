#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <random>
#include <thread>

#include "ttalign/server.hpp"
#include "ttalign/trainer.hpp"

using namespace ttalign;

namespace {

EmbeddingModel model_fixture() {
  std::vector<std::string> tokens{"Comb", "="};
  std::vector<std::int64_t> counts{100, 50};
  for (int lib : {1, 2}) {
    for (int i = 0; i < 40; ++i) {
      tokens.push_back("L" + std::to_string(lib) + ":c" + std::to_string(i));
      counts.push_back(10);
    }
  }
  tokens.push_back("L1:with space");
  counts.push_back(1);
  return init_model(Dictionary::from_entries(tokens, counts), 16, 3);
}

class Client {
 public:
  explicit Client(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    ok_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  }
  ~Client() { ::close(fd_); }

  bool ok() const { return ok_; }
  void send(const std::string& s) { ::send(fd_, s.data(), s.size(), MSG_NOSIGNAL); }

  // Reads until the buffered text ends with `terminator`.
  std::string read_until(const std::string& terminator) {
    char buf[4096];
    while (buffer_.size() < terminator.size() ||
           buffer_.compare(buffer_.size() - terminator.size(), terminator.size(), terminator) != 0) {
      ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
      if (n <= 0) break;
      buffer_.append(buf, static_cast<std::size_t>(n));
    }
    return std::exchange(buffer_, {});
  }

 private:
  int fd_ = -1;
  bool ok_ = false;
  std::string buffer_;
};

struct Running {
  explicit Running(const QueryService& s, int workers = 8) : server(s, workers) {
    port = server.listen(0);
    loop = std::thread([this] { server.serve(); });
  }
  ~Running() {
    server.stop();
    loop.join();
  }
  LineServer server;
  int port = 0;
  std::thread loop;
};

}  // namespace

TEST(QueryService, SimOfTokenWithItself) {
  const auto model = model_fixture();
  QueryService svc(model);
  EXPECT_EQ(svc.respond("SIM L1:c1 L1:c1"), "1.000000\n");
  const std::string spaced = escape_token("L1:with space");
  EXPECT_EQ(svc.respond("SIM " + spaced + " " + spaced), "1.000000\n");
}

TEST(QueryService, NearestFormat) {
  const auto model = model_fixture();
  QueryService svc(model);
  const auto out = svc.respond("NN L1:c0 5 2");
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 6);
  EXPECT_EQ(out.substr(out.size() - 2), "\n\n");
  auto nn = VectorIndex(model).nearest("L1:c0", 5, 2);
  char line[80];
  std::snprintf(line, sizeof line, "%s\t%.6f\n", nn[0].token.c_str(), nn[0].score);
  EXPECT_EQ(out.substr(0, std::strlen(line)), line);
}

TEST(QueryService, Errors) {
  const auto model = model_fixture();
  QueryService svc(model);
  EXPECT_EQ(svc.respond("NN unknown 5 2"), "ERR unknown token\n");
  EXPECT_EQ(svc.respond("SIM L1:c0 nope"), "ERR unknown token\n");
  for (const char* bad : {"", "   ", "NN", "NN L1:c0 0 2", "NN L1:c0 x 2", "NN L1:c0 3 -1",
                          "NN L1:c0 3 2 extra", "SIM a", "FOO bar", "nn L1:c0 1 2"}) {
    const auto r = svc.respond(bad);
    EXPECT_EQ(r.rfind("ERR ", 0), 0u) << bad;
    EXPECT_EQ(std::count(r.begin(), r.end(), '\n'), 1) << bad;
  }
}

TEST(LineServer, ConcurrentSoakMatchesSequentialAnswers) {
  const auto model = model_fixture();
  QueryService svc(model);
  std::vector<std::string> requests;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    requests.push_back("NN L" + std::to_string(1 + i % 2) + ":c" + std::to_string(rng() % 40) + " " +
                       std::to_string(1 + rng() % 20) + " " + std::to_string(2 - i % 2));
  }
  std::vector<std::string> expected;
  for (const auto& r : requests) expected.push_back(svc.respond(r));

  Running running(svc, 8);
  std::vector<std::string> got(requests.size());
  std::vector<std::thread> clients;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    clients.emplace_back([&, i] {
      Client c(running.port);
      if (!c.ok()) return;
      c.send(requests[i] + "\n");
      got[i] = c.read_until("\n\n");
    });
  }
  for (auto& t : clients) t.join();
  for (std::size_t i = 0; i < requests.size(); ++i) EXPECT_EQ(got[i], expected[i]) << requests[i];
}

TEST(LineServer, MalformedRequestsKeepConnectionAlive) {
  const auto model = model_fixture();
  QueryService svc(model);
  Running running(svc, 2);
  Client c(running.port);
  ASSERT_TRUE(c.ok());
  c.send("GARBAGE\n");
  EXPECT_EQ(c.read_until("\n"), "ERR unknown command 'GARBAGE'\n");
  c.send("NN L1:c0\r\n");
  EXPECT_EQ(c.read_until("\n").rfind("ERR ", 0), 0u);
  c.send("SIM L1:c0 L1:c0\nSIM L2:c1 L2:c1\n");
  EXPECT_EQ(c.read_until("1.000000\n1.000000\n"), "1.000000\n1.000000\n");
  c.send("SIM L1:c0 ");
  c.send("L1:c0\n");
  EXPECT_EQ(c.read_until("\n"), "1.000000\n");
}

TEST(LineServer, OverlongLineIsRejected) {
  const auto model = model_fixture();
  QueryService svc(model);
  Running running(svc, 1);
  {
    Client c(running.port);
    ASSERT_TRUE(c.ok());
    c.send(std::string(70'000, 'x'));
    EXPECT_EQ(c.read_until("\n"), "ERR request line too long\n");
  }
  Client after(running.port);
  after.send("SIM L1:c0 L1:c0\n");
  EXPECT_EQ(after.read_until("\n"), "1.000000\n");
}

TEST(LineServer, StopIsIdempotentAndUnblocksClients) {
  const auto model = model_fixture();
  QueryService svc(model);
  auto running = std::make_unique<Running>(svc, 1);
  Client idle(running->port);
  ASSERT_TRUE(idle.ok());
  running->server.stop();
  running->server.stop();
  running.reset();
  SUCCEED();
}

TEST(LineServer, BadAddress) {
  const auto model = model_fixture();
  QueryService svc(model);
  LineServer server(svc);
  EXPECT_THROW(server.listen(0, "not-an-ip"), std::invalid_argument);
}
