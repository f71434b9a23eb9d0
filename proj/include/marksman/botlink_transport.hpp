#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "marksman/agent.hpp"
#include "marksman/botlink.hpp"
#include "marksman/combat_sim.hpp"

namespace marksman {

struct SessionLimits {
  int lives_target = 200;
  std::int64_t max_ticks = 1000000;
};

// Drives world + agent directly, tick by tick, until the learner has died
// lives_target times (or max_ticks as a safety valve). Returns ticks run.
std::int64_t drive_in_process(CombatWorld& world, LearnerAgent& agent,
                              const SessionLimits& limits);

// Buffered newline-framed channel over a connected socket.
class LineChannel {
 public:
  explicit LineChannel(int fd) : fd_(fd) {}

  // False on EOF. Throws std::runtime_error on I/O errors.
  bool read_line(std::string& line);
  void write_line(const std::string& line);

 private:
  int fd_;
  std::string buffer_;
};

// Listening TCP socket bound to host:port (port 0 picks an ephemeral
// port, see port()). Throws std::runtime_error on failure.
class BotlinkServer {
 public:
  BotlinkServer(const std::string& host, std::uint16_t port);
  ~BotlinkServer();
  BotlinkServer(const BotlinkServer&) = delete;
  BotlinkServer& operator=(const BotlinkServer&) = delete;

  std::uint16_t port() const { return port_; }
  // Blocking accept; returns a connected fd owned by the caller.
  int accept_connection();

 private:
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
};

int connect_to(const std::string& host, std::uint16_t port);
void close_fd(int fd);

// Server half of one lock-step session: CFG, then OBS -> ACT -> EVT*
// repeated, closed by END. A malformed or unexpected line is answered
// with `EVT t=<tick> kind=ERR reason=<word>` and the world does not
// advance; the session stays usable.
void serve_session(int fd, const SimConfig& sim, std::uint64_t world_seed,
                   const SessionLimits& limits);

// Client half: feeds the agent from the socket until END. Returns the
// final (kills, deaths) tallies reported by the server.
std::pair<std::int64_t, std::int64_t> drive_socket_client(int fd,
                                                          LearnerAgent& agent);

}  // namespace marksman
