#include "marksman/botlink_transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace marksman {
namespace {

[[noreturn]] void die_errno(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

// Reduce a parser error message to a wire-safe word for the ERR reason.
std::string reason_word(const std::string& error) {
  if (error.rfind("empty line", 0) == 0) return "empty_line";
  if (error.rfind("unknown kind", 0) == 0) return "unknown_kind";
  if (error.rfind("missing tick value", 0) == 0) return "missing_tick_value";
  if (error.rfind("missing tick", 0) == 0) return "missing_tick";
  if (error.rfind("malformed tick", 0) == 0) return "malformed_tick";
  if (error.rfind("duplicate tick", 0) == 0) return "duplicate_tick";
  if (error.rfind("malformed key", 0) == 0) return "malformed_key";
  if (error.rfind("malformed field", 0) == 0) return "malformed_field";
  if (error.rfind("malformed value", 0) == 0) return "malformed_value";
  if (error.rfind("missing value", 0) == 0) return "missing_value";
  return "parse_error";
}

}  // namespace

std::int64_t drive_in_process(CombatWorld& world, LearnerAgent& agent,
                              const SessionLimits& limits) {
  LearnerCommand cmd = agent.decide(0, world.observe());
  while (agent.deaths() < limits.lives_target &&
         world.tick_index() < limits.max_ticks) {
    const TickResult result = world.tick(cmd);
    agent.ingest_events(result.events);
    if (agent.deaths() >= limits.lives_target) break;
    cmd = agent.decide(world.tick_index(), result.observation);
  }
  agent.finish();
  return world.tick_index();
}

bool LineChannel::read_line(std::string& line) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line.assign(buffer_, 0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      die_errno("recv");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void LineChannel::write_line(const std::string& line) {
  std::string framed = line;
  framed += '\n';
  std::size_t sent = 0;
  while (sent < framed.size()) {
    const ssize_t n = ::send(fd_, framed.data() + sent, framed.size() - sent,
                             MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      die_errno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

BotlinkServer::BotlinkServer(const std::string& host, std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) die_errno("socket");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::runtime_error("bad listen address: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const int e = errno;
    ::close(listen_fd_);
    errno = e;
    die_errno("bind " + host);
  }
  if (::listen(listen_fd_, 4) < 0) die_errno("listen");

  socklen_t len = sizeof addr;
  if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0)
    die_errno("getsockname");
  port_ = ntohs(addr.sin_port);
}

BotlinkServer::~BotlinkServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int BotlinkServer::accept_connection() {
  for (;;) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd >= 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return fd;
    }
    if (errno == EINTR) continue;
    die_errno("accept");
  }
}

int connect_to(const std::string& host, std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) die_errno("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw std::runtime_error("bad connect address: " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const int e = errno;
    ::close(fd);
    errno = e;
    die_errno("connect");
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

void serve_session(int fd, const SimConfig& sim, std::uint64_t world_seed,
                   const SessionLimits& limits) {
  LineChannel chan(fd);
  CombatWorld world(sim, world_seed);

  chan.write_line(serialize(make_cfg(0, world_seed, sim.opponent.level,
                                     limits.lives_target)));
  chan.write_line(serialize(make_obs(0, world.observe())));

  std::string line;
  while (chan.read_line(line)) {
    const ParseResult parsed = parse_line(line);
    if (!parsed.ok) {
      chan.write_line(serialize(
          make_err(world.tick_index(), reason_word(parsed.error))));
      continue;  // same OBS stays outstanding; the world did not advance
    }
    if (parsed.message.kind != ProtocolMessage::Kind::Act) {
      chan.write_line(
          serialize(make_err(world.tick_index(), "unexpected_kind")));
      continue;
    }
    if (parsed.message.tick != world.tick_index()) {
      chan.write_line(
          serialize(make_err(world.tick_index(), "tick_mismatch")));
      continue;
    }
    LearnerCommand cmd;
    try {
      cmd = act_from_message(parsed.message);
    } catch (const std::exception&) {
      chan.write_line(
          serialize(make_err(world.tick_index(), "invalid_action")));
      continue;
    }

    const TickResult result = world.tick(cmd);
    for (const auto& ev : result.events)
      chan.write_line(serialize(make_evt(ev)));

    const auto deaths = world.learner().deaths;
    if (deaths >= limits.lives_target ||
        world.tick_index() >= limits.max_ticks) {
      chan.write_line(serialize(
          make_end(world.tick_index(), world.learner().kills, deaths)));
      break;
    }
    chan.write_line(serialize(make_obs(world.tick_index(), result.observation)));
  }
}

std::pair<std::int64_t, std::int64_t> drive_socket_client(int fd,
                                                          LearnerAgent& agent) {
  LineChannel chan(fd);
  std::string line;
  std::int64_t kills = 0, deaths = 0;
  while (chan.read_line(line)) {
    const ParseResult parsed = parse_line(line);
    if (!parsed.ok)
      throw std::runtime_error("server sent malformed line: " + parsed.error);
    const ProtocolMessage& msg = parsed.message;
    switch (msg.kind) {
      case ProtocolMessage::Kind::Cfg:
        break;  // informational; the harness configured both ends
      case ProtocolMessage::Kind::Evt: {
        if (msg.get_word("kind") == "ERR") break;  // not a game event
        agent.ingest_events({event_from_message(msg)});
        break;
      }
      case ProtocolMessage::Kind::Obs: {
        const LearnerCommand cmd =
            agent.decide(msg.tick, obs_from_message(msg));
        chan.write_line(serialize(make_act(msg.tick, cmd)));
        break;
      }
      case ProtocolMessage::Kind::End:
        kills = msg.get_int("kills");
        deaths = msg.get_int("deaths");
        agent.finish();
        return {kills, deaths};
      case ProtocolMessage::Kind::Act:
        throw std::runtime_error("server sent ACT");
    }
  }
  throw std::runtime_error("connection closed before END");
}

}  // namespace marksman
