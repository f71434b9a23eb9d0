#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "marksman/combat_sim.hpp"

namespace marksman {

// One line of the newline-delimited bot-link text protocol:
//   KIND t=<int>( <key>=<value>)*\n
// Values are integers, fixed 6-decimal floats, or bare words. Field order
// is significant and preserved, so serialize(parse(line)) == line.
struct ProtocolMessage {
  enum class Kind { Obs, Act, Evt, Cfg, End };

  using FieldValue = std::variant<std::int64_t, double, std::string>;

  Kind kind = Kind::Obs;
  std::int64_t tick = 0;
  std::vector<std::pair<std::string, FieldValue>> fields;

  void add(std::string key, std::int64_t v) { fields.emplace_back(std::move(key), v); }
  void add(std::string key, double v) { fields.emplace_back(std::move(key), v); }
  void add(std::string key, std::string v) { fields.emplace_back(std::move(key), std::move(v)); }

  const FieldValue* find(std::string_view key) const;
  // Throw std::out_of_range when the key is absent or the wrong type.
  std::int64_t get_int(std::string_view key) const;
  double get_double(std::string_view key) const;
  const std::string& get_word(std::string_view key) const;

  bool operator==(const ProtocolMessage&) const = default;
};

std::string_view kind_name(ProtocolMessage::Kind kind);

// Serialized line, without the trailing newline (the transport frames it).
std::string serialize(const ProtocolMessage& msg);

// Parsing never throws: a malformed line yields ok=false and an error
// string naming the offending token, so a session can answer with an
// error event instead of dying.
struct ParseResult {
  bool ok = false;
  ProtocolMessage message;
  std::string error;
};

ParseResult parse_line(std::string_view line);

// Canonical message builders shared by both transports.
ProtocolMessage make_cfg(std::int64_t tick, std::uint64_t seed, int level,
                         int lives);
ProtocolMessage make_obs(std::int64_t tick, const Observation& obs);
ProtocolMessage make_act(std::int64_t tick, const LearnerCommand& cmd);
ProtocolMessage make_evt(const GameEvent& event);
ProtocolMessage make_err(std::int64_t tick, std::string_view reason);
ProtocolMessage make_end(std::int64_t tick, std::int64_t kills,
                         std::int64_t deaths);

// Decoders (throw std::out_of_range / std::invalid_argument on messages
// whose shape does not match the builder conventions above).
Observation obs_from_message(const ProtocolMessage& msg);
LearnerCommand act_from_message(const ProtocolMessage& msg);
GameEvent event_from_message(const ProtocolMessage& msg);

}  // namespace marksman
