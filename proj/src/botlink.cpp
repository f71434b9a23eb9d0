#include "marksman/botlink.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace marksman {
namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool looks_like_int(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool looks_like_double(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  const auto dot = s.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size())
    return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == dot) continue;
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

bool looks_like_word(std::string_view s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s)
    if (!is_word_char(c)) return false;
  return true;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

ParseResult fail(std::string error) {
  ParseResult r;
  r.ok = false;
  r.error = std::move(error);
  return r;
}

}  // namespace

const ProtocolMessage::FieldValue* ProtocolMessage::find(
    std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

std::int64_t ProtocolMessage::get_int(std::string_view key) const {
  const auto* v = find(key);
  if (!v || !std::holds_alternative<std::int64_t>(*v))
    throw std::out_of_range("missing int field: " + std::string(key));
  return std::get<std::int64_t>(*v);
}

double ProtocolMessage::get_double(std::string_view key) const {
  const auto* v = find(key);
  if (!v) throw std::out_of_range("missing field: " + std::string(key));
  if (std::holds_alternative<double>(*v)) return std::get<double>(*v);
  // Integer-looking floats are still floats to the reader.
  if (std::holds_alternative<std::int64_t>(*v))
    return static_cast<double>(std::get<std::int64_t>(*v));
  throw std::out_of_range("non-numeric field: " + std::string(key));
}

const std::string& ProtocolMessage::get_word(std::string_view key) const {
  const auto* v = find(key);
  if (!v || !std::holds_alternative<std::string>(*v))
    throw std::out_of_range("missing word field: " + std::string(key));
  return std::get<std::string>(*v);
}

std::string_view kind_name(ProtocolMessage::Kind kind) {
  switch (kind) {
    case ProtocolMessage::Kind::Obs: return "OBS";
    case ProtocolMessage::Kind::Act: return "ACT";
    case ProtocolMessage::Kind::Evt: return "EVT";
    case ProtocolMessage::Kind::Cfg: return "CFG";
    case ProtocolMessage::Kind::End: return "END";
  }
  throw std::logic_error("unreachable kind");
}

std::string serialize(const ProtocolMessage& msg) {
  std::string out{kind_name(msg.kind)};
  out += " t=";
  out += std::to_string(msg.tick);
  for (const auto& [key, value] : msg.fields) {
    out += ' ';
    out += key;
    out += '=';
    if (std::holds_alternative<std::int64_t>(value)) {
      out += std::to_string(std::get<std::int64_t>(value));
    } else if (std::holds_alternative<double>(value)) {
      out += format_double(std::get<double>(value));
    } else {
      out += std::get<std::string>(value);
    }
  }
  return out;
}

ParseResult parse_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
    line.remove_suffix(1);

  // Tokenize on single spaces.
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto next = line.find(' ', pos);
    const auto end = next == std::string_view::npos ? line.size() : next;
    tokens.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (tokens.empty() || tokens[0].empty()) return fail("empty line");

  ProtocolMessage msg;
  const std::string_view kind_tok = tokens[0];
  if (kind_tok == "OBS") msg.kind = ProtocolMessage::Kind::Obs;
  else if (kind_tok == "ACT") msg.kind = ProtocolMessage::Kind::Act;
  else if (kind_tok == "EVT") msg.kind = ProtocolMessage::Kind::Evt;
  else if (kind_tok == "CFG") msg.kind = ProtocolMessage::Kind::Cfg;
  else if (kind_tok == "END") msg.kind = ProtocolMessage::Kind::End;
  else return fail("unknown kind '" + std::string(kind_tok) + "'");

  if (tokens.size() < 2) return fail("missing tick");
  const std::string_view tick_tok = tokens[1];
  if (tick_tok.substr(0, 2) != "t=")
    return fail("missing tick, got '" + std::string(tick_tok) + "'");
  const std::string_view tick_val = tick_tok.substr(2);
  if (tick_val.empty()) return fail("missing tick value");
  if (!looks_like_int(tick_val))
    return fail("malformed tick '" + std::string(tick_val) + "'");
  {
    const auto* b = tick_val.data();
    const auto res = std::from_chars(b, b + tick_val.size(), msg.tick);
    if (res.ec != std::errc{} || res.ptr != b + tick_val.size())
      return fail("malformed tick '" + std::string(tick_val) + "'");
  }

  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos || eq == 0)
      return fail("malformed field '" + std::string(tok) + "'");
    const std::string_view key = tok.substr(0, eq);
    const std::string_view val = tok.substr(eq + 1);
    if (!looks_like_word(key))
      return fail("malformed key '" + std::string(key) + "'");
    if (key == "t") return fail("duplicate tick field");
    if (val.empty())
      return fail("missing value for key '" + std::string(key) + "'");

    if (looks_like_int(val)) {
      std::int64_t parsed = 0;
      const auto res = std::from_chars(val.data(), val.data() + val.size(), parsed);
      if (res.ec != std::errc{} || res.ptr != val.data() + val.size())
        return fail("malformed value '" + std::string(val) + "'");
      msg.add(std::string(key), parsed);
    } else if (looks_like_double(val)) {
      msg.add(std::string(key), std::strtod(std::string(val).c_str(), nullptr));
    } else if (looks_like_word(val)) {
      msg.add(std::string(key), std::string(val));
    } else {
      return fail("malformed value '" + std::string(val) + "' for key '" +
                  std::string(key) + "'");
    }
  }

  ParseResult r;
  r.ok = true;
  r.message = std::move(msg);
  return r;
}

ProtocolMessage make_cfg(std::int64_t tick, std::uint64_t seed, int level,
                         int lives) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::Cfg;
  m.tick = tick;
  m.add("seed", static_cast<std::int64_t>(seed));
  m.add("level", static_cast<std::int64_t>(level));
  m.add("lives", static_cast<std::int64_t>(lives));
  return m;
}

ProtocolMessage make_obs(std::int64_t tick, const Observation& obs) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::Obs;
  m.tick = tick;
  m.add("vis", static_cast<std::int64_t>(obs.visible ? 1 : 0));
  m.add("vf", obs.vel_forward);
  m.add("vl", obs.vel_lateral);
  m.add("rot", obs.facing_angle);
  m.add("dist", obs.distance);
  return m;
}

ProtocolMessage make_act(std::int64_t tick, const LearnerCommand& cmd) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::Act;
  m.tick = tick;
  m.add("shoot", static_cast<std::int64_t>(cmd.shoot ? 1 : 0));
  m.add("aid", static_cast<std::int64_t>(cmd.action.id()));
  return m;
}

ProtocolMessage make_evt(const GameEvent& event) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::Evt;
  m.tick = event.tick;
  if (event.kind == GameEvent::Kind::Damage) {
    m.add("kind", std::string("DMG"));
    m.add("victim", static_cast<std::int64_t>(event.victim));
    m.add("fired", event.fired_tick);
    m.add("bullets", static_cast<std::int64_t>(event.bullets_hit));
    m.add("dmg", event.damage);
  } else {
    m.add("kind", std::string("DEATH"));
    m.add("victim", static_cast<std::int64_t>(event.victim));
  }
  return m;
}

ProtocolMessage make_err(std::int64_t tick, std::string_view reason) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::Evt;
  m.tick = tick;
  m.add("kind", std::string("ERR"));
  m.add("reason", std::string(reason));
  return m;
}

ProtocolMessage make_end(std::int64_t tick, std::int64_t kills,
                         std::int64_t deaths) {
  ProtocolMessage m;
  m.kind = ProtocolMessage::Kind::End;
  m.tick = tick;
  m.add("kills", kills);
  m.add("deaths", deaths);
  return m;
}

Observation obs_from_message(const ProtocolMessage& msg) {
  if (msg.kind != ProtocolMessage::Kind::Obs)
    throw std::invalid_argument("not an OBS message");
  Observation obs;
  obs.visible = msg.get_int("vis") != 0;
  obs.vel_forward = msg.get_double("vf");
  obs.vel_lateral = msg.get_double("vl");
  obs.facing_angle = msg.get_double("rot");
  obs.distance = msg.get_double("dist");
  return obs;
}

LearnerCommand act_from_message(const ProtocolMessage& msg) {
  if (msg.kind != ProtocolMessage::Kind::Act)
    throw std::invalid_argument("not an ACT message");
  LearnerCommand cmd;
  cmd.shoot = msg.get_int("shoot") != 0;
  const auto aid = msg.get_int("aid");
  if (aid < 0 || aid >= kActionCount)
    throw std::out_of_range("aid out of range");
  cmd.action = AimAction::from_id(static_cast<int>(aid));
  return cmd;
}

GameEvent event_from_message(const ProtocolMessage& msg) {
  if (msg.kind != ProtocolMessage::Kind::Evt)
    throw std::invalid_argument("not an EVT message");
  const std::string& kind = msg.get_word("kind");
  GameEvent ev;
  ev.tick = msg.tick;
  if (kind == "DMG") {
    ev.kind = GameEvent::Kind::Damage;
    ev.victim = static_cast<int>(msg.get_int("victim"));
    ev.fired_tick = msg.get_int("fired");
    ev.bullets_hit = static_cast<int>(msg.get_int("bullets"));
    ev.damage = msg.get_double("dmg");
  } else if (kind == "DEATH") {
    ev.kind = GameEvent::Kind::Death;
    ev.victim = static_cast<int>(msg.get_int("victim"));
  } else {
    throw std::invalid_argument("unknown event kind: " + kind);
  }
  return ev;
}

}  // namespace marksman
