#include "arena/mode_config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace arena {

std::string_view to_string(Ability a) { return a == Ability::heal ? "heal" : "push"; }

std::string_view to_string(WinRule r) { return r == WinRule::king_death ? "king_death" : "last_side_standing"; }

std::string_view to_string(RoundEffect e) { return e == RoundEffect::none ? "none" : "decay"; }

int ModeConfig::unit_type_index(std::string_view type_name) const {
  for (std::size_t i = 0; i < unit_types.size(); ++i) {
    if (unit_types[i].name == type_name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

std::string pos_str(Position p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "expected a scalar of the right type");
  }
}

Ability parse_ability(const std::string& s, const std::string& key) {
  if (s == "heal") return Ability::heal;
  if (s == "push") return Ability::push;
  fail(key, "unknown ability '" + s + "'");
}

WinRule parse_win_rule(const std::string& s) {
  if (s == "king_death") return WinRule::king_death;
  if (s == "last_side_standing") return WinRule::last_side_standing;
  fail("win_rule", "unknown value '" + s + "'");
}

RoundEffect parse_round_effect(const std::string& s) {
  if (s == "none") return RoundEffect::none;
  if (s == "decay") return RoundEffect::decay;
  fail("round_effect", "unknown value '" + s + "'");
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

const YAML::Node require(const YAML::Node& node, const std::string& key) {
  if (!node[key]) fail(key, "missing required key");
  return node[key];
}

std::vector<Position> parse_zone(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail(key, "expected a list of [x, y] pairs");
  std::vector<Position> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto& p = node[i];
    const std::string k = key + "[" + std::to_string(i) + "]";
    if (!p.IsSequence() || p.size() != 2) fail(k, "expected [x, y]");
    out.push_back({scalar<int>(p[0], k), scalar<int>(p[1], k)});
  }
  return out;
}

}  // namespace

void validate(const ModeConfig& c) {
  if (c.name.empty()) fail("name", "must not be empty");
  if (c.version < 1) fail("version", "must be >= 1");
  if (c.turn_limit <= 0) fail("turn_limit", "must be > 0");
  if (c.action_points <= 0) fail("action_points", "must be > 0");
  if (c.ability_range < 1) fail("ability_range", "must be >= 1");
  if (c.heal_amount < 0) fail("heal_amount", "must be >= 0");
  if (c.decay_amount < 0) fail("decay_amount", "must be >= 0");
  if (c.round_effect == RoundEffect::decay && c.decay_amount == 0) fail("decay_amount", "decay effect needs an amount > 0");
  if (c.round_effect == RoundEffect::none && c.decay_amount != 0) fail("decay_amount", "set without a decay round effect");
  if (c.grid.width() < 2 || c.grid.height() < 2) fail("map", "must be at least 2x2");
  if (c.grid.has_holes() && !c.push_enabled) fail("map", "hole tiles are only allowed in modes with push_enabled");

  std::set<std::string> names;
  for (std::size_t i = 0; i < c.unit_types.size(); ++i) {
    const UnitType& t = c.unit_types[i];
    const std::string k = "unit_types[" + std::to_string(i) + "]";
    if (t.name.empty()) fail(k + ".name", "must not be empty");
    if (!names.insert(t.name).second) fail(k + ".name", "duplicate unit type '" + t.name + "'");
    if (t.health <= 0) fail(k + ".health", "must be > 0");
    if (t.attack_damage < 0) fail(k + ".attack_damage", "must be >= 0");
    if (t.movement_range < 0) fail(k + ".movement_range", "must be >= 0");
    if (t.attack_range < 0) fail(k + ".attack_range", "must be >= 0");
    if (t.vision_range < 0) fail(k + ".vision_range", "must be >= 0");
    std::set<Ability> seen;
    for (Ability a : t.abilities) {
      if (!seen.insert(a).second) fail(k + ".abilities", "duplicate ability");
      if (a == Ability::push && !c.push_enabled) fail(k + ".abilities", "push requires push_enabled");
      if (a == Ability::heal && c.heal_amount <= 0) fail(k + ".abilities", "heal requires heal_amount > 0");
    }
  }

  if (c.roster.empty()) fail("roster", "must list at least one unit");
  if (static_cast<int>(c.roster.size()) > ModeConfig::kMaxUnitsPerSide) fail("roster", "too many units");
  int kings = 0;
  for (std::size_t i = 0; i < c.roster.size(); ++i) {
    const int idx = c.unit_type_index(c.roster[i]);
    if (idx < 0) fail("roster[" + std::to_string(i) + "]", "unknown unit type '" + c.roster[i] + "'");
    if (c.unit_types[static_cast<std::size_t>(idx)].king) ++kings;
  }
  if (c.win_rule == WinRule::king_death && kings != 1) fail("roster", "king_death needs exactly one king per player");

  std::set<std::pair<int, int>> used;
  for (int p = 0; p < 2; ++p) {
    const std::string k = "spawn_zones.player" + std::to_string(p);
    const auto& zone = c.spawn_zones[p];
    if (zone.size() < c.roster.size()) fail(k, "fewer tiles than roster units");
    for (std::size_t i = 0; i < zone.size(); ++i) {
      const Position q = zone[i];
      const std::string ki = k + "[" + std::to_string(i) + "]";
      if (!c.grid.in_bounds(q)) fail(ki, "tile " + pos_str(q) + " is out of bounds");
      if (c.grid.at(q) == TileKind::hole) fail(ki, "tile " + pos_str(q) + " is a hole");
      if (c.grid.at(q) == TileKind::impassable) fail(ki, "tile " + pos_str(q) + " is impassable");
      if (!used.insert({q.x, q.y}).second) fail(ki, "tile " + pos_str(q) + " listed twice");
    }
  }
}

ModeConfig parse_mode(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("mode file must be a key-value mapping");
  check_keys(root,
             {"name", "version", "turn_limit", "action_points", "win_rule", "round_effect", "decay_amount",
              "heal_amount", "push_enabled", "ability_range", "fog_enabled", "map", "unit_types", "roster",
              "spawn_zones"},
             "");

  ModeConfig c;
  c.name = scalar<std::string>(require(root, "name"), "name");
  if (root["version"]) c.version = scalar<int>(root["version"], "version");
  if (root["turn_limit"]) c.turn_limit = scalar<int>(root["turn_limit"], "turn_limit");
  if (root["action_points"]) c.action_points = scalar<int>(root["action_points"], "action_points");
  if (root["win_rule"]) c.win_rule = parse_win_rule(scalar<std::string>(root["win_rule"], "win_rule"));
  if (root["round_effect"]) c.round_effect = parse_round_effect(scalar<std::string>(root["round_effect"], "round_effect"));
  if (root["decay_amount"]) c.decay_amount = scalar<int>(root["decay_amount"], "decay_amount");
  if (root["heal_amount"]) c.heal_amount = scalar<int>(root["heal_amount"], "heal_amount");
  if (root["push_enabled"]) c.push_enabled = scalar<bool>(root["push_enabled"], "push_enabled");
  if (root["ability_range"]) c.ability_range = scalar<int>(root["ability_range"], "ability_range");
  if (root["fog_enabled"]) c.fog_enabled = scalar<bool>(root["fog_enabled"], "fog_enabled");

  const auto map = require(root, "map");
  if (!map.IsSequence() || map.size() < 2) fail("map", "expected a list of at least two row strings");
  std::vector<TileKind> tiles;
  const int height = static_cast<int>(map.size());
  int width = -1;
  for (std::size_t y = 0; y < map.size(); ++y) {
    const std::string key = "map[" + std::to_string(y) + "]";
    const auto row = scalar<std::string>(map[y], key);
    if (width < 0) width = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != width) fail(key, "row width differs from the first row");
    for (char ch : row) {
      try {
        tiles.push_back(tile_from_char(ch));
      } catch (const ConfigError& e) {
        fail(key, e.what());
      }
    }
  }
  if (width < 2) fail("map", "must be at least 2x2");
  c.grid = Grid(width, height, std::move(tiles));

  const auto types = require(root, "unit_types");
  if (!types.IsSequence()) fail("unit_types", "expected a list");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& n = types[i];
    const std::string k = "unit_types[" + std::to_string(i) + "]";
    if (!n.IsMap()) fail(k, "expected a mapping");
    check_keys(n, {"name", "health", "attack_damage", "movement_range", "attack_range", "vision_range", "abilities", "king"},
               k);
    UnitType t;
    t.name = scalar<std::string>(require(n, "name"), k + ".name");
    t.health = scalar<int>(require(n, "health"), k + ".health");
    if (n["attack_damage"]) t.attack_damage = scalar<int>(n["attack_damage"], k + ".attack_damage");
    if (n["movement_range"]) t.movement_range = scalar<int>(n["movement_range"], k + ".movement_range");
    if (n["attack_range"]) t.attack_range = scalar<int>(n["attack_range"], k + ".attack_range");
    if (n["vision_range"]) t.vision_range = scalar<int>(n["vision_range"], k + ".vision_range");
    if (n["king"]) t.king = scalar<bool>(n["king"], k + ".king");
    if (const auto ab = n["abilities"]) {
      if (!ab.IsSequence()) fail(k + ".abilities", "expected a list");
      for (const auto& a : ab) t.abilities.push_back(parse_ability(scalar<std::string>(a, k + ".abilities"), k + ".abilities"));
    }
    c.unit_types.push_back(std::move(t));
  }

  const auto roster = require(root, "roster");
  if (!roster.IsSequence()) fail("roster", "expected a list of unit type names");
  for (std::size_t i = 0; i < roster.size(); ++i) {
    c.roster.push_back(scalar<std::string>(roster[i], "roster[" + std::to_string(i) + "]"));
  }

  const auto zones = require(root, "spawn_zones");
  if (!zones.IsMap()) fail("spawn_zones", "expected player0 / player1 entries");
  check_keys(zones, {"player0", "player1"}, "spawn_zones");
  c.spawn_zones[0] = parse_zone(require(zones, "player0"), "spawn_zones.player0");
  c.spawn_zones[1] = parse_zone(require(zones, "player1"), "spawn_zones.player1");

  validate(c);
  return c;
}

ModeConfig load_mode(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open mode file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_mode(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

std::string zone_line(const std::vector<Position>& zone) {
  std::string out = "[";
  for (std::size_t i = 0; i < zone.size(); ++i) {
    if (i) out += ", ";
    out += "[" + std::to_string(zone[i].x) + ", " + std::to_string(zone[i].y) + "]";
  }
  return out + "]";
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string serialize_mode(const ModeConfig& c) {
  std::ostringstream out;
  out << "name: " << c.name << '\n'
      << "version: " << c.version << '\n'
      << "turn_limit: " << c.turn_limit << '\n'
      << "action_points: " << c.action_points << '\n'
      << "win_rule: " << to_string(c.win_rule) << '\n'
      << "round_effect: " << to_string(c.round_effect) << '\n'
      << "decay_amount: " << c.decay_amount << '\n'
      << "heal_amount: " << c.heal_amount << '\n'
      << "push_enabled: " << yes_no(c.push_enabled) << '\n'
      << "ability_range: " << c.ability_range << '\n'
      << "fog_enabled: " << yes_no(c.fog_enabled) << '\n'
      << "map:\n";
  for (const auto& row : c.grid.rows()) out << "  - \"" << row << "\"\n";
  out << "unit_types:\n";
  for (const auto& t : c.unit_types) {
    out << "  - name: " << t.name << '\n'
        << "    health: " << t.health << '\n'
        << "    attack_damage: " << t.attack_damage << '\n'
        << "    movement_range: " << t.movement_range << '\n'
        << "    attack_range: " << t.attack_range << '\n'
        << "    vision_range: " << t.vision_range << '\n'
        << "    abilities: [";
    for (std::size_t i = 0; i < t.abilities.size(); ++i) out << (i ? ", " : "") << to_string(t.abilities[i]);
    out << "]\n"
        << "    king: " << yes_no(t.king) << '\n';
  }
  out << "roster: [";
  for (std::size_t i = 0; i < c.roster.size(); ++i) out << (i ? ", " : "") << c.roster[i];
  out << "]\n"
      << "spawn_zones:\n"
      << "  player0: " << zone_line(c.spawn_zones[0]) << '\n'
      << "  player1: " << zone_line(c.spawn_zones[1]) << '\n';
  return out.str();
}

std::filesystem::path config_root() {
  if (const char* env = std::getenv("ARENA_CONFIG_DIR"); env && *env) return env;
#ifdef ARENA_CONFIG_DIR
  return ARENA_CONFIG_DIR;
#else
  return "configs";
#endif
}

std::filesystem::path resolve_mode_path(std::string_view name_or_path) {
  std::filesystem::path p(name_or_path);
  if (std::filesystem::exists(p)) return p;
  auto shipped = config_root() / "modes" / (std::string(name_or_path) + ".yaml");
  if (std::filesystem::exists(shipped)) return shipped;
  throw ConfigError("no mode file or shipped mode named '" + std::string(name_or_path) + "'");
}

ModePtr load_mode_ptr(std::string_view name_or_path) {
  return std::make_shared<const ModeConfig>(load_mode(resolve_mode_path(name_or_path)));
}

}  // namespace arena
