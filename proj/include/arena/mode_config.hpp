#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/grid.hpp"

namespace arena {

/// Malformed or invalid mode / agent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Ability : std::uint8_t { heal, push };

enum class WinRule : std::uint8_t { king_death, last_side_standing };

enum class RoundEffect : std::uint8_t { none, decay };

std::string_view to_string(Ability a);
std::string_view to_string(WinRule r);
std::string_view to_string(RoundEffect e);

struct UnitType {
  std::string name;
  int health = 1;
  int attack_damage = 0;
  int movement_range = 1;
  int attack_range = 1;
  int vision_range = 1;
  std::vector<Ability> abilities;  // declared order is the try-order for scripts
  bool king = false;

  friend bool operator==(const UnitType&, const UnitType&) = default;
};

/// Rule set and scenario for one game mode. Immutable once loaded.
struct ModeConfig {
  static constexpr int kMaxUnitsPerSide = 16;

  std::string name;
  int version = 1;
  int turn_limit = 100;
  int action_points = 1;
  WinRule win_rule = WinRule::last_side_standing;
  RoundEffect round_effect = RoundEffect::none;
  int decay_amount = 0;
  int heal_amount = 0;
  bool push_enabled = false;
  int ability_range = 1;
  bool fog_enabled = false;
  Grid grid;
  std::vector<UnitType> unit_types;
  std::vector<std::string> roster;  // unit type names; identical for both players
  std::vector<Position> spawn_zones[2];

  int unit_type_index(std::string_view type_name) const;  // -1 when unknown

  friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

using ModePtr = std::shared_ptr<const ModeConfig>;

/// Checks every invariant; throws ConfigError naming the offending key.
void validate(const ModeConfig& config);

ModeConfig parse_mode(std::string_view text);
ModeConfig load_mode(const std::filesystem::path& path);

/// Canonical text form. parse_mode(serialize_mode(c)) == c.
std::string serialize_mode(const ModeConfig& config);

/// Resolves a shipped mode name ("kings") or a file path.
std::filesystem::path resolve_mode_path(std::string_view name_or_path);

ModePtr load_mode_ptr(std::string_view name_or_path);

/// Root directory of the shipped configuration files.
std::filesystem::path config_root();

}  // namespace arena
