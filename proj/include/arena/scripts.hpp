#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "arena/game_state.hpp"
#include "arena/rng.hpp"

namespace arena {

/// Portfolio scripts. The integer codes are stable: they appear in genomes,
/// logs and exported CSV files.
enum class ScriptId : std::uint8_t {
  attack_closest = 0,
  attack_weakest = 1,
  run_away = 2,
  run_to_friends = 3,
  use_special_ability = 4,
  random = 5,
};

inline constexpr int kScriptCount = 6;
inline constexpr std::array<ScriptId, kScriptCount> kAllScripts = {
    ScriptId::attack_closest, ScriptId::attack_weakest, ScriptId::run_away,
    ScriptId::run_to_friends, ScriptId::use_special_ability, ScriptId::random};

constexpr int code(ScriptId s) { return static_cast<int>(s); }
std::optional<ScriptId> script_from_code(int code);

std::string_view script_name(ScriptId s);   // "AttackClosest", ...
std::string_view script_abbrev(ScriptId s); // "AC", "AW", "RA", "RF", "UA", "RND"
std::optional<ScriptId> script_from_name(std::string_view name);  // accepts either form

/// Non-empty set of scripts kept in canonical (code) order so that genome
/// indices stay stable.
class Portfolio {
 public:
  Portfolio();  // all six scripts
  explicit Portfolio(std::vector<ScriptId> scripts);  // throws std::invalid_argument if empty
  static Portfolio from_mask(unsigned mask);

  std::size_t size() const { return scripts_.size(); }
  ScriptId operator[](std::size_t i) const { return scripts_[i]; }
  bool contains(ScriptId s) const;
  unsigned mask() const;
  const std::vector<ScriptId>& scripts() const { return scripts_; }
  auto begin() const { return scripts_.begin(); }
  auto end() const { return scripts_.end(); }

  ScriptId sample(Rng& rng) const { return scripts_[rng.index(scripts_.size())]; }

  friend bool operator==(const Portfolio&, const Portfolio&) = default;

 private:
  std::vector<ScriptId> scripts_;
};

/// Runs one script for one unit. The unit must be alive, owned by the current
/// player and have at least one legal action (std::invalid_argument
/// otherwise). Always returns a member of legal_actions(state, unit_id); never
/// end_turn. Only fallback branches draw from `rng`.
Action script_action(ScriptId script, const GameState& state, UnitId unit_id, Rng& rng);

}  // namespace arena
