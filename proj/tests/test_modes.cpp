#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"

using namespace arena;

namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kMinimal = R"(name: tiny
map:
  - "...."
  - "...."
unit_types:
  - name: grunt
    health: 5
    attack_damage: 1
roster: [grunt]
spawn_zones:
  player0: [[0, 0]]
  player1: [[3, 1]]
)";

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_mode(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped modes load and round-trip byte for byte") {
  for (const char* name : {"kings", "pushers", "healers"}) {
    CAPTURE(name);
    const auto path = resolve_mode_path(name);
    const std::string text = read_text(path);
    const ModeConfig mode = parse_mode(text);
    CHECK(mode.name == name);
    CHECK(serialize_mode(mode) == text);
    CHECK(parse_mode(serialize_mode(mode)) == mode);
  }
}

TEST_CASE("shipped modes have the documented rules") {
  const auto kings = testing::shipped("kings");
  CHECK(kings->win_rule == WinRule::king_death);
  CHECK(kings->turn_limit == 100);
  CHECK_FALSE(kings->fog_enabled);

  const auto pushers = testing::shipped("pushers");
  CHECK(pushers->push_enabled);
  CHECK(pushers->action_points == 2);
  CHECK(pushers->grid.has_holes());

  const auto healers = testing::shipped("healers");
  CHECK(healers->round_effect == RoundEffect::decay);
  CHECK(healers->heal_amount > 0);
}

TEST_CASE("defaults are filled in for optional keys") {
  const ModeConfig m = parse_mode(kMinimal);
  CHECK(m.turn_limit == 100);
  CHECK(m.action_points == 1);
  CHECK(m.win_rule == WinRule::last_side_standing);
  CHECK(m.unit_types[0].movement_range == 1);
  CHECK(m.grid.width() == 4);
}

TEST_CASE("validation errors name the offending key") {
  CHECK(error_of(with(kMinimal, "name: tiny\n", "name: tiny\nturn_limit: 0\n")).starts_with("turn_limit:"));
  CHECK(error_of(with(kMinimal, "name: tiny\n", "name: tiny\nbogus: 1\n")).starts_with("bogus: unknown key"));
  CHECK(error_of(with(kMinimal, "  - \"....\"\n  - \"....\"", "  - \"O...\"\n  - \"....\""))
            .starts_with("map: hole tiles"));
  CHECK(error_of(with(kMinimal, "[[3, 1]]", "[[0, 0]]")).starts_with("spawn_zones.player1[0]: tile (0,0) listed twice"));
  CHECK(error_of(with(kMinimal, "[[3, 1]]", "[[9, 1]]")).starts_with("spawn_zones.player1[0]: tile (9,1) is out of bounds"));
  CHECK(error_of(with(kMinimal, "roster: [grunt]", "roster: [ogre]")).starts_with("roster[0]: unknown unit type"));
  CHECK(error_of(with(kMinimal, "name: tiny\n", "name: tiny\nwin_rule: king_death\n")).starts_with("roster: king_death"));
  CHECK(error_of(with(kMinimal, "    health: 5", "    health: -1")).starts_with("unit_types[0].health"));
  CHECK(error_of(with(kMinimal, "  - \"....\"\n  - \"....\"", "  - \"....\"\n  - \"..\"")).starts_with("map[1]"));
  CHECK(error_of(with(kMinimal, "roster: [grunt]\n", "")).starts_with("roster: missing"));
  CHECK(error_of(with(kMinimal, "    attack_damage: 1", "    attack_damage: 1\n    abilities: [heal]"))
            .starts_with("unit_types[0].abilities: heal requires"));
}

TEST_CASE("load errors carry the file path") {
  const auto path = std::filesystem::temp_directory_path() / "arena_bad_mode.yaml";
  {
    std::ofstream out(path);
    out << with(kMinimal, "name: tiny\n", "name: tiny\nturn_limit: -3\n");
  }
  try {
    load_mode(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(path.string()) == 0);
    CHECK(std::string(e.what()).find("turn_limit") != std::string::npos);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(resolve_mode_path("no-such-mode"), ConfigError);
}
