#include <map>

#include "arena/scripts.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace arena;
using namespace arena::testing;

TEST_CASE("script codes, names and portfolios") {
  for (int i = 0; i < kScriptCount; ++i) {
    const ScriptId s = *script_from_code(i);
    CHECK(code(s) == i);
    CHECK(script_from_name(script_name(s)) == s);
    CHECK(script_from_name(script_abbrev(s)) == s);
  }
  CHECK_FALSE(script_from_code(6).has_value());
  CHECK(script_abbrev(ScriptId::use_special_ability) == "UA");

  const Portfolio p({ScriptId::random, ScriptId::attack_closest, ScriptId::random});
  CHECK(p.size() == 2);
  CHECK(p[0] == ScriptId::attack_closest);
  CHECK(p.mask() == 0b100001u);
  CHECK(Portfolio::from_mask(p.mask()) == p);
  CHECK(Portfolio().size() == 6);
  CHECK_THROWS_AS(Portfolio(std::vector<ScriptId>{}), std::invalid_argument);
}

TEST_CASE("AttackClosest and AttackWeakest pick their targets") {
  auto m = base_mode(open_rows(7, 7));
  // Archer at (3,3), range 3: enemy 1 at distance 1 with 8 hp, enemy 2 at distance 3 with 2 hp.
  auto s = make_state(m, {{0, "archer", {3, 3}}, {1, "soldier", {4, 4}, 8}, {1, "soldier", {3, 6}, 2}});
  Rng rng(1);
  auto closest = script_action(ScriptId::attack_closest, s, 0, rng);
  CHECK(closest.verb == Verb::attack);
  CHECK(closest.target_id == 1);
  auto weakest = script_action(ScriptId::attack_weakest, s, 0, rng);
  CHECK(weakest.verb == Verb::attack);
  CHECK(weakest.target_id == 2);
}

TEST_CASE("attack ties break by lower id") {
  auto m = base_mode(open_rows(5, 5));
  auto s = make_state(m, {{0, "soldier", {2, 2}}, {1, "soldier", {3, 3}}, {1, "soldier", {1, 1}}});
  Rng rng(1);
  CHECK(script_action(ScriptId::attack_closest, s, 0, rng).target_id == 1);
  CHECK(script_action(ScriptId::attack_weakest, s, 0, rng).target_id == 1);
}

TEST_CASE("out of range, attack scripts walk toward their target") {
  auto m = base_mode(open_rows(9, 3));
  auto s = make_state(m, {{0, "soldier", {0, 1}}, {1, "soldier", {8, 1}}});
  Rng rng(1);
  const auto a = script_action(ScriptId::attack_closest, s, 0, rng);
  CHECK(a.verb == Verb::move);
  // Distance 6 is reachable on three tiles of column 2; row-major picks (2,0).
  CHECK(a.target == Position{2, 0});
}

TEST_CASE("RunAway and RunToFriends") {
  auto m = base_mode(open_rows(7, 7));
  auto s = make_state(m, {{0, "soldier", {3, 3}}, {0, "soldier", {0, 6}}, {1, "soldier", {3, 0}}});
  Rng rng(1);
  const auto away = script_action(ScriptId::run_away, s, 0, rng);
  CHECK(away.verb == Verb::move);
  CHECK(away.target.y == 5);  // maximal distance from the enemy on row 0
  const auto to_friend = script_action(ScriptId::run_to_friends, s, 0, rng);
  CHECK(to_friend.target == Position{1, 5});
}

TEST_CASE("UseSpecialAbility heals the most damaged ally and prefers lethal pushes") {
  auto m = base_mode({".......", ".......", "...O...", ".......", "......."});
  m.push_enabled = true;
  Rng rng(1);
  {
    auto s = make_state(m, {{0, "medic", {1, 1}, 9}, {0, "soldier", {2, 1}, 4}, {0, "soldier", {0, 0}, 6}, {1, "soldier", {6, 4}}});
    const auto a = script_action(ScriptId::use_special_ability, s, 0, rng);
    CHECK(a.verb == Verb::heal);
    CHECK(a.target_id == 1);
  }
  {
    // Enemy 1 (lower id) can only be pushed onto plain ground; enemy 2 can be pushed into the hole.
    auto s = make_state(m, {{0, "shover", {2, 2}}, {1, "soldier", {2, 1}}, {1, "soldier", {1, 2}}});
    auto b = make_state(m, {{0, "shover", {5, 2}}, {1, "soldier", {5, 1}}, {1, "soldier", {4, 2}}});
    CHECK(script_action(ScriptId::use_special_ability, s, 0, rng).target_id == 1);
    const auto lethal = script_action(ScriptId::use_special_ability, b, 0, rng);
    CHECK(lethal.verb == Verb::push);
    CHECK(lethal.target_id == 2);
  }
}

TEST_CASE("scripts fall back to a uniform random legal action") {
  auto m = base_mode(open_rows(5, 5));
  // No ability and no allies: UseSpecialAbility and RunToFriends must fall back.
  auto s = make_state(m, {{0, "soldier", {2, 2}}, {1, "soldier", {4, 4}}});
  const auto legal = legal_actions(s, 0);
  for (ScriptId id : {ScriptId::use_special_ability, ScriptId::run_to_friends, ScriptId::random}) {
    Rng rng(99);
    std::map<int, int> hits;
    const int draws = 6000;
    for (int i = 0; i < draws; ++i) {
      const auto a = script_action(id, s, 0, rng);
      const auto it = std::find(legal.begin(), legal.end(), a);
      REQUIRE(it != legal.end());
      ++hits[static_cast<int>(it - legal.begin())];
    }
    // Chi-square against uniform; the 0.999 quantile for df <= 30 is below 60.
    const double expected = static_cast<double>(draws) / static_cast<double>(legal.size());
    double chi2 = 0.0;
    for (std::size_t k = 0; k < legal.size(); ++k) {
      const double d = hits[static_cast<int>(k)] - expected;
      chi2 += d * d / expected;
    }
    CHECK(chi2 < 60.0);
  }
}

TEST_CASE("every script returns a legal action on random positions") {
  Rng rng(5);
  for (const char* name : {"kings", "pushers", "healers"}) {
    const auto mode = shipped(name);
    for (int game = 0; game < 10; ++game) {
      GameState s = initial_state(mode, rng.next());
      while (!s.terminal()) {
        const auto actor = acting_unit(s);
        if (!actor) {
          s = end_turn(s);
          continue;
        }
        for (ScriptId id : kAllScripts) {
          const auto a = script_action(id, s, *actor, rng);
          CHECK(is_legal(s, a));
          CHECK_FALSE(a.is_end_turn());
        }
        s = advance(s, script_action(ScriptId::random, s, *actor, rng));
      }
    }
  }
}

TEST_CASE("deterministic scripts draw nothing from the stream") {
  auto m = base_mode(open_rows(5, 5));
  auto s = make_state(m, {{0, "soldier", {2, 2}}, {1, "soldier", {3, 3}}});
  Rng a(4), b(4);
  script_action(ScriptId::attack_closest, s, 0, a);
  CHECK(a.next() == b.next());
}

TEST_CASE("script preconditions") {
  auto m = base_mode(open_rows(5, 5));
  auto s = make_state(m, {{0, "soldier", {2, 2}}, {1, "soldier", {4, 4}}});
  Rng rng(1);
  CHECK_THROWS_AS(script_action(ScriptId::random, s, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(script_action(ScriptId::random, s, 7, rng), std::invalid_argument);
}
