#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "arena/results_io.hpp"
#include "arena/tournament.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace arena;
using namespace arena::testing;

namespace {

AgentSpec spec(AgentKind k) { return AgentSpec::defaults(k); }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("arena_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::size_t count_lines(const std::filesystem::path& p) {
  const std::string text = read_file(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::vector<AgentSpec> five_cheap_agents() {
  return with_unique_names({spec(AgentKind::random), spec(AgentKind::combat), spec(AgentKind::pusher),
                            spec(AgentKind::random), spec(AgentKind::combat)});
}

}  // namespace

TEST_CASE("protocol constants") {
  CHECK(kWinPoints == 3);
  CHECK(kDrawPoints == 1);
  CHECK(kLossPoints == 0);
  CHECK(kDefaultBudget == 1000);
  CHECK(LeagueOptions{}.games_per_pair == 200);
  CHECK(match_points(Outcome::win_player1, 1) == 3);
  CHECK(match_points(Outcome::win_player1, 0) == 0);
  CHECK(match_points(Outcome::draw, 0) == 1);
  CHECK(shipped("kings")->turn_limit == 100);
  CHECK(rule_based_opponent(*shipped("pushers")).kind == AgentKind::pusher);
  CHECK(rule_based_opponent(*shipped("kings")).kind == AgentKind::combat);
}

TEST_CASE("matches are reproducible and terminate") {
  const auto mode = shipped("kings");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = play_match(mode, spec(AgentKind::random), spec(AgentKind::random), seed, seed % 2 == 0, 1000);
    const auto b = play_match(mode, spec(AgentKind::random), spec(AgentKind::random), seed, seed % 2 == 0, 1000);
    CHECK(a == b);
    CHECK(a.turns_played <= mode->turn_limit);
    CHECK(a.outcome != Outcome::ongoing);
  }
  const auto p = play_match(mode, spec(AgentKind::prhea), spec(AgentKind::combat), 3, false, 200);
  CHECK(p == play_match(mode, spec(AgentKind::prhea), spec(AgentKind::combat), 3, false, 200));
  CHECK(p.fm_calls[0] > 0);
  CHECK(p.fm_calls[1] == 0);
  CHECK(std::accumulate(p.usage[0].begin(), p.usage[0].end(), 0L) > 0);
  CHECK(std::accumulate(p.usage[1].begin(), p.usage[1].end(), 0L) == 0);
}

TEST_CASE("the observer sees every decision") {
  const auto mode = shipped("healers");
  int decisions = 0;
  long fm = 0;
  const auto rec = play_match(mode, spec(AgentKind::poe), spec(AgentKind::random), 2, false, 100,
                              [&](const GameState& before, int player, const Decision& d) {
                                CHECK(before.current_player == player);
                                CHECK(d.trace.fm_calls <= 100);
                                if (player == 0) fm += d.trace.fm_calls;
                                ++decisions;
                              });
  CHECK(decisions > 0);
  CHECK(fm == rec.fm_calls[0]);
}

TEST_CASE("league schedule covers every pair, seed and seat") {
  const auto jobs = league_schedule(3, 200);
  CHECK(jobs.size() == 3 * 200);
  std::map<std::pair<int, int>, std::set<std::pair<std::uint64_t, bool>>> seen;
  for (const auto& j : jobs) {
    CHECK(j.a < j.b);
    CHECK(j.seed >= 1);
    CHECK(j.seed <= 100);
    seen[{j.a, j.b}].insert({j.seed, j.seats_swapped});
  }
  CHECK(seen.size() == 3);
  for (const auto& [pair, games] : seen) CHECK(games.size() == 200);
  CHECK(league_schedule(1, 200).empty());
  CHECK_THROWS_AS(league_schedule(3, 7), std::invalid_argument);
  CHECK_THROWS_AS(league_schedule(3, 0), std::invalid_argument);
}

TEST_CASE("unique names") {
  const auto specs = with_unique_names({spec(AgentKind::random), spec(AgentKind::combat), spec(AgentKind::random),
                                        spec(AgentKind::random)});
  CHECK(specs[0].name() == "random");
  CHECK(specs[2].name() == "random#2");
  CHECK(specs[3].name() == "random#3");
}

TEST_CASE("league results do not depend on the worker count") {
  const auto mode = shipped("pushers");
  const auto agents = with_unique_names({spec(AgentKind::random), spec(AgentKind::pusher), spec(AgentKind::prhea)});
  LeagueOptions opt;
  opt.games_per_pair = 6;
  opt.budget = 100;
  const auto one = run_league(mode, agents, opt);
  opt.workers = 3;
  const auto three = run_league(mode, agents, opt);
  CHECK(one == three);
  CHECK(one.size() == 18);
}

TEST_CASE("tabulation is consistent") {
  const auto mode = shipped("kings");
  const auto agents = five_cheap_agents();
  LeagueOptions opt;
  opt.games_per_pair = 10;
  const auto matches = run_league(mode, agents, opt);
  std::vector<std::string> names;
  for (const auto& a : agents) names.push_back(a.name());
  const auto table = tabulate(names, matches);
  for (std::size_t i = 0; i < names.size(); ++i) {
    CHECK(table.cells[i][i].games == 0);
    int games = 0;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (i == j) continue;
      const auto& c = table.cells[i][j];
      const auto& r = table.cells[j][i];
      CHECK(c.games == 10);
      CHECK(c.wins == r.losses);
      CHECK(c.draws == r.draws);
      CHECK(c.wins + c.draws + c.losses == c.games);
      games += c.games;
    }
    const auto& t = table.totals[i];
    CHECK(t.games == games);
    CHECK(t.points == 3L * t.wins + t.draws);
  }
  CHECK_THROWS(tabulate({"random"}, matches));
}

TEST_CASE("usage profiles count script-chosen actions") {
  const auto mode = shipped("kings");
  const auto profile = usage_profile(mode, spec(AgentKind::pgs), spec(AgentKind::combat), 4, 100);
  CHECK(profile.games == 4);
  CHECK_FALSE(profile.error);
  const auto f = profile.frequencies();
  CHECK(std::accumulate(f.begin(), f.end(), 0.0) == doctest::Approx(1.0));
  CHECK(profile == usage_profile(mode, spec(AgentKind::pgs), spec(AgentKind::combat), 4, 100, 2));

  const auto none = usage_profile(mode, spec(AgentKind::random), spec(AgentKind::combat), 2, 100);
  CHECK(none.error);
  CHECK(none.total() == 0);
  for (double x : none.frequencies()) CHECK(x == 0.0);

  LeagueOptions opt;
  opt.games_per_pair = 4;
  opt.budget = 50;
  const auto agents = with_unique_names({spec(AgentKind::poe), spec(AgentKind::combat)});
  const auto matches = run_league(mode, agents, opt);
  const auto usage = league_usage("kings", {"poe", "combat"}, matches);
  REQUIRE(usage.size() == 2);
  long expected = 0;
  for (const auto& m : matches) {
    const int seat = m.agent0 == "poe" ? 0 : 1;
    expected += std::accumulate(m.usage[static_cast<std::size_t>(seat)].begin(),
                                m.usage[static_cast<std::size_t>(seat)].end(), 0L);
  }
  CHECK(usage[0].total() == expected);
  CHECK(usage[0].opponent == "league");
  CHECK(usage[1].error);
}

TEST_CASE("exports round-trip and are byte-identical on repeat") {
  const auto mode = shipped("kings");
  const auto agents = with_unique_names({spec(AgentKind::random), spec(AgentKind::combat), spec(AgentKind::poe)});
  LeagueOptions opt;
  opt.games_per_pair = 4;
  opt.budget = 50;
  ResultsBundle bundle;
  bundle.meta.command = "league";
  bundle.meta.flags = {{"--games", "4"}, {"--agents", "random combat poe"}};
  bundle.meta.timestamp = "2000-01-01T00:00:00Z";
  bundle.mode = "kings";
  for (const auto& a : agents) bundle.agents.push_back(a.name());
  bundle.matches = run_league(mode, agents, opt);
  bundle.usage = league_usage(bundle.mode, bundle.agents, bundle.matches);

  const auto d1 = scratch_dir("export1");
  const auto d2 = scratch_dir("export2");
  const auto files = export_results(bundle, d1);
  export_results(bundle, d2);
  CHECK(files.size() == 7);
  for (const auto& f : files) CHECK(read_file(f) == read_file(d2 / f.filename()));

  CHECK(load_results(d1) == bundle);
  std::filesystem::remove(d1 / "matches.csv");
  std::filesystem::remove(d1 / "usage.csv");
  CHECK(load_results(d1) == bundle);  // falls back to results.json

  const auto header = read_file(d2 / "matches.csv").substr(0, read_file(d2 / "matches.csv").find('\n'));
  CHECK(header ==
        "mode,agent0,agent1,seed,seats_swapped,outcome,turns_played,fm_calls0,fm_calls1,"
        "usage0_AC,usage0_AW,usage0_RA,usage0_RF,usage0_UA,usage0_RND,"
        "usage1_AC,usage1_AW,usage1_RA,usage1_RF,usage1_UA,usage1_RND");
  CHECK(count_lines(d2 / "matches.csv") == 1 + bundle.matches.size());
  CHECK(count_lines(d2 / "usage.csv") == 1 + 6 * bundle.usage.size());
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("an empty league exports header-only tables") {
  ResultsBundle bundle;
  bundle.meta.command = "league";
  bundle.mode = "kings";
  const auto dir = scratch_dir("empty");
  export_results(bundle, dir);
  CHECK(count_lines(dir / "matches.csv") == 1);
  CHECK(count_lines(dir / "pairs.csv") == 1);
  CHECK(count_lines(dir / "usage.csv") == 1);
  CHECK(load_results(dir) == bundle);
  std::filesystem::remove_all(dir);
}

TEST_CASE("a five-agent league exports 2000 match rows") {
  const auto mode = shipped("kings");
  const auto agents = five_cheap_agents();
  ResultsBundle bundle;
  bundle.meta.command = "league";
  bundle.mode = "kings";
  for (const auto& a : agents) bundle.agents.push_back(a.name());
  LeagueOptions opt;
  opt.workers = 2;
  bundle.matches = run_league(mode, agents, opt);
  const auto dir = scratch_dir("five");
  export_results(bundle, dir, ExportFormat::csv);
  CHECK(count_lines(dir / "matches.csv") == 2001);
  CHECK(count_lines(dir / "pairs.csv") == 1 + 5 * 4);
  CHECK(count_lines(dir / "league.csv") == 1 + 5);
  CHECK_FALSE(std::filesystem::exists(dir / "results.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("league checkpoints resume to the same result") {
  const auto mode = shipped("kings");
  const auto agents = with_unique_names({spec(AgentKind::random), spec(AgentKind::combat), spec(AgentKind::random)});
  const auto dir = scratch_dir("checkpoint");
  std::filesystem::create_directories(dir);
  LeagueOptions opt;
  opt.games_per_pair = 8;
  opt.checkpoint = dir / "league.jsonl";
  const auto full = run_league(mode, agents, opt);
  CHECK(count_lines(*opt.checkpoint) == 24);

  // Keep ten finished games and a torn trailing line.
  std::string text = read_file(*opt.checkpoint);
  std::size_t cut = 0;
  for (int i = 0; i < 10; ++i) cut = text.find('\n', cut) + 1;
  write_file(*opt.checkpoint, text.substr(0, cut) + text.substr(cut, 15));
  int reported = -1;
  const auto resumed = run_league(mode, agents, opt, [&](int done, int) { reported = done; });
  CHECK(resumed == full);
  CHECK(reported == 24);

  const auto [index, record] = checkpoint_from_line(checkpoint_line(5, full[5]));
  CHECK(index == 5);
  CHECK(record == full[5]);
  CHECK(checkpoint_from_line("{\"job\": 3, \"mod").first == -1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema mismatches are refused") {
  ResultsBundle bundle;
  bundle.meta.command = "league";
  bundle.mode = "kings";
  const auto dir = scratch_dir("schema");
  export_results(bundle, dir);
  std::string meta = read_file(dir / "metadata.json");
  const auto at = meta.find("\"schema_version\": 1");
  REQUIRE(at != std::string::npos);
  meta.replace(at, 19, "\"schema_version\": 2");
  write_file(dir / "metadata.json", meta);
  try {
    load_results(dir);
    FAIL("expected a schema error");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("2") != std::string::npos);
    CHECK(what.find("1") != std::string::npos);
    CHECK(what.find("metadata.json") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting and CSV quoting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(parse_csv_line("x,\"a,b\",\"q\"\"\",") == std::vector<std::string>{"x", "a,b", "q\"", ""});
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  std::vector<int> hit(50, 0);
  parallel_for(50, 4, [&](int i) { hit[static_cast<std::size_t>(i)] = 1; });
  CHECK(std::accumulate(hit.begin(), hit.end(), 0) == 50);
  try {
    parallel_for(20, 3, [](int i) {
      if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}
