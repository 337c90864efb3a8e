// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//
//   acceptance [--only N]...   run a subset of the criteria (1-7)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arena/bench.hpp"
#include "arena/forward_model.hpp"
#include "arena/mode_config.hpp"
#include "arena/ntbea.hpp"
#include "arena/nsga2.hpp"
#include "arena/results_io.hpp"
#include "arena/rule_based.hpp"
#include "arena/search_agents.hpp"
#include "arena/tournament.hpp"
#include "landscape.hpp"

using namespace arena;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v) {
  std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1. engine invariants ------------------------------------------------------

int side_ap(const GameState& s, int player) {
  int total = 0;
  for (const auto& u : s.units) {
    if (u.owner == player) total += u.action_points;
  }
  return total;
}

// Returns the number of violated invariants for one transition. `occupied` is
// scratch space of grid size.
int check_transition(const GameState& before, const Action& a, const GameState& after, std::vector<char>& occupied) {
  int bad = 0;
  const Grid& grid = after.grid();
  std::fill(occupied.begin(), occupied.end(), 0);
  for (const auto& u : after.units) {
    if (!grid.walkable(u.pos)) {
      ++bad;
      continue;
    }
    char& cell = occupied[static_cast<std::size_t>(grid.index(u.pos))];
    if (cell++) ++bad;  // overlap
    if (u.health <= 0 || u.health > u.max_health) ++bad;
    if (u.action_points < 0) ++bad;
  }
  if (after.terminal()) return bad;
  const int me = before.current_player;
  if (after.current_player == me) {
    // One point leaves the actor; nothing else changes.
    if (a.is_end_turn()) ++bad;
    const Unit* actor = after.find(a.actor);
    const Unit* was = before.find(a.actor);
    if (!actor || !was || actor->action_points != was->action_points - 1) ++bad;
    if (side_ap(after, me) != side_ap(before, me) - 1) ++bad;
    return bad;
  }
  // Turn passed: an explicit end_turn keeps leftover points, an automatic one
  // follows the side's last point. The new side starts with full points.
  if (!a.is_end_turn() && side_ap(before, me) != 1) ++bad;
  for (const auto& u : after.units) {
    if (u.owner == me) {
      const Unit* was = before.find(u.id);
      if (!was || u.action_points != (a.is_end_turn() ? was->action_points : 0)) ++bad;
    } else if (u.action_points != after.config().action_points) {
      ++bad;
    }
  }
  return bad;
}

int check_absorbing(const GameState& s) {
  int bad = 0;
  if (outcome(s) != s.status) ++bad;
  for (const auto& u : s.units) {
    if (!legal_actions(s, u.id).empty()) ++bad;
  }
  try {
    (void)advance(s, Action::end_turn());
    ++bad;
  } catch (const GameError&) {
  }
  return bad;
}

Verdict criterion_invariants() {
  const auto t0 = Clock::now();
  long violations = 0, games = 0, steps = 0;
  for (const char* name : {"kings", "pushers", "healers"}) {
    const auto mode = load_mode_ptr(name);
    std::vector<char> occupied(static_cast<std::size_t>(mode->grid.area()));
    for (int g = 0; g < 10000; ++g) {
      GameState s = initial_state(mode, derive_seed(0xacce, static_cast<std::uint64_t>(g)), g % 2 == 1);
      Rng rng(static_cast<std::uint64_t>(g) + 1);
      while (!s.terminal()) {
        // Uniform over the acting unit's legal actions plus end_turn.
        Action a = Action::end_turn();
        if (const auto actor = acting_unit(s)) {
          const auto legal = legal_actions(s, *actor);
          const std::size_t pick = rng.index(legal.size() + 1);
          if (pick < legal.size()) a = legal[pick];
        }
        GameState next = advance(s, a);
        violations += check_transition(s, a, next, occupied);
        s = std::move(next);
        ++steps;
      }
      if (s.turn > mode->turn_limit) ++violations;
      violations += check_absorbing(s);
      ++games;
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = violations == 0 && secs < 60.0;
  v.detail = fmt("%ld games, %ld transitions, %ld violations, %.1f s (limit 60 s)", games, steps, violations, secs);
  return v;
}

// --- 2. forward-model throughput --------------------------------------------------

Verdict criterion_throughput() {
  Verdict v;
  for (const char* name : {"kings", "pushers", "healers"}) {
    const auto r = bench_forward_model(load_mode_ptr(name), 2.0, 1);
    v.detail += fmt("%s %.0f/s; ", name, r.calls_per_second());
    if (r.calls_per_second() < 50000.0) v.pass = false;
  }
  v.detail += "threshold 50000/s";
  return v;
}

// --- 3. protocol constants -----------------------------------------------------------

Verdict criterion_protocol() {
  Verdict v;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) {
      v.pass = false;
      v.detail += "failed: " + what + "; ";
    }
  };
  const FitnessProtocol protocol;
  require(protocol.games_per_eval == 20, "20 games per evaluation");
  require(protocol_score(std::vector<Outcome>(20, Outcome::win_player0), protocol) == 60.0, "20 wins score 60");
  require(protocol_score(std::vector<Outcome>(20, Outcome::draw), protocol) == 20.0, "20 draws score 20");
  require(protocol_score(std::vector<Outcome>(20, Outcome::win_player1), protocol) == 0.0, "20 losses score 0");

  // Played end to end: a one-round turn limit draws every game.
  auto config = *load_mode_ptr("kings");
  config.turn_limit = 1;
  require(evaluate_point(AgentSpec::defaults(AgentKind::random), std::make_shared<const ModeConfig>(config), 1, 0) ==
              20.0,
          "20 played draws score 20");

  const auto jobs = league_schedule(2, LeagueOptions{}.games_per_pair);
  std::set<std::pair<std::uint64_t, bool>> games;
  for (const auto& j : jobs) games.insert({j.seed, j.seats_swapped});
  bool seeds_ok = jobs.size() == 200 && games.size() == 200;
  for (std::uint64_t s = 1; s <= 100; ++s) seeds_ok = seeds_ok && games.count({s, false}) && games.count({s, true});
  require(seeds_ok, "league plays seeds 1-100 in both seat arrangements");

  for (const char* name : {"kings", "pushers", "healers"}) {
    const auto mode = load_mode_ptr(name);
    require(mode->turn_limit == 100, std::string(name) + " turn limit 100");
    // A position about to reach turn 100 ends drawn once the round closes.
    GameState s = initial_state(mode, 7);
    s.turn = 99;
    s = end_turn(s);
    s = end_turn(s);
    require(s.turn == 100 && s.status == Outcome::draw, std::string(name) + " turn 100 is a draw");
  }
  const auto rec = play_match(load_mode_ptr("kings"), AgentSpec::defaults(AgentKind::random),
                              AgentSpec::defaults(AgentKind::random), 1, false, 1000);
  require(rec.outcome != Outcome::draw || rec.turns_played == 100, "random game draws exactly at turn 100");
  if (v.pass) v.detail = "3/1/0 points, 20 wins = 60, 20 draws = 20, 200 games per pair, turn 100 draws";
  return v;
}

// --- 4. oracles ------------------------------------------------------------------------

GameState random_position(const ModePtr& mode, Rng& rng) {
  for (;;) {
    GameState s = initial_state(mode, rng.next());
    const int steps = static_cast<int>(rng.index(60));
    for (int i = 0; i < steps && !s.terminal(); ++i) {
      Action a = Action::end_turn();
      if (auto actor = acting_unit(s)) {
        const auto legal = legal_actions(s, *actor);
        a = legal[rng.index(legal.size())];
      }
      s = advance(s, a);
    }
    if (!s.terminal() && acting_unit(s)) return s;
  }
}

Verdict criterion_oracles() {
  Verdict v;
  // NSGA-II front 0 against brute-force dominance.
  Rng rng(404);
  int front_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(20);
    std::vector<ObjectiveVector> pts(n);
    for (auto& p : pts) p = {static_cast<double>(rng.index(8)), static_cast<double>(rng.index(8))};
    std::vector<int> brute;
    for (std::size_t i = 0; i < n; ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < n; ++j) dominated = dominated || nsga2::dominates(pts[j], pts[i]);
      if (!dominated) brute.push_back(static_cast<int>(i));
    }
    front_ok += nsga2::non_dominated_sort(pts).front() == brute ? 1 : 0;
  }

  // PRHEA with length 1 against the exhaustive one-ply argmax.
  const auto kings = load_mode_ptr("kings");
  AgentParams params = default_params(AgentKind::prhea);
  params.individual_length = 1;
  int prhea_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_position(kings, rng);
    PrheaAgent agent(params);
    Budget budget(kDefaultBudget);
    Rng r(static_cast<std::uint64_t>(trial));
    const auto d = agent.decide(s, budget, r);
    const std::uint64_t seed = d.trace.evaluation_seed;
    double best = -1e300;
    std::set<std::string> argmax_actions;
    for (ScriptId sc : params.portfolio) {
      Budget unlimited(1 << 20);
      const std::vector<ScriptId> genes = {sc};
      const double h = rollout_sequence(s, genes, params, unlimited, seed).h1;
      Rng act(seed);
      const std::string text = describe(script_action(sc, s, *acting_unit(s), act));
      if (h > best) {
        best = h;
        argmax_actions.clear();
      }
      if (h == best) argmax_actions.insert(text);
    }
    prhea_ok += d.trace.fitness == best && argmax_actions.count(describe(d.action)) ? 1 : 0;
  }

  // S-PRHEA with out-of-horizon changes against the fixed assignment.
  AgentParams sp = default_params(AgentKind::sprhea);
  int sparse_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_position(kings, rng);
    SparseGenome g;
    g.base = ScriptAssignment::random(s, s.current_player, sp.portfolio, rng);
    for (int i = 0; i < sp.num_changes; ++i) {
      const UnitId unit = g.base.entries()[rng.index(g.base.size())].first;
      g.changes.push_back({sp.individual_length + 1 + static_cast<int>(rng.index(10)), unit, sp.portfolio.sample(rng)});
    }
    const std::uint64_t seed = rng.next();
    Budget b1(kDefaultBudget), b2(kDefaultBudget);
    const auto a = rollout_sparse(s, g, sp, b1, seed);
    const auto b = rollout_assignment(s, g.base, sp, Horizon::actions(sp.individual_length), b2, seed);
    sparse_ok += a.h1 == b.h1 && a.objectives == b.objectives && a.fm_calls == b.fm_calls ? 1 : 0;
  }

  v.pass = front_ok == 200 && prhea_ok == 100 && sparse_ok == 100;
  v.detail = fmt("NSGA-II front 0 %d/200, PRHEA one-ply argmax %d/100, S-PRHEA fixed-assignment %d/100", front_ok,
                 prhea_ok, sparse_ok);
  return v;
}

// --- 5. directional strength ------------------------------------------------------

Verdict criterion_strength() {
  const auto t0 = Clock::now();
  const auto kings = load_mode_ptr("kings");
  const AgentKind portfolio[] = {AgentKind::pgs, AgentKind::poe, AgentKind::prhea, AgentKind::mo_prhea,
                                 AgentKind::sprhea};
  LeagueOptions opt;
  opt.games_per_pair = 100;
  opt.budget = kDefaultBudget;
  Verdict v;
  std::string vs_random, vs_prhea;
  for (AgentKind k : portfolio) {
    const auto matches = run_league(kings, {AgentSpec::defaults(k), AgentSpec::defaults(AgentKind::random)}, opt);
    const auto table = tabulate({std::string(to_string(k)), "random"}, matches);
    const double rate = table.cells[0][1].win_rate();
    vs_random += fmt("%s %.0f%% ", std::string(to_string(k)).c_str(), 100 * rate);
    if (rate < 0.90) v.pass = false;
  }
  for (AgentKind k : portfolio) {
    if (k == AgentKind::prhea) continue;
    const auto matches = run_league(kings, {AgentSpec::defaults(AgentKind::prhea), AgentSpec::defaults(k)}, opt);
    const auto table = tabulate({"prhea", std::string(to_string(k))}, matches);
    const double rate = table.cells[0][1].win_rate();
    vs_prhea += fmt("%s %.0f%% ", std::string(to_string(k)).c_str(), 100 * rate);
    if (rate < 0.40) v.pass = false;
  }
  const double secs = seconds_since(t0);
  if (secs >= 1800.0) v.pass = false;
  v.detail = "vs random (need >= 90%): " + vs_random + "| PRHEA vs (need >= 50% - 10pp): " + vs_prhea +
             fmt("| %.0f s (limit 1800 s)", secs);
  return v;
}

// --- 6. NTBEA ------------------------------------------------------------------------

Verdict criterion_ntbea() {
  Verdict v;
  // Synthetic separable landscape over the 8-dimensional PGS space.
  const auto t0 = Clock::now();
  const auto space = SearchSpace::for_agent(AgentKind::pgs);
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const testing::SeparableLandscape land(space, seed);
    NtbeaOptions opt;
    opt.seed = seed;
    const auto r = ntbea_run(space, [&](const ParameterPoint& p, int) { return land(p); }, opt);
    found += r.best == land.optimum ? 1 : 0;
  }
  const double synth_secs = seconds_since(t0);
  if (found < 80 || synth_secs >= 10.0) v.pass = false;

  // Real task: PRHEA on Kings against the combat agent.
  const auto t1 = Clock::now();
  const auto kings = load_mode_ptr("kings");
  const AgentSpec base = AgentSpec::defaults(AgentKind::prhea);
  const auto prhea_space = SearchSpace::for_agent(AgentKind::prhea);
  const FitnessProtocol protocol;
  const std::uint64_t tune_seed = 1;
  NtbeaOptions opt;
  opt.seed = tune_seed;
  const auto result = ntbea_run(
      prhea_space,
      [&](const ParameterPoint& p, int i) {
        return evaluate_point(prhea_space.to_spec(base.kind, p, base.params), kings, tune_seed, i, protocol);
      },
      opt);
  const AgentSpec tuned = prhea_space.to_spec(base.kind, result.best, base.params);
  // 100 fresh games (5 x 20) per point, identical seeds for both.
  double tuned_points = 0.0, default_points = 0.0;
  for (int block = 0; block < 5; ++block) {
    tuned_points += evaluate_point(tuned, kings, 0x7e57, block, protocol);
    default_points += evaluate_point(base, kings, 0x7e57, block, protocol);
  }
  const double tuned_mean = tuned_points / 100.0, default_mean = default_points / 100.0;
  if (!(tuned_mean > default_mean)) v.pass = false;
  v.detail = fmt("synthetic optimum %d/100 in %.2f s (need >= 80, < 10 s) | tuned PRHEA %s: %.2f points/game vs default "
                 "%.2f over 100 games (%.0f s)",
                 found, synth_secs, prhea_space.describe(result.best).c_str(), tuned_mean, default_mean,
                 seconds_since(t1));
  return v;
}

// --- 7. determinism -------------------------------------------------------------------

std::string cli_path;

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

// All exported bytes of a directory, with the metadata timestamp line removed.
std::string snapshot(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files) {
    std::istringstream in(read_file(f));
    out += "== " + f.filename().string() + "\n";
    for (std::string line; std::getline(in, line);) {
      if (f.filename() == "metadata.json" && line.find("\"timestamp\"") != std::string::npos) continue;
      out += line + "\n";
    }
  }
  return out;
}

Verdict criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "arena_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"play", "play --mode kings --agent0 prhea --agent1 combat --seed 5 --out"},
      {"league", "league --mode healers --agents poe combat random --games 4 --budget 300 --workers 2 --out"},
      {"tune", "tune --agent prhea --mode kings --budget 4 --games 2 --fm-budget 200 --seed 3 --out"},
      {"profile", "profile --agent sprhea --mode pushers --opponent pusher --games 6 --budget 200 --out"},
  };
  Verdict v;
  for (const auto& [name, args] : runs) {
    const fs::path a = root / (name + "_a"), b = root / (name + "_b");
    const int ra = run_cli(args + " \"" + a.string() + "\"");
    const int rb = run_cli(args + " \"" + b.string() + "\"");
    const bool same = ra == 0 && rb == 0 && fs::exists(a) && snapshot(a) == snapshot(b);
    v.detail += name + (same ? " identical; " : " DIFFERS; ");
    if (!same) v.pass = false;
  }
  if (v.pass) fs::remove_all(root);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else if (a == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]... [--cli PATH]\n");
      return 2;
    }
  }
#ifdef ARENA_CLI_PATH
  if (cli_path.empty()) cli_path = ARENA_CLI_PATH;
#endif

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"random playouts keep the engine invariants", criterion_invariants},
      {"forward-model throughput", criterion_throughput},
      {"protocol constants", criterion_protocol},
      {"search oracles", criterion_oracles},
      {"directional strength on Kings", criterion_strength},
      {"NTBEA sanity", criterion_ntbea},
      {"byte-identical repeated exports", criterion_determinism},
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    report(id, criteria[i].first, v);
  }
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
