// Command-line front end: validate, play, league, profile, tune, bench-fm.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "arena/bench.hpp"
#include "arena/forward_model.hpp"
#include "arena/ntbea.hpp"
#include "arena/results_io.hpp"
#include "arena/tournament.hpp"

namespace {

using namespace arena;

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void progress_line(int done, int total) {
  std::fprintf(stderr, "\r%d/%d", done, total);
  if (done == total) std::fputc('\n', stderr);
  std::fflush(stderr);
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
  return s;
}

void print_table(const LeagueTable& t) {
  std::printf("%-16s", "");
  for (const auto& a : t.agents) std::printf(" %10.10s", a.c_str());
  std::printf(" %6s %6s %6s %7s\n", "W", "D", "L", "points");
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    std::printf("%-16.16s", t.agents[i].c_str());
    for (std::size_t j = 0; j < t.agents.size(); ++j) {
      if (i == j) {
        std::printf(" %10s", "-");
      } else {
        std::printf(" %10.3f", t.cells[i][j].win_rate());
      }
    }
    std::printf(" %6d %6d %6d %7ld\n", t.totals[i].wins, t.totals[i].draws, t.totals[i].losses, t.totals[i].points);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Portfolio-agent arena: turn-based tactics engine, agents, tuning and tournaments"};
  app.require_subcommand(1);
  std::string timestamp;
  app.add_option("--timestamp", timestamp, "Timestamp written to metadata.json (default: current UTC time)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check mode or agent configuration files");
  std::vector<std::string> validate_files;
  validate_cmd->add_option("files", validate_files, "Mode names or YAML files")->required();
  bool validate_agents = false;
  validate_cmd->add_flag("--agents", validate_agents, "Treat the files as agent configurations");

  // play
  auto* play_cmd = app.add_subcommand("play", "Play a single match");
  std::string play_mode = "kings", play_a = "prhea", play_b = "combat";
  std::uint64_t play_seed = 1;
  bool play_swap = false, play_verbose = false;
  long play_budget = kDefaultBudget;
  std::string play_out;
  play_cmd->add_option("--mode", play_mode, "Mode name or file")->capture_default_str();
  play_cmd->add_option("--agent0", play_a, "Agent in seat 0 (kind or config file)")->capture_default_str();
  play_cmd->add_option("--agent1", play_b, "Agent in seat 1 (kind or config file)")->capture_default_str();
  play_cmd->add_option("--seed", play_seed)->capture_default_str();
  play_cmd->add_flag("--swap", play_swap, "Swap seats");
  play_cmd->add_option("--budget", play_budget, "Forward-model calls per decision")->capture_default_str();
  play_cmd->add_flag("--verbose,-v", play_verbose, "Print every action");
  play_cmd->add_option("--out", play_out, "Export the match record to this directory");

  // league
  auto* league_cmd = app.add_subcommand("league", "Round-robin league with seat-swapped seeds");
  std::string league_mode = "kings", league_out = "results";
  std::vector<std::string> league_agents;
  int league_games = 200, league_workers = default_workers();
  long league_budget = kDefaultBudget;
  std::string league_checkpoint;
  league_cmd->add_option("--mode", league_mode)->capture_default_str();
  league_cmd->add_option("--agents", league_agents, "Agent kinds or config files")->required()->expected(2, -1);
  league_cmd->add_option("--games", league_games, "Games per pair (even)")->capture_default_str();
  league_cmd->add_option("--budget", league_budget)->capture_default_str();
  league_cmd->add_option("--workers", league_workers)->capture_default_str();
  league_cmd->add_option("--out", league_out)->capture_default_str();
  bool league_resume = false;
  league_cmd->add_option("--checkpoint", league_checkpoint, "Match log (default: <out>/checkpoint.jsonl)");
  league_cmd->add_flag("--resume", league_resume, "Reuse matches already in the checkpoint log");

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Script-usage profile against a rule-based opponent");
  std::string profile_agent = "prhea", profile_mode = "kings", profile_opponent, profile_out = "profile";
  int profile_games = 1000, profile_workers = default_workers();
  long profile_budget = kDefaultBudget;
  profile_cmd->add_option("--agent", profile_agent)->capture_default_str();
  profile_cmd->add_option("--mode", profile_mode)->capture_default_str();
  profile_cmd->add_option("--opponent", profile_opponent, "Default: the mode's rule-based agent");
  profile_cmd->add_option("--games", profile_games)->capture_default_str();
  profile_cmd->add_option("--budget", profile_budget)->capture_default_str();
  profile_cmd->add_option("--workers", profile_workers)->capture_default_str();
  profile_cmd->add_option("--out", profile_out)->capture_default_str();

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "NTBEA parameter and portfolio tuning");
  std::string tune_agent = "prhea", tune_mode = "kings", tune_out = "tuning";
  int tune_budget = 100, tune_games = 20, tune_neighbours = 50, tune_workers = default_workers();
  std::uint64_t tune_seed = 1;
  long tune_fm_budget = kDefaultBudget;
  tune_cmd->add_option("--agent", tune_agent, "Agent kind or config file (supplies fixed fields)")->capture_default_str();
  tune_cmd->add_option("--mode", tune_mode)->capture_default_str();
  tune_cmd->add_option("--budget", tune_budget, "Parameter points to evaluate")->capture_default_str();
  tune_cmd->add_option("--seed", tune_seed)->capture_default_str();
  tune_cmd->add_option("--games", tune_games, "Games per evaluation")->capture_default_str();
  tune_cmd->add_option("--neighbours", tune_neighbours)->capture_default_str();
  tune_cmd->add_option("--fm-budget", tune_fm_budget, "Forward-model calls per decision")->capture_default_str();
  tune_cmd->add_option("--workers", tune_workers)->capture_default_str();
  tune_cmd->add_option("--out", tune_out)->capture_default_str();

  // bench-fm
  auto* bench_cmd = app.add_subcommand("bench-fm", "Forward-model throughput (single thread)");
  double bench_seconds = 5.0;
  std::string bench_mode = "kings";
  std::uint64_t bench_seed = 1;
  bench_cmd->add_option("--seconds", bench_seconds)->capture_default_str();
  bench_cmd->add_option("--mode", bench_mode)->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  auto metadata = [&](const char* command, std::vector<std::pair<std::string, std::string>> flags) {
    RunMetadata m;
    m.command = command;
    m.flags = std::move(flags);
    m.timestamp = timestamp.empty() ? utc_timestamp() : timestamp;
    return m;
  };

  try {
    if (*validate_cmd) {
      int failures = 0;
      for (const auto& f : validate_files) {
        try {
          if (validate_agents) {
            const auto spec = resolve_agent_spec(f);
            std::printf("%s: ok (%s)\n", f.c_str(), spec.name().c_str());
          } else {
            const auto mode = load_mode_ptr(f);
            std::printf("%s: ok (%s, %dx%d, %zu units per side)\n", f.c_str(), mode->name.c_str(), mode->grid.width(),
                        mode->grid.height(), mode->roster.size());
          }
        } catch (const std::exception& e) {
          std::printf("%s: error: %s\n", f.c_str(), e.what());
          ++failures;
        }
      }
      return failures ? 1 : 0;
    }

    if (*play_cmd) {
      const auto mode = load_mode_ptr(play_mode);
      const auto specs = with_unique_names({resolve_agent_spec(play_a), resolve_agent_spec(play_b)});
      MatchObserver observer;
      if (play_verbose) {
        observer = [](const GameState& s, int p, const Decision& d) {
          std::printf("turn %3d  p%d  %-28s", s.turn, p, describe(d.action).c_str());
          if (d.trace.script) std::printf("  %s", std::string(script_abbrev(*d.trace.script)).c_str());
          if (d.trace.evaluations) std::printf("  fit=%.3f gen=%d fm=%ld", d.trace.fitness, d.trace.generations, d.trace.fm_calls);
          std::printf("\n");
        };
      }
      const auto rec = play_match(mode, specs[0], specs[1], play_seed, play_swap, play_budget, observer);
      std::printf("%s vs %s on %s (seed %llu%s): %s after %d turns\n", rec.agent0.c_str(), rec.agent1.c_str(),
                  rec.mode.c_str(), static_cast<unsigned long long>(rec.seed), rec.seats_swapped ? ", swapped" : "",
                  std::string(to_string(rec.outcome)).c_str(), rec.turns_played);
      if (!play_out.empty()) {
        ResultsBundle bundle;
        bundle.meta = metadata("play", {{"mode", play_mode},
                                        {"agent0", play_a},
                                        {"agent1", play_b},
                                        {"seed", std::to_string(play_seed)},
                                        {"swap", play_swap ? "true" : "false"},
                                        {"budget", std::to_string(play_budget)}});
        bundle.mode = mode->name;
        bundle.agents = {rec.agent0, rec.agent1};
        bundle.matches = {rec};
        export_results(bundle, play_out);
      }
      return 0;
    }

    if (*league_cmd) {
      const auto mode = load_mode_ptr(league_mode);
      std::vector<AgentSpec> specs;
      for (const auto& a : league_agents) specs.push_back(resolve_agent_spec(a));
      specs = with_unique_names(std::move(specs));
      LeagueOptions opt;
      opt.games_per_pair = league_games;
      opt.budget = league_budget;
      opt.workers = league_workers;
      std::filesystem::create_directories(league_out);
      opt.checkpoint = league_checkpoint.empty() ? std::filesystem::path(league_out) / "checkpoint.jsonl"
                                                 : std::filesystem::path(league_checkpoint);
      if (!league_resume) std::filesystem::remove(*opt.checkpoint);
      const auto matches = run_league(mode, specs, opt, progress_line);
      ResultsBundle bundle;
      bundle.meta = metadata("league", {{"mode", league_mode},
                                        {"agents", join(league_agents)},
                                        {"games", std::to_string(league_games)},
                                        {"budget", std::to_string(league_budget)}});
      bundle.mode = mode->name;
      for (const auto& s : specs) bundle.agents.push_back(s.name());
      bundle.matches = matches;
      bundle.usage = league_usage(mode->name, bundle.agents, matches);
      export_results(bundle, league_out);
      print_table(tabulate(bundle.agents, matches));
      std::printf("results written to %s\n", league_out.c_str());
      return 0;
    }

    if (*profile_cmd) {
      const auto mode = load_mode_ptr(profile_mode);
      const auto agent = resolve_agent_spec(profile_agent);
      const auto opponent = profile_opponent.empty() ? rule_based_opponent(*mode) : resolve_agent_spec(profile_opponent);
      const auto profile =
          usage_profile(mode, agent, opponent, profile_games, profile_budget, profile_workers, progress_line);
      ResultsBundle bundle;
      bundle.meta = metadata("profile", {{"agent", profile_agent},
                                         {"mode", profile_mode},
                                         {"opponent", opponent.name()},
                                         {"games", std::to_string(profile_games)},
                                         {"budget", std::to_string(profile_budget)}});
      bundle.mode = mode->name;
      bundle.usage = {profile};
      export_results(bundle, profile_out);
      const auto freq = profile.frequencies();
      for (ScriptId s : kAllScripts) {
        std::printf("%-4s %8ld  %.4f\n", std::string(script_abbrev(s)).c_str(),
                    profile.counts[static_cast<std::size_t>(code(s))], freq[static_cast<std::size_t>(code(s))]);
      }
      if (profile.error) {
        std::fprintf(stderr, "error: %s executed no script-chosen actions\n", profile.agent.c_str());
        return 2;
      }
      return 0;
    }

    if (*tune_cmd) {
      const auto mode = load_mode_ptr(tune_mode);
      const AgentSpec base = resolve_agent_spec(tune_agent);
      const SearchSpace space = SearchSpace::for_agent(base.kind);
      FitnessProtocol protocol;
      protocol.games_per_eval = tune_games;
      protocol.budget = tune_fm_budget;
      protocol.workers = tune_workers;
      NtbeaOptions opt;
      opt.budget = tune_budget;
      opt.neighbours = tune_neighbours;
      opt.seed = tune_seed;
      const auto result = ntbea_run(
          space,
          [&](const ParameterPoint& p, int i) {
            const double f = evaluate_point(space.to_spec(base.kind, p, base.params), mode, tune_seed, i, protocol);
            std::fprintf(stderr, "eval %3d  fitness %5.1f  %s\n", i, f, space.describe(p).c_str());
            return f;
          },
          opt);
      AgentSpec tuned = space.to_spec(base.kind, result.best, base.params);
      tuned.label = base.label;
      export_tuning(result, space, tuned, tune_out);
      write_metadata(std::filesystem::path(tune_out) / "metadata.json",
                     metadata("tune", {{"agent", tune_agent},
                                       {"mode", tune_mode},
                                       {"budget", std::to_string(tune_budget)},
                                       {"seed", std::to_string(tune_seed)},
                                       {"games", std::to_string(tune_games)},
                                       {"neighbours", std::to_string(tune_neighbours)},
                                       {"fm_budget", std::to_string(tune_fm_budget)}}),
                     mode->name, {tuned.name()});
      std::printf("best point %s (estimate %.3f)\n%s", space.describe(result.best).c_str(), result.best_estimate,
                  serialize_agent_spec(tuned).c_str());
      return 0;
    }

    if (*bench_cmd) {
      const auto mode = load_mode_ptr(bench_mode);
      const auto r = bench_forward_model(mode, bench_seconds, bench_seed);
      std::printf("mode %s: %ld forward-model calls in %.2f s (%ld games) = %.0f calls/s\n", mode->name.c_str(), r.calls,
                  r.seconds, r.games, r.calls_per_second());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
