#include "arena/tournament.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "arena/forward_model.hpp"
#include "arena/results_io.hpp"

namespace arena {

MatchRecord play_match(const ModePtr& mode, const AgentSpec& agent0, const AgentSpec& agent1, std::uint64_t seed,
                       bool seats_swapped, long budget, const MatchObserver& observer) {
  MatchRecord rec;
  rec.mode = mode->name;
  rec.agent0 = agent0.name();
  rec.agent1 = agent1.name();
  rec.seed = seed;
  rec.seats_swapped = seats_swapped;

  std::array<std::unique_ptr<Agent>, 2> agents{make_agent(agent0), make_agent(agent1)};
  std::array<Rng, 2> rngs{Rng(derive_seed(seed, seats_swapped ? 2 : 1, 1)),
                          Rng(derive_seed(seed, seats_swapped ? 2 : 1, 2))};

  GameState state = initial_state(mode, seed, seats_swapped);
  while (!state.terminal()) {
    const int p = state.current_player;
    Budget b(budget);
    const Decision decision = agents[static_cast<std::size_t>(p)]->decide(observe(state, p), b, rngs[static_cast<std::size_t>(p)]);
    rec.fm_calls[static_cast<std::size_t>(p)] += b.used();
    if (observer) observer(state, p, decision);
    const Action& action = decision.action;
    if (action.is_end_turn()) {
      state = end_turn(state);
      continue;
    }
    if (!is_legal(state, action)) {
      // Only possible under fog, where the observation omits hidden blockers.
      if (!mode->fog_enabled) {
        throw GameError(std::string(to_string(agents[static_cast<std::size_t>(p)]->kind())) +
                        " returned an illegal action: " + describe(action));
      }
      state = end_turn(state);
      continue;
    }
    if (decision.trace.script) ++rec.usage[static_cast<std::size_t>(p)][static_cast<std::size_t>(code(*decision.trace.script))];
    state = advance(state, action);
  }
  rec.outcome = state.status;
  rec.turns_played = state.turn;
  return rec;
}

int match_points(Outcome outcome, int player) {
  if (outcome == Outcome::draw) return kDrawPoints;
  return outcome == win_for(player) ? kWinPoints : kLossPoints;
}

AgentSpec rule_based_opponent(const ModeConfig& mode) {
  AgentSpec spec;
  spec.kind = mode.push_enabled ? AgentKind::pusher : AgentKind::combat;
  return spec;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<LeagueJob> league_schedule(int agent_count, int games_per_pair) {
  if (games_per_pair < 2 || games_per_pair % 2 != 0) {
    throw std::invalid_argument("games per pair must be a positive even number, got " + std::to_string(games_per_pair));
  }
  std::vector<LeagueJob> jobs;
  const int seeds = games_per_pair / 2;
  for (int a = 0; a < agent_count; ++a) {
    for (int b = a + 1; b < agent_count; ++b) {
      for (int s = 1; s <= seeds; ++s) {
        jobs.push_back({a, b, static_cast<std::uint64_t>(s), false});
        jobs.push_back({a, b, static_cast<std::uint64_t>(s), true});
      }
    }
  }
  return jobs;
}

std::vector<AgentSpec> with_unique_names(std::vector<AgentSpec> specs) {
  std::map<std::string, int> seen;
  for (auto& s : specs) {
    const std::string base = s.name();
    const int n = ++seen[base];
    if (n > 1) s.label = base + "#" + std::to_string(n);
  }
  return specs;
}

std::vector<MatchRecord> run_league(const ModePtr& mode, const std::vector<AgentSpec>& input,
                                    const LeagueOptions& options, const ProgressFn& progress) {
  if (input.size() < 2) throw std::invalid_argument("a league needs at least two agents");
  if (options.games_per_pair < 2 || options.games_per_pair % 2 != 0) {
    throw std::invalid_argument("games_per_pair must be a positive even number");
  }
  const auto agents = with_unique_names(input);
  const auto jobs = league_schedule(static_cast<int>(agents.size()), options.games_per_pair);
  std::vector<std::optional<MatchRecord>> results(jobs.size());

  auto matches_job = [&](const LeagueJob& j, const MatchRecord& r) {
    return r.mode == mode->name && r.agent0 == agents[static_cast<std::size_t>(j.a)].name() &&
           r.agent1 == agents[static_cast<std::size_t>(j.b)].name() && r.seed == j.seed &&
           r.seats_swapped == j.seats_swapped;
  };

  std::ofstream log;
  if (options.checkpoint) {
    if (std::ifstream in(*options.checkpoint); in) {
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto [index, rec] = checkpoint_from_line(line);
        if (index >= 0 && static_cast<std::size_t>(index) < jobs.size() &&
            matches_job(jobs[static_cast<std::size_t>(index)], rec)) {
          results[static_cast<std::size_t>(index)] = rec;
        }
      }
    }
    log.open(*options.checkpoint, std::ios::app);
    if (!log) throw std::runtime_error(options.checkpoint->string() + ": cannot open checkpoint for writing");
  }

  std::vector<int> pending;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i]) pending.push_back(static_cast<int>(i));
  }
  const int total = static_cast<int>(jobs.size());
  std::atomic<int> done{total - static_cast<int>(pending.size())};
  std::mutex mu;
  if (progress) progress(done, total);

  parallel_for(static_cast<int>(pending.size()), options.workers, [&](int k) {
    const int index = pending[static_cast<std::size_t>(k)];
    const LeagueJob& j = jobs[static_cast<std::size_t>(index)];
    MatchRecord rec = play_match(mode, agents[static_cast<std::size_t>(j.a)], agents[static_cast<std::size_t>(j.b)],
                                 j.seed, j.seats_swapped, options.budget);
    std::lock_guard lock(mu);
    if (log.is_open()) log << checkpoint_line(index, rec) << '\n' << std::flush;
    results[static_cast<std::size_t>(index)] = std::move(rec);
    ++done;
    if (progress) progress(done, total);
  });

  // Once complete, the log is rewritten in schedule order.
  if (log.is_open()) {
    log.close();
    std::ostringstream sorted;
    for (std::size_t i = 0; i < results.size(); ++i) sorted << checkpoint_line(static_cast<int>(i), *results[i]) << '\n';
    write_file(*options.checkpoint, sorted.str());
  }

  std::vector<MatchRecord> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

LeagueTable tabulate(const std::vector<std::string>& agents, const std::vector<MatchRecord>& matches) {
  LeagueTable t;
  t.agents = agents;
  const std::size_t n = agents.size();
  t.cells.assign(n, std::vector<PairCell>(n));
  t.totals.assign(n, AgentTotals{});
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[agents[i]] = i;
  auto lookup = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("match record names unknown agent '" + name + "'");
    return it->second;
  };
  for (const auto& m : matches) {
    const std::array<std::size_t, 2> seat{lookup(m.agent0), lookup(m.agent1)};
    for (int p = 0; p < 2; ++p) {
      const std::size_t me = seat[static_cast<std::size_t>(p)];
      const std::size_t them = seat[static_cast<std::size_t>(1 - p)];
      PairCell& c = t.cells[me][them];
      AgentTotals& tot = t.totals[me];
      ++c.games;
      ++tot.games;
      tot.points += match_points(m.outcome, p);
      if (m.outcome == Outcome::draw) {
        ++c.draws;
        ++tot.draws;
      } else if (m.outcome == win_for(p)) {
        ++c.wins;
        ++tot.wins;
      } else {
        ++c.losses;
        ++tot.losses;
      }
    }
  }
  return t;
}

long UsageProfile::total() const {
  long s = 0;
  for (long c : counts) s += c;
  return s;
}

std::array<double, kScriptCount> UsageProfile::frequencies() const {
  std::array<double, kScriptCount> f{};
  const long t = total();
  if (t == 0) return f;
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(counts[i]) / static_cast<double>(t);
  return f;
}

UsageProfile usage_profile(const ModePtr& mode, const AgentSpec& agent, const AgentSpec& opponent, int games,
                           long budget, int workers, const ProgressFn& progress) {
  if (games < 1) throw std::invalid_argument("games must be >= 1");
  std::vector<ScriptCounts> per_game(static_cast<std::size_t>(games));
  std::atomic<int> done{0};
  std::mutex mu;
  parallel_for(games, workers, [&](int g) {
    const auto rec = play_match(mode, agent, opponent, static_cast<std::uint64_t>(g / 2 + 1), g % 2 == 1, budget);
    per_game[static_cast<std::size_t>(g)] = rec.usage[0];
    const int d = ++done;
    if (progress) {
      std::lock_guard lock(mu);
      progress(d, games);
    }
  });
  UsageProfile profile;
  profile.agent = agent.name();
  profile.mode = mode->name;
  profile.opponent = opponent.name();
  profile.games = games;
  for (const auto& c : per_game) {
    for (std::size_t i = 0; i < c.size(); ++i) profile.counts[i] += c[i];
  }
  profile.error = profile.total() == 0;
  return profile;
}

std::vector<UsageProfile> league_usage(const std::string& mode, const std::vector<std::string>& agents,
                                       const std::vector<MatchRecord>& matches) {
  std::vector<UsageProfile> out;
  for (const auto& name : agents) {
    UsageProfile u;
    u.agent = name;
    u.mode = mode;
    u.opponent = "league";
    for (const auto& m : matches) {
      for (int p = 0; p < 2; ++p) {
        if ((p == 0 ? m.agent0 : m.agent1) != name) continue;
        ++u.games;
        for (std::size_t i = 0; i < u.counts.size(); ++i) u.counts[i] += m.usage[static_cast<std::size_t>(p)][i];
      }
    }
    u.error = u.total() == 0;
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace arena
