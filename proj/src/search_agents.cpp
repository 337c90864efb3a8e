#include "arena/search_agents.hpp"

#include <algorithm>
#include <limits>

namespace arena {

namespace {

constexpr double kUnset = -std::numeric_limits<double>::infinity();

ScriptId fallback_script(const AgentParams& p) { return p.portfolio[0]; }

ScriptId in_portfolio_or_first(const AgentParams& p, ScriptId s) { return p.portfolio.contains(s) ? s : p.portfolio[0]; }

std::vector<UnitId> unit_ids(const GameState& state, int player) {
  std::vector<UnitId> ids;
  for (const auto& u : state.units) {
    if (u.owner == player) ids.push_back(u.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Replaces a script with a different one from the portfolio (when possible).
ScriptId different_script(ScriptId current, const Portfolio& portfolio, Rng& rng) {
  if (portfolio.size() < 2) return current;
  for (;;) {
    const ScriptId s = portfolio.sample(rng);
    if (s != current) return s;
  }
}

void mutate_sequence(std::vector<ScriptId>& g, const AgentParams& p, bool force, Rng& rng) {
  bool changed = false;
  for (auto& gene : g) {
    if (rng.chance(p.mutation_rate)) {
      const ScriptId s = p.portfolio.sample(rng);
      changed |= s != gene;
      gene = s;
    }
  }
  if (force && !changed && !g.empty()) {
    auto& gene = g[rng.index(g.size())];
    gene = different_script(gene, p.portfolio, rng);
  }
}

std::vector<ScriptId> crossover_sequence(const std::vector<ScriptId>& a, const std::vector<ScriptId>& b, Rng& rng) {
  std::vector<ScriptId> child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) child[i] = rng.chance(0.5) ? a[i] : b[i];
  return child;
}

void mutate_assignment(ScriptAssignment& g, const AgentParams& p, bool force, Rng& rng) {
  bool changed = false;
  for (auto& e : g.entries()) {
    if (rng.chance(p.mutation_rate)) {
      const ScriptId s = p.portfolio.sample(rng);
      changed |= s != e.second;
      e.second = s;
    }
  }
  if (force && !changed && !g.empty()) {
    auto& e = g.entries()[rng.index(g.size())];
    e.second = different_script(e.second, p.portfolio, rng);
  }
}

ScriptAssignment crossover_assignment(const ScriptAssignment& a, const ScriptAssignment& b, Rng& rng) {
  ScriptAssignment child = a;
  for (auto& e : child.entries()) {
    if (rng.chance(0.5)) e.second = b.at(e.first, e.second);
  }
  return child;
}

Evaluation finish(const GameState& final, int player, const RolloutStats& st, const Budget& budget,
                  const AgentParams& p, bool horizon_reached) {
  Evaluation e;
  e.h1 = combat_score(final, player, p.heuristic);
  e.objectives = {e.h1, mean_distance(final, player)};
  e.fm_calls = st.fm_calls;
  e.truncated = !final.terminal() && !horizon_reached && budget.exhausted();
  return e;
}

/// Shared single-objective evolutionary loop (POE, PRHEA, S-PRHEA).
///
/// Ops must provide: Genome random(Rng&), void mutate(Genome&, bool force,
/// Rng&), Genome crossover(const Genome&, const Genome&, Rng&), Evaluation
/// evaluate(const Genome&). Population size 1 runs as a 1+1 hill-climber.
/// Evaluations cut short by the budget are discarded once a complete one
/// exists.
template <class Member, class Ops>
void evolve(std::vector<Member>& pop, int population_size, const AgentParams& p, Ops& ops, Budget& budget, Rng& rng,
            DecisionTrace& trace, std::vector<double>* history) {
  bool have_complete = false;
  auto eval = [&](Member& m) {
    if (m.evaluated) return true;
    const Evaluation e = ops.evaluate(m.genome);
    ++trace.evaluations;
    if (e.truncated && have_complete) return false;
    m.fitness = e.h1;
    m.evaluated = true;
    have_complete |= !e.truncated;
    return true;
  };
  auto best_index = [](const std::vector<Member>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i].fitness > v[best].fitness) best = i;
    }
    return best;
  };
  auto tournament = [&](const std::vector<Member>& v) -> const Member& {
    std::size_t best = rng.index(v.size());
    for (int k = 1; k < p.tournament_size; ++k) {
      const std::size_t c = rng.index(v.size());
      if (v[c].fitness > v[best].fitness) best = c;
    }
    return v[best];
  };

  for (auto& m : pop) {
    if (budget.exhausted() && have_complete) break;
    if (!eval(m)) break;
  }
  std::erase_if(pop, [](const Member& m) { return !m.evaluated; });
  if (history) history->push_back(pop[best_index(pop)].fitness);

  constexpr int kMaxGenerations = 1'000'000;
  while (!budget.exhausted() && trace.generations < kMaxGenerations) {
    if (population_size == 1) {
      Member child{pop.front().genome};
      ops.mutate(child.genome, true, rng);
      if (!eval(child)) break;
      if (child.fitness >= pop.front().fitness) pop.front() = std::move(child);
    } else {
      std::vector<Member> next;
      next.reserve(static_cast<std::size_t>(population_size));
      if (p.elitism) next.push_back(pop[best_index(pop)]);
      while (static_cast<int>(next.size()) < population_size) {
        const Member& a = tournament(pop);
        const Member& b = tournament(pop);
        Member child{ops.crossover(a.genome, b.genome, rng)};
        ops.mutate(child.genome, false, rng);
        next.push_back(std::move(child));
      }
      bool complete = true;
      for (auto& m : next) {
        if (!eval(m)) {
          complete = false;
          break;
        }
      }
      std::erase_if(next, [](const Member& m) { return !m.evaluated; });
      if (!complete) {
        // Partial generation: top up with the best survivors of the old one.
        std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.fitness > b.fitness; });
        for (std::size_t i = 0; static_cast<int>(next.size()) < population_size && i < pop.size(); ++i) {
          next.push_back(pop[i]);
        }
      }
      pop = std::move(next);
    }
    ++trace.generations;
    if (history) history->push_back(pop[best_index(pop)].fitness);
  }

  const std::size_t b = best_index(pop);
  if (b != 0) std::swap(pop[0], pop[b]);
  trace.fitness = pop.front().fitness;
}

}  // namespace

// --- evaluators --------------------------------------------------------------

Evaluation rollout_sequence(const GameState& root, std::span<const ScriptId> genes, const AgentParams& params,
                            Budget& budget, std::uint64_t seed) {
  const int me = root.current_player;
  SequencePlan own{genes};
  FixedScriptPlan opp{params.opponent_script};
  Rng rng(seed);
  RolloutStats st;
  const int horizon = static_cast<int>(genes.size());
  const GameState final = simulate(root, me, own, opp, Horizon::actions(horizon), budget, rng, &st);
  const bool reached = st.controlled_actions >= horizon && final.current_player == me;
  return finish(final, me, st, budget, params, reached);
}

Evaluation rollout_assignment(const GameState& root, const ScriptAssignment& own_assignment, const AgentParams& params,
                              Horizon horizon, Budget& budget, std::uint64_t seed) {
  const int me = root.current_player;
  AssignmentPlan own{&own_assignment, fallback_script(params)};
  FixedScriptPlan opp{params.opponent_script};
  Rng rng(seed);
  RolloutStats st;
  const GameState final = simulate(root, me, own, opp, horizon, budget, rng, &st);
  const bool reached = final.current_player == me &&
                       ((horizon.controlled_actions > 0 && st.controlled_actions >= horizon.controlled_actions) ||
                        (horizon.own_turns > 0 && st.own_turns >= horizon.own_turns));
  return finish(final, me, st, budget, params, reached);
}

Evaluation rollout_sparse(const GameState& root, const SparseGenome& genome, const AgentParams& params, Budget& budget,
                          std::uint64_t seed) {
  const int me = root.current_player;
  SparsePlan own{genome.base, genome.changes, &params.portfolio, unit_ids(root, me), params.individual_length,
                 fallback_script(params)};
  FixedScriptPlan opp{params.opponent_script};
  Rng rng(seed);
  RolloutStats st;
  const int horizon = params.individual_length;
  const GameState final = simulate(root, me, own, opp, Horizon::actions(horizon), budget, rng, &st);
  const bool reached = st.controlled_actions >= horizon && final.current_player == me;
  return finish(final, me, st, budget, params, reached);
}

std::vector<ScriptId> shift_sequence(std::vector<ScriptId> genes, const Portfolio& portfolio, Rng& rng) {
  if (genes.empty()) return genes;
  genes.erase(genes.begin());
  genes.push_back(portfolio.sample(rng));
  return genes;
}

// --- PGS ---------------------------------------------------------------------

Decision PgsAgent::decide(const GameState& state, Budget& budget, Rng& rng) {
  Decision d;
  const auto actor = acting_unit(state);
  if (!actor) return d;
  const long start = budget.used();
  const int me = state.current_player;
  const std::uint64_t seed = rng.next();
  d.trace.evaluation_seed = seed;

  ScriptAssignment own = ScriptAssignment::uniform(state, me, in_portfolio_or_first(params_, params_.own_init_script));
  ScriptAssignment opp =
      ScriptAssignment::uniform(state, 1 - me, in_portfolio_or_first(params_, params_.opponent_script));
  const Horizon horizon = Horizon::turns(params_.individual_length);

  // Value of (own, opp) from `perspective`; nullopt once the budget is gone.
  auto evaluate = [&](const ScriptAssignment& mine, const ScriptAssignment& theirs,
                      int perspective) -> std::optional<double> {
    if (budget.exhausted()) return std::nullopt;
    AssignmentPlan own_plan{&mine, fallback_script(params_)};
    AssignmentPlan opp_plan{&theirs, fallback_script(params_)};
    Rng r(seed);
    RolloutStats st;
    const GameState final = simulate(state, me, own_plan, opp_plan, horizon, budget, r, &st);
    ++d.trace.evaluations;
    const bool reached = final.terminal() || (final.current_player == me && st.own_turns >= horizon.own_turns);
    if (!reached) return std::nullopt;
    return combat_score(final, perspective, params_.heuristic);
  };

  bool out_of_budget = false;
  double own_value = kUnset;
  // One greedy pass over the units of `side`, trying every portfolio script.
  auto improve = [&](ScriptAssignment& side, bool own_side) {
    if (out_of_budget || params_.portfolio.size() < 2) return;
    const int perspective = own_side ? me : 1 - me;
    auto value_of = [&](const ScriptAssignment& candidate) {
      return own_side ? evaluate(candidate, opp, perspective) : evaluate(own, candidate, perspective);
    };
    auto current = value_of(side);
    if (!current) {
      out_of_budget = true;
      return;
    }
    double best_value = *current;
    for (auto& entry : side.entries()) {
      ScriptId best_script = entry.second;
      const ScriptId original = entry.second;
      for (ScriptId s : params_.portfolio) {
        if (s == original) continue;
        entry.second = s;
        const auto v = value_of(side);
        if (!v) {
          out_of_budget = true;
          break;
        }
        if (*v > best_value) {
          best_value = *v;
          best_script = s;
        }
      }
      entry.second = best_script;
      if (out_of_budget) break;
    }
    if (own_side) own_value = best_value;
  };

  improve(own, true);
  for (int i = 0; i < params_.response_iterations && !out_of_budget; ++i) {
    improve(opp, false);
    improve(own, true);
  }

  const ScriptId script = own.at(*actor, fallback_script(params_));
  Rng act(seed);
  d.action = script_action(script, state, *actor, act);
  d.trace.script = script;
  d.trace.fitness = own_value == kUnset ? combat_score(state, me, params_.heuristic) : own_value;
  d.trace.generations = 1;
  d.trace.fm_calls = budget.used() - start;
  own_ = std::move(own);
  return d;
}

// --- POE ---------------------------------------------------------------------

Decision PoeAgent::decide(const GameState& state, Budget& budget, Rng& rng) {
  Decision d;
  const auto actor = acting_unit(state);
  if (!actor) return d;
  const long start = budget.used();
  const int me = state.current_player;
  const std::uint64_t seed = rng.next();
  d.trace.evaluation_seed = seed;
  history_.clear();

  const int n = params_.population_size;
  if (!params_.continue_search) population_.clear();
  for (auto& m : population_) {
    m.genome.revalidate(state, me, params_.portfolio, rng);
    m.evaluated = false;
  }
  while (static_cast<int>(population_.size()) < n) {
    population_.push_back({ScriptAssignment::random(state, me, params_.portfolio, rng)});
  }
  if (static_cast<int>(population_.size()) > n) population_.resize(static_cast<std::size_t>(n));

  struct Ops {
    const GameState& state;
    const AgentParams& p;
    Budget& budget;
    std::uint64_t seed;
    void mutate(ScriptAssignment& g, bool force, Rng& r) { mutate_assignment(g, p, force, r); }
    ScriptAssignment crossover(const ScriptAssignment& a, const ScriptAssignment& b, Rng& r) {
      return crossover_assignment(a, b, r);
    }
    Evaluation evaluate(const ScriptAssignment& g) {
      return rollout_assignment(state, g, p, Horizon::turns(p.individual_length), budget, seed);
    }
  } ops{state, params_, budget, seed};
  evolve(population_, n, params_, ops, budget, rng, d.trace, &history_);

  const ScriptId script = population_.front().genome.at(*actor, fallback_script(params_));
  Rng act(seed);
  d.action = script_action(script, state, *actor, act);
  d.trace.script = script;
  d.trace.fm_calls = budget.used() - start;
  if (!params_.continue_search) population_.clear();
  return d;
}

// --- PRHEA -------------------------------------------------------------------

Decision PrheaAgent::decide(const GameState& state, Budget& budget, Rng& rng) {
  Decision d;
  const auto actor = acting_unit(state);
  if (!actor) return d;
  const long start = budget.used();
  const std::uint64_t seed = rng.next();
  d.trace.evaluation_seed = seed;
  history_.clear();

  const int n = params_.population_size;
  const auto length = static_cast<std::size_t>(params_.individual_length);
  if (!params_.continue_search) population_.clear();
  for (auto& m : population_) m.evaluated = false;
  while (static_cast<int>(population_.size()) < n) {
    std::vector<ScriptId> g(length);
    for (auto& gene : g) gene = params_.portfolio.sample(rng);
    population_.push_back({std::move(g)});
  }
  if (static_cast<int>(population_.size()) > n) population_.resize(static_cast<std::size_t>(n));

  struct Ops {
    const GameState& state;
    const AgentParams& p;
    Budget& budget;
    std::uint64_t seed;
    void mutate(std::vector<ScriptId>& g, bool force, Rng& r) { mutate_sequence(g, p, force, r); }
    std::vector<ScriptId> crossover(const std::vector<ScriptId>& a, const std::vector<ScriptId>& b, Rng& r) {
      return crossover_sequence(a, b, r);
    }
    Evaluation evaluate(const std::vector<ScriptId>& g) { return rollout_sequence(state, g, p, budget, seed); }
  } ops{state, params_, budget, seed};
  evolve(population_, n, params_, ops, budget, rng, d.trace, &history_);

  const ScriptId script = population_.front().genome.front();
  Rng act(seed);
  d.action = script_action(script, state, *actor, act);
  d.trace.script = script;
  d.trace.fm_calls = budget.used() - start;

  if (params_.continue_search) {
    for (auto& m : population_) {
      m.genome = shift_sequence(std::move(m.genome), params_.portfolio, rng);
      m.evaluated = false;
    }
  } else {
    population_.clear();
  }
  return d;
}

// --- MO-PRHEA ----------------------------------------------------------------

std::size_t MoPrheaAgent::choose(const std::vector<Member>& population) {
  std::vector<ObjectiveVector> points;
  points.reserve(population.size());
  for (const auto& m : population) points.push_back(m.fitness);
  const auto fronts = nsga2::non_dominated_sort(points);
  std::size_t best = static_cast<std::size_t>(fronts.front().front());
  for (int i : fronts.front()) {
    const auto& c = points[static_cast<std::size_t>(i)];
    const auto& b = points[best];
    if (c.h1 > b.h1 || (c.h1 == b.h1 && c.h2 < b.h2)) best = static_cast<std::size_t>(i);
  }
  return best;
}

Decision MoPrheaAgent::decide(const GameState& state, Budget& budget, Rng& rng) {
  Decision d;
  const auto actor = acting_unit(state);
  if (!actor) return d;
  const long start = budget.used();
  const std::uint64_t seed = rng.next();
  d.trace.evaluation_seed = seed;

  const int n = params_.population_size;
  const auto length = static_cast<std::size_t>(params_.individual_length);
  if (!params_.continue_search) population_.clear();
  for (auto& m : population_) m.evaluated = false;
  while (static_cast<int>(population_.size()) < n) {
    std::vector<ScriptId> g(length);
    for (auto& gene : g) gene = params_.portfolio.sample(rng);
    population_.push_back({std::move(g)});
  }
  if (static_cast<int>(population_.size()) > n) population_.resize(static_cast<std::size_t>(n));

  bool have_complete = false;
  auto eval = [&](Member& m) {
    if (m.evaluated) return true;
    const Evaluation e = rollout_sequence(state, m.genome, params_, budget, seed);
    ++d.trace.evaluations;
    if (e.truncated && have_complete) return false;
    m.fitness = e.objectives;
    m.evaluated = true;
    have_complete |= !e.truncated;
    return true;
  };
  auto objectives_of = [](const std::vector<Member>& v) {
    std::vector<ObjectiveVector> out;
    out.reserve(v.size());
    for (const auto& m : v) out.push_back(m.fitness);
    return out;
  };

  for (auto& m : population_) {
    if (budget.exhausted() && have_complete) break;
    if (!eval(m)) break;
  }
  std::erase_if(population_, [](const Member& m) { return !m.evaluated; });

  while (!budget.exhausted()) {
    std::vector<Member> offspring;
    if (n == 1) {
      Member child{population_.front().genome};
      mutate_sequence(child.genome, params_, true, rng);
      offspring.push_back(std::move(child));
    } else {
      const auto points = objectives_of(population_);
      const auto ranking = nsga2::rank_population(points);
      auto select = [&]() -> const Member& {
        int best = static_cast<int>(rng.index(population_.size()));
        for (int k = 1; k < params_.tournament_size; ++k) {
          const int c = static_cast<int>(rng.index(population_.size()));
          if (nsga2::crowded_less(ranking, c, best)) best = c;
        }
        return population_[static_cast<std::size_t>(best)];
      };
      while (static_cast<int>(offspring.size()) < n) {
        const Member& a = select();
        const Member& b = select();
        Member child{crossover_sequence(a.genome, b.genome, rng)};
        mutate_sequence(child.genome, params_, false, rng);
        offspring.push_back(std::move(child));
      }
    }
    bool complete = true;
    for (auto& m : offspring) {
      if (!eval(m)) {
        complete = false;
        break;
      }
    }
    std::erase_if(offspring, [](const Member& m) { return !m.evaluated; });

    std::vector<Member> pool;
    if (params_.elitism || n == 1 || !complete) {
      pool = population_;
      pool.insert(pool.end(), offspring.begin(), offspring.end());
    } else {
      pool = std::move(offspring);
    }
    const auto survivors = nsga2::select_survivors(objectives_of(pool), static_cast<std::size_t>(n));
    std::vector<Member> next;
    next.reserve(survivors.size());
    for (int i : survivors) next.push_back(pool[static_cast<std::size_t>(i)]);
    population_ = std::move(next);
    ++d.trace.generations;
    if (!complete) break;
  }

  const std::size_t chosen = choose(population_);
  if (chosen != 0) std::swap(population_[0], population_[chosen]);
  const ScriptId script = population_.front().genome.front();
  Rng act(seed);
  d.action = script_action(script, state, *actor, act);
  d.trace.script = script;
  d.trace.fitness = population_.front().fitness.h1;
  d.trace.fm_calls = budget.used() - start;

  if (params_.continue_search) {
    for (auto& m : population_) {
      m.genome = shift_sequence(std::move(m.genome), params_.portfolio, rng);
      m.evaluated = false;
    }
  } else {
    population_.clear();
  }
  return d;
}

// --- S-PRHEA -----------------------------------------------------------------

Decision SprheaAgent::decide(const GameState& state, Budget& budget, Rng& rng) {
  Decision d;
  const auto actor = acting_unit(state);
  if (!actor) return d;
  const long start = budget.used();
  const int me = state.current_player;
  const std::uint64_t seed = rng.next();
  d.trace.evaluation_seed = seed;

  const int n = params_.population_size;
  const std::vector<UnitId> units = unit_ids(state, me);
  const int max_ticks = params_.individual_length;
  auto random_genome = [&](Rng& r) {
    SparseGenome g;
    g.base = ScriptAssignment::random(state, me, params_.portfolio, r);
    for (int i = 0; i < params_.num_changes; ++i) {
      g.changes.push_back(SparsePlan::random_event(params_.portfolio, units, max_ticks, r));
    }
    return g;
  };

  if (!params_.continue_search) population_.clear();
  for (auto& m : population_) {
    m.genome.base.revalidate(state, me, params_.portfolio, rng);
    for (auto& e : m.genome.changes) {
      if (!std::binary_search(units.begin(), units.end(), e.unit)) {
        e = SparsePlan::random_event(params_.portfolio, units, max_ticks, rng);
      }
    }
    m.evaluated = false;
  }
  while (static_cast<int>(population_.size()) < n) population_.push_back({random_genome(rng)});
  if (static_cast<int>(population_.size()) > n) population_.resize(static_cast<std::size_t>(n));

  struct Ops {
    const GameState& state;
    const AgentParams& p;
    Budget& budget;
    std::uint64_t seed;
    const std::vector<UnitId>& units;
    void mutate(SparseGenome& g, bool force, Rng& r) {
      if (g.changes.empty() || r.chance(0.5)) {
        mutate_assignment(g.base, p, force, r);
      } else {
        g.changes[r.index(g.changes.size())] = SparsePlan::random_event(p.portfolio, units, p.individual_length, r);
      }
    }
    SparseGenome crossover(const SparseGenome& a, const SparseGenome& b, Rng& r) {
      SparseGenome child{crossover_assignment(a.base, b.base, r), a.changes};
      for (std::size_t i = 0; i < child.changes.size() && i < b.changes.size(); ++i) {
        if (r.chance(0.5)) child.changes[i] = b.changes[i];
      }
      return child;
    }
    Evaluation evaluate(const SparseGenome& g) { return rollout_sparse(state, g, p, budget, seed); }
  } ops{state, params_, budget, seed, units};
  evolve(population_, n, params_, ops, budget, rng, d.trace, nullptr);

  const ScriptId script = population_.front().genome.base.at(*actor, fallback_script(params_));
  Rng act(seed);
  d.action = script_action(script, state, *actor, act);
  d.trace.script = script;
  d.trace.fm_calls = budget.used() - start;

  if (params_.continue_search) {
    // The executed action ticks every stored change event.
    for (auto& m : population_) {
      SparsePlan::tick(m.genome.base, m.genome.changes, params_.portfolio, units, max_ticks, rng);
      m.evaluated = false;
    }
  } else {
    population_.clear();
  }
  return d;
}

}  // namespace arena
