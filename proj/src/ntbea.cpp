#include "arena/ntbea.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "arena/results_io.hpp"
#include "json.hpp"

namespace arena {

namespace {

const std::string kFlagPrefix = "script_";

std::vector<double> range(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

std::string join_key(const std::vector<int>& dims, const std::vector<int>& values, const SearchSpace& space,
                     bool names) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += '|';
    const auto& d = space.dimensions()[static_cast<std::size_t>(dims[i])];
    s += names ? d.name : format_number(d.values[static_cast<std::size_t>(values[i])]);
  }
  return s;
}

}  // namespace

SearchSpace::SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].values.empty()) throw std::invalid_argument("dimension '" + dims_[i].name + "' has no values");
    if (dims_[i].name.starts_with(kFlagPrefix)) flag_dims_.push_back(static_cast<int>(i));
  }
}

SearchSpace SearchSpace::for_agent(AgentKind kind) {
  std::vector<Dimension> dims;
  switch (kind) {
    case AgentKind::pgs:
      dims.push_back({"individual_length", range(1, 10)});
      dims.push_back({"response_iterations", range(1, 5)});
      break;
    case AgentKind::poe:
    case AgentKind::prhea:
    case AgentKind::mo_prhea:
    case AgentKind::sprhea:
      dims.push_back({"population_size", {1, 10, 100}});
      dims.push_back({"individual_length", range(1, 10)});
      dims.push_back({"mutation_rate", {0.1, 0.5, 0.9}});
      dims.push_back({"tournament_size", {3, 5, 10}});
      if (kind == AgentKind::sprhea) dims.push_back({"num_changes", {1, 3, 5, 10}});
      dims.push_back({"elitism", {0, 1}});
      dims.push_back({"continue_search", {0, 1}});
      break;
    default: throw std::invalid_argument("agent '" + std::string(to_string(kind)) + "' has no tunable parameters");
  }
  for (ScriptId s : kAllScripts) dims.push_back({kFlagPrefix + std::string(script_abbrev(s)), {0, 1}});
  return SearchSpace(std::move(dims));
}

double SearchSpace::cardinality() const {
  double n = 1.0;
  for (const auto& d : dims_) n *= static_cast<double>(d.values.size());
  return n;
}

bool SearchSpace::valid(const ParameterPoint& p) const {
  if (p.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || static_cast<std::size_t>(p[i]) >= dims_[i].values.size()) return false;
  }
  if (flag_dims_.empty()) return true;
  return std::any_of(flag_dims_.begin(), flag_dims_.end(), [&](int d) {
    return dims_[static_cast<std::size_t>(d)].values[static_cast<std::size_t>(p[static_cast<std::size_t>(d)])] != 0.0;
  });
}

ParameterPoint SearchSpace::random_point(Rng& rng) const {
  ParameterPoint p(dims_.size());
  do {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(rng.index(dims_[i].values.size()));
  } while (!valid(p));
  return p;
}

AgentSpec SearchSpace::to_spec(AgentKind kind, const ParameterPoint& p, const AgentParams& base) const {
  if (!valid(p)) throw std::invalid_argument("invalid parameter point " + describe(p));
  AgentSpec spec;
  spec.kind = kind;
  spec.params = base;
  AgentParams& a = spec.params;
  std::vector<ScriptId> scripts;
  bool has_flags = false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::string& n = dims_[i].name;
    const double v = dims_[i].values[static_cast<std::size_t>(p[i])];
    const int iv = static_cast<int>(v);
    if (n == "population_size") a.population_size = iv;
    else if (n == "individual_length") a.individual_length = iv;
    else if (n == "mutation_rate") a.mutation_rate = v;
    else if (n == "tournament_size") a.tournament_size = iv;
    else if (n == "num_changes") a.num_changes = iv;
    else if (n == "response_iterations") a.response_iterations = iv;
    else if (n == "elitism") a.elitism = iv != 0;
    else if (n == "continue_search") a.continue_search = iv != 0;
    else if (n.starts_with(kFlagPrefix)) {
      has_flags = true;
      const auto s = script_from_name(n.substr(kFlagPrefix.size()));
      if (!s) throw std::invalid_argument("unknown script flag '" + n + "'");
      if (iv) scripts.push_back(*s);
    } else {
      throw std::invalid_argument("unknown dimension '" + n + "'");
    }
  }
  if (has_flags) a.portfolio = Portfolio(std::move(scripts));
  return spec;
}

ParameterPoint SearchSpace::point_of(const AgentParams& a) const {
  ParameterPoint p(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::string& n = dims_[i].name;
    double v = 0.0;
    if (n == "population_size") v = a.population_size;
    else if (n == "individual_length") v = a.individual_length;
    else if (n == "mutation_rate") v = a.mutation_rate;
    else if (n == "tournament_size") v = a.tournament_size;
    else if (n == "num_changes") v = a.num_changes;
    else if (n == "response_iterations") v = a.response_iterations;
    else if (n == "elitism") v = a.elitism ? 1 : 0;
    else if (n == "continue_search") v = a.continue_search ? 1 : 0;
    else if (n.starts_with(kFlagPrefix)) {
      const auto s = script_from_name(n.substr(kFlagPrefix.size()));
      v = s && a.portfolio.contains(*s) ? 1 : 0;
    }
    const auto& vals = dims_[i].values;
    const auto it = std::find(vals.begin(), vals.end(), v);
    if (it == vals.end()) throw std::invalid_argument(n + ": value " + format_number(v) + " is not in the search space");
    p[i] = static_cast<int>(it - vals.begin());
  }
  return p;
}

std::string SearchSpace::describe(const ParameterPoint& p) const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < p.size() && i < dims_.size(); ++i) {
    if (i) out << ", ";
    out << dims_[i].name << '=';
    if (p[i] >= 0 && static_cast<std::size_t>(p[i]) < dims_[i].values.size()) {
      out << format_number(dims_[i].values[static_cast<std::size_t>(p[i])]);
    } else {
      out << "?";
    }
  }
  out << '}';
  return out.str();
}

LandscapeModel::LandscapeModel(std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) tuples_.push_back({static_cast<int>(i)});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) tuples_.push_back({static_cast<int>(i), static_cast<int>(j)});
  }
  if (n > 2) {
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    tuples_.push_back(std::move(all));
  }
  tables_.resize(tuples_.size());
}

std::vector<int> LandscapeModel::key(std::size_t t, const ParameterPoint& p) const {
  std::vector<int> k;
  k.reserve(tuples_[t].size());
  for (int d : tuples_[t]) k.push_back(p[static_cast<std::size_t>(d)]);
  return k;
}

void LandscapeModel::add(const ParameterPoint& p, double fitness) {
  for (std::size_t t = 0; t < tuples_.size(); ++t) {
    Stats& s = tables_[t][key(t, p)];
    ++s.count;
    s.sum += fitness;
  }
  ++total_;
}

double model_estimate(const LandscapeModel& model, const ParameterPoint& p, double c, double epsilon) {
  const auto& tuples = model.tuples();
  if (tuples.empty()) return 0.0;
  const double log_total = std::log(static_cast<double>(model.total()) + 1.0);
  double exploit = 0.0;
  double explore = 0.0;
  int visited = 0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& table = model.table(t);
    const auto it = table.find(model.key(t, p));
    const double n = it == table.end() ? 0.0 : static_cast<double>(it->second.count);
    if (it != table.end()) {
      exploit += it->second.mean();
      ++visited;
    }
    explore += std::sqrt(log_total / (n + epsilon));
  }
  const double mean = visited ? exploit / visited : 0.0;
  return mean + c * explore / static_cast<double>(tuples.size());
}

ParameterPoint mutate_point(const SearchSpace& space, const ParameterPoint& p, Rng& rng) {
  const auto& dims = space.dimensions();
  const double rate = 1.0 / static_cast<double>(dims.size());
  auto change = [&](ParameterPoint& q, std::size_t i) {
    const auto n = dims[i].values.size();
    if (n < 2) return false;
    const auto shift = 1 + static_cast<int>(rng.index(n - 1));
    q[i] = static_cast<int>((static_cast<std::size_t>(q[i]) + static_cast<std::size_t>(shift)) % n);
    return true;
  };
  for (;;) {
    ParameterPoint q = p;
    bool changed = false;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (rng.chance(rate)) changed |= change(q, i);
    }
    while (!changed) changed = change(q, rng.index(q.size()));
    if (space.valid(q)) return q;
  }
}

NtbeaResult ntbea_run(const SearchSpace& space, const FitnessFn& fitness, const NtbeaOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("NTBEA budget must be >= 1");
  if (space.size() == 0) throw std::invalid_argument("empty search space");
  Rng rng(options.seed);
  NtbeaResult result;
  result.model = LandscapeModel(space.size());

  ParameterPoint current = space.random_point(rng);
  for (int i = 0; i < options.budget; ++i) {
    const double f = fitness(current, i);
    result.model.add(current, f);
    result.evaluations.push_back({i, current, f});
    if (i + 1 == options.budget) break;

    ParameterPoint best_candidate;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < options.neighbours; ++k) {
      ParameterPoint candidate = mutate_point(space, current, rng);
      const double v = model_estimate(result.model, candidate, options.exploration, options.epsilon);
      if (v > best_value) {
        best_value = v;
        best_candidate = std::move(candidate);
      }
    }
    current = std::move(best_candidate);
  }

  result.best_estimate = -std::numeric_limits<double>::infinity();
  for (const auto& e : result.evaluations) {
    const double v = model_estimate(result.model, e.point, 0.0, options.epsilon);
    if (v > result.best_estimate) {
      result.best_estimate = v;
      result.best = e.point;
    }
  }
  return result;
}

double protocol_score(const std::vector<Outcome>& outcomes, const FitnessProtocol& protocol) {
  double total = 0.0;
  for (Outcome o : outcomes) {
    if (o == Outcome::win_player0) total += protocol.win_points;
    else if (o == Outcome::draw) total += protocol.draw_points;
    else total += protocol.loss_points;
  }
  return total;
}

double evaluate_point(const AgentSpec& agent, const ModePtr& mode, std::uint64_t run_seed, int evaluation,
                      const FitnessProtocol& protocol) {
  const AgentSpec opponent = rule_based_opponent(*mode);
  std::vector<Outcome> outcomes(static_cast<std::size_t>(protocol.games_per_eval), Outcome::draw);
  parallel_for(protocol.games_per_eval, protocol.workers, [&](int g) {
    const std::uint64_t seed = derive_seed(run_seed, static_cast<std::uint64_t>(evaluation), static_cast<std::uint64_t>(g));
    outcomes[static_cast<std::size_t>(g)] = play_match(mode, agent, opponent, seed, g % 2 == 1, protocol.budget).outcome;
  });
  return protocol_score(outcomes, protocol);
}

void export_tuning(const NtbeaResult& result, const SearchSpace& space, const AgentSpec& tuned,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": cannot create directory: " + ec.message());

  std::ostringstream evals;
  evals << "index";
  for (const auto& d : space.dimensions()) evals << ',' << d.name;
  evals << ",fitness\n";
  for (const auto& e : result.evaluations) {
    evals << e.index;
    for (std::size_t i = 0; i < e.point.size(); ++i) {
      evals << ',' << format_number(space.dimensions()[i].values[static_cast<std::size_t>(e.point[i])]);
    }
    evals << ',' << format_number(e.fitness) << '\n';
  }
  write_file(dir / "evaluations.csv", evals.str());

  std::ostringstream model;
  model << "tuple,values,count,mean\n";
  for (std::size_t t = 0; t < result.model.tuples().size(); ++t) {
    const auto& dims = result.model.tuples()[t];
    for (const auto& [key, stats] : result.model.table(t)) {
      model << csv_field(join_key(dims, key, space, true)) << ',' << csv_field(join_key(dims, key, space, false))
            << ',' << stats.count << ',' << format_number(stats.mean()) << '\n';
    }
  }
  write_file(dir / "model.csv", model.str());
  write_file(dir / "tuned.yaml", serialize_agent_spec(tuned));

  nlohmann::ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["agent"] = std::string(to_string(tuned.kind));
  nlohmann::ordered_json best = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < result.best.size(); ++i) {
    best[space.dimensions()[i].name] = space.dimensions()[i].values[static_cast<std::size_t>(result.best[i])];
  }
  summary["best_point"] = std::move(best);
  summary["best_estimate"] = result.best_estimate;
  summary["evaluations"] = result.evaluations.size();
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace arena
