#include "arena/agents.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "arena/forward_model.hpp"
#include "arena/rule_based.hpp"
#include "arena/search_agents.hpp"

namespace arena {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {"pgs",    "poe",    "prhea",  "mo_prhea",
                                                        "sprhea", "combat", "pusher", "random"};

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "expected a scalar of the right type");
  }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

ScriptId parse_script(const YAML::Node& node, const std::string& key) {
  const auto text = scalar<std::string>(node, key);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && end == text.data() + text.size()) {
    if (auto s = script_from_code(value)) return *s;
    fail(key, "script code out of range");
  }
  if (auto s = script_from_name(text)) return *s;
  fail(key, "unknown script '" + text + "'");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), end);
  if (s.find_first_of(".eE") == std::string::npos && s.find_first_of("ni") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string_view to_string(AgentKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<AgentKind> agent_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == s) return static_cast<AgentKind>(i);
  }
  return std::nullopt;
}

bool is_portfolio_agent(AgentKind k) {
  switch (k) {
    case AgentKind::pgs:
    case AgentKind::poe:
    case AgentKind::prhea:
    case AgentKind::mo_prhea:
    case AgentKind::sprhea: return true;
    default: return false;
  }
}

bool operator==(const AgentParams& a, const AgentParams& b) {
  return a.population_size == b.population_size && a.individual_length == b.individual_length &&
         a.mutation_rate == b.mutation_rate && a.tournament_size == b.tournament_size &&
         a.num_changes == b.num_changes && a.response_iterations == b.response_iterations &&
         a.elitism == b.elitism && a.continue_search == b.continue_search && a.portfolio == b.portfolio &&
         a.own_init_script == b.own_init_script && a.opponent_script == b.opponent_script &&
         a.heuristic.unit_bonus == b.heuristic.unit_bonus && a.heuristic.terminal_value == b.heuristic.terminal_value;
}

void validate(const AgentParams& p) {
  auto one_of = [](auto v, std::initializer_list<decltype(v)> allowed) {
    return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
  };
  if (!one_of(p.population_size, {1, 10, 100})) fail("population_size", "must be one of 1, 10, 100");
  if (p.individual_length < 1 || p.individual_length > 10) fail("individual_length", "must lie in [1, 10]");
  if (!one_of(p.mutation_rate, {0.1, 0.5, 0.9})) fail("mutation_rate", "must be one of 0.1, 0.5, 0.9");
  if (!one_of(p.tournament_size, {3, 5, 10})) fail("tournament_size", "must be one of 3, 5, 10");
  if (!one_of(p.num_changes, {1, 3, 5, 10})) fail("num_changes", "must be one of 1, 3, 5, 10");
  if (p.response_iterations < 1 || p.response_iterations > 5) fail("response_iterations", "must lie in [1, 5]");
  if (!(p.heuristic.terminal_value > 0.0)) fail("terminal_value", "must be > 0");
}

AgentParams default_params(AgentKind kind) {
  AgentParams p;
  if (kind == AgentKind::prhea || kind == AgentKind::mo_prhea || kind == AgentKind::sprhea) p.individual_length = 8;
  return p;
}

AgentSpec AgentSpec::defaults(AgentKind kind) {
  AgentSpec spec;
  spec.kind = kind;
  spec.params = default_params(kind);
  return spec;
}

std::string AgentSpec::name() const { return label.empty() ? std::string(to_string(kind)) : label; }

AgentSpec parse_agent_spec(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("agent spec must be a mapping");
  check_keys(root, {"agent", "name", "params", "portfolio"}, "");

  AgentSpec spec;
  if (!root["agent"]) fail("agent", "missing required key");
  const auto kind_name = scalar<std::string>(root["agent"], "agent");
  const auto kind = agent_kind_from_string(kind_name);
  if (!kind) fail("agent", "unknown agent '" + kind_name + "'");
  spec = AgentSpec::defaults(*kind);
  if (root["name"]) spec.label = scalar<std::string>(root["name"], "name");

  AgentParams& p = spec.params;
  if (const auto params = root["params"]) {
    if (!params.IsMap()) fail("params", "expected a mapping");
    check_keys(params,
               {"population_size", "individual_length", "mutation_rate", "tournament_size", "num_changes",
                "response_iterations", "elitism", "continue_search", "own_init_script", "opponent_script",
                "unit_bonus", "terminal_value"},
               "params");
    auto read = [&](const char* key, auto& field) {
      if (params[key]) field = scalar<std::remove_reference_t<decltype(field)>>(params[key], std::string("params.") + key);
    };
    read("population_size", p.population_size);
    read("individual_length", p.individual_length);
    read("mutation_rate", p.mutation_rate);
    read("tournament_size", p.tournament_size);
    read("num_changes", p.num_changes);
    read("response_iterations", p.response_iterations);
    read("elitism", p.elitism);
    read("continue_search", p.continue_search);
    read("unit_bonus", p.heuristic.unit_bonus);
    read("terminal_value", p.heuristic.terminal_value);
    if (params["own_init_script"]) p.own_init_script = parse_script(params["own_init_script"], "params.own_init_script");
    if (params["opponent_script"]) p.opponent_script = parse_script(params["opponent_script"], "params.opponent_script");
  }
  if (const auto portfolio = root["portfolio"]) {
    if (!portfolio.IsSequence() || portfolio.size() == 0) fail("portfolio", "expected a non-empty list of scripts");
    std::vector<ScriptId> scripts;
    for (std::size_t i = 0; i < portfolio.size(); ++i) {
      scripts.push_back(parse_script(portfolio[i], "portfolio[" + std::to_string(i) + "]"));
    }
    p.portfolio = Portfolio(std::move(scripts));
  }
  try {
    validate(p);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("params.") + e.what());
  }
  return spec;
}

AgentSpec load_agent_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_agent_spec(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_agent_spec(const AgentSpec& spec) {
  const AgentParams& p = spec.params;
  std::ostringstream out;
  out << "agent: " << to_string(spec.kind) << '\n';
  if (!spec.label.empty()) out << "name: " << spec.label << '\n';
  out << "params:\n"
      << "  population_size: " << p.population_size << '\n'
      << "  individual_length: " << p.individual_length << '\n'
      << "  mutation_rate: " << format_double(p.mutation_rate) << '\n'
      << "  tournament_size: " << p.tournament_size << '\n'
      << "  num_changes: " << p.num_changes << '\n'
      << "  response_iterations: " << p.response_iterations << '\n'
      << "  elitism: " << (p.elitism ? "true" : "false") << '\n'
      << "  continue_search: " << (p.continue_search ? "true" : "false") << '\n'
      << "  own_init_script: " << script_abbrev(p.own_init_script) << '\n'
      << "  opponent_script: " << script_abbrev(p.opponent_script) << '\n'
      << "  unit_bonus: " << format_double(p.heuristic.unit_bonus) << '\n'
      << "  terminal_value: " << format_double(p.heuristic.terminal_value) << '\n'
      << "portfolio: [";
  for (std::size_t i = 0; i < p.portfolio.size(); ++i) out << (i ? ", " : "") << code(p.portfolio[i]);
  out << "]\n";
  return out.str();
}

AgentSpec resolve_agent_spec(std::string_view name_or_path) {
  const std::filesystem::path path(name_or_path);
  if (std::filesystem::exists(path) && std::filesystem::is_regular_file(path)) return load_agent_spec(path);
  if (auto kind = agent_kind_from_string(name_or_path)) return AgentSpec::defaults(*kind);
  const auto shipped = config_root() / "agents" / (std::string(name_or_path) + ".yaml");
  if (std::filesystem::exists(shipped)) return load_agent_spec(shipped);
  throw ConfigError("no agent file, agent kind or shipped agent named '" + std::string(name_or_path) + "'");
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec) {
  validate(spec.params);
  switch (spec.kind) {
    case AgentKind::pgs: return std::make_unique<PgsAgent>(spec.params);
    case AgentKind::poe: return std::make_unique<PoeAgent>(spec.params);
    case AgentKind::prhea: return std::make_unique<PrheaAgent>(spec.params);
    case AgentKind::mo_prhea: return std::make_unique<MoPrheaAgent>(spec.params);
    case AgentKind::sprhea: return std::make_unique<SprheaAgent>(spec.params);
    case AgentKind::combat: return std::make_unique<CombatAgent>();
    case AgentKind::pusher: return std::make_unique<PusherAgent>();
    case AgentKind::random: return std::make_unique<RandomAgent>();
  }
  throw std::logic_error("unhandled agent kind");
}

Decision scripted_decision(const GameState& state, ScriptId script, Rng& rng) {
  Decision d;
  if (state.terminal()) return d;
  if (const auto actor = acting_unit(state)) {
    d.action = script_action(script, state, *actor, rng);
    d.trace.script = script;
  }
  return d;
}

}  // namespace arena
