#include "arena/results_io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace arena {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kMatchesHeader = "mode,agent0,agent1,seed,seats_swapped,outcome,turns_played,fm_calls0,fm_calls1";
constexpr const char* kUsageHeader =
    "agent,mode,opponent,games,total_actions,script_code,script,count,frequency,error";

std::string usage_columns() {
  std::string s;
  for (int p = 0; p < 2; ++p) {
    for (ScriptId id : kAllScripts) s += ",usage" + std::to_string(p) + "_" + std::string(script_abbrev(id));
  }
  return s;
}

Outcome outcome_from_string(std::string_view s) {
  for (Outcome o : {Outcome::win_player0, Outcome::win_player1, Outcome::draw}) {
    if (to_string(o) == s) return o;
  }
  throw std::runtime_error("unknown outcome '" + std::string(s) + "'");
}

template <class T>
T parse_int(std::string_view s, const std::string& what) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw std::runtime_error("bad integer for " + what + ": '" + std::string(s) + "'");
  return v;
}

bool parse_bool(std::string_view s, const std::string& what) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::runtime_error("bad boolean for " + what + ": '" + std::string(s) + "'");
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

json match_json(const MatchRecord& m) {
  json j;
  j["mode"] = m.mode;
  j["agent0"] = m.agent0;
  j["agent1"] = m.agent1;
  j["seed"] = m.seed;
  j["seats_swapped"] = m.seats_swapped;
  j["outcome"] = std::string(to_string(m.outcome));
  j["turns_played"] = m.turns_played;
  j["fm_calls"] = {m.fm_calls[0], m.fm_calls[1]};
  j["usage"] = {m.usage[0], m.usage[1]};
  return j;
}

MatchRecord match_from_json(const json& j) {
  MatchRecord m;
  m.mode = j.at("mode").get<std::string>();
  m.agent0 = j.at("agent0").get<std::string>();
  m.agent1 = j.at("agent1").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.seats_swapped = j.at("seats_swapped").get<bool>();
  m.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  m.turns_played = j.at("turns_played").get<int>();
  m.fm_calls = j.at("fm_calls").get<std::array<long, 2>>();
  m.usage = j.at("usage").get<std::array<ScriptCounts, 2>>();
  return m;
}

json usage_json(const UsageProfile& u) {
  json j;
  j["agent"] = u.agent;
  j["mode"] = u.mode;
  j["opponent"] = u.opponent;
  j["games"] = u.games;
  j["counts"] = u.counts;
  j["frequencies"] = u.frequencies();
  j["error"] = u.error;
  return j;
}

UsageProfile usage_from_json(const json& j) {
  UsageProfile u;
  u.agent = j.at("agent").get<std::string>();
  u.mode = j.at("mode").get<std::string>();
  u.opponent = j.at("opponent").get<std::string>();
  u.games = j.at("games").get<int>();
  u.counts = j.at("counts").get<ScriptCounts>();
  u.error = j.at("error").get<bool>();
  return u;
}

std::string matches_csv(const ResultsBundle& r) {
  std::ostringstream out;
  out << kMatchesHeader << usage_columns() << '\n';
  for (const auto& m : r.matches) {
    out << csv_field(m.mode) << ',' << csv_field(m.agent0) << ',' << csv_field(m.agent1) << ',' << m.seed << ','
        << bool_text(m.seats_swapped) << ',' << to_string(m.outcome) << ',' << m.turns_played << ',' << m.fm_calls[0]
        << ',' << m.fm_calls[1];
    for (const auto& side : m.usage) {
      for (long c : side) out << ',' << c;
    }
    out << '\n';
  }
  return out.str();
}

std::string league_csv(const LeagueTable& t) {
  std::ostringstream out;
  out << "agent";
  for (const auto& a : t.agents) out << ',' << csv_field(a);
  out << ",wins,draws,losses\n";
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    out << csv_field(t.agents[i]);
    for (std::size_t j = 0; j < t.agents.size(); ++j) {
      out << ',';
      if (i != j && t.cells[i][j].games > 0) out << format_number(t.cells[i][j].win_rate());
    }
    out << ',' << t.totals[i].wins << ',' << t.totals[i].draws << ',' << t.totals[i].losses << '\n';
  }
  return out.str();
}

std::string pairs_csv(const LeagueTable& t) {
  std::ostringstream out;
  out << "agent,opponent,games,wins,draws,losses,win_rate\n";
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    for (std::size_t j = 0; j < t.agents.size(); ++j) {
      if (i == j) continue;
      const PairCell& c = t.cells[i][j];
      out << csv_field(t.agents[i]) << ',' << csv_field(t.agents[j]) << ',' << c.games << ',' << c.wins << ','
          << c.draws << ',' << c.losses << ',' << format_number(c.win_rate()) << '\n';
    }
  }
  return out.str();
}

std::string totals_csv(const LeagueTable& t) {
  std::ostringstream out;
  out << "agent,games,wins,draws,losses,points,win_rate\n";
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    const AgentTotals& s = t.totals[i];
    const double rate = s.games ? static_cast<double>(s.wins) / s.games : 0.0;
    out << csv_field(t.agents[i]) << ',' << s.games << ',' << s.wins << ',' << s.draws << ',' << s.losses << ','
        << s.points << ',' << format_number(rate) << '\n';
  }
  return out.str();
}

std::string usage_csv(const ResultsBundle& r) {
  std::ostringstream out;
  out << kUsageHeader << '\n';
  for (const auto& u : r.usage) {
    const auto freq = u.frequencies();
    for (ScriptId id : kAllScripts) {
      const auto i = static_cast<std::size_t>(code(id));
      out << csv_field(u.agent) << ',' << csv_field(u.mode) << ',' << csv_field(u.opponent) << ',' << u.games << ','
          << u.total() << ',' << code(id) << ',' << script_abbrev(id) << ',' << u.counts[i] << ','
          << format_number(freq[i]) << ',' << bool_text(u.error) << '\n';
    }
  }
  return out.str();
}

std::string results_json(const ResultsBundle& r, const LeagueTable& t) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = r.mode;
  j["agents"] = r.agents;
  json league = json::array();
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < t.agents.size(); ++k) {
      const PairCell& c = t.cells[i][k];
      row.push_back({{"games", c.games}, {"wins", c.wins}, {"draws", c.draws}, {"losses", c.losses}});
    }
    league.push_back(std::move(row));
  }
  j["league"] = std::move(league);
  json totals = json::array();
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    const AgentTotals& s = t.totals[i];
    totals.push_back({{"agent", t.agents[i]},
                      {"games", s.games},
                      {"wins", s.wins},
                      {"draws", s.draws},
                      {"losses", s.losses},
                      {"points", s.points}});
  }
  j["totals"] = std::move(totals);
  j["usage"] = json::array();
  for (const auto& u : r.usage) j["usage"].push_back(usage_json(u));
  j["matches"] = json::array();
  for (const auto& m : r.matches) j["matches"].push_back(match_json(m));
  return j.dump(2) + "\n";
}

std::vector<MatchRecord> parse_matches_csv(const std::string& text, const std::filesystem::path& path) {
  const auto lines = csv_lines(text);
  const std::string header = std::string(kMatchesHeader) + usage_columns();
  if (lines.empty() || lines[0] != header) throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<MatchRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto f = parse_csv_line(lines[n]);
    const std::string where = path.string() + " line " + std::to_string(n + 1);
    if (f.size() != 9 + 2 * kScriptCount) throw std::runtime_error(where + ": wrong number of fields");
    MatchRecord m;
    m.mode = f[0];
    m.agent0 = f[1];
    m.agent1 = f[2];
    m.seed = parse_int<std::uint64_t>(f[3], where);
    m.seats_swapped = parse_bool(f[4], where);
    m.outcome = outcome_from_string(f[5]);
    m.turns_played = parse_int<int>(f[6], where);
    m.fm_calls = {parse_int<long>(f[7], where), parse_int<long>(f[8], where)};
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t i = 0; i < kScriptCount; ++i) m.usage[p][i] = parse_int<long>(f[9 + p * kScriptCount + i], where);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<UsageProfile> parse_usage_csv(const std::string& text, const std::filesystem::path& path) {
  const auto lines = csv_lines(text);
  if (lines.empty() || lines[0] != kUsageHeader) throw std::runtime_error(path.string() + ": unexpected header");
  if ((lines.size() - 1) % kScriptCount != 0) throw std::runtime_error(path.string() + ": incomplete usage profile");
  std::vector<UsageProfile> out;
  for (std::size_t n = 1; n < lines.size(); n += kScriptCount) {
    UsageProfile u;
    for (std::size_t i = 0; i < kScriptCount; ++i) {
      const auto f = parse_csv_line(lines[n + i]);
      const std::string where = path.string() + " line " + std::to_string(n + i + 1);
      if (f.size() != 10) throw std::runtime_error(where + ": wrong number of fields");
      if (parse_int<int>(f[5], where) != static_cast<int>(i)) throw std::runtime_error(where + ": scripts out of order");
      if (i == 0) {
        u.agent = f[0];
        u.mode = f[1];
        u.opponent = f[2];
        u.games = parse_int<int>(f[3], where);
        u.error = parse_bool(f[9], where);
      }
      u.counts[i] = parse_int<long>(f[7], where);
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << contents;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": file not found or unreadable");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

void write_metadata(const std::filesystem::path& path, const RunMetadata& meta, const std::string& mode,
                    const std::vector<std::string>& agents) {
  json j;
  j["schema_version"] = meta.schema_version;
  j["generator"] = "arena";
  j["command"] = meta.command;
  json flags = json::object();
  for (const auto& [k, v] : meta.flags) flags[k] = v;
  j["flags"] = std::move(flags);
  j["mode"] = mode;
  j["agents"] = agents;
  j["timestamp"] = meta.timestamp;
  write_file(path, j.dump(2) + "\n");
}

std::vector<std::filesystem::path> export_results(const ResultsBundle& r, const std::filesystem::path& dir,
                                                  ExportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir.string() + ": cannot create directory: " + ec.message());
  const LeagueTable table = tabulate(r.agents, r.matches);
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& text) {
    write_file(dir / name, text);
    written.push_back(dir / name);
  };
  write_metadata(dir / "metadata.json", r.meta, r.mode, r.agents);
  written.push_back(dir / "metadata.json");
  if (format != ExportFormat::json) {
    put("matches.csv", matches_csv(r));
    put("league.csv", league_csv(table));
    put("pairs.csv", pairs_csv(table));
    put("totals.csv", totals_csv(table));
    put("usage.csv", usage_csv(r));
  }
  if (format != ExportFormat::csv) put("results.json", results_json(r, table));
  return written;
}

ResultsBundle load_results(const std::filesystem::path& dir) {
  const auto meta_path = dir / "metadata.json";
  ResultsBundle r;
  json meta;
  try {
    meta = json::parse(read_file(meta_path));
    r.meta.schema_version = meta.at("schema_version").get<int>();
  } catch (const json::exception& e) {
    throw std::runtime_error(meta_path.string() + ": " + e.what());
  }
  if (r.meta.schema_version != kSchemaVersion) {
    throw std::runtime_error(meta_path.string() + ": schema version " + std::to_string(r.meta.schema_version) +
                             " does not match reader version " + std::to_string(kSchemaVersion));
  }
  try {
    r.meta.command = meta.at("command").get<std::string>();
    for (const auto& [k, v] : meta.at("flags").items()) r.meta.flags.emplace_back(k, v.get<std::string>());
    r.meta.timestamp = meta.at("timestamp").get<std::string>();
    r.mode = meta.at("mode").get<std::string>();
    r.agents = meta.at("agents").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw std::runtime_error(meta_path.string() + ": " + e.what());
  }

  if (std::filesystem::exists(dir / "matches.csv")) {
    r.matches = parse_matches_csv(read_file(dir / "matches.csv"), dir / "matches.csv");
    r.usage = parse_usage_csv(read_file(dir / "usage.csv"), dir / "usage.csv");
    return r;
  }
  const auto path = dir / "results.json";
  try {
    const json j = json::parse(read_file(path));
    for (const auto& m : j.at("matches")) r.matches.push_back(match_from_json(m));
    for (const auto& u : j.at("usage")) r.usage.push_back(usage_from_json(u));
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return r;
}

std::string checkpoint_line(int job_index, const MatchRecord& record) {
  json j;
  j["job"] = job_index;
  j["match"] = match_json(record);
  return j.dump();
}

std::pair<int, MatchRecord> checkpoint_from_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    return {j.at("job").get<int>(), match_from_json(j.at("match"))};
  } catch (const std::exception&) {
    return {-1, {}};  // torn trailing line from an interrupted run
  }
}

}  // namespace arena
