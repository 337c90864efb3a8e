#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arena/tournament.hpp"

namespace arena {

/// Version of the exported file layout; readers refuse other versions.
inline constexpr int kSchemaVersion = 1;

struct RunMetadata {
  int schema_version = kSchemaVersion;
  std::string command;                                       // "league", "profile", "tune", ...
  std::vector<std::pair<std::string, std::string>> flags;  // echoed CLI flags, in order
  std::string timestamp;                                     // the only non-reproducible field

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct ResultsBundle {
  RunMetadata meta;
  std::string mode;
  std::vector<std::string> agents;
  std::vector<MatchRecord> matches;
  std::vector<UsageProfile> usage;

  friend bool operator==(const ResultsBundle&, const ResultsBundle&) = default;
};

enum class ExportFormat { csv, json, both };

/// Writes into `dir` (created if needed):
///   metadata.json  schema version, command, flags, mode, agents, timestamp
///   matches.csv    one row per match
///   league.csv     win-rate matrix (row agent vs column agent) + W/D/L totals
///   pairs.csv      the same matrix in long form with counts
///   totals.csv     per-agent totals and points
///   usage.csv      six rows (one per script) per usage profile
///   results.json   everything above except the metadata
/// CSV files are skipped for ExportFormat::json and results.json for
/// ExportFormat::csv. Returns the paths written.
std::vector<std::filesystem::path> export_results(const ResultsBundle& results, const std::filesystem::path& dir,
                                                  ExportFormat format = ExportFormat::both);

/// Reads a directory written by export_results. Uses the CSV files when
/// present, results.json otherwise. Throws std::runtime_error on schema
/// mismatch or malformed files, naming the path.
ResultsBundle load_results(const std::filesystem::path& dir);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

// CSV helpers shared with the tuning export.
std::string csv_field(std::string_view s);
std::vector<std::string> parse_csv_line(std::string_view line);
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);
void write_metadata(const std::filesystem::path& path, const RunMetadata& meta, const std::string& mode,
                    const std::vector<std::string>& agents);

// League checkpoint lines (one JSON object per finished match).
std::string checkpoint_line(int job_index, const MatchRecord& record);
std::pair<int, MatchRecord> checkpoint_from_line(std::string_view line);

}  // namespace arena
