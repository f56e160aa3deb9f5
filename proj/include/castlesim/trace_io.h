#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "castlesim/experiments.h"

namespace castlesim {

// Error in a config or data file. `field` names the offending entry when
// one can be identified (e.g. "cohort.weak").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// --- cohort config -----------------------------------------------------
//
// The config is a single JSON document with every field explicit; no field
// may be missing and unknown fields are rejected, so a config file is a
// complete record of an experiment. `castlesim cohort --print-config`
// writes the shipped defaults to start from.

nlohmann::json config_to_json(const CohortConfig& config);
CohortConfig config_from_json(const nlohmann::json& doc);
CohortConfig load_config_file(const std::filesystem::path& path);

// --- trace records (JSON Lines) ----------------------------------------

nlohmann::json trace_record_to_json(const GameResult& result);
GameResult trace_record_from_json(const nlohmann::json& doc);

// One compact JSON object per line, no trailing newline on the line itself.
std::string trace_record_to_line(const GameResult& result);
GameResult trace_record_from_line(const std::string& line);

// Writes records one per line.
void write_trace_file(const std::filesystem::path& path,
                      std::span<const GameResult> results);
std::vector<GameResult> read_trace_file(const std::filesystem::path& path);

// --- cohort result directories ------------------------------------------

inline constexpr int kResultsFormatVersion = 1;

// Lays out a results directory: one single-line trace file per game plus an
// index.json (written last) with the format version, the config, and the
// trace file list.
void write_cohort_results(const CohortResults& results,
                          const std::filesystem::path& out_dir);
CohortResults read_cohort_dir(const std::filesystem::path& dir);

// --- summaries -----------------------------------------------------------

// CSV with header "group,metric,without,with,difference"; weak and strong
// rows only, mirroring the study's overview table.
std::string render_summary_csv(const SummaryTable& table);
SummaryTable parse_summary_csv(const std::string& csv);

// Aligned-text rendering of the same rows and values.
std::string render_summary_text(const SummaryTable& table);

// Tier grid of a scheme, as text ("score tier" cells) or CSV rows.
std::string render_tier_table_text(const TierScheme& scheme);
std::string render_tier_table_csv(const TierScheme& scheme);

}  // namespace castlesim
