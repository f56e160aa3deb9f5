#include "castlesim/trace_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace castlesim {

namespace {

using nlohmann::json;

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json& require_field(const json& obj, const std::string& prefix, const char* key) {
  if (!obj.is_object()) throw ConfigError(prefix, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join_path(prefix, key), "missing required field");
  return *it;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end()) {
      throw ConfigError(join_path(prefix, key), "unknown field");
    }
  }
}

int get_int(const json& obj, const std::string& prefix, const char* key) {
  const json& v = require_field(obj, prefix, key);
  if (!v.is_number_integer()) throw ConfigError(join_path(prefix, key), "expected an integer");
  return v.get<int>();
}

uint64_t get_u64(const json& obj, const std::string& prefix, const char* key) {
  const json& v = require_field(obj, prefix, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0)) {
    throw ConfigError(join_path(prefix, key), "expected a non-negative integer");
  }
  return v.get<uint64_t>();
}

double get_double(const json& obj, const std::string& prefix, const char* key) {
  const json& v = require_field(obj, prefix, key);
  if (!v.is_number()) throw ConfigError(join_path(prefix, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join_path(prefix, key), "expected a finite number");
  return d;
}

std::string get_string(const json& obj, const std::string& prefix, const char* key) {
  const json& v = require_field(obj, prefix, key);
  if (!v.is_string()) throw ConfigError(join_path(prefix, key), "expected a string");
  return v.get<std::string>();
}

// Shortest decimal text that parses back to exactly the same double.
std::string number_text(double value) { return json(value).dump(); }

}  // namespace

json config_to_json(const CohortConfig& config) {
  json cohort;
  cohort["weak"] = config.weak_count;
  cohort["average"] = config.average_count;
  cohort["strong"] = config.strong_count;
  cohort["games_per_condition"] = config.games_per_condition;
  json conditions = json::array();
  for (const PolicyKind kind : config.conditions) conditions.push_back(to_string(kind));
  cohort["conditions"] = conditions;
  cohort["learning_rate"] = config.learning_rate;

  const CombatParams& c = config.combat;
  json combat;
  combat["reference_wave_size"] = c.reference_wave_size;
  combat["attempts_per_enemy"] = c.attempts_per_enemy;
  combat["tanker_hit_coeff"] = c.tanker_hit_coeff;
  combat["zombie_hit_coeff"] = c.zombie_hit_coeff;
  combat["pressure_exponent"] = c.pressure_exponent;
  combat["zombie_skill_discount"] = c.zombie_skill_discount;
  combat["kill_rate_base"] = c.kill_rate_base;
  combat["kill_rate_slope"] = c.kill_rate_slope;
  combat["inter_level_pause_s"] = c.inter_level_pause_s;
  combat["max_levels"] = c.max_levels;

  json doc;
  doc["master_seed"] = config.master_seed;
  doc["cohort"] = cohort;
  doc["combat"] = combat;
  return doc;
}

CohortConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(doc, "", {"master_seed", "cohort", "combat"});

  CohortConfig config;
  config.master_seed = get_u64(doc, "", "master_seed");

  const json& cohort = require_field(doc, "", "cohort");
  reject_unknown(cohort, "cohort",
                 {"weak", "average", "strong", "games_per_condition", "conditions",
                  "learning_rate"});
  config.weak_count = get_int(cohort, "cohort", "weak");
  config.average_count = get_int(cohort, "cohort", "average");
  config.strong_count = get_int(cohort, "cohort", "strong");
  config.games_per_condition = get_int(cohort, "cohort", "games_per_condition");
  config.learning_rate = get_double(cohort, "cohort", "learning_rate");

  const json& conditions = require_field(cohort, "cohort", "conditions");
  if (!conditions.is_array()) throw ConfigError("cohort.conditions", "expected an array");
  config.conditions.clear();
  for (size_t i = 0; i < conditions.size(); ++i) {
    const json& entry = conditions[i];
    const std::string field = "cohort.conditions[" + std::to_string(i) + "]";
    if (!entry.is_string()) throw ConfigError(field, "expected a policy name string");
    const auto kind = policy_from_string(entry.get<std::string>());
    if (!kind) throw ConfigError(field, "unknown policy '" + entry.get<std::string>() + "'");
    config.conditions.push_back(*kind);
  }

  const json& combat = require_field(doc, "", "combat");
  reject_unknown(combat, "combat",
                 {"reference_wave_size", "attempts_per_enemy", "tanker_hit_coeff",
                  "zombie_hit_coeff", "pressure_exponent", "zombie_skill_discount",
                  "kill_rate_base", "kill_rate_slope", "inter_level_pause_s", "max_levels"});
  CombatParams& c = config.combat;
  c.reference_wave_size = get_int(combat, "combat", "reference_wave_size");
  c.attempts_per_enemy = get_int(combat, "combat", "attempts_per_enemy");
  c.tanker_hit_coeff = get_double(combat, "combat", "tanker_hit_coeff");
  c.zombie_hit_coeff = get_double(combat, "combat", "zombie_hit_coeff");
  c.pressure_exponent = get_double(combat, "combat", "pressure_exponent");
  c.zombie_skill_discount = get_double(combat, "combat", "zombie_skill_discount");
  c.kill_rate_base = get_double(combat, "combat", "kill_rate_base");
  c.kill_rate_slope = get_double(combat, "combat", "kill_rate_slope");
  c.inter_level_pause_s = get_double(combat, "combat", "inter_level_pause_s");
  c.max_levels = get_int(combat, "combat", "max_levels");

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return config;
}

CohortConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json trace_record_to_json(const GameResult& result) {
  json levels = json::array();
  for (const LevelRecord& record : result.trace.levels) {
    json entry;
    entry["level"] = record.level;
    entry["tankers"] = record.wave.tankers;
    entry["zombies"] = record.wave.zombies;
    entry["end_gh"] = record.outcome.end_gate.value();
    entry["end_ph"] = record.outcome.end_player.value();
    entry["duration_s"] = record.outcome.duration_s;
    if (!record.outcome.survived) entry["enemies_remaining"] = record.outcome.enemies_remaining;
    if (record.score) entry["score"] = record.score->points();
    if (record.tier) entry["tier"] = record.tier->index();
    if (record.next_size) entry["next_size"] = *record.next_size;
    levels.push_back(entry);
  }

  json doc;
  doc["game_id"] = result.game_id;
  doc["agent_id"] = result.agent_id;
  doc["profile"] = to_string(result.profile);
  doc["skill"] = result.skill;
  doc["condition"] = to_string(result.condition);
  doc["condition_index"] = result.condition_index;
  doc["game_index"] = result.game_index;
  doc["levels"] = levels;
  doc["outcome"] = to_string(result.trace.outcome);
  doc["levels_reached"] = result.levels_reached;
  doc["total_duration_s"] = result.trace.total_duration_s;
  doc["difficulty_proxy"] = result.difficulty;
  return doc;
}

GameResult trace_record_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "trace record must be a JSON object");
  reject_unknown(doc, "",
                 {"game_id", "agent_id", "profile", "skill", "condition", "condition_index",
                  "game_index", "levels", "outcome", "levels_reached", "total_duration_s",
                  "difficulty_proxy"});

  GameResult result;
  result.game_id = get_string(doc, "", "game_id");
  result.agent_id = get_int(doc, "", "agent_id");

  const std::string profile = get_string(doc, "", "profile");
  const auto profile_label = profile_from_string(profile);
  if (!profile_label) throw ConfigError("profile", "unknown profile '" + profile + "'");
  result.profile = *profile_label;

  result.skill = get_double(doc, "", "skill");

  const std::string condition = get_string(doc, "", "condition");
  const auto kind = policy_from_string(condition);
  if (!kind) throw ConfigError("condition", "unknown policy '" + condition + "'");
  result.condition = *kind;
  result.condition_index = get_int(doc, "", "condition_index");
  result.game_index = get_int(doc, "", "game_index");

  const std::string outcome = get_string(doc, "", "outcome");
  const auto game_outcome = game_outcome_from_string(outcome);
  if (!game_outcome) throw ConfigError("outcome", "unknown outcome '" + outcome + "'");
  result.trace.outcome = *game_outcome;

  const json& levels = require_field(doc, "", "levels");
  if (!levels.is_array() || levels.empty()) {
    throw ConfigError("levels", "expected a non-empty array");
  }
  const bool dynamic = result.condition != PolicyKind::kFixed;
  int previous_gate = Health::kMax;
  for (size_t i = 0; i < levels.size(); ++i) {
    const std::string field = "levels[" + std::to_string(i) + "]";
    const json& entry = levels[i];
    reject_unknown(entry, field,
                   {"level", "tankers", "zombies", "end_gh", "end_ph", "duration_s",
                    "enemies_remaining", "score", "tier", "next_size"});

    LevelRecord record;
    record.level = get_int(entry, field, "level");
    record.wave.tankers = get_int(entry, field, "tankers");
    record.wave.zombies = get_int(entry, field, "zombies");
    try {
      record.outcome.end_gate = Health(get_int(entry, field, "end_gh"));
      record.outcome.end_player = Health(get_int(entry, field, "end_ph"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
    record.outcome.duration_s = get_double(entry, field, "duration_s");
    record.outcome.survived =
        !record.outcome.end_gate.destroyed() && !record.outcome.end_player.destroyed();
    // Hit counts are implied by the health deltas.
    record.outcome.player_hits_taken =
        (Health::kMax - record.outcome.end_player.value()) / Health::kHitDamage;
    record.outcome.gate_hits_taken =
        (previous_gate - record.outcome.end_gate.value()) / Health::kHitDamage;
    previous_gate = record.outcome.end_gate.value();
    record.outcome.enemies_remaining =
        record.outcome.survived ? 0 : get_int(entry, field, "enemies_remaining");

    if (entry.contains("score")) {
      const double points = get_double(entry, field, "score");
      const double doubled = points * 2.0;
      if (doubled != std::floor(doubled)) {
        throw ConfigError(field + ".score", "score must be a multiple of 0.5");
      }
      record.score = Score::from_half_points(static_cast<int>(doubled));
    }
    if (entry.contains("tier")) {
      try {
        record.tier = Tier(get_int(entry, field, "tier"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(field + ".tier", e.what());
      }
    }
    if (dynamic != entry.contains("score") && record.outcome.survived) {
      throw ConfigError(field, "score/tier presence does not match the policy");
    }
    if (entry.contains("next_size")) record.next_size = get_int(entry, field, "next_size");
    result.trace.levels.push_back(record);
  }

  result.levels_reached = get_int(doc, "", "levels_reached");
  result.trace.levels_reached = result.levels_reached;
  result.trace.total_duration_s = get_double(doc, "", "total_duration_s");
  result.difficulty = get_double(doc, "", "difficulty_proxy");
  result.duration_min = result.trace.total_duration_s / 60.0;
  return result;
}

std::string trace_record_to_line(const GameResult& result) {
  return trace_record_to_json(result).dump();
}

GameResult trace_record_from_line(const std::string& line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON line: ") + e.what());
  }
  return trace_record_from_json(doc);
}

void write_trace_file(const std::filesystem::path& path,
                      std::span<const GameResult> results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), "cannot open output file for writing");
  for (const GameResult& result : results) {
    out << trace_record_to_line(result) << '\n';
  }
  if (!out) throw ConfigError(path.string(), "write failed");
}

std::vector<GameResult> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open trace file");
  std::vector<GameResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      results.push_back(trace_record_from_line(line));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string(), e.what());
    }
  }
  return results;
}

void write_cohort_results(const CohortResults& results, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError(out_dir.string(), "cannot create output directory: " + ec.message());

  json files = json::array();
  for (const GameResult& game : results.games) {
    const std::string name = "trace_" + game.game_id + ".jsonl";
    write_trace_file(out_dir / name, std::span<const GameResult>(&game, 1));
    files.push_back(name);
  }

  // Index goes last: its presence marks a complete run.
  json index;
  index["format_version"] = kResultsFormatVersion;
  index["config"] = config_to_json(results.config);
  index["traces"] = files;
  std::ofstream out(out_dir / "index.json", std::ios::binary);
  if (!out) throw ConfigError((out_dir / "index.json").string(), "cannot write results index");
  out << index.dump(2) << '\n';
}

CohortResults read_cohort_dir(const std::filesystem::path& dir) {
  const std::filesystem::path index_path = dir / "index.json";
  std::ifstream in(index_path);
  if (!in) {
    throw ConfigError(index_path.string(),
                      "missing results index (empty or not a results directory)");
  }
  json index;
  try {
    in >> index;
  } catch (const json::parse_error& e) {
    throw ConfigError(index_path.string(), std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(index, "", {"format_version", "config", "traces"});
  const int version = get_int(index, "", "format_version");
  if (version != kResultsFormatVersion) {
    throw ConfigError("format_version",
                      "unsupported results version " + std::to_string(version) + " (expected " +
                          std::to_string(kResultsFormatVersion) + ")");
  }

  CohortResults results;
  results.config = config_from_json(require_field(index, "", "config"));

  const json& traces = require_field(index, "", "traces");
  if (!traces.is_array()) throw ConfigError("traces", "expected an array");
  for (const json& name : traces) {
    if (!name.is_string()) throw ConfigError("traces", "expected file name strings");
    const auto batch = read_trace_file(dir / name.get<std::string>());
    results.games.insert(results.games.end(), batch.begin(), batch.end());
  }

  const int expected = results.config.total_games();
  if (static_cast<int>(results.games.size()) != expected) {
    throw ConfigError("traces", "expected " + std::to_string(expected) +
                                    " trace records, found " +
                                    std::to_string(results.games.size()));
  }
  return results;
}

namespace {

// Summary emitters only carry the study's comparison groups.
bool emitted_group(ProfileLabel group) {
  return group == ProfileLabel::kWeak || group == ProfileLabel::kStrong;
}

}  // namespace

std::string render_summary_csv(const SummaryTable& table) {
  std::string out = "group,metric,without,with,difference\n";
  for (const SummaryRow& row : table.rows) {
    if (!emitted_group(row.group)) continue;
    out += std::string(to_string(row.group)) + "," + std::string(to_string(row.metric)) + "," +
           number_text(row.without_dda) + "," + number_text(row.with_dda) + "," +
           number_text(row.difference) + "\n";
  }
  return out;
}

SummaryTable parse_summary_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "group,metric,without,with,difference") {
    throw ConfigError("", "bad summary CSV header");
  }
  SummaryTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string group, metric, without, with, difference;
    if (!std::getline(fields, group, ',') || !std::getline(fields, metric, ',') ||
        !std::getline(fields, without, ',') || !std::getline(fields, with, ',') ||
        !std::getline(fields, difference, ',')) {
      throw ConfigError("", "bad summary CSV row: " + line);
    }
    SummaryRow row;
    const auto group_label = profile_from_string(group);
    if (!group_label) throw ConfigError("", "unknown group '" + group + "'");
    row.group = *group_label;
    if (metric == "level_reached") {
      row.metric = Metric::kLevelReached;
    } else if (metric == "time_taken_min") {
      row.metric = Metric::kTimeTakenMin;
    } else if (metric == "difficulty") {
      row.metric = Metric::kDifficulty;
    } else {
      throw ConfigError("", "unknown metric '" + metric + "'");
    }
    row.without_dda = json::parse(without).get<double>();
    row.with_dda = json::parse(with).get<double>();
    row.difference = json::parse(difference).get<double>();
    table.rows.push_back(row);
  }
  return table;
}

std::string render_summary_text(const SummaryTable& table) {
  std::ostringstream out;
  out << "Averaged results, fixed baseline vs DDA\n";
  out << "metric           group   without       with          difference\n";
  for (const SummaryRow& row : table.rows) {
    if (!emitted_group(row.group)) continue;
    std::ostringstream line;
    line << to_string(row.metric);
    line.seekp(0, std::ios::end);
    std::string text = line.str();
    text.resize(17, ' ');
    std::string group(to_string(row.group));
    group.resize(8, ' ');
    std::string without = number_text(row.without_dda);
    without.resize(std::max<size_t>(14, without.size() + 1), ' ');
    std::string with = number_text(row.with_dda);
    with.resize(std::max<size_t>(14, with.size() + 1), ' ');
    out << text << group << without << with << number_text(row.difference) << "\n";
  }
  return out.str();
}

std::string render_tier_table_text(const TierScheme& scheme) {
  const auto cells = tier_table(scheme);
  std::ostringstream out;
  out << "tier grid, scheme " << to_string(scheme.variant())
      << " (rows: gate health, columns: player health; cell: score tier)\n";
  out << "  gh\\ph";
  for (int ph = 10; ph <= 100; ph += 10) {
    std::string head = std::to_string(ph);
    head.insert(0, 10 - head.size(), ' ');
    out << head;
  }
  out << "\n";
  for (int row = 0; row < 10; ++row) {
    const int gh = 10 * (row + 1);
    std::string head = std::to_string(gh);
    head.insert(0, 7 - head.size(), ' ');
    out << head;
    for (int col = 0; col < 10; ++col) {
      const TierCell& cell = cells[row * 10 + col];
      std::string text = format_score(cell.score) + " T" + std::to_string(cell.tier.index());
      text.insert(0, 10 - text.size(), ' ');
      out << text;
    }
    out << "\n";
  }
  return out.str();
}

std::string render_tier_table_csv(const TierScheme& scheme) {
  std::string out = "gh,ph,score,tier\n";
  for (const TierCell& cell : tier_table(scheme)) {
    out += std::to_string(cell.gate.value()) + "," + std::to_string(cell.player.value()) + "," +
           format_score(cell.score) + "," + std::to_string(cell.tier.index()) + "\n";
  }
  return out;
}

}  // namespace castlesim
