#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonoscope/alignment.hpp"

namespace phonoscope {

enum class RecordLevel { Utterance, Phoneme };

std::string_view record_level_name(RecordLevel level);

/// One evaluated unit: either a whole utterance (segment_index -1, STOI
/// attached) or a single phoneme segment. External per-utterance scores
/// (PESQ/HASPI/WER) are merged in memory and never written to the records
/// CSV.
struct EvaluationRecord {
  std::string utterance_id;
  int segment_index = -1;  // -1 at utterance level
  std::string label;       // IPA label; empty at utterance level
  std::string category;    // category name, "unmapped", or empty at utterance level
  RecordLevel level = RecordLevel::Utterance;
  std::string gender;      // "M" or "F"
  double snr_db = 0.0;
  std::string algorithm_id;
  double sir_in = 0.0;
  double sir_out = 0.0;
  double sar_out = 0.0;
  double duration_s = 0.0;
  std::optional<double> stoi_in;
  std::optional<double> stoi_out;
  std::optional<double> pesq_in;   // merged externals
  std::optional<double> pesq_out;
  std::optional<double> haspi;
  std::optional<double> wer;
};

/// Value of a named metric field, when present on the record. Derived
/// fields delta_stoi and delta_pesq require both of their inputs.
std::optional<double> metric_value(const EvaluationRecord& record, std::string_view metric);

bool is_known_metric(std::string_view metric);
std::vector<std::string> known_metrics();

/// Grouping key value as a string. Keys: utterance_id, label, category,
/// level, gender, snr_db, algorithm_id, class (consonant/vowel roll-up via
/// the category map; "unknown" when the category is not in the map).
std::string key_value(const EvaluationRecord& record, std::string_view key,
                      const CategoryMap* map);

bool is_known_key(std::string_view key);

/// Deterministic output order: (utterance_id, algorithm_id, segment_index).
void sort_records(std::vector<EvaluationRecord>& records);

std::string records_to_csv(std::span<const EvaluationRecord> records);
std::vector<EvaluationRecord> records_from_csv(std::string_view text);

}  // namespace phonoscope
