#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phonoscope/records.hpp"
#include "phonoscope/stats.hpp"

namespace phonoscope {

inline constexpr std::size_t kHistogramBins = 32;

/// Distribution summary of one group, the backing data of a violin plot.
struct GroupSummary {
  std::string key;  // "gender=M,category=plosive" or "all"
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double hist_lo = 0.0;
  double hist_hi = 0.0;
  std::array<std::uint32_t, kHistogramBins> histogram{};
};

struct AggregateOptions {
  bool duration_weighted = false;  // weight the mean by segment duration
};

/// One summary per non-empty group; groups ordered by key. The histogram
/// range is the metric's clamp range for dB metrics, [-1, 1] for STOI, and
/// the data range otherwise.
std::vector<GroupSummary> aggregate(std::span<const EvaluationRecord> records,
                                    const std::vector<std::string>& group_by,
                                    std::string_view metric, const CategoryMap* map = nullptr,
                                    const AggregateOptions& options = {});

enum class TableRows { CvClass, Category };

/// The rows x (SNR x gender) mean table as CSV: SNR columns ascending,
/// male before female. Missing strata render as empty cells.
std::string gender_snr_table_csv(std::span<const EvaluationRecord> records,
                                 std::string_view metric, TableRows rows,
                                 const CategoryMap* map = nullptr,
                                 const AggregateOptions& options = {});

/// aggregate() serialized to the documented JSON schema.
std::string violin_summary_json(std::span<const EvaluationRecord> records,
                                std::string_view metric,
                                const std::vector<std::string>& group_by,
                                const CategoryMap* map = nullptr,
                                const AggregateOptions& options = {});

struct MergeReport {
  std::size_t applied = 0;
  std::vector<std::string> unmatched_ids;  // IDs with no utterance-level record
};

/// Attaches externally computed per-utterance scores (CSV columns
/// utterance_id, metric_name in {pesq_in, pesq_out, haspi, wer}, value) to
/// utterance-level records. Duplicate (id, metric) pairs are rejected.
MergeReport merge_external_scores(std::vector<EvaluationRecord>& records,
                                  std::string_view csv_text);

/// Stats CSV: stratum, metric, group_a, group_b, n_a, n_b, u, p, method,
/// significant, note.
std::string comparisons_to_csv(std::span<const GroupComparison> comparisons,
                               std::string_view metric);

std::string summaries_to_csv(std::span<const GroupSummary> summaries, std::string_view metric);

}  // namespace phonoscope
