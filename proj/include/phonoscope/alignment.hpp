#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonoscope {

struct PhonemeInterval {
  std::string label;  // IPA, NFC-normalized
  double start = 0.0;
  double end = 0.0;
};

/// Phoneme intervals of one utterance: sorted by start, non-overlapping,
/// silence labels already removed.
struct AlignmentTrack {
  std::string utterance_id;
  std::vector<PhonemeInterval> intervals;
  double xmax = 0.0;  // tier end time as written in the file

  double last_end() const { return intervals.empty() ? 0.0 : intervals.back().end; }
};

struct TextGridOptions {
  std::string tier_name = "phones";
  std::vector<std::string> silence_labels = {"", "sil", "sp", "spn"};
};

/// Parses Praat TextGrid text (long or short form, UTF-8 or UTF-16 with
/// BOM) and extracts the named interval tier.
AlignmentTrack parse_textgrid(std::string_view bytes, const TextGridOptions& options = {},
                              std::string utterance_id = "");

enum class CvClass { Consonant, Vowel };

/// IPA label -> phoneme category table. Categories carry a consonant/vowel
/// flag; a lookup miss is reported as "unmapped" by returning nullopt.
class CategoryMap {
 public:
  struct Entry {
    std::string category;
    CvClass cv;
  };

  void insert(const std::string& label, const std::string& category, CvClass cv);
  std::optional<Entry> lookup(std::string_view label) const;
  std::optional<CvClass> class_of_category(std::string_view category) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;             // keyed by normalized label
  std::map<std::string, CvClass> category_class_;
};

/// Loads a tab-separated table: label, category name, consonant|vowel.
/// Duplicate labels and unknown flags are rejected.
CategoryMap load_category_map(std::string_view tsv);

/// Built-in table covering the MFA English IPA inventory; eight consonant
/// categories plus six vowel categories (near-close, close, close-mid,
/// open-mid, open, diphthong).
const CategoryMap& default_category_map();
std::string_view default_category_map_tsv();

/// Canonical composition of combining marks for the label range used by
/// IPA transcriptions (precomposed forms exist only for a small set).
std::string normalize_label(std::string_view utf8);

struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string label;
  int interval_index = -1;
};

struct ExcludedSegment {
  std::string label;
  int interval_index = -1;
  std::string reason;
};

struct SegmentRanges {
  std::vector<SampleRange> included;
  std::vector<ExcludedSegment> excluded;
};

/// Interval times rounded to the nearest sample; segments shorter than
/// min_duration_s after rounding are reported as excluded, not returned.
SegmentRanges to_sample_ranges(const AlignmentTrack& track, int sample_rate,
                               double min_duration_s);

}  // namespace phonoscope
