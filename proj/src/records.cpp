#include "phonoscope/records.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "phonoscope/csv.hpp"
#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

constexpr std::array<std::string_view, 14> kCsvHeader = {
    "utterance_id", "segment_index", "label",   "category", "level",
    "gender",       "snr_db",        "algorithm_id", "sir_in",   "sir_out",
    "sar_out",      "duration_s",    "stoi_in", "stoi_out"};

constexpr std::array<std::string_view, 12> kMetrics = {
    "sir_in",  "sir_out",  "sar_out", "duration_s", "stoi_in",    "stoi_out",
    "delta_stoi", "pesq_in", "pesq_out", "delta_pesq", "haspi", "wer"};

constexpr std::array<std::string_view, 8> kKeys = {
    "utterance_id", "label", "category", "level", "gender", "snr_db", "algorithm_id", "class"};

std::string optional_field(const std::optional<double>& v) {
  return v.has_value() ? format_double(*v) : std::string();
}

std::optional<double> parse_optional(std::string_view field, std::size_t row) {
  if (field.empty()) return std::nullopt;
  return parse_double_field(field, "records CSV", row);
}

}  // namespace

std::string_view record_level_name(RecordLevel level) {
  return level == RecordLevel::Utterance ? "utterance" : "phoneme";
}

std::optional<double> metric_value(const EvaluationRecord& r, std::string_view metric) {
  if (metric == "sir_in") return r.sir_in;
  if (metric == "sir_out") return r.sir_out;
  if (metric == "sar_out") return r.sar_out;
  if (metric == "duration_s") return r.duration_s;
  if (metric == "stoi_in") return r.stoi_in;
  if (metric == "stoi_out") return r.stoi_out;
  if (metric == "delta_stoi") {
    if (r.stoi_in && r.stoi_out) return *r.stoi_out - *r.stoi_in;
    return std::nullopt;
  }
  if (metric == "pesq_in") return r.pesq_in;
  if (metric == "pesq_out") return r.pesq_out;
  if (metric == "delta_pesq") {
    if (r.pesq_in && r.pesq_out) return *r.pesq_out - *r.pesq_in;
    return std::nullopt;
  }
  if (metric == "haspi") return r.haspi;
  if (metric == "wer") return r.wer;
  fail(ErrorKind::NotFound, "unknown metric field '" + std::string(metric) + "'");
}

bool is_known_metric(std::string_view metric) {
  return std::find(kMetrics.begin(), kMetrics.end(), metric) != kMetrics.end();
}

std::vector<std::string> known_metrics() {
  return std::vector<std::string>(kMetrics.begin(), kMetrics.end());
}

std::string key_value(const EvaluationRecord& r, std::string_view key, const CategoryMap* map) {
  if (key == "utterance_id") return r.utterance_id;
  if (key == "label") return r.label;
  if (key == "category") return r.category;
  if (key == "level") return std::string(record_level_name(r.level));
  if (key == "gender") return r.gender;
  if (key == "snr_db") return format_double(r.snr_db);
  if (key == "algorithm_id") return r.algorithm_id;
  if (key == "class") {
    const CategoryMap& m = map != nullptr ? *map : default_category_map();
    auto cv = m.class_of_category(r.category);
    if (!cv.has_value()) return "unknown";
    return *cv == CvClass::Consonant ? "consonant" : "vowel";
  }
  fail(ErrorKind::NotFound, "unknown grouping key '" + std::string(key) + "'");
}

bool is_known_key(std::string_view key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

void sort_records(std::vector<EvaluationRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const EvaluationRecord& a, const EvaluationRecord& b) {
              return std::tie(a.utterance_id, a.algorithm_id, a.segment_index) <
                     std::tie(b.utterance_id, b.algorithm_id, b.segment_index);
            });
}

std::string records_to_csv(std::span<const EvaluationRecord> records) {
  std::string out;
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) {
    if (i) out.push_back(',');
    out += kCsvHeader[i];
  }
  out.push_back('\n');
  for (const EvaluationRecord& r : records) {
    out += csv_escape(r.utterance_id);
    out.push_back(',');
    out += std::to_string(r.segment_index);
    out.push_back(',');
    out += csv_escape(r.label);
    out.push_back(',');
    out += csv_escape(r.category);
    out.push_back(',');
    out += record_level_name(r.level);
    out.push_back(',');
    out += csv_escape(r.gender);
    out.push_back(',');
    out += format_double(r.snr_db);
    out.push_back(',');
    out += csv_escape(r.algorithm_id);
    out.push_back(',');
    out += format_double(r.sir_in);
    out.push_back(',');
    out += format_double(r.sir_out);
    out.push_back(',');
    out += format_double(r.sar_out);
    out.push_back(',');
    out += format_double(r.duration_s);
    out.push_back(',');
    out += optional_field(r.stoi_in);
    out.push_back(',');
    out += optional_field(r.stoi_out);
    out.push_back('\n');
  }
  return out;
}

std::vector<EvaluationRecord> records_from_csv(std::string_view text) {
  const CsvTable table = parse_csv(text, "records CSV");
  if (table.header.size() != kCsvHeader.size() ||
      !std::equal(kCsvHeader.begin(), kCsvHeader.end(), table.header.begin()))
    fail(ErrorKind::MalformedFile, "records CSV header does not match the expected schema");
  std::vector<EvaluationRecord> records;
  records.reserve(table.rows.size());
  std::size_t row_no = 1;
  for (const auto& row : table.rows) {
    ++row_no;
    EvaluationRecord r;
    r.utterance_id = row[0];
    r.segment_index = int(parse_double_field(row[1], "records CSV", row_no));
    r.label = row[2];
    r.category = row[3];
    if (row[4] == "utterance")
      r.level = RecordLevel::Utterance;
    else if (row[4] == "phoneme")
      r.level = RecordLevel::Phoneme;
    else
      fail(ErrorKind::MalformedFile,
           "records CSV row " + std::to_string(row_no) + ": unknown level '" + row[4] + "'");
    r.gender = row[5];
    r.snr_db = parse_double_field(row[6], "records CSV", row_no);
    r.algorithm_id = row[7];
    r.sir_in = parse_double_field(row[8], "records CSV", row_no);
    r.sir_out = parse_double_field(row[9], "records CSV", row_no);
    r.sar_out = parse_double_field(row[10], "records CSV", row_no);
    r.duration_s = parse_double_field(row[11], "records CSV", row_no);
    r.stoi_in = parse_optional(row[12], row_no);
    r.stoi_out = parse_optional(row[13], row_no);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace phonoscope
