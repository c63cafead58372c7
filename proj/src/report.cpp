#include "phonoscope/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "phonoscope/csv.hpp"
#include "phonoscope/error.hpp"
#include "phonoscope/metrics.hpp"

namespace phonoscope {

namespace {

// clamp/fixed ranges for the histogram; data range for everything else
bool metric_histogram_range(std::string_view metric, double& lo, double& hi) {
  if (metric == "sir_in" || metric == "sir_out" || metric == "sar_out") {
    lo = -kDbClamp;
    hi = kDbClamp;
    return true;
  }
  if (metric == "stoi_in" || metric == "stoi_out") {
    lo = -1.0;
    hi = 1.0;
    return true;
  }
  if (metric == "delta_stoi") {
    lo = -2.0;
    hi = 2.0;
    return true;
  }
  return false;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.size() == 1) return sorted[0];
  const double pos = p * double(sorted.size() - 1);
  const std::size_t i = std::size_t(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - double(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

struct GroupData {
  std::vector<double> values;
  std::vector<double> weights;
};

std::map<std::string, GroupData> collect_groups(std::span<const EvaluationRecord> records,
                                                const std::vector<std::string>& group_by,
                                                std::string_view metric, const CategoryMap* map) {
  if (!is_known_metric(metric))
    fail(ErrorKind::NotFound, "unknown metric field '" + std::string(metric) + "'");
  for (const std::string& key : group_by)
    if (!is_known_key(key)) fail(ErrorKind::NotFound, "unknown grouping key '" + key + "'");
  std::map<std::string, GroupData> groups;
  for (const EvaluationRecord& record : records) {
    const std::optional<double> value = metric_value(record, metric);
    if (!value.has_value()) continue;
    std::string key;
    for (const std::string& k : group_by) {
      if (!key.empty()) key += ",";
      key += k + "=" + key_value(record, k, map);
    }
    if (key.empty()) key = "all";
    GroupData& g = groups[key];
    g.values.push_back(*value);
    g.weights.push_back(record.duration_s);
  }
  return groups;
}

GroupSummary summarize(const std::string& key, GroupData& data, std::string_view metric,
                       const AggregateOptions& options) {
  GroupSummary s;
  s.key = key;
  s.count = data.values.size();

  if (options.duration_weighted) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < data.values.size(); ++i) {
      num += data.values[i] * data.weights[i];
      den += data.weights[i];
    }
    s.mean = den > 0.0 ? num / den : 0.0;
  } else {
    double sum = 0.0;
    for (double v : data.values) sum += v;
    s.mean = sum / double(data.values.size());
  }

  std::sort(data.values.begin(), data.values.end());
  s.median = quantile_sorted(data.values, 0.5);
  s.q1 = quantile_sorted(data.values, 0.25);
  s.q3 = quantile_sorted(data.values, 0.75);
  s.p5 = quantile_sorted(data.values, 0.05);
  s.p95 = quantile_sorted(data.values, 0.95);

  if (!metric_histogram_range(metric, s.hist_lo, s.hist_hi)) {
    s.hist_lo = data.values.front();
    s.hist_hi = data.values.back();
  }
  const double width = s.hist_hi - s.hist_lo;
  for (double v : data.values) {
    std::size_t bin = 0;
    if (width > 0.0) {
      const double t = (v - s.hist_lo) / width * double(kHistogramBins);
      bin = std::min(kHistogramBins - 1, std::size_t(std::max(0.0, t)));
    }
    ++s.histogram[bin];
  }
  return s;
}

}  // namespace

std::vector<GroupSummary> aggregate(std::span<const EvaluationRecord> records,
                                    const std::vector<std::string>& group_by,
                                    std::string_view metric, const CategoryMap* map,
                                    const AggregateOptions& options) {
  if (records.empty()) fail(ErrorKind::InvalidArgument, "no records to aggregate");
  std::map<std::string, GroupData> groups = collect_groups(records, group_by, metric, map);
  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (auto& [key, data] : groups) out.push_back(summarize(key, data, metric, options));
  return out;
}

std::string gender_snr_table_csv(std::span<const EvaluationRecord> records,
                                 std::string_view metric, TableRows rows, const CategoryMap* map,
                                 const AggregateOptions& options) {
  if (records.empty()) fail(ErrorKind::InvalidArgument, "no records to tabulate");
  const std::string row_key = rows == TableRows::CvClass ? "class" : "category";

  std::set<double> snrs;
  std::set<std::string> row_names;
  for (const EvaluationRecord& r : records) {
    if (r.level != RecordLevel::Phoneme) continue;
    if (!metric_value(r, metric).has_value()) continue;
    snrs.insert(r.snr_db);
    row_names.insert(key_value(r, row_key, map));
  }
  if (snrs.empty())
    fail(ErrorKind::InvalidArgument,
         "no phoneme-level records carry metric '" + std::string(metric) + "'");

  std::vector<EvaluationRecord> phoneme_records;
  for (const EvaluationRecord& r : records)
    if (r.level == RecordLevel::Phoneme) phoneme_records.push_back(r);
  const std::vector<std::string> group_by = {row_key, "snr_db", "gender"};
  const std::vector<GroupSummary> summaries =
      aggregate(phoneme_records, group_by, metric, map, options);
  std::map<std::string, double> cell_mean;
  for (const GroupSummary& s : summaries) cell_mean[s.key] = s.mean;

  std::string out = row_key;
  for (double snr : snrs)
    for (const char* gender : {"M", "F"})
      out += "," + format_double(snr) + "dB " + gender;
  out += "\n";
  for (const std::string& row : row_names) {
    // the consonant/vowel roll-up reads better pluralized, as in the tables
    std::string row_label = row;
    if (rows == TableRows::CvClass && (row == "consonant" || row == "vowel")) row_label += "s";
    out += csv_escape(row_label);
    for (double snr : snrs) {
      for (const char* gender : {"M", "F"}) {
        const std::string key = row_key + "=" + row + ",snr_db=" + format_double(snr) +
                                ",gender=" + gender;
        auto it = cell_mean.find(key);
        out += ",";
        if (it != cell_mean.end()) out += format_double(it->second);
      }
    }
    out += "\n";
  }
  return out;
}

std::string violin_summary_json(std::span<const EvaluationRecord> records,
                                std::string_view metric,
                                const std::vector<std::string>& group_by, const CategoryMap* map,
                                const AggregateOptions& options) {
  const std::vector<GroupSummary> summaries = aggregate(records, group_by, metric, map, options);
  nlohmann::json j;
  j["metric"] = std::string(metric);
  j["group_by"] = group_by;
  j["histogram_bins"] = kHistogramBins;
  j["groups"] = nlohmann::json::array();
  for (const GroupSummary& s : summaries) {
    nlohmann::json g;
    g["key"] = s.key;
    g["count"] = s.count;
    g["mean"] = s.mean;
    g["median"] = s.median;
    g["q1"] = s.q1;
    g["q3"] = s.q3;
    g["p5"] = s.p5;
    g["p95"] = s.p95;
    g["histogram"] = {{"lo", s.hist_lo},
                      {"hi", s.hist_hi},
                      {"counts", std::vector<std::uint32_t>(s.histogram.begin(),
                                                            s.histogram.end())}};
    j["groups"].push_back(std::move(g));
  }
  return j.dump(2) + "\n";
}

MergeReport merge_external_scores(std::vector<EvaluationRecord>& records,
                                  std::string_view csv_text) {
  const CsvTable table = parse_csv(csv_text, "external scores CSV");
  const int id_col = table.column("utterance_id");
  const int name_col = table.column("metric_name");
  const int value_col = table.column("value");
  if (id_col < 0 || name_col < 0 || value_col < 0)
    fail(ErrorKind::MalformedFile,
         "external scores CSV must have columns utterance_id, metric_name, value");

  std::map<std::string, std::vector<EvaluationRecord*>> by_id;
  for (EvaluationRecord& r : records)
    if (r.level == RecordLevel::Utterance) by_id[r.utterance_id].push_back(&r);

  MergeReport report;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> unmatched;
  std::size_t row_no = 1;
  for (const auto& row : table.rows) {
    ++row_no;
    const std::string& id = row[std::size_t(id_col)];
    const std::string& name = row[std::size_t(name_col)];
    const double value = parse_double_field(row[std::size_t(value_col)], "external scores CSV",
                                            row_no);
    if (name != "pesq_in" && name != "pesq_out" && name != "haspi" && name != "wer")
      fail(ErrorKind::MalformedFile,
           "external scores CSV row " + std::to_string(row_no) + ": unknown metric_name '" +
               name + "'");
    if (!seen.insert({id, name}).second)
      fail(ErrorKind::MalformedFile,
           "external scores CSV: duplicate entry for (" + id + ", " + name + ")");
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      unmatched.insert(id);
      continue;
    }
    for (EvaluationRecord* r : it->second) {
      if (name == "pesq_in")
        r->pesq_in = value;
      else if (name == "pesq_out")
        r->pesq_out = value;
      else if (name == "haspi")
        r->haspi = value;
      else
        r->wer = value;
    }
    ++report.applied;
  }
  report.unmatched_ids.assign(unmatched.begin(), unmatched.end());
  return report;
}

std::string comparisons_to_csv(std::span<const GroupComparison> comparisons,
                               std::string_view metric) {
  std::string out =
      "stratum,metric,group_a,group_b,n_a,n_b,u_statistic,p_value,method,significant,note\n";
  for (const GroupComparison& c : comparisons) {
    out += csv_escape(c.stratum);
    out += "," + std::string(metric);
    out += "," + csv_escape(c.group_a);
    out += "," + csv_escape(c.group_b);
    if (c.test.has_value()) {
      const StatTestResult& t = *c.test;
      out += "," + format_u64(t.n_a);
      out += "," + format_u64(t.n_b);
      out += "," + format_double(t.u_statistic);
      out += "," + format_double(t.p_value);
      out += "," + std::string(test_method_name(t.method));
      out += t.significant ? ",true" : ",false";
      out += ",";
    } else {
      out += ",,,,,,";
      out += csv_escape("skipped: " + c.skip_reason);
    }
    out += "\n";
  }
  return out;
}

std::string summaries_to_csv(std::span<const GroupSummary> summaries, std::string_view metric) {
  std::string out = "group,metric,count,mean,median,q1,q3,p5,p95\n";
  for (const GroupSummary& s : summaries) {
    out += csv_escape(s.key);
    out += "," + std::string(metric);
    out += "," + format_u64(s.count);
    out += "," + format_double(s.mean);
    out += "," + format_double(s.median);
    out += "," + format_double(s.q1);
    out += "," + format_double(s.q3);
    out += "," + format_double(s.p5);
    out += "," + format_double(s.p95);
    out += "\n";
  }
  return out;
}

}  // namespace phonoscope
