#include "phonoscope/manifest.hpp"

#include <set>

#include "phonoscope/csv.hpp"
#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute()) return path.string();
  return (base / path).lexically_normal().string();
}

}  // namespace

Manifest parse_manifest(std::string_view csv_text, const std::filesystem::path& base_dir) {
  const CsvTable table = parse_csv(csv_text, "manifest");
  const int id_col = table.column("utterance_id");
  int clean_col = table.column("clean_path");
  if (clean_col < 0) clean_col = table.column("speech_path");
  const int gender_col = table.column("gender");
  const int align_col = table.column("alignment_path");
  const int noise_col = table.column("noise_path");
  const int rir_s_col = table.column("rir_speech_path");
  const int rir_n_col = table.column("rir_noise_path");
  const int snr_col = table.column("snr_db");
  const int seed_col = table.column("seed");

  std::vector<std::string> missing;
  if (id_col < 0) missing.push_back("utterance_id");
  if (clean_col < 0) missing.push_back("clean_path (or speech_path)");
  if (noise_col < 0) missing.push_back("noise_path");
  if (rir_s_col < 0) missing.push_back("rir_speech_path");
  if (rir_n_col < 0) missing.push_back("rir_noise_path");
  if (snr_col < 0) missing.push_back("snr_db");
  if (seed_col < 0) missing.push_back("seed");
  if (!missing.empty()) {
    std::string what = "manifest is missing required columns:";
    for (const std::string& m : missing) what += " " + m;
    fail(ErrorKind::MalformedFile, what);
  }

  Manifest manifest;
  std::vector<std::pair<std::size_t, std::string>> enhanced_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (name.rfind("enhanced:", 0) == 0) {
      const std::string algo = name.substr(9);
      if (algo.empty())
        fail(ErrorKind::MalformedFile, "manifest column 'enhanced:' has an empty algorithm id");
      enhanced_cols.emplace_back(c, algo);
      manifest.algorithms.push_back(algo);
    }
  }

  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    ManifestRow r;
    r.csv_line = line;
    r.utterance_id = row[std::size_t(id_col)];
    if (gender_col >= 0) r.gender = row[std::size_t(gender_col)];
    r.clean_path = resolve(base_dir, row[std::size_t(clean_col)]);
    if (align_col >= 0) r.alignment_path = resolve(base_dir, row[std::size_t(align_col)]);
    r.noise_path = resolve(base_dir, row[std::size_t(noise_col)]);
    r.rir_speech_path = resolve(base_dir, row[std::size_t(rir_s_col)]);
    r.rir_noise_path = resolve(base_dir, row[std::size_t(rir_n_col)]);
    r.snr_db = parse_double_field(row[std::size_t(snr_col)], "manifest", line);
    r.seed = parse_u64_field(row[std::size_t(seed_col)], "manifest", line);
    for (const auto& [col, algo] : enhanced_cols) {
      const std::string& cell = row[col];
      if (cell.empty()) continue;
      r.enhanced[algo] = cell.rfind('@', 0) == 0 ? cell : resolve(base_dir, cell);
    }
    manifest.rows.push_back(std::move(r));
  }
  return manifest;
}

std::vector<std::string> validate_manifest(const Manifest& manifest,
                                           const ManifestRequirements& req) {
  std::vector<std::string> problems;
  const auto row_tag = [](const ManifestRow& r) {
    return "row " + std::to_string(r.csv_line) + " ('" + r.utterance_id + "')";
  };
  std::set<std::string> ids;
  for (const ManifestRow& r : manifest.rows) {
    if (r.utterance_id.empty()) problems.push_back(row_tag(r) + ": empty utterance_id");
    if (!ids.insert(r.utterance_id).second)
      problems.push_back(row_tag(r) + ": duplicate utterance_id");
    if (req.need_gender && r.gender != "M" && r.gender != "F")
      problems.push_back(row_tag(r) + ": gender must be M or F, got '" + r.gender + "'");
    if (req.need_alignment && r.alignment_path.empty())
      problems.push_back(row_tag(r) + ": alignment_path is required");

    if (req.check_files_exist) {
      const auto check = [&](const std::string& path, const char* what) {
        if (path.empty()) {
          problems.push_back(row_tag(r) + ": " + what + " is empty");
        } else if (!std::filesystem::exists(path)) {
          problems.push_back(row_tag(r) + ": " + what + " '" + path + "' does not exist");
        }
      };
      check(r.clean_path, "clean_path");
      check(r.noise_path, "noise_path");
      check(r.rir_speech_path, "rir_speech_path");
      check(r.rir_noise_path, "rir_noise_path");
      if (req.need_alignment && !r.alignment_path.empty())
        check(r.alignment_path, "alignment_path");
      for (const auto& [algo, path] : r.enhanced) {
        if (path == "@passthrough" || path == "@oracle") continue;
        if (path.rfind('@', 0) == 0)
          problems.push_back(row_tag(r) + ": unknown built-in enhancer '" + path +
                             "' for algorithm '" + algo + "'");
        else if (!std::filesystem::exists(path))
          problems.push_back(row_tag(r) + ": enhanced path '" + path + "' for algorithm '" +
                             algo + "' does not exist");
      }
    }
  }
  return problems;
}

}  // namespace phonoscope
