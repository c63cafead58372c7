#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace phonoscope {

/// One corpus row. Enhanced entries map algorithm id -> WAV path, or the
/// built-in pseudo-algorithms "@passthrough" (mixture reference channel)
/// and "@oracle" (speech image + 0.1 * noise image).
struct ManifestRow {
  std::string utterance_id;
  std::string gender;  // "M" or "F"
  std::string clean_path;
  std::string alignment_path;
  std::string noise_path;
  std::string rir_speech_path;
  std::string rir_noise_path;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> enhanced;  // algorithm id -> path or @builtin
  std::size_t csv_line = 0;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::vector<std::string> algorithms;  // enhanced:<id> columns, in header order
};

/// Parses a manifest CSV. Required columns: utterance_id, clean_path (or
/// speech_path), noise_path, rir_speech_path, rir_noise_path, snr_db,
/// seed. Optional: gender, alignment_path, enhanced:<algorithm_id>.
/// Relative paths are resolved against base_dir.
Manifest parse_manifest(std::string_view csv_text, const std::filesystem::path& base_dir);

struct ManifestRequirements {
  bool need_gender = false;
  bool need_alignment = false;
  bool check_files_exist = true;
};

/// Exhaustive validation: returns every problem found, one message each.
std::vector<std::string> validate_manifest(const Manifest& manifest,
                                           const ManifestRequirements& requirements);

}  // namespace phonoscope
