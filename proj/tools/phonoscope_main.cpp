// phonoscope: batch evaluation of multichannel speech enhancement at the
// phoneme scale. Subcommands cover noise synthesis, mixture generation,
// evaluation, significance testing, and report emission.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phonoscope/alignment.hpp"
#include "phonoscope/csv.hpp"
#include "phonoscope/demo_corpus.hpp"
#include "phonoscope/error.hpp"
#include "phonoscope/manifest.hpp"
#include "phonoscope/metrics.hpp"
#include "phonoscope/records.hpp"
#include "phonoscope/report.hpp"
#include "phonoscope/rng.hpp"
#include "phonoscope/scenario.hpp"
#include "phonoscope/stats.hpp"
#include "phonoscope/stoi.hpp"
#include "phonoscope/wav_io.hpp"

namespace fs = std::filesystem;
using namespace phonoscope;

namespace {

std::mutex g_log_mutex;

void log_line(const char* level, const std::string& utterance, const std::string& message) {
  std::scoped_lock lock(g_log_mutex);
  std::fprintf(stderr, "%s\t%s\t%s\n", level, utterance.empty() ? "-" : utterance.c_str(),
               message.c_str());
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:   return 2;
    case ErrorKind::MissingFile:       return 3;
    case ErrorKind::MalformedFile:     return 4;
    case ErrorKind::UnsupportedFormat: return 5;
    case ErrorKind::NotFound:          return 6;
    case ErrorKind::Io:                return 7;
  }
  return 1;
}

unsigned resolve_jobs(unsigned jobs_flag) {
  if (jobs_flag > 0) return jobs_flag;
  if (const char* env = std::getenv("PHONOSCOPE_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return unsigned(v);
  }
  return 1;
}

// Bounded worker pool over row indices. Results land in per-index slots, so
// output never depends on scheduling; the first failing index wins.
template <typename Fn>
void parallel_rows(std::size_t count, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  const unsigned n_workers = unsigned(std::min<std::size_t>(jobs, count));
  workers.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

Waveform read_wav_checked(const std::string& path, int working_rate) {
  Waveform w = read_wav(path);
  if (working_rate > 0 && w.sample_rate != working_rate)
    fail(ErrorKind::InvalidArgument,
         path + ": sample rate " + std::to_string(w.sample_rate) +
             " does not match the working rate " + std::to_string(working_rate) +
             " (resample the file explicitly; files are not converted on the fly)");
  return w;
}

Waveform read_mono_checked(const std::string& path, int working_rate, const char* what) {
  Waveform w = read_wav_checked(path, working_rate);
  if (w.num_channels() != 1)
    fail(ErrorKind::InvalidArgument, std::string(what) + " '" + path + "' must be mono, has " +
                                         std::to_string(w.num_channels()) + " channels");
  return w;
}

CategoryMap load_map_or_default(const std::string& path) {
  if (path.empty()) return default_category_map();
  return load_category_map(read_text_file(path));
}

// ------------------------------------------------------------------- ssn

struct SsnArgs {
  std::string speech_dir;
  int count_male = 5;
  int count_female = 5;
  double length_s = 10.0;
  std::uint64_t seed = 0;
  std::string out;
  int rate = 16000;
};

std::vector<std::string> collect_gendered_sources(const fs::path& dir, const char* gender) {
  std::vector<std::string> files;
  const fs::path sub = dir / gender;
  if (fs::is_directory(sub)) {
    for (const auto& entry : fs::directory_iterator(sub))
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        files.push_back(entry.path().string());
  } else if (fs::is_directory(dir)) {
    const std::string prefix_upper = std::string(gender) + "_";
    std::string prefix_lower = prefix_upper;
    prefix_lower[0] = char(std::tolower(prefix_lower[0]));
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".wav") continue;
      const std::string name = entry.path().filename().string();
      if (name.rfind(prefix_upper, 0) == 0 || name.rfind(prefix_lower, 0) == 0)
        files.push_back(entry.path().string());
    }
  } else {
    fail(ErrorKind::MissingFile, "speech directory '" + dir.string() + "' does not exist");
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> pick_seeded(std::vector<std::string> files, std::size_t count,
                                     const CounterRng& rng, std::uint64_t salt,
                                     const char* gender) {
  if (files.size() < count)
    fail(ErrorKind::InvalidArgument,
         std::string("insufficient ") + gender + " source files: found " +
             std::to_string(files.size()) + ", need " + std::to_string(count));
  for (std::size_t i = files.size(); i > 1; --i)  // Fisher-Yates with counter draws
    std::swap(files[i - 1], files[std::size_t(rng.below(salt * 100000 + i, i))]);
  files.resize(count);
  return files;
}

int cmd_ssn(const SsnArgs& args) {
  const CounterRng rng(args.seed);
  const auto male = pick_seeded(collect_gendered_sources(args.speech_dir, "M"),
                                std::size_t(args.count_male), rng, 1, "male");
  const auto female = pick_seeded(collect_gendered_sources(args.speech_dir, "F"),
                                  std::size_t(args.count_female), rng, 2, "female");

  nlohmann::json provenance;
  provenance["seed"] = args.seed;
  provenance["sample_rate"] = args.rate;
  provenance["sources"] = nlohmann::json::array();
  std::vector<Waveform> sources;
  const auto load = [&](const std::vector<std::string>& paths, const char* gender) {
    for (const std::string& p : paths) {
      Waveform w = read_wav_checked(p, args.rate);
      if (w.num_channels() > 1) {
        log_line("WARN", "", p + ": using channel 0 of a multichannel source");
        w.channels.resize(1);
      }
      sources.push_back(std::move(w));
      provenance["sources"].push_back({{"path", p}, {"gender", gender}});
    }
  };
  load(male, "M");
  load(female, "F");

  const std::size_t target = std::size_t(std::llround(args.length_s * args.rate));
  const Waveform ssn = generate_ssn(sources, target, args.seed);
  provenance["length_samples"] = target;
  write_wav(args.out, ssn, SampleFormat::Float32);
  write_text_file(args.out + ".json", provenance.dump(2) + "\n");
  log_line("INFO", "",
           "wrote " + args.out + " (" + std::to_string(target) + " samples from " +
               std::to_string(sources.size()) + " sources)");
  return 0;
}

// ----------------------------------------------------------- mix and eval

int report_manifest_problems(const std::vector<std::string>& problems) {
  for (const std::string& p : problems) log_line("ERROR", "", "manifest: " + p);
  log_line("ERROR", "",
           "manifest validation failed with " + std::to_string(problems.size()) + " problem(s)");
  return 2;
}

struct MixArgs {
  std::string manifest_path;
  std::string out_dir;
  unsigned jobs = 0;
  int rate = 16000;
  int ref_channel = 0;
};

MixtureBundle build_bundle(const ManifestRow& row, int rate) {
  const Waveform clean = read_mono_checked(row.clean_path, rate, "clean_path");
  const Waveform noise = read_mono_checked(row.noise_path, rate, "noise_path");
  RIRSet rirs{read_wav_checked(row.rir_speech_path, rate),
              read_wav_checked(row.rir_noise_path, rate)};
  return make_mixture(clean, noise, rirs, row.snr_db, row.seed);
}

int cmd_mix(const MixArgs& args) {
  const fs::path manifest_file(args.manifest_path);
  const Manifest manifest =
      parse_manifest(read_text_file(args.manifest_path), manifest_file.parent_path());
  const auto problems = validate_manifest(manifest, {});
  if (!problems.empty()) return report_manifest_problems(problems);

  parallel_rows(manifest.rows.size(), resolve_jobs(args.jobs), [&](std::size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const MixtureBundle bundle = build_bundle(row, args.rate);
    const fs::path dir = fs::path(args.out_dir) / row.utterance_id;
    fs::create_directories(dir);
    write_wav(dir / "mixture.wav", bundle.mixture, SampleFormat::Float32);
    write_wav(dir / "speech_image.wav", bundle.speech_image, SampleFormat::Float32);
    write_wav(dir / "noise_image.wav", bundle.noise_image, SampleFormat::Float32);
    const std::size_t ref = std::size_t(args.ref_channel);
    write_wav(dir / "mixture_ref.wav",
              Waveform::mono(bundle.mixture.channels.at(ref), bundle.mixture.sample_rate),
              SampleFormat::Float32);
    log_line("INFO", row.utterance_id, "mixture written to " + dir.string());
  });
  return 0;
}

struct EvalArgs {
  std::string manifest_path;
  std::string out;
  unsigned jobs = 0;
  int rate = 16000;
  std::vector<std::string> baselines;
  std::string category_map_path;
  double min_duration_ms = 10.0;
  int ref_channel = 0;
  bool utterance_excludes_silence = false;
  std::size_t delay_tolerance = 0;
  bool xcorr_align = false;
  bool no_stoi = false;
  std::string tier = "phones";
};

int cmd_eval(const EvalArgs& args) {
  const fs::path manifest_file(args.manifest_path);
  const Manifest manifest =
      parse_manifest(read_text_file(args.manifest_path), manifest_file.parent_path());
  ManifestRequirements req;
  req.need_gender = true;
  req.need_alignment = true;
  auto problems = validate_manifest(manifest, req);

  for (const std::string& b : args.baselines)
    if (b != "passthrough" && b != "oracle")
      problems.push_back("unknown baseline '" + b + "' (available: passthrough, oracle)");
  for (const ManifestRow& row : manifest.rows)
    if (row.enhanced.empty() && args.baselines.empty())
      problems.push_back("row " + std::to_string(row.csv_line) + " ('" + row.utterance_id +
                         "'): no enhanced signals and no --baselines requested");
  if (!problems.empty()) return report_manifest_problems(problems);

  const CategoryMap map = load_map_or_default(args.category_map_path);
  EvalOptions options;
  options.ref_channel = args.ref_channel;
  options.min_duration_s = args.min_duration_ms / 1000.0;
  options.utterance_excludes_silence = args.utterance_excludes_silence;
  options.delay_tolerance = args.delay_tolerance;
  options.xcorr_align = args.xcorr_align;
  TextGridOptions tg_options;
  tg_options.tier_name = args.tier;

  std::vector<std::vector<EvaluationRecord>> per_row(manifest.rows.size());
  parallel_rows(manifest.rows.size(), resolve_jobs(args.jobs), [&](std::size_t i) {
    const ManifestRow& row = manifest.rows[i];
    const MixtureBundle bundle = build_bundle(row, args.rate);
    const AlignmentTrack track =
        parse_textgrid(read_text_file(row.alignment_path), tg_options, row.utterance_id);

    const std::size_t ref = std::size_t(args.ref_channel);
    const auto& s_ref = bundle.speech_image.channels.at(ref);
    const auto& n_ref = bundle.noise_image.channels.at(ref);
    const auto& mix_ref = bundle.mixture.channels.at(ref);

    std::optional<double> stoi_in;
    if (!args.no_stoi) {
      try {
        stoi_in = stoi(s_ref, mix_ref, args.rate);
      } catch (const Error& e) {
        log_line("WARN", row.utterance_id, std::string("stoi_in unavailable: ") + e.what());
      }
    }

    std::vector<std::pair<std::string, std::string>> algos(row.enhanced.begin(),
                                                           row.enhanced.end());
    for (const std::string& b : args.baselines) algos.emplace_back(b, "@" + b);

    for (const auto& [algo_id, source] : algos) {
      Waveform enhanced;
      if (source == "@passthrough") {
        enhanced = Waveform::mono(mix_ref, args.rate);
      } else if (source == "@oracle") {
        std::vector<double> est(s_ref.size());
        for (std::size_t k = 0; k < est.size(); ++k) est[k] = s_ref[k] + 0.1 * n_ref[k];
        enhanced = Waveform::mono(std::move(est), args.rate);
      } else {
        enhanced = read_mono_checked(source, args.rate, "enhanced path");
      }

      UtteranceMeta meta{row.utterance_id, row.gender, algo_id, row.snr_db};
      UtteranceEvaluation eval =
          evaluate_utterance(bundle, enhanced, track, map, meta, options);
      if (!eval.excluded.empty())
        log_line("INFO", row.utterance_id,
                 std::to_string(eval.excluded.size()) + " segment(s) excluded (" +
                     eval.excluded.front().reason + ")");
      if (eval.collinear_segments > 0)
        log_line("WARN", row.utterance_id,
                 std::to_string(eval.collinear_segments) +
                     " segment(s) used the collinear-reference fallback");
      if (eval.unmapped_labels > 0)
        log_line("WARN", row.utterance_id,
                 std::to_string(eval.unmapped_labels) + " segment(s) have unmapped labels");

      if (!args.no_stoi) {
        eval.records[0].stoi_in = stoi_in;
        try {
          eval.records[0].stoi_out = stoi(s_ref, enhanced.channels[0], args.rate);
        } catch (const Error& e) {
          log_line("WARN", row.utterance_id, std::string("stoi_out unavailable: ") + e.what());
        }
      }
      per_row[i].insert(per_row[i].end(), eval.records.begin(), eval.records.end());
    }
    log_line("INFO", row.utterance_id,
             "evaluated " + std::to_string(algos.size()) + " algorithm(s)");
  });

  std::vector<EvaluationRecord> records;
  for (auto& chunk : per_row) records.insert(records.end(), chunk.begin(), chunk.end());
  sort_records(records);
  write_text_file(args.out, records_to_csv(records));
  log_line("INFO", "", "wrote " + std::to_string(records.size()) + " records to " + args.out);
  return 0;
}

// --------------------------------------------------------- stats / report

struct StatsArgs {
  std::string records_path;
  std::string metric = "sir_out";
  std::string group = "gender";
  std::string strata;  // comma separated
  std::string level = "all";
  std::string category_map_path;
  std::string out;
  double alpha = 0.05;
  std::size_t exact_threshold = 400;
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(s.substr(start, comma - start));
    if (comma == s.size()) break;
    start = comma + 1;
  }
  return out;
}

std::vector<EvaluationRecord> load_records_filtered(const std::string& path,
                                                    const std::string& level) {
  std::vector<EvaluationRecord> records = records_from_csv(read_text_file(path));
  if (level == "all") return records;
  RecordLevel wanted;
  if (level == "utterance")
    wanted = RecordLevel::Utterance;
  else if (level == "phoneme")
    wanted = RecordLevel::Phoneme;
  else
    fail(ErrorKind::InvalidArgument, "--level must be utterance, phoneme, or all");
  std::erase_if(records, [&](const EvaluationRecord& r) { return r.level != wanted; });
  return records;
}

int cmd_stats(const StatsArgs& args) {
  const std::vector<EvaluationRecord> records =
      load_records_filtered(args.records_path, args.level);
  const CategoryMap map = load_map_or_default(args.category_map_path);
  MannWhitneyOptions options;
  options.alpha = args.alpha;
  options.exact_threshold = args.exact_threshold;
  const auto comparisons = compare_groups(records, args.metric, args.group,
                                          split_csv_list(args.strata), &map, options);
  write_text_file(args.out, comparisons_to_csv(comparisons, args.metric));
  std::size_t skipped = 0;
  for (const auto& c : comparisons)
    if (!c.test.has_value()) ++skipped;
  log_line("INFO", "",
           "wrote " + std::to_string(comparisons.size()) + " comparison(s) to " + args.out +
               (skipped ? " (" + std::to_string(skipped) + " skipped)" : ""));
  return 0;
}

struct ReportArgs {
  std::string records_path;
  std::string external_path;
  std::string table_metric;
  std::string violin_metric;
  std::string summary_metric;
  std::string rows = "class";
  std::string group_by = "gender";
  std::string level = "all";
  std::string category_map_path;
  std::string out;
  bool duration_weighted = false;
};

int cmd_report(const ReportArgs& args) {
  const int modes = int(!args.table_metric.empty()) + int(!args.violin_metric.empty()) +
                    int(!args.summary_metric.empty());
  if (modes != 1)
    fail(ErrorKind::InvalidArgument, "choose exactly one of --table, --violin, --summary");
  std::vector<EvaluationRecord> records =
      load_records_filtered(args.records_path, args.level);
  if (!args.external_path.empty()) {
    const MergeReport merge = merge_external_scores(records, read_text_file(args.external_path));
    log_line("INFO", "", "merged " + std::to_string(merge.applied) + " external score(s)");
    for (const std::string& id : merge.unmatched_ids)
      log_line("WARN", id, "external score has no matching utterance record");
  }
  const CategoryMap map = load_map_or_default(args.category_map_path);
  AggregateOptions options;
  options.duration_weighted = args.duration_weighted;

  if (!args.table_metric.empty()) {
    TableRows rows;
    if (args.rows == "class")
      rows = TableRows::CvClass;
    else if (args.rows == "category")
      rows = TableRows::Category;
    else
      fail(ErrorKind::InvalidArgument, "--rows must be class or category");
    write_text_file(args.out,
                    gender_snr_table_csv(records, args.table_metric, rows, &map, options));
  } else if (!args.violin_metric.empty()) {
    write_text_file(args.out,
                    violin_summary_json(records, args.violin_metric,
                                        split_csv_list(args.group_by), &map, options));
  } else {
    const auto summaries =
        aggregate(records, split_csv_list(args.group_by), args.summary_metric, &map, options);
    write_text_file(args.out, summaries_to_csv(summaries, args.summary_metric));
  }
  log_line("INFO", "", "wrote " + args.out);
  return 0;
}

// ------------------------------------------------------------- make-demo

struct DemoArgs {
  std::string out_dir;
  std::size_t utterances = 20;
  std::string style = "speechlike";
  std::uint64_t seed = 20240501;
  std::string snrs = "0";
};

int cmd_make_demo(const DemoArgs& args) {
  DemoConfig config;
  config.utterances = args.utterances;
  config.seed = args.seed;
  if (args.style == "speechlike")
    config.style = DemoStyle::Speechlike;
  else if (args.style == "orthogonal")
    config.style = DemoStyle::Orthogonal;
  else
    fail(ErrorKind::InvalidArgument, "--style must be speechlike or orthogonal");
  config.snrs.clear();
  for (const std::string& s : split_csv_list(args.snrs))
    config.snrs.push_back(parse_double_field(s, "--snrs", 0));
  if (config.snrs.empty()) config.snrs.push_back(0.0);

  const DemoCorpus corpus = write_demo_corpus(args.out_dir, config);
  log_line("INFO", "",
           "demo corpus with " + std::to_string(corpus.utterance_ids.size()) +
               " utterances written; manifest: " + corpus.manifest_path.string());
  std::printf("%s\n", corpus.manifest_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phoneme-scale evaluation of multichannel speech enhancement"};
  app.require_subcommand(1);

  SsnArgs ssn_args;
  CLI::App* ssn_cmd = app.add_subcommand("ssn", "synthesize speech-shaped noise");
  ssn_cmd->add_option("--speech", ssn_args.speech_dir,
                      "directory with male/female sources (M/ and F/ subdirs, or M_*/F_* files)")
      ->required();
  ssn_cmd->add_option("--count-male", ssn_args.count_male, "male sources to draw");
  ssn_cmd->add_option("--count-female", ssn_args.count_female, "female sources to draw");
  ssn_cmd->add_option("--length", ssn_args.length_s, "output length in seconds");
  ssn_cmd->add_option("--seed", ssn_args.seed, "phase randomization seed");
  ssn_cmd->add_option("--out", ssn_args.out, "output WAV path")->required();
  ssn_cmd->add_option("--rate", ssn_args.rate, "working sample rate");

  MixArgs mix_args;
  CLI::App* mix_cmd = app.add_subcommand("mix", "generate mixtures from a manifest");
  mix_cmd->add_option("--manifest", mix_args.manifest_path, "manifest CSV")->required();
  mix_cmd->add_option("--out-dir", mix_args.out_dir, "output directory")->required();
  mix_cmd->add_option("--jobs", mix_args.jobs, "parallel workers (or PHONOSCOPE_JOBS)");
  mix_cmd->add_option("--rate", mix_args.rate, "working sample rate");
  mix_cmd->add_option("--ref-channel", mix_args.ref_channel, "reference microphone channel");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate enhanced signals per phoneme");
  eval_cmd->add_option("--manifest", eval_args.manifest_path, "manifest CSV")->required();
  eval_cmd->add_option("--out", eval_args.out, "records CSV output path")->required();
  eval_cmd->add_option("--jobs", eval_args.jobs, "parallel workers (or PHONOSCOPE_JOBS)");
  eval_cmd->add_option("--rate", eval_args.rate, "working sample rate");
  eval_cmd->add_option("--baselines", eval_args.baselines,
                       "built-in enhancers to add (passthrough, oracle)")
      ->delimiter(',');
  eval_cmd->add_option("--category-map", eval_args.category_map_path,
                       "phoneme category TSV (default: built-in table)");
  eval_cmd->add_option("--min-duration-ms", eval_args.min_duration_ms,
                       "minimum segment duration in milliseconds");
  eval_cmd->add_option("--ref-channel", eval_args.ref_channel, "reference microphone channel");
  eval_cmd->add_flag("--utterance-excludes-silence", eval_args.utterance_excludes_silence,
                     "utterance-level metrics over labeled segments only");
  eval_cmd->add_option("--delay-tolerance", eval_args.delay_tolerance,
                       "allowed enhanced/reference length mismatch in samples");
  eval_cmd->add_flag("--xcorr-align", eval_args.xcorr_align,
                     "search +/-10 ms for the best enhanced-signal alignment");
  eval_cmd->add_flag("--no-stoi", eval_args.no_stoi, "skip STOI computation");
  eval_cmd->add_option("--tier", eval_args.tier, "TextGrid tier name");

  StatsArgs stats_args;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Mann-Whitney U tests over record groups");
  stats_cmd->add_option("--records", stats_args.records_path, "records CSV")->required();
  stats_cmd->add_option("--metric", stats_args.metric, "metric field to test");
  stats_cmd->add_option("--group", stats_args.group, "grouping key with two values");
  stats_cmd->add_option("--strata", stats_args.strata, "comma-separated stratum keys");
  stats_cmd->add_option("--level", stats_args.level, "utterance, phoneme, or all");
  stats_cmd->add_option("--category-map", stats_args.category_map_path, "phoneme category TSV");
  stats_cmd->add_option("--out", stats_args.out, "stats CSV output path")->required();
  stats_cmd->add_option("--alpha", stats_args.alpha, "significance level");
  stats_cmd->add_option("--exact-threshold", stats_args.exact_threshold,
                        "max n_a*n_b for the exact p-value");

  ReportArgs report_args;
  CLI::App* report_cmd = app.add_subcommand("report", "tables, violin summaries, aggregation");
  report_cmd->add_option("--records", report_args.records_path, "records CSV")->required();
  report_cmd->add_option("--external", report_args.external_path,
                         "external per-utterance scores CSV to merge");
  report_cmd->add_option("--table", report_args.table_metric,
                         "emit the rows x (SNR x gender) mean table for this metric");
  report_cmd->add_option("--violin", report_args.violin_metric,
                         "emit distribution summaries (JSON) for this metric");
  report_cmd->add_option("--summary", report_args.summary_metric,
                         "emit aggregate statistics (CSV) for this metric");
  report_cmd->add_option("--rows", report_args.rows, "table rows: class or category");
  report_cmd->add_option("--group-by", report_args.group_by, "comma-separated grouping keys");
  report_cmd->add_option("--level", report_args.level, "utterance, phoneme, or all");
  report_cmd->add_option("--category-map", report_args.category_map_path,
                         "phoneme category TSV");
  report_cmd->add_option("--out", report_args.out, "output path")->required();
  report_cmd->add_flag("--duration-weighted", report_args.duration_weighted,
                       "weight means by segment duration");

  DemoArgs demo_args;
  CLI::App* demo_cmd = app.add_subcommand("make-demo", "write a synthetic demo corpus");
  demo_cmd->add_option("--out", demo_args.out_dir, "corpus directory")->required();
  demo_cmd->add_option("--utterances", demo_args.utterances, "number of utterances");
  demo_cmd->add_option("--style", demo_args.style, "speechlike or orthogonal");
  demo_cmd->add_option("--seed", demo_args.seed, "corpus seed");
  demo_cmd->add_option("--snrs", demo_args.snrs, "comma-separated SNR cycle in dB");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ssn_cmd->parsed()) return cmd_ssn(ssn_args);
    if (mix_cmd->parsed()) return cmd_mix(mix_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (stats_cmd->parsed()) return cmd_stats(stats_args);
    if (report_cmd->parsed()) return cmd_report(report_args);
    if (demo_cmd->parsed()) return cmd_make_demo(demo_args);
  } catch (const Error& e) {
    log_line("ERROR", "", std::string(error_kind_name(e.kind())) + ": " + e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    log_line("ERROR", "", std::string("internal: ") + e.what());
    return 1;
  }
  return 0;
}
