#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phonoscope/alignment.hpp"
#include "phonoscope/records.hpp"
#include "phonoscope/scenario.hpp"
#include "phonoscope/waveform.hpp"

namespace phonoscope {

/// Scale-invariant least-squares split of an estimate against the clean
/// speech and noise references. e_target + e_interf + e_artif equals the
/// estimate energy (orthogonal decomposition).
struct SegmentDecomposition {
  double e_target = 0.0;
  double e_interf = 0.0;
  double e_artif = 0.0;
  double estimate_energy = 0.0;
  // projection coefficients: s_target = alpha*s, p_sn = c_speech*s + c_noise*n
  double alpha = 0.0;
  double c_speech = 0.0;
  double c_noise = 0.0;
  bool collinear_fallback = false;  // references too collinear for a 2D solve
};

SegmentDecomposition si_decompose(std::span<const double> estimate,
                                  std::span<const double> ref_speech,
                                  std::span<const double> ref_noise);

/// Energy ratio of the speech and noise image segments, in dB. Floored by a
/// small epsilon and clamped to +/-100 dB.
double sir_in(std::span<const double> speech_image_seg,
              std::span<const double> noise_image_seg);

double sir_out(const SegmentDecomposition& d);
double sar_out(const SegmentDecomposition& d);

constexpr double kDbClamp = 100.0;
constexpr double kEnergyFloor = 1e-12;

struct UtteranceMeta {
  std::string utterance_id;
  std::string gender;
  std::string algorithm_id;
  double snr_db = 0.0;
};

struct EvalOptions {
  int ref_channel = 0;
  double min_duration_s = 0.010;
  bool utterance_excludes_silence = false;  // utterance record over labeled segments only
  std::size_t delay_tolerance = 0;          // allowed length mismatch, in samples
  bool xcorr_align = false;                 // search +/-10 ms for the best shift
};

struct UtteranceEvaluation {
  std::vector<EvaluationRecord> records;  // utterance-level first, then segments
  std::vector<ExcludedSegment> excluded;
  std::size_t collinear_segments = 0;
  std::size_t unmapped_labels = 0;
};

/// Evaluates one enhanced signal against a mixture bundle: an
/// utterance-level record plus one record per retained phoneme segment.
/// References are the configured channel of the speech/noise images.
UtteranceEvaluation evaluate_utterance(const MixtureBundle& bundle, const Waveform& enhanced,
                                       const AlignmentTrack& track, const CategoryMap& map,
                                       const UtteranceMeta& meta, const EvalOptions& options = {});

}  // namespace phonoscope
