#pragma once

#include <span>
#include <vector>

#include "phonoscope/waveform.hpp"

namespace phonoscope {

/// Short-time objective intelligibility parameters. Defaults are the
/// published reference constants; the internal rate is fixed at 10 kHz.
struct StoiConfig {
  int frame_length = 256;
  int fft_length = 512;
  int hop = 128;
  int num_bands = 15;
  double lowest_center_hz = 150.0;
  int analysis_frames = 30;          // 384 ms at the internal rate
  double silence_threshold_db = 40.0;  // below peak frame energy
  double clip_db = -15.0;            // lower SDR bound
  int internal_rate = 10000;
};

/// One-third-octave band centers: lowest_center * 2^(k/3).
std::vector<double> third_octave_centers(const StoiConfig& cfg = {});

/// Intelligibility score in [-1, 1]. Both signals share the caller's rate
/// and length; they are resampled to 10 kHz internally, silent frames of
/// the clean signal are removed from both, and band-envelope correlations
/// are averaged over 30-frame windows.
double stoi(std::span<const double> clean, std::span<const double> processed, int sample_rate,
            const StoiConfig& cfg = {});
double stoi(const Waveform& clean, const Waveform& processed, const StoiConfig& cfg = {});

/// stoi_out - stoi_in; both inputs must be in [-1, 1].
double delta_stoi(double stoi_in, double stoi_out);

}  // namespace phonoscope
