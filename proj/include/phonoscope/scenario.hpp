#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phonoscope/waveform.hpp"

namespace phonoscope {

/// Impulse responses from the speech and noise positions to the microphone
/// array: one channel per microphone, same channel count for both.
struct RIRSet {
  Waveform speech_rir;
  Waveform noise_rir;

  void validate(int expected_rate) const;
};

/// A synthesized test condition. The mixture is the sample-exact sum of the
/// speech and noise images, which serve as references downstream.
struct MixtureBundle {
  Waveform mixture;
  Waveform speech_image;
  Waveform noise_image;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// Speech-shaped noise: concatenates the sources, fits them to
/// target_length (crop or tile), then replaces every DFT bin's phase with a
/// seeded uniform draw while preserving its magnitude. DC and Nyquist stay
/// real. Deterministic for a fixed seed.
Waveform generate_ssn(const std::vector<Waveform>& speech_sources, std::size_t target_length,
                      std::uint64_t seed);

/// Gain applied to the dry noise so that 10*log10(E_speech/E_noise') hits
/// snr_db exactly.
std::vector<double> scale_to_snr(std::span<const double> speech_dry,
                                 std::span<const double> noise_dry, double snr_db);

/// Energy ratio of two signals in dB; test/measurement helper.
double measure_snr_db(std::span<const double> speech, std::span<const double> noise);

/// Per-channel full convolution of a dry source with a multichannel RIR.
Waveform spatialize(const Waveform& dry, const Waveform& rir);

/// Fits noise to the target length: longer noise is cropped from a seeded
/// offset, shorter noise is tiled circularly from a seeded offset.
std::vector<double> fit_noise_length(std::span<const double> noise, std::size_t target_length,
                                     std::uint64_t seed);

MixtureBundle make_mixture(const Waveform& speech_dry, const Waveform& noise_dry,
                           const RIRSet& rirs, double snr_db, std::uint64_t seed);

}  // namespace phonoscope
