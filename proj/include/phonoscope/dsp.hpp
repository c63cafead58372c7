#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "phonoscope/waveform.hpp"

namespace phonoscope {

/// One-sided spectrum of a real signal of length origin_length:
/// origin_length/2 + 1 bins. For the inverse transform to produce a real
/// signal, the DC bin (and the Nyquist bin for even lengths) must be real.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  std::size_t origin_length = 0;

  std::size_t num_bins() const { return bins.size(); }
};

/// Real-input DFT. Input length is used verbatim (no hidden padding);
/// arbitrary lengths are supported, including odd ones.
Spectrum rfft(std::span<const double> x);

/// Inverse of rfft. Requires bins.size() == origin_length/2 + 1 and
/// Hermitian-consistent DC/Nyquist bins (imaginary parts ~ 0).
std::vector<double> irfft(const Spectrum& spectrum);

enum class ConvolveMode {
  Full,              // length = len(signal) + len(kernel) - 1
  TruncateToSignal,  // full convolution cut back to len(signal)
};

/// Linear convolution, FFT-based with internal zero padding.
std::vector<double> convolve(std::span<const double> signal,
                             std::span<const double> kernel,
                             ConvolveMode mode);

/// Band-limited resampling, windowed-sinc interpolation with a Kaiser
/// window (64 taps per output sample, cutoff 0.45 of the lower Nyquist).
Waveform resample(const Waveform& w, int target_rate);

}  // namespace phonoscope
