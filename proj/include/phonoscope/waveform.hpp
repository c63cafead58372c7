#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phonoscope {

/// Multichannel sampled audio. Channels are planar and share one length;
/// amplitudes are kept as doubles regardless of the file bit depth.
struct Waveform {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_frames() const { return channels.empty() ? 0 : channels[0].size(); }
  double duration_s() const;

  /// Throws ErrorKind::InvalidArgument when an invariant is broken:
  /// at least one channel, equal channel lengths, finite samples, rate > 0.
  void validate() const;

  static Waveform mono(std::vector<double> samples, int rate);
};

/// Sum of squares.
double energy(std::span<const double> x);

/// Copy of the half-open sample range [begin, end).
std::vector<double> slice(std::span<const double> x, std::size_t begin, std::size_t end);
Waveform slice(const Waveform& w, std::size_t begin, std::size_t end);

}  // namespace phonoscope
