#include "phonoscope/waveform.hpp"

#include <cmath>
#include <string>

#include "phonoscope/error.hpp"

namespace phonoscope {

double Waveform::duration_s() const {
  return sample_rate > 0 ? double(num_frames()) / sample_rate : 0.0;
}

void Waveform::validate() const {
  if (sample_rate <= 0)
    fail(ErrorKind::InvalidArgument,
         "waveform sample rate must be positive, got " + std::to_string(sample_rate));
  if (channels.empty())
    fail(ErrorKind::InvalidArgument, "waveform must have at least one channel");
  const std::size_t n = channels[0].size();
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].size() != n)
      fail(ErrorKind::InvalidArgument,
           "waveform channels have unequal lengths (" + std::to_string(n) + " vs " +
               std::to_string(channels[c].size()) + " in channel " + std::to_string(c) + ")");
    for (double v : channels[c])
      if (!std::isfinite(v))
        fail(ErrorKind::InvalidArgument,
             "waveform contains a non-finite sample in channel " + std::to_string(c));
  }
}

Waveform Waveform::mono(std::vector<double> samples, int rate) {
  Waveform w;
  w.channels.push_back(std::move(samples));
  w.sample_rate = rate;
  return w;
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

std::vector<double> slice(std::span<const double> x, std::size_t begin, std::size_t end) {
  if (begin >= end || end > x.size())
    fail(ErrorKind::InvalidArgument,
         "slice range [" + std::to_string(begin) + ", " + std::to_string(end) +
             ") is outside signal of length " + std::to_string(x.size()));
  return std::vector<double>(x.begin() + begin, x.begin() + end);
}

Waveform slice(const Waveform& w, std::size_t begin, std::size_t end) {
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.channels.reserve(w.num_channels());
  for (const auto& ch : w.channels) out.channels.push_back(slice(std::span(ch), begin, end));
  return out;
}

}  // namespace phonoscope
