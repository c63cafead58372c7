#include "phonoscope/stoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "phonoscope/dsp.hpp"
#include "phonoscope/error.hpp"

namespace phonoscope {

namespace {

std::vector<double> hann_window(int n) {
  std::vector<double> w(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i)
    w[std::size_t(i)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  return w;
}

// Frames kept after masking are overlap-added back into a shorter signal,
// windowed on both analysis and synthesis; 50% Hann overlap keeps unity
// gain away from the edges.
struct MaskedPair {
  std::vector<double> clean;
  std::vector<double> processed;
};

MaskedPair remove_silent_frames(std::span<const double> clean,
                                std::span<const double> processed, const StoiConfig& cfg) {
  const int n = cfg.frame_length;
  const int hop = cfg.hop;
  const std::vector<double> w = hann_window(n);
  const std::size_t num_frames = clean.size() < std::size_t(n)
                                     ? 0
                                     : (clean.size() - std::size_t(n)) / std::size_t(hop) + 1;
  if (num_frames == 0)
    fail(ErrorKind::InvalidArgument,
         "signal too short for STOI: need at least " + std::to_string(n) + " samples at " +
             std::to_string(cfg.internal_rate) + " Hz");

  std::vector<double> frame_db(num_frames);
  double max_db = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < num_frames; ++f) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = clean[f * std::size_t(hop) + std::size_t(i)] * w[std::size_t(i)];
      e += v * v;
    }
    frame_db[f] = 10.0 * std::log10(e > 0.0 ? e : 1e-300);
    max_db = std::max(max_db, frame_db[f]);
  }

  MaskedPair out;
  std::size_t kept = 0;
  out.clean.assign(clean.size(), 0.0);
  out.processed.assign(processed.size(), 0.0);
  for (std::size_t f = 0; f < num_frames; ++f) {
    if (frame_db[f] <= max_db - cfg.silence_threshold_db) continue;
    const std::size_t src = f * std::size_t(hop);
    const std::size_t dst = kept * std::size_t(hop);
    for (int i = 0; i < n; ++i) {
      out.clean[dst + std::size_t(i)] += clean[src + std::size_t(i)] * w[std::size_t(i)];
      out.processed[dst + std::size_t(i)] += processed[src + std::size_t(i)] * w[std::size_t(i)];
    }
    ++kept;
  }
  if (kept == 0)
    fail(ErrorKind::InvalidArgument, "clean signal is silent (no frame above the mask)");
  const std::size_t out_len = (kept - 1) * std::size_t(hop) + std::size_t(n);
  out.clean.resize(out_len);
  out.processed.resize(out_len);
  return out;
}

// band amplitude trajectories: bands x frames, sqrt of summed bin powers
std::vector<std::vector<double>> band_envelopes(std::span<const double> x,
                                                const StoiConfig& cfg) {
  const int n = cfg.frame_length;
  const int hop = cfg.hop;
  const std::vector<double> w = hann_window(n);
  const std::size_t num_frames = (x.size() - std::size_t(n)) / std::size_t(hop) + 1;
  const std::size_t num_bins = std::size_t(cfg.fft_length) / 2 + 1;

  const std::vector<double> centers = third_octave_centers(cfg);
  std::vector<std::pair<std::size_t, std::size_t>> band_bins(centers.size());
  const double bin_hz = double(cfg.internal_rate) / cfg.fft_length;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    const double lo = centers[b] * std::pow(2.0, -1.0 / 6.0);
    const double hi = centers[b] * std::pow(2.0, 1.0 / 6.0);
    const std::size_t k_lo = std::size_t(std::ceil(lo / bin_hz));
    const std::size_t k_hi = std::min(num_bins, std::size_t(std::ceil(hi / bin_hz)));
    band_bins[b] = {k_lo, k_hi};  // [k_lo, k_hi)
  }

  std::vector<std::vector<double>> env(centers.size(), std::vector<double>(num_frames));
  std::vector<double> frame(std::size_t(cfg.fft_length), 0.0);
  for (std::size_t f = 0; f < num_frames; ++f) {
    std::fill(frame.begin(), frame.end(), 0.0);
    for (int i = 0; i < n; ++i)
      frame[std::size_t(i)] = x[f * std::size_t(hop) + std::size_t(i)] * w[std::size_t(i)];
    const Spectrum spec = rfft(frame);
    for (std::size_t b = 0; b < centers.size(); ++b) {
      double e = 0.0;
      for (std::size_t k = band_bins[b].first; k < band_bins[b].second; ++k)
        e += std::norm(spec.bins[k]);
      env[b][f] = std::sqrt(e);
    }
  }
  return env;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double den = std::sqrt(sxx) * std::sqrt(syy);
  if (den <= 0.0) {
    // degenerate flat trajectories: identical -> 1, different -> 0
    double max_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      max_diff = std::max(max_diff, std::abs((x[i] - mx) - (y[i] - my)));
    return max_diff == 0.0 ? 1.0 : 0.0;
  }
  return sxy / den;
}

}  // namespace

std::vector<double> third_octave_centers(const StoiConfig& cfg) {
  std::vector<double> centers(std::size_t(cfg.num_bands));
  for (int k = 0; k < cfg.num_bands; ++k)
    centers[std::size_t(k)] = cfg.lowest_center_hz * std::pow(2.0, double(k) / 3.0);
  return centers;
}

double stoi(std::span<const double> clean, std::span<const double> processed, int sample_rate,
            const StoiConfig& cfg) {
  if (clean.size() != processed.size())
    fail(ErrorKind::InvalidArgument,
         "STOI inputs have different lengths (" + std::to_string(clean.size()) + " vs " +
             std::to_string(processed.size()) + ")");
  if (clean.empty()) fail(ErrorKind::InvalidArgument, "STOI input is empty");
  if (sample_rate <= 0) fail(ErrorKind::InvalidArgument, "STOI sample rate must be positive");

  Waveform c = Waveform::mono(std::vector<double>(clean.begin(), clean.end()), sample_rate);
  Waveform p = Waveform::mono(std::vector<double>(processed.begin(), processed.end()),
                              sample_rate);
  c = resample(c, cfg.internal_rate);
  p = resample(p, cfg.internal_rate);

  const MaskedPair masked = remove_silent_frames(c.channels[0], p.channels[0], cfg);
  const auto x = band_envelopes(masked.clean, cfg);
  const auto y = band_envelopes(masked.processed, cfg);

  const std::size_t num_frames = x[0].size();
  const std::size_t win = std::size_t(cfg.analysis_frames);
  if (num_frames < win)
    fail(ErrorKind::InvalidArgument,
         "signal too short for STOI: " + std::to_string(num_frames) +
             " frames after silence removal, need " + std::to_string(win));

  const double clip_factor = 1.0 + std::pow(10.0, -cfg.clip_db / 20.0);
  double sum = 0.0;
  std::size_t count = 0;
  std::vector<double> seg_y(win);
  for (std::size_t m = 0; m + win <= num_frames; ++m) {
    for (std::size_t b = 0; b < x.size(); ++b) {
      const std::span<const double> seg_x(x[b].data() + m, win);
      const std::span<const double> raw_y(y[b].data() + m, win);
      double ex = 0.0, ey = 0.0;
      for (std::size_t i = 0; i < win; ++i) {
        ex += seg_x[i] * seg_x[i];
        ey += raw_y[i] * raw_y[i];
      }
      const double alpha = ey > 0.0 ? std::sqrt(ex / ey) : 0.0;
      for (std::size_t i = 0; i < win; ++i)
        seg_y[i] = std::min(alpha * raw_y[i], seg_x[i] * clip_factor);
      sum += correlation(seg_x, seg_y);
      ++count;
    }
  }
  return sum / double(count);
}

double stoi(const Waveform& clean, const Waveform& processed, const StoiConfig& cfg) {
  clean.validate();
  processed.validate();
  if (clean.num_channels() != 1 || processed.num_channels() != 1)
    fail(ErrorKind::InvalidArgument, "STOI expects single-channel signals");
  if (clean.sample_rate != processed.sample_rate)
    fail(ErrorKind::InvalidArgument, "STOI inputs have different sample rates");
  return stoi(clean.channels[0], processed.channels[0], clean.sample_rate, cfg);
}

double delta_stoi(double stoi_in, double stoi_out) {
  if (stoi_in < -1.0 || stoi_in > 1.0 || stoi_out < -1.0 || stoi_out > 1.0)
    fail(ErrorKind::InvalidArgument, "STOI scores must lie in [-1, 1]");
  return stoi_out - stoi_in;
}

}  // namespace phonoscope
