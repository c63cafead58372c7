#include "phonoscope/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phonoscope/dsp.hpp"
#include "phonoscope/error.hpp"
#include "phonoscope/rng.hpp"

namespace phonoscope {

void RIRSet::validate(int expected_rate) const {
  speech_rir.validate();
  noise_rir.validate();
  if (speech_rir.num_channels() != noise_rir.num_channels())
    fail(ErrorKind::InvalidArgument,
         "speech and noise RIRs have different channel counts (" +
             std::to_string(speech_rir.num_channels()) + " vs " +
             std::to_string(noise_rir.num_channels()) + ")");
  if (expected_rate > 0 &&
      (speech_rir.sample_rate != expected_rate || noise_rir.sample_rate != expected_rate))
    fail(ErrorKind::InvalidArgument,
         "RIR sample rate does not match the working rate of " + std::to_string(expected_rate));
}

Waveform generate_ssn(const std::vector<Waveform>& speech_sources, std::size_t target_length,
                      std::uint64_t seed) {
  if (target_length == 0) fail(ErrorKind::InvalidArgument, "SSN target length is zero");
  if (speech_sources.empty()) fail(ErrorKind::InvalidArgument, "SSN needs at least one source");

  int rate = 0;
  std::vector<double> concat;
  for (const Waveform& src : speech_sources) {
    src.validate();
    if (src.num_channels() != 1)
      fail(ErrorKind::InvalidArgument, "SSN sources must be single-channel");
    if (rate == 0) rate = src.sample_rate;
    if (src.sample_rate != rate)
      fail(ErrorKind::InvalidArgument, "SSN sources have mixed sample rates");
    concat.insert(concat.end(), src.channels[0].begin(), src.channels[0].end());
  }
  if (energy(concat) == 0.0)
    fail(ErrorKind::InvalidArgument, "SSN sources are silent");

  std::vector<double> fitted(target_length);
  for (std::size_t i = 0; i < target_length; ++i) fitted[i] = concat[i % concat.size()];

  Spectrum spec = rfft(fitted);
  const std::size_t nbins = spec.num_bins();
  const bool even = target_length % 2 == 0;
  const CounterRng rng(seed);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  spec.bins[0] = {std::abs(spec.bins[0]), 0.0};
  for (std::size_t k = 1; k < nbins; ++k) {
    if (even && k == nbins - 1) {
      spec.bins[k] = {std::abs(spec.bins[k]), 0.0};
      break;
    }
    spec.bins[k] = std::polar(std::abs(spec.bins[k]), kTwoPi * rng.uniform(k));
  }
  return Waveform::mono(irfft(spec), rate);
}

std::vector<double> scale_to_snr(std::span<const double> speech_dry,
                                 std::span<const double> noise_dry, double snr_db) {
  const double e_speech = energy(speech_dry);
  const double e_noise = energy(noise_dry);
  if (e_speech <= 0.0) fail(ErrorKind::InvalidArgument, "speech signal has zero energy");
  if (e_noise <= 0.0) fail(ErrorKind::InvalidArgument, "noise signal has zero energy");
  const double gain = std::sqrt(e_speech / (e_noise * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> scaled(noise_dry.begin(), noise_dry.end());
  for (double& v : scaled) v *= gain;
  return scaled;
}

double measure_snr_db(std::span<const double> speech, std::span<const double> noise) {
  const double e_speech = energy(speech);
  const double e_noise = energy(noise);
  if (e_speech <= 0.0 || e_noise <= 0.0)
    fail(ErrorKind::InvalidArgument, "SNR measurement needs non-zero energies");
  return 10.0 * std::log10(e_speech / e_noise);
}

Waveform spatialize(const Waveform& dry, const Waveform& rir) {
  dry.validate();
  rir.validate();
  if (dry.num_channels() != 1)
    fail(ErrorKind::InvalidArgument, "spatialize expects a single-channel dry signal");
  Waveform out;
  out.sample_rate = dry.sample_rate;
  out.channels.reserve(rir.num_channels());
  for (const auto& h : rir.channels)
    out.channels.push_back(convolve(dry.channels[0], h, ConvolveMode::Full));
  return out;
}

std::vector<double> fit_noise_length(std::span<const double> noise, std::size_t target_length,
                                     std::uint64_t seed) {
  if (noise.empty()) fail(ErrorKind::InvalidArgument, "noise signal is empty");
  if (noise.size() == target_length) return std::vector<double>(noise.begin(), noise.end());
  const CounterRng rng(seed);
  std::vector<double> out(target_length);
  if (noise.size() > target_length) {
    const std::size_t offset = std::size_t(rng.below(0, noise.size() - target_length + 1));
    for (std::size_t i = 0; i < target_length; ++i) out[i] = noise[offset + i];
  } else {
    const std::size_t offset = std::size_t(rng.below(0, noise.size()));
    for (std::size_t i = 0; i < target_length; ++i) out[i] = noise[(offset + i) % noise.size()];
  }
  return out;
}

MixtureBundle make_mixture(const Waveform& speech_dry, const Waveform& noise_dry,
                           const RIRSet& rirs, double snr_db, std::uint64_t seed) {
  speech_dry.validate();
  noise_dry.validate();
  if (speech_dry.num_channels() != 1 || noise_dry.num_channels() != 1)
    fail(ErrorKind::InvalidArgument, "make_mixture expects single-channel dry signals");
  if (speech_dry.sample_rate != noise_dry.sample_rate)
    fail(ErrorKind::InvalidArgument, "speech and noise sample rates differ");
  rirs.validate(speech_dry.sample_rate);

  const std::vector<double> fitted =
      fit_noise_length(noise_dry.channels[0], speech_dry.num_frames(), seed);
  const std::vector<double> scaled = scale_to_snr(speech_dry.channels[0], fitted, snr_db);

  MixtureBundle bundle;
  bundle.snr_db = snr_db;
  bundle.seed = seed;
  bundle.speech_image = spatialize(speech_dry, rirs.speech_rir);
  bundle.noise_image =
      spatialize(Waveform::mono(scaled, noise_dry.sample_rate), rirs.noise_rir);

  const std::size_t len = std::max(bundle.speech_image.num_frames(),
                                   bundle.noise_image.num_frames());
  for (auto* img : {&bundle.speech_image, &bundle.noise_image})
    for (auto& ch : img->channels) ch.resize(len, 0.0);

  bundle.mixture.sample_rate = speech_dry.sample_rate;
  bundle.mixture.channels.resize(bundle.speech_image.num_channels());
  for (std::size_t c = 0; c < bundle.mixture.channels.size(); ++c) {
    auto& ch = bundle.mixture.channels[c];
    ch.resize(len);
    for (std::size_t i = 0; i < len; ++i)
      ch[i] = bundle.speech_image.channels[c][i] + bundle.noise_image.channels[c][i];
  }
  return bundle;
}

}  // namespace phonoscope
