#include "phonoscope/demo_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "phonoscope/csv.hpp"
#include "phonoscope/dsp.hpp"
#include "phonoscope/error.hpp"
#include "phonoscope/rng.hpp"
#include "phonoscope/scenario.hpp"
#include "phonoscope/wav_io.hpp"

namespace phonoscope {

namespace {

constexpr std::size_t kLead = 800;     // 50 ms of silence either side
constexpr std::size_t kSegLen = 2560;  // 160 ms per phoneme segment
constexpr std::size_t kSegments = 8;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// one cycle through six categories, vowels carrying more energy
struct SegmentSpec {
  const char* label;
  bool vowel;
  double f1, f2;  // rough formant centers for the harmonic segments
};
constexpr SegmentSpec kSegmentSpecs[kSegments] = {
    {"i", true, 280.0, 2250.0}, {"s", false, 0.0, 0.0},
    {"ɪ", true, 400.0, 1950.0}, {"f", false, 0.0, 0.0},
    {"ɛ", true, 550.0, 1750.0}, {"t", false, 0.0, 0.0},
    {"u", true, 310.0, 900.0},  {"z", false, 0.0, 0.0},
};

std::size_t utterance_length() { return kLead + kSegments * kSegLen + kLead; }

void scale_to_rms(std::vector<double>& x, double target_rms) {
  const double e = energy(x);
  if (e <= 0.0) return;
  const double g = target_rms / std::sqrt(e / double(x.size()));
  for (double& v : x) v *= g;
}

std::vector<double> band_noise(const CounterRng& rng, std::uint64_t salt, double lo_hz,
                               double hi_hz, int rate) {
  Spectrum spec;
  spec.origin_length = kSegLen;
  spec.bins.assign(kSegLen / 2 + 1, {0.0, 0.0});
  const double bin_hz = double(rate) / double(kSegLen);
  const std::size_t k_lo = std::size_t(std::ceil(lo_hz / bin_hz));
  const std::size_t k_hi = std::min(spec.bins.size() - 2, std::size_t(hi_hz / bin_hz));
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double mag = 0.5 + 0.5 * rng.uniform(salt * 1000003 + 2 * k);
    const double phase = kTwoPi * rng.uniform(salt * 1000003 + 2 * k + 1);
    spec.bins[k] = std::polar(mag, phase);
  }
  return irfft(spec);
}

std::vector<double> harmonic_segment(const CounterRng& rng, std::uint64_t salt, double f0,
                                     double f1, double f2, int rate) {
  std::vector<double> x(kSegLen, 0.0);
  int h = 1;
  for (; h * f0 < 4000.0; ++h) {
    const double f = h * f0;
    const double shape = 1.0 / (1.0 + std::pow((f - f1) / 150.0, 2)) +
                         0.6 / (1.0 + std::pow((f - f2) / 250.0, 2)) + 0.05;
    const double amp = shape * 40.0 / (40.0 + h);
    const double phase = kTwoPi * rng.uniform(salt * 4096 + std::uint64_t(h));
    for (std::size_t i = 0; i < kSegLen; ++i)
      x[i] += amp * std::sin(kTwoPi * f * double(i) / rate + phase);
  }
  return x;
}

// slow amplitude modulation plus short ramps; keeps band envelopes moving
// within the analysis windows and avoids clicks at segment joins
void apply_envelope(std::vector<double>& x, const CounterRng& rng, std::uint64_t salt,
                    int rate) {
  const double mod_phase = kTwoPi * rng.uniform(salt * 31 + 7);
  const std::size_t ramp = kSegLen / 10;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double env = 0.75 + 0.25 * std::sin(kTwoPi * 3.0 * double(i) / rate + mod_phase);
    if (i < ramp) env *= double(i) / double(ramp);
    if (x.size() - 1 - i < ramp) env *= double(x.size() - 1 - i) / double(ramp);
    x[i] *= env;
  }
}

std::vector<double> make_speechlike_segment(const SegmentSpec& spec, const CounterRng& rng,
                                            std::uint64_t salt, double f0, int rate) {
  std::vector<double> seg;
  double rms;
  if (spec.vowel) {
    seg = harmonic_segment(rng, salt, f0, spec.f1, spec.f2, rate);
    rms = 0.07;
  } else if (spec.label[0] == 's' || spec.label[0] == 'z') {
    seg = band_noise(rng, salt, 3800.0, 7600.0, rate);
    rms = 0.022;
  } else if (spec.label[0] == 'f') {
    seg = band_noise(rng, salt, 1500.0, 7000.0, rate);
    rms = 0.02;
  } else {  // plosive-like burst
    seg = band_noise(rng, salt, 500.0, 7600.0, rate);
    const std::size_t burst = std::size_t(0.030 * rate);
    for (std::size_t i = 0; i < seg.size(); ++i) {
      const double env =
          i < burst ? std::exp(-double(i) / (0.006 * rate)) : 0.04;
      seg[i] *= env;
    }
    rms = 0.018;
  }
  const double spread = 0.8 + 0.4 * rng.uniform(salt * 17 + 3);
  scale_to_rms(seg, rms * spread);
  apply_envelope(seg, rng, salt, rate);
  return seg;
}

// disjoint in-window DFT bins: even bins for speech, odd bins for noise
std::vector<double> orthogonal_segment(const CounterRng& rng, std::uint64_t salt, bool odd_bins,
                                       double amp) {
  Spectrum spec;
  spec.origin_length = kSegLen;
  spec.bins.assign(kSegLen / 2 + 1, {0.0, 0.0});
  for (std::size_t k = 64 + (odd_bins ? 1 : 0); k <= 704; k += 2) {
    const double mag = amp * (0.5 + 0.5 * rng.uniform(salt * 2048 + 2 * k));
    const double phase = kTwoPi * rng.uniform(salt * 2048 + 2 * k + 1);
    spec.bins[k] = std::polar(mag, phase);
  }
  return irfft(spec);
}

AlignmentTrack demo_track(const std::string& utterance_id, int rate) {
  AlignmentTrack track;
  track.utterance_id = utterance_id;
  for (std::size_t s = 0; s < kSegments; ++s) {
    const double start = double(kLead + s * kSegLen) / rate;
    const double end = double(kLead + (s + 1) * kSegLen) / rate;
    track.intervals.push_back({kSegmentSpecs[s].label, start, end});
  }
  track.xmax = double(utterance_length()) / rate;
  return track;
}

}  // namespace

DemoUtterance make_demo_utterance(std::size_t index, const DemoConfig& config) {
  const int rate = config.sample_rate;
  const CounterRng corpus_rng(config.seed);
  const CounterRng rng(corpus_rng.derive_key(1000 + index));

  DemoUtterance utt;
  char id[16];
  std::snprintf(id, sizeof id, "utt%03zu", index);
  utt.utterance_id = id;
  utt.gender = index % 2 == 0 ? "M" : "F";
  utt.track = demo_track(utt.utterance_id, rate);

  std::vector<double> speech(utterance_length(), 0.0);
  if (config.style == DemoStyle::Speechlike) {
    const double f0 = (utt.gender == "M" ? 118.0 : 210.0) * (0.95 + 0.1 * rng.uniform(1));
    for (std::size_t s = 0; s < kSegments; ++s) {
      const std::vector<double> seg =
          make_speechlike_segment(kSegmentSpecs[s], rng, 100 + s, f0, rate);
      std::copy(seg.begin(), seg.end(), speech.begin() + kLead + s * kSegLen);
    }
    utt.speech = Waveform::mono(std::move(speech), rate);
  } else {
    std::vector<double> noise(utterance_length(), 0.0);
    for (std::size_t s = 0; s < kSegments; ++s) {
      const double amp = kSegmentSpecs[s].vowel ? 0.012 : 0.004;
      const std::vector<double> seg_s = orthogonal_segment(rng, 100 + s, false, amp);
      const std::vector<double> seg_n = orthogonal_segment(rng, 500 + s, true, 0.006);
      std::copy(seg_s.begin(), seg_s.end(), speech.begin() + kLead + s * kSegLen);
      std::copy(seg_n.begin(), seg_n.end(), noise.begin() + kLead + s * kSegLen);
    }
    utt.speech = Waveform::mono(std::move(speech), rate);
    utt.noise = Waveform::mono(std::move(noise), rate);
  }
  return utt;
}

std::string textgrid_long_form(const AlignmentTrack& track, double xmax) {
  struct Interval {
    double xmin, xmax;
    std::string text;
  };
  std::vector<Interval> intervals;
  double cursor = 0.0;
  for (const PhonemeInterval& iv : track.intervals) {
    if (iv.start > cursor) intervals.push_back({cursor, iv.start, ""});
    intervals.push_back({iv.start, iv.end, iv.label});
    cursor = iv.end;
  }
  if (cursor < xmax) intervals.push_back({cursor, xmax, ""});

  std::string out;
  out += "File type = \"ooTextFile\"\n";
  out += "Object class = \"TextGrid\"\n\n";
  out += "xmin = 0\n";
  out += "xmax = " + format_double(xmax) + "\n";
  out += "tiers? <exists>\n";
  out += "size = 1\n";
  out += "item []:\n";
  out += "    item [1]:\n";
  out += "        class = \"IntervalTier\"\n";
  out += "        name = \"phones\"\n";
  out += "        xmin = 0\n";
  out += "        xmax = " + format_double(xmax) + "\n";
  out += "        intervals: size = " + std::to_string(intervals.size()) + "\n";
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    out += "        intervals [" + std::to_string(i + 1) + "]:\n";
    out += "            xmin = " + format_double(intervals[i].xmin) + "\n";
    out += "            xmax = " + format_double(intervals[i].xmax) + "\n";
    out += "            text = \"" + intervals[i].text + "\"\n";
  }
  return out;
}

DemoCorpus write_demo_corpus(const std::filesystem::path& dir, const DemoConfig& config) {
  if (config.utterances == 0)
    fail(ErrorKind::InvalidArgument, "demo corpus needs at least one utterance");
  namespace fs = std::filesystem;
  fs::create_directories(dir / "speech");
  fs::create_directories(dir / "align");
  fs::create_directories(dir / "noise");
  fs::create_directories(dir / "rir");

  const int rate = config.sample_rate;
  const CounterRng corpus_rng(config.seed);

  std::vector<DemoUtterance> utterances;
  utterances.reserve(config.utterances);
  for (std::size_t i = 0; i < config.utterances; ++i)
    utterances.push_back(make_demo_utterance(i, config));

  // RIRs: short tailed responses for the speechlike corpus, single-tap
  // identity responses for the orthogonal one
  Waveform rir_speech, rir_noise;
  rir_speech.sample_rate = rir_noise.sample_rate = rate;
  if (config.style == DemoStyle::Speechlike) {
    const CounterRng rir_rng(corpus_rng.derive_key(77));
    for (int which = 0; which < 2; ++which) {
      Waveform& rir = which == 0 ? rir_speech : rir_noise;
      for (std::size_t c = 0; c < 4; ++c) {
        std::vector<double> h(64, 0.0);
        const std::size_t delay = (which == 0 ? 2 : 4) + c;
        h[delay] = 1.0;
        for (std::size_t k = delay + 1; k < h.size(); ++k) {
          const double u = 2.0 * rir_rng.uniform(std::uint64_t(which) * 100000 + c * 1000 + k) - 1.0;
          h[k] = 0.3 * u * std::exp(-double(k - delay) / 10.0);
        }
        rir.channels.push_back(std::move(h));
      }
    }
  } else {
    for (std::size_t c = 0; c < 4; ++c) {
      rir_speech.channels.push_back({1.0});
      rir_noise.channels.push_back({1.0});
    }
  }
  write_wav(dir / "rir" / "speech_rir.wav", rir_speech, SampleFormat::Float32);
  write_wav(dir / "rir" / "noise_rir.wav", rir_noise, SampleFormat::Float32);

  if (config.style == DemoStyle::Speechlike) {
    // shared speech-shaped noise built from the corpus itself
    std::vector<Waveform> sources;
    for (std::size_t i = 0; i < std::min<std::size_t>(10, utterances.size()); ++i)
      sources.push_back(utterances[i].speech);
    const Waveform ssn =
        generate_ssn(sources, utterance_length(), corpus_rng.derive_key(88));
    write_wav(dir / "noise" / "ssn.wav", ssn, SampleFormat::Float32);
  }

  std::string manifest =
      "utterance_id,gender,clean_path,alignment_path,noise_path,rir_speech_path,"
      "rir_noise_path,snr_db,seed\n";
  DemoCorpus out;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    DemoUtterance& utt = utterances[i];
    const std::string wav_rel = "speech/" + utt.utterance_id + ".wav";
    const std::string tg_rel = "align/" + utt.utterance_id + ".TextGrid";
    write_wav(dir / wav_rel, utt.speech, SampleFormat::Float32);
    write_text_file((dir / tg_rel).string(),
                    textgrid_long_form(utt.track, utt.speech.duration_s()));
    std::string noise_rel;
    if (config.style == DemoStyle::Orthogonal) {
      noise_rel = "noise/" + utt.utterance_id + ".wav";
      write_wav(dir / noise_rel, utt.noise, SampleFormat::Float32);
    } else {
      noise_rel = "noise/ssn.wav";
    }
    const double snr = config.snrs.empty() ? 0.0 : config.snrs[i % config.snrs.size()];
    manifest += utt.utterance_id + "," + utt.gender + "," + wav_rel + "," + tg_rel + "," +
                noise_rel + ",rir/speech_rir.wav,rir/noise_rir.wav," + format_double(snr) +
                "," + format_u64(corpus_rng.derive_key(3000 + i)) + "\n";
    out.utterance_ids.push_back(utt.utterance_id);
  }
  out.manifest_path = dir / "manifest.csv";
  write_text_file(out.manifest_path.string(), manifest);
  return out;
}

}  // namespace phonoscope
