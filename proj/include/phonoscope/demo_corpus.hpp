#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phonoscope/alignment.hpp"
#include "phonoscope/waveform.hpp"

namespace phonoscope {

/// Speechlike: harmonic "vowel" segments (louder) alternating with
/// noise-band "consonant" segments, shared speech-shaped noise, small
/// multichannel RIRs with tails.
/// Orthogonal: per segment, speech and noise occupy disjoint DFT bins of
/// the segment window (exactly orthogonal per segment), per-utterance noise
/// files, single-tap identity RIRs.
enum class DemoStyle { Speechlike, Orthogonal };

struct DemoConfig {
  std::size_t utterances = 20;
  DemoStyle style = DemoStyle::Speechlike;
  std::uint64_t seed = 20240501;
  std::vector<double> snrs = {0.0};
  int sample_rate = 16000;
};

struct DemoUtterance {
  std::string utterance_id;
  std::string gender;  // alternating M/F
  Waveform speech;
  AlignmentTrack track;
  Waveform noise;  // Orthogonal style only; empty otherwise
};

DemoUtterance make_demo_utterance(std::size_t index, const DemoConfig& config);

struct DemoCorpus {
  std::filesystem::path manifest_path;
  std::vector<std::string> utterance_ids;
};

/// Writes speech/alignments/noise/RIRs and a manifest under dir.
DemoCorpus write_demo_corpus(const std::filesystem::path& dir, const DemoConfig& config);

/// Long-form TextGrid with a "phones" tier; gaps are written as "".
std::string textgrid_long_form(const AlignmentTrack& track, double xmax);

}  // namespace phonoscope
